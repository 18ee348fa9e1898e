//! Common zeros of two ternary forms on the projective plane.
//!
//! The forms are first sheared (`y -> y + a x`, `z -> z + b x`) so that both
//! have a nonzero constant `x^d` coefficient. Then `x` is eliminated with the
//! Sylvester resultant, which is a binary form in `(y, z)` vanishing exactly
//! on the projections of the common zeros. Rational roots of the resultant
//! are back-substituted; anything irrational is reported, not dropped.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use super::roots::{interpolate, rational_roots};
use super::{BiForm, BinForm, UniPoly, Var};
use crate::linalg::Matrix;
use crate::scalar::{qi, Field};
use crate::Rational;

#[derive(Debug, Error, PartialEq)]
pub enum ZerosError {
    #[error("input form is zero")]
    ZeroInput,
    #[error("expected ternary forms in (x, y, z), got bidegree {0:?}")]
    NotTernary((u32, u32)),
    #[error("forms share the common factor {factor}; the common zero set is a curve")]
    CommonFactor { factor: BiForm<Rational> },
    #[error("coefficients too large for rational root search")]
    TooLarge,
}

/// A point of P2 with rational coordinates, scaled so the first nonzero
/// coordinate is one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjPoint(pub [Rational; 3]);

impl ProjPoint {
    pub fn new(coords: [Rational; 3]) -> Self {
        let lead = coords.iter().find(|c| !c.is_zero()).cloned().expect("projective point has a nonzero coordinate");
        ProjPoint(coords.map(|c| c / lead.clone()))
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}:{}]", self.0[0], self.0[1], self.0[2])
    }
}

#[derive(Clone, Debug)]
pub struct CommonZeros {
    /// Every common zero with rational coordinates, sorted.
    pub points: Vec<ProjPoint>,
    /// The elimination resultant in the sheared coordinates.
    pub resultant: BinForm<Rational>,
    /// The shear `(a, b)` used before eliminating `x`.
    pub shear: (i64, i64),
    /// True when some common zero has irrational coordinates; such zeros are
    /// not in `points`.
    pub irrational_roots: bool,
}

/// All common zeros of two nonzero ternary forms.
pub fn common_zeros_p2(f: &BiForm<Rational>, g: &BiForm<Rational>) -> Result<CommonZeros, ZerosError> {
    for h in [f, g] {
        if h.is_zero() {
            return Err(ZerosError::ZeroInput);
        }
        if h.bidegree().1 != 0 {
            return Err(ZerosError::NotTernary(h.bidegree()));
        }
    }
    let shear = choose_shear(f, g);
    let fs = apply_shear(f, shear.0, shear.1);
    let gs = apply_shear(g, shear.0, shear.1);
    let fx = fs.x_expansion().expect("ternary");
    let gx = gs.x_expansion().expect("ternary");

    let resultant = sylvester_resultant(&fx, &gx);
    if resultant.is_zero() {
        let h = xpoly_gcd(&fx, &gx);
        let factor = normalize_leading(&apply_shear(&h, -shear.0, -shear.1));
        return Err(ZerosError::CommonFactor { factor });
    }

    let mut points = Vec::new();
    let mut irrational_roots = false;
    let mut projections: Vec<(Rational, Rational)> = Vec::new();
    if resultant.y_valuation().unwrap_or(0) > 0 {
        projections.push((Rational::zero(), Rational::one()));
    }
    let s_roots = rational_roots(&resultant.to_s_poly()).ok_or(ZerosError::TooLarge)?;
    irrational_roots |= s_roots.residual.degree().unwrap_or(0) > 0;
    projections.extend(s_roots.roots.into_iter().map(|(s, _)| (Rational::one(), s)));

    for (y0, z0) in projections {
        let fu = specialize(&fx, &y0, &z0);
        let gu = specialize(&gx, &y0, &z0);
        let h = fu.gcd(&gu);
        let xr = rational_roots(&h).ok_or(ZerosError::TooLarge)?;
        irrational_roots |= xr.residual.degree().unwrap_or(0) > 0;
        for (x0, _) in xr.roots {
            let a = qi(shear.0);
            let b = qi(shear.1);
            points.push(ProjPoint::new([
                x0.clone(),
                y0.clone() + a * x0.clone(),
                z0.clone() + b * x0,
            ]));
        }
    }
    points.sort();
    points.dedup();
    Ok(CommonZeros { points, resultant, shear, irrational_roots })
}

/// Smallest shear making both `x^d` coefficients nonzero: `f(1, a, b) != 0`
/// and `g(1, a, b) != 0`. A grid of side `deg f + deg g + 1` always
/// contains one.
fn choose_shear(f: &BiForm<Rational>, g: &BiForm<Rational>) -> (i64, i64) {
    let bound = (f.bidegree().0 + g.bidegree().0 + 1) as i64;
    let mut grid: Vec<(i64, i64)> = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            grid.push((a, b));
        }
    }
    grid.sort_by_key(|&(a, b)| (a.abs() + b.abs(), a.abs(), a < 0, b.abs(), b < 0));
    let zero = Rational::zero();
    grid.into_iter()
        .find(|&(a, b)| {
            let pt = [qi(1), qi(a), qi(b), zero.clone(), zero.clone(), zero.clone()];
            !f.eval(&pt).is_zero() && !g.eval(&pt).is_zero()
        })
        .expect("a nonzero polynomial cannot vanish on the whole grid")
}

fn apply_shear(f: &BiForm<Rational>, a: i64, b: i64) -> BiForm<Rational> {
    let x = BiForm::var(Var::X);
    let y = BiForm::var(Var::Y).checked_add(&x.scale(&qi(a))).unwrap();
    let z = BiForm::var(Var::Z).checked_add(&x.scale(&qi(b))).unwrap();
    f.substitute_xyz(&[x, y, z]).expect("ternary")
}

fn specialize(parts: &[BinForm<Rational>], y: &Rational, z: &Rational) -> UniPoly<Rational> {
    UniPoly::new(parts.iter().map(|p| p.eval(y, z)).collect())
}

/// Sylvester resultant in `x` of two polynomials given by their `x`-coefficient
/// binary forms, computed by evaluating at `(1, s)` and interpolating.
fn sylvester_resultant(fx: &[BinForm<Rational>], gx: &[BinForm<Rational>]) -> BinForm<Rational> {
    let m = fx.len() - 1;
    let n = gx.len() - 1;
    let total = (m * n) as u32;
    let samples: Vec<(Rational, Rational)> = (0..=total as i64)
        .map(|s| {
            let s = qi(s);
            let one = Rational::one();
            let fv: Vec<Rational> = fx.iter().map(|p| p.eval(&one, &s)).collect();
            let gv: Vec<Rational> = gx.iter().map(|p| p.eval(&one, &s)).collect();
            (s, sylvester_det(&fv, &gv))
        })
        .collect();
    let r = interpolate(&samples);
    BinForm::from_s_poly(&r, total).expect("resultant degree is bounded by m*n")
}

/// Determinant of the Sylvester matrix of `sum f_i x^i` and `sum g_j x^j`
/// with their declared degrees.
fn sylvester_det<T: Field>(f: &[T], g: &[T]) -> T {
    let m = f.len() - 1;
    let n = g.len() - 1;
    let size = m + n;
    if size == 0 {
        return T::one();
    }
    let mut s = Matrix::zeros(size, size);
    for r in 0..n {
        for (k, c) in f.iter().rev().enumerate() {
            s[(r, r + k)] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in g.iter().rev().enumerate() {
            s[(n + r, r + k)] = c.clone();
        }
    }
    s.determinant()
}

/// A polynomial in `x` whose coefficient of `x^i` is a binary form of
/// degree `total - i`: a ternary form of degree `total`.
#[derive(Clone)]
struct XPoly {
    total: u32,
    parts: Vec<BinForm<Rational>>,
}

impl XPoly {
    fn from_parts(parts: &[BinForm<Rational>]) -> Self {
        XPoly { total: parts.len() as u32 - 1, parts: parts.to_vec() }
    }

    fn x_degree(&self) -> Option<usize> {
        self.parts.iter().rposition(|p| !p.is_zero())
    }

    fn primitive_part(&self) -> Self {
        let Ok(content) = BinForm::gcd_all(&self.parts) else {
            return self.clone();
        };
        let e = content.degree();
        let total = self.total - e;
        let parts = (0..=total as usize)
            .map(|i| {
                let p = self.parts.get(i).cloned().unwrap_or_else(|| BinForm::zero(0));
                if p.is_zero() {
                    BinForm::zero(total - i as u32)
                } else {
                    p.div_exact(&content).expect("content divides every coefficient")
                }
            })
            .collect();
        XPoly { total, parts }
    }

    /// Pseudo-remainder of `self` by `other`.
    fn prem(&self, other: &Self) -> Self {
        let n = other.x_degree().expect("nonzero divisor");
        let lc_b = other.parts[n].clone();
        let mut a = self.clone();
        while let Some(m) = a.x_degree() {
            if m < n {
                break;
            }
            let lc_a = a.parts[m].clone();
            let total = a.total + lc_b.degree();
            let mut parts: Vec<BinForm<Rational>> =
                (0..=total).map(|i| BinForm::zero(total - i)).collect();
            for (i, p) in a.parts.iter().enumerate() {
                parts[i] = p.mul(&lc_b);
            }
            for (j, p) in other.parts.iter().enumerate() {
                let idx = j + m - n;
                let sub = lc_a.mul(p);
                parts[idx] = parts[idx].checked_sub(&sub).expect("homogeneous");
            }
            a = XPoly { total, parts };
        }
        a
    }
}

/// Greatest common divisor of two ternary forms whose `x^d` coefficients are
/// nonzero constants, via the primitive remainder sequence over `Q[y,z]`.
fn xpoly_gcd(fx: &[BinForm<Rational>], gx: &[BinForm<Rational>]) -> BiForm<Rational> {
    let mut a = XPoly::from_parts(fx).primitive_part();
    let mut b = XPoly::from_parts(gx).primitive_part();
    if a.x_degree() < b.x_degree() {
        std::mem::swap(&mut a, &mut b);
    }
    while b.x_degree().is_some() {
        let r = a.prem(&b);
        a = b;
        b = if r.x_degree().is_some() { r.primitive_part() } else { r };
    }
    let a = a.primitive_part();
    BiForm::from_x_expansion(&a.parts).expect("consistent degrees")
}

fn normalize_leading(f: &BiForm<Rational>) -> BiForm<Rational> {
    match f.terms().next_back() {
        Some((_, c)) => f.scale(&c.inv()),
        None => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::text::parse_biform;

    fn t(s: &str) -> BiForm<Rational> {
        parse_biform(s, None).unwrap()
    }

    fn pt(a: i64, b: i64, c: i64) -> ProjPoint {
        ProjPoint::new([qi(a), qi(b), qi(c)])
    }

    #[test]
    fn fibre_partials_meet_at_one_point() {
        let g_u = t("z^3");
        let g_v = t("z^2 y\nx^3\n3 x^2 y\n3 x y^2\ny^3");
        let cz = common_zeros_p2(&g_u, &g_v).unwrap();
        assert_eq!(cz.points, vec![pt(1, -1, 0)]);
        assert!(!cz.irrational_roots);
    }

    #[test]
    fn coordinate_lines_meet_at_origin_chart() {
        let cz = common_zeros_p2(&t("x"), &t("y")).unwrap();
        assert_eq!(cz.points, vec![pt(0, 0, 1)]);
    }

    #[test]
    fn shared_factor_is_reported() {
        let err = common_zeros_p2(&t("z^2"), &t("z y")).unwrap_err();
        assert_eq!(err, ZerosError::CommonFactor { factor: t("z") });
    }

    #[test]
    fn shared_factor_of_higher_degree() {
        // (x + y)(x - z) and (x + y) z
        let f = t("x^2\n-1 x z\nx y\n-1 y z");
        let g = t("x z\ny z");
        let err = common_zeros_p2(&f, &g).unwrap_err();
        assert_eq!(err, ZerosError::CommonFactor { factor: t("x\ny") });
    }

    #[test]
    fn irrational_intersections_are_flagged() {
        // conic x^2 + y^2 - 2 z^2 meets y = 0 where x^2 = 2 z^2
        let cz = common_zeros_p2(&t("x^2\ny^2\n-2 z^2"), &t("y")).unwrap();
        assert!(cz.points.is_empty());
        assert!(cz.irrational_roots);
    }

    #[test]
    fn conic_and_line_rational() {
        // x^2 - z^2 and y: points [1:0:1], [1:0:-1]
        let cz = common_zeros_p2(&t("x^2\n-1 z^2"), &t("y")).unwrap();
        assert_eq!(cz.points, vec![pt(1, 0, -1), pt(1, 0, 1)]);
    }

    #[test]
    fn zero_input_rejected() {
        assert_eq!(common_zeros_p2(&BiForm::zero((1, 0)), &t("x")).unwrap_err(), ZerosError::ZeroInput);
    }
}
