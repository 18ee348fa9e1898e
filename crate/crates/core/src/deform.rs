//! Deformations of `C` in `X`: first order from the splitting of the normal
//! bundle, second order from the normal-bundle map over the dual numbers.
//!
//! A first-order deformation `x = eps * s` with `s = alpha y + beta z`
//! extends to second order iff `s^2 (2y + q) + a e_u + b e_v = 0` has a
//! solution in constants `a, b`, where `e_u, e_v` are `dF/du`, `dF/dv` on
//! `C` and `2y + q` is `d^2F/dx^2` on `C`. Cubic forms are written in the
//! basis `y^3, y^2 z, y z^2, z^3`.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::construct::ConstructionData;
use crate::linalg::Matrix;
use crate::poly::{BinForm, DualBinForm, PolyError, Var};
use crate::scalar::{q, qi, Field};
use crate::split::{h0_of_splitting, splitting_type, BundleMapP1, SplitError, SplittingType};
use crate::{BinFormQ, MatrixQ, Rational};

pub const CUBIC_BASIS: [&str; 4] = ["y^3", "y^2z", "yz^2", "z^3"];

/// Local ring of a two-dimensional first-order space with every direction
/// obstructed.
pub const THICK_POINT_RING: &str = "C[ε,η]/(ε²,εη,η²)";

#[derive(Debug, Error, PartialEq)]
pub enum DeformError {
    #[error("the zero direction has no obstruction")]
    ZeroDirection,
    #[error("normal-bundle map is identically zero")]
    DegenerateMap,
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// `s = alpha y + beta z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationDirection {
    pub alpha: Rational,
    pub beta: Rational,
}

impl DeformationDirection {
    pub fn new(alpha: Rational, beta: Rational) -> Self {
        DeformationDirection { alpha, beta }
    }

    pub fn from_ints(alpha: i64, beta: i64) -> Self {
        Self::new(qi(alpha), qi(beta))
    }

    pub fn section(&self) -> BinFormQ {
        BinForm::linear(self.alpha.clone(), self.beta.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_zero() && self.beta.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrder {
    pub splitting: SplittingType,
    pub dimension: u64,
    pub basis: Vec<DeformationDirection>,
}

/// First-order deformations from an explicit normal-bundle map.
pub fn first_order_of_map(map: &BundleMapP1<Rational>) -> Result<FirstOrder, DeformError> {
    if map.is_zero() {
        return Err(DeformError::DegenerateMap);
    }
    let splitting = splitting_type(map)?;
    let dimension = h0_of_splitting(&splitting);
    // the first two coordinates of a kernel vector are the y, z coefficients
    // of the O(1) component
    let basis = map
        .degree_matrix(0)
        .null_space()
        .into_iter()
        .map(|v| DeformationDirection::new(v[0].clone(), v[1].clone()))
        .collect();
    Ok(FirstOrder { splitting, dimension, basis })
}

pub fn first_order(data: &ConstructionData) -> Result<FirstOrder, DeformError> {
    first_order_of_map(&data.normal_map())
}

/// Entries of the normal-bundle map along the deformed curve `x = eps s`:
/// `G|_C + eps * s * (dG/dx)|_C` for `G = dF/dx, dF/du, dF/dv`.
pub fn eps_normal_map(dir: &DeformationDirection, data: &ConstructionData) -> Result<[DualBinForm<Rational>; 3], DeformError> {
    let s = dir.section();
    let entry = |v: Var| -> Result<DualBinForm<Rational>, DeformError> {
        let g = data.f().partial(v);
        let base = g.restrict_to_c();
        let eps = s.mul(&g.partial(Var::X).restrict_to_c());
        Ok(DualBinForm::new(base, eps)?)
    };
    Ok([entry(Var::X)?, entry(Var::U)?, entry(Var::V)?])
}

/// `2y + q`, the second `x`-derivative of `F` on `C`.
pub fn second_x_derivative(data: &ConstructionData) -> BinFormQ {
    data.f().partial(Var::X).partial(Var::X).restrict_to_c()
}

fn cubic_coeffs(f: &BinFormQ) -> Vec<Rational> {
    if f.is_zero() {
        return vec![qi(0); 4];
    }
    assert_eq!(f.degree(), 3, "expected a cubic form");
    f.coeffs().to_vec()
}

/// The 4x2 matrix with columns `e_u`, `e_v` in the cubic basis.
pub fn column_matrix(data: &ConstructionData) -> MatrixQ {
    let cols = [Var::U, Var::V].map(|v| cubic_coeffs(&data.f().partial(v).restrict_to_c()));
    Matrix::from_rows((0..4).map(|i| vec![cols[0][i].clone(), cols[1][i].clone()]).collect())
}

/// `M [a, b]^T = rhs` for one direction.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionSystem {
    pub m: MatrixQ,
    pub rhs: Vec<Rational>,
}

impl ObstructionSystem {
    pub fn solution(&self) -> Option<Vec<Rational>> {
        self.m.solve(&self.rhs)
    }
}

/// The same system with the right-hand side a vector of quadratic forms in
/// `(alpha, beta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicSystem {
    pub m: MatrixQ,
    pub rhs: Vec<BinFormQ>,
}

impl SymbolicSystem {
    pub fn at(&self, dir: &DeformationDirection) -> ObstructionSystem {
        ObstructionSystem {
            m: self.m.clone(),
            rhs: self.rhs.iter().map(|f| f.eval(&dir.alpha, &dir.beta)).collect(),
        }
    }

    /// `w . rhs` for a basis of left null vectors `w` of `M`. The system is
    /// solvable at a direction iff every form vanishes there. Each form is
    /// scaled so that its first nonzero coefficient is positive.
    pub fn compatibility_forms(&self) -> Vec<BinFormQ> {
        self.m
            .left_null_space()
            .iter()
            .map(|w| {
                let f = w
                    .iter()
                    .zip(&self.rhs)
                    .fold(BinForm::zero(2), |acc, (c, r)| acc.checked_add(&r.scale(c)).expect("quadratic forms"));
                match f.coeffs().iter().find(|c| !c.is_zero()) {
                    Some(c) if c.is_negative() => f.neg(),
                    _ => f,
                }
            })
            .collect()
    }
}

/// The obstruction system for `dir`, built from the dual-number map.
pub fn second_order_system(dir: &DeformationDirection, data: &ConstructionData) -> Result<ObstructionSystem, DeformError> {
    let [e_x, _, _] = eps_normal_map(dir, data)?;
    // pairing of (s + eps l, eps a, eps b) with the map, eps part
    let forced = e_x.eps.mul(&dir.section());
    let rhs = cubic_coeffs(&forced).into_iter().map(|c| -c).collect();
    Ok(ObstructionSystem { m: column_matrix(data), rhs })
}

/// The obstruction system for the generic direction.
pub fn symbolic_system(data: &ConstructionData) -> SymbolicSystem {
    let c = second_x_derivative(data);
    let (cy, cz) = if c.is_zero() { (qi(0), qi(0)) } else { (c.coeff(0).clone(), c.coeff(1).clone()) };
    // s^2 = sum_j binom(2, j) alpha^(2-j) beta^j y^(2-j) z^j
    let binom = [1, 2, 1];
    let rhs = (0..4)
        .map(|k| {
            let coeffs: Vec<Rational> = (0..3)
                .map(|j| {
                    let mut v = qi(0);
                    if k == j {
                        v += cy.clone();
                    }
                    if k == j + 1 {
                        v += cz.clone();
                    }
                    -(v * qi(binom[j]))
                })
                .collect();
            BinForm::from_coeffs(coeffs)
        })
        .collect();
    SymbolicSystem { m: column_matrix(data), rhs }
}

/// True when the first-order deformation along `dir` does not extend to
/// second order.
pub fn obstructed(dir: &DeformationDirection, data: &ConstructionData) -> Result<bool, DeformError> {
    if dir.is_zero() {
        return Err(DeformError::ZeroDirection);
    }
    Ok(second_order_system(dir, data)?.solution().is_none())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModuliVerdict {
    pub first_order_dim: u64,
    pub compatibility_forms: Vec<BinFormQ>,
    pub gcd: Option<BinFormQ>,
    pub all_obstructed: bool,
    pub ring: String,
}

/// Decide whether every nonzero direction, over any field extension, is
/// obstructed: true iff the compatibility forms have no common zero, i.e.
/// their gcd is constant.
pub fn obstructed_all(data: &ConstructionData) -> Result<ModuliVerdict, DeformError> {
    let first = first_order(data)?;
    let forms = symbolic_system(data).compatibility_forms();
    let gcd = BinForm::gcd_all(&forms).ok();
    let all_obstructed = gcd.as_ref().is_some_and(|g| g.degree() == 0);
    let ring = match (&gcd, all_obstructed, first.dimension) {
        (None, _, _) => "inconclusive".to_string(),
        (Some(_), true, 2) => THICK_POINT_RING.to_string(),
        (Some(_), true, _) => "inconclusive".to_string(),
        (Some(_), false, _) => "not all directions obstructed".to_string(),
    };
    Ok(ModuliVerdict { first_order_dim: first.dimension, compatibility_forms: forms, gcd, all_obstructed, ring })
}

/// The linear forms `g0` for which `(g0 + eps l, eps a, eps b)` lies in the
/// kernel of the dual-number map for some `l, a, b`.
#[derive(Clone, Debug, PartialEq)]
pub struct RestrictionImage {
    pub dimension: usize,
    pub basis: Vec<BinFormQ>,
    pub contains_s: bool,
}

pub fn restriction_image(dir: &DeformationDirection, data: &ConstructionData) -> Result<RestrictionImage, DeformError> {
    if dir.is_zero() {
        return Err(DeformError::ZeroDirection);
    }
    let e_x = eps_normal_map(dir, data)?[0].eps.clone();
    // unknowns: g0 = gamma y + delta z, then a, b
    let cols = [
        cubic_coeffs(&e_x.mul(&BinForm::y())),
        cubic_coeffs(&e_x.mul(&BinForm::z())),
    ];
    let mcols = column_matrix(data);
    let system = Matrix::from_rows(
        (0..4)
            .map(|i| vec![cols[0][i].clone(), cols[1][i].clone(), mcols[(i, 0)].clone(), mcols[(i, 1)].clone()])
            .collect(),
    );
    let projected: Vec<Vec<Rational>> = system.null_space().into_iter().map(|v| vec![v[0].clone(), v[1].clone()]).collect();
    let basis_matrix = independent_rows(projected);
    let basis: Vec<BinFormQ> = basis_matrix.iter().map(|r| BinForm::linear(r[0].clone(), r[1].clone())).collect();
    let dimension = basis.len();
    let mut with_s = basis_matrix.clone();
    with_s.push(vec![dir.alpha.clone(), dir.beta.clone()]);
    let contains_s = rank_of(&with_s) == dimension;
    Ok(RestrictionImage { dimension, basis, contains_s })
}

fn rank_of<T: Field>(rows: &[Vec<T>]) -> usize {
    if rows.is_empty() {
        0
    } else {
        Matrix::from_rows(rows.to_vec()).rank()
    }
}

/// Nonzero rows of the reduced echelon form.
fn independent_rows<T: Field>(rows: Vec<Vec<T>>) -> Vec<Vec<T>> {
    if rows.is_empty() {
        return rows;
    }
    let mut m = Matrix::from_rows(rows);
    let r = m.rref().len();
    (0..r).map(|i| m.row(i).to_vec()).collect()
}

/// Whether every coefficient of `q`, `dp/du` and `dp/dv` on `C` is smaller
/// than `1/10` in absolute value.
pub fn within_tenth_bound(data: &ConstructionData) -> bool {
    let p = data.p();
    let tenth = q(1, 10);
    let qform = p.partial(Var::X).partial(Var::X).restrict_to_c();
    let pu = p.partial(Var::U).restrict_to_c();
    let pv = p.partial(Var::V).restrict_to_c();
    [qform, pu, pv].iter().all(|f| f.coeffs().iter().all(|c| c.abs() < tenth))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::text::parse_biform;
    use crate::poly::BiForm;
    use proptest::prelude::*;

    fn dir(a: i64, b: i64) -> DeformationDirection {
        DeformationDirection::from_ints(a, b)
    }

    fn forms(cs: &[[i64; 3]]) -> Vec<BinFormQ> {
        cs.iter().map(|c| BinForm::from_coeffs(c.iter().map(|&x| qi(x)).collect())).collect()
    }

    fn perturbed() -> ConstructionData {
        let p = parse_biform("1/20 y^3 u w^2\n-1/30 y z^2 v w^2\n1/25 x^2 y w^3\n1/40 x y z u^2 w", None).unwrap();
        ConstructionData::new(p).unwrap()
    }

    fn control() -> ConstructionData {
        ConstructionData::new(parse_biform("-y^3 v w^2", None).unwrap()).unwrap()
    }

    #[test]
    fn first_order_at_p_zero() {
        let fo = first_order(&ConstructionData::default()).unwrap();
        assert_eq!(fo.splitting, SplittingType::new(vec![1, -3]));
        assert_eq!(fo.dimension, 2);
        assert_eq!(fo.basis, vec![dir(1, 0), dir(0, 1)]);
    }

    #[test]
    fn degenerate_map_is_rejected() {
        let zero = BundleMapP1::new(vec![1, 0, 0], 3, vec![BinForm::zero(2), BinForm::zero(3), BinForm::zero(3)]).unwrap();
        assert_eq!(first_order_of_map(&zero), Err(DeformError::DegenerateMap));
    }

    #[test]
    fn eps_map_examples() {
        let data = ConstructionData::default();
        let [e0, e1, e2] = eps_normal_map(&dir(1, 0), &data).unwrap();
        assert!(e0.base.is_zero());
        assert_eq!(e0.eps, BinForm::monomial(qi(2), 2, 0));
        assert_eq!(e1, DualBinForm::pure(BinForm::z().pow(3)));
        assert_eq!(e2.base.coeffs(), &[qi(1), qi(0), qi(1), qi(0)]);
        assert_eq!(e2.eps, BinForm::monomial(qi(3), 3, 0));

        let [e0, _, e2] = eps_normal_map(&dir(0, 1), &data).unwrap();
        assert_eq!(e0.eps, BinForm::monomial(qi(2), 1, 1));
        assert_eq!(e2.eps, BinForm::monomial(qi(3), 2, 1));

        let [e0, _, e2] = eps_normal_map(&dir(0, 0), &data).unwrap();
        assert!(e0.eps.is_zero() && e2.eps.is_zero());
    }

    #[test]
    fn auxiliary_linear_form_drops_out() {
        let data = ConstructionData::default();
        let d = dir(2, -1);
        let [e0, _, _] = eps_normal_map(&d, &data).unwrap();
        let s = DualBinForm::pure(d.section());
        for l in [BinForm::y(), BinForm::z(), BinForm::linear(qi(3), qi(-7))] {
            let shifted = DualBinForm::new(d.section(), l).unwrap();
            assert_eq!(e0.mul(&shifted), e0.mul(&s));
        }
    }

    #[test]
    fn matrix_at_p_zero() {
        let m = column_matrix(&ConstructionData::default());
        let expected: MatrixQ = Matrix::from_rows(
            [[0, 1], [0, 0], [0, 1], [1, 0]].iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect(),
        );
        assert_eq!(m, expected);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.left_null_space().len(), 2);
    }

    #[test]
    fn systems_for_basis_directions() {
        let data = ConstructionData::default();
        let sys = second_order_system(&dir(1, 0), &data).unwrap();
        assert_eq!(sys.rhs, vec![qi(-2), qi(0), qi(0), qi(0)]);
        assert!(sys.solution().is_none());
        let sys = second_order_system(&dir(0, 1), &data).unwrap();
        assert_eq!(sys.rhs, vec![qi(0), qi(0), qi(-2), qi(0)]);
        assert!(sys.solution().is_none());
    }

    #[test]
    fn obstruction_examples() {
        let data = ConstructionData::default();
        assert!(obstructed(&dir(1, 0), &data).unwrap());
        assert!(obstructed(&dir(0, 1), &data).unwrap());
        assert!(obstructed(&dir(1, 1), &data).unwrap());
        assert_eq!(obstructed(&dir(0, 0), &data), Err(DeformError::ZeroDirection));
    }

    #[test]
    fn all_directions_at_p_zero() {
        let v = obstructed_all(&ConstructionData::default()).unwrap();
        assert_eq!(v.compatibility_forms, forms(&[[0, 4, 0], [2, 0, -2]]));
        assert_eq!(v.gcd.unwrap().degree(), 0);
        assert!(v.all_obstructed);
        assert_eq!(v.ring, THICK_POINT_RING);
    }

    #[test]
    fn negative_control_has_an_unobstructed_direction() {
        let data = control();
        let v = obstructed_all(&data).unwrap();
        assert_eq!(v.compatibility_forms, forms(&[[2, 0, 0], [0, 4, 0]]));
        assert_eq!(v.gcd.unwrap(), BinForm::y());
        assert!(!v.all_obstructed);
        assert!(!obstructed(&dir(0, 1), &data).unwrap());
    }

    #[test]
    fn small_perturbation_keeps_the_verdict() {
        let data = perturbed();
        assert!(within_tenth_bound(&data));
        assert!(!data.p().is_zero());
        let v = obstructed_all(&data).unwrap();
        assert!(v.all_obstructed);
        assert_eq!(v.ring, THICK_POINT_RING);
    }

    #[test]
    fn tenth_bound_detects_large_coefficients() {
        assert!(within_tenth_bound(&ConstructionData::default()));
        assert!(!within_tenth_bound(&control()));
    }

    #[test]
    fn restriction_image_examples() {
        let data = ConstructionData::default();
        let r = restriction_image(&dir(1, 0), &data).unwrap();
        assert_eq!(r.dimension, 0);
        assert!(!r.contains_s);
        assert!(!restriction_image(&dir(0, 1), &data).unwrap().contains_s);
        assert!(restriction_image(&dir(0, 1), &control()).unwrap().contains_s);
    }

    #[test]
    fn zero_perturbation_partials() {
        let data = ConstructionData::default();
        assert_eq!(second_x_derivative(&data), BinForm::monomial(qi(2), 1, 0));
        assert!(BiForm::<Rational>::zero((3, 3)).is_zero());
    }

    fn direction() -> impl Strategy<Value = DeformationDirection> {
        (-9i64..=9, 1i64..=5, -9i64..=9, 1i64..=5)
            .prop_filter("nonzero", |(a, _, b, _)| *a != 0 || *b != 0)
            .prop_map(|(a, da, b, db)| DeformationDirection::new(q(a, da), q(b, db)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn obstruction_matches_compatibility_forms(d in direction(), which in 0usize..3) {
            let data = [ConstructionData::default(), perturbed(), control()][which].clone();
            let sym = symbolic_system(&data);
            prop_assert_eq!(&sym.at(&d), &second_order_system(&d, &data).unwrap());
            let vanish = sym.compatibility_forms().iter().all(|f| f.eval(&d.alpha, &d.beta).is_zero());
            prop_assert_eq!(obstructed(&d, &data).unwrap(), !vanish);
        }

        #[test]
        fn restriction_image_agrees_with_obstruction(d in direction(), which in 0usize..3) {
            let data = [ConstructionData::default(), perturbed(), control()][which].clone();
            let r = restriction_image(&d, &data).unwrap();
            prop_assert_eq!(r.contains_s, !obstructed(&d, &data).unwrap());
        }

        #[test]
        fn obstruction_is_scale_invariant(d in direction(), n in 1i64..7, m in -7i64..=7) {
            prop_assume!(m != 0);
            let data = control();
            let scaled = DeformationDirection::new(d.alpha.clone() * q(m, n), d.beta.clone() * q(m, n));
            prop_assert_eq!(obstructed(&d, &data).unwrap(), obstructed(&scaled, &data).unwrap());
        }
    }
}
