use std::fmt;

use num_traits::Zero;

use super::{PolyError, UniPoly};
use crate::scalar::{Field, Ring};

/// Binary form of declared degree `d`: `sum_k c_k y^(d-k) z^k`.
///
/// The same type is used for forms in any pair of variables (for instance
/// the deformation parameters `(alpha, beta)`); only display cares about the
/// names. The zero form keeps its declared degree for type checking.
#[derive(Clone, Debug)]
pub struct BinForm<T> {
    degree: u32,
    coeffs: Vec<T>,
}

impl<T: Ring> PartialEq for BinForm<T> {
    fn eq(&self, other: &Self) -> bool {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => true,
            (false, false) => self.degree == other.degree && self.coeffs == other.coeffs,
            _ => false,
        }
    }
}

impl<T: Ring> BinForm<T> {
    /// Build from the `d + 1` coefficients of `y^d, y^(d-1) z, ..., z^d`.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        BinForm { degree: coeffs.len() as u32 - 1, coeffs }
    }

    pub fn zero(degree: u32) -> Self {
        BinForm { degree, coeffs: vec![T::zero(); degree as usize + 1] }
    }

    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * y^a * z^b`.
    pub fn monomial(c: T, y_exp: u32, z_exp: u32) -> Self {
        let mut f = Self::zero(y_exp + z_exp);
        f.coeffs[z_exp as usize] = c;
        f
    }

    /// The first variable.
    pub fn y() -> Self {
        Self::monomial(T::one(), 1, 0)
    }

    /// The second variable.
    pub fn z() -> Self {
        Self::monomial(T::one(), 0, 1)
    }

    /// `a*y + b*z`.
    pub fn linear(a: T, b: T) -> Self {
        Self::from_coeffs(vec![a, b])
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Coefficient of `y^(d-k) z^k`.
    pub fn coeff(&self, k: usize) -> &T {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.degree != other.degree {
            // typed zeros of any degree are additive identities
            if other.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(other.clone());
            }
            return Err(PolyError::DegreeMismatch { left: self.degree, right: other.degree });
        }
        Ok(BinForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BinForm { degree: self.degree, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, c: &T) -> Self {
        BinForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] = out.coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(T::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, y: &T, z: &T) -> T {
        let d = self.degree as usize;
        let mut acc = T::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for _ in 0..d - k {
                term = term * y.clone();
            }
            for _ in 0..k {
                term = term * z.clone();
            }
            acc = acc + term;
        }
        acc
    }

    /// Dehomogenize at `y = 1`: the polynomial `f(1, s)` in `s = z/y`.
    pub fn to_s_poly(&self) -> UniPoly<T> {
        UniPoly::new(self.coeffs.clone())
    }

    /// Homogenize a polynomial in `s = z/y` to degree `d`.
    pub fn from_s_poly(p: &UniPoly<T>, degree: u32) -> Result<Self, PolyError> {
        if p.degree().is_some_and(|e| e > degree as usize) {
            return Err(PolyError::DegreeMismatch { left: p.degree().unwrap() as u32, right: degree });
        }
        let mut f = Self::zero(degree);
        for (k, c) in p.coeffs().iter().enumerate() {
            f.coeffs[k] = c.clone();
        }
        Ok(f)
    }

    /// Largest power of `y` dividing the form (`None` for zero).
    pub fn y_valuation(&self) -> Option<u32> {
        let last = self.coeffs.iter().rposition(|c| !c.is_zero())?;
        Some(self.degree - last as u32)
    }

    /// Largest power of `z` dividing the form (`None` for zero).
    pub fn z_valuation(&self) -> Option<u32> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| k as u32)
    }
}

impl<T: Field> BinForm<T> {
    /// Exact quotient `self / divisor`, if it exists.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.degree.checked_sub(divisor.degree)?));
        }
        let qd = self.degree.checked_sub(divisor.degree)?;
        let quot = self.to_s_poly().div_exact(&divisor.to_s_poly())?;
        Self::from_s_poly(&quot, qd).ok()
    }

    /// Scaled so that the first nonzero coefficient (highest power of `y`)
    /// is one.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().rev().find(|c| !c.is_zero()) {
            // leading in s = z/y means the last nonzero coefficient
            Some(l) => self.scale(&l.inv()),
            None => self.clone(),
        }
    }

    /// Greatest common divisor of a list of binary forms.
    ///
    /// The result is monic in `s = z/y` (a pure power of `y` has coefficient
    /// one). A constant result certifies the forms share no projective zero
    /// over the algebraic closure.
    pub fn gcd_all(forms: &[Self]) -> Result<Self, PolyError> {
        let nonzero: Vec<&Self> = forms.iter().filter(|f| !f.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(PolyError::AllZero);
        }
        let y_power = nonzero.iter().filter_map(|f| f.y_valuation()).min().unwrap_or(0);
        let g = nonzero
            .iter()
            .map(|f| f.to_s_poly())
            .fold(UniPoly::zero(), |acc: UniPoly<T>, p| acc.gcd(&p));
        let gdeg = g.degree().unwrap_or(0) as u32;
        let g = Self::from_s_poly(&g, gdeg)?;
        Ok(Self::monomial(T::one(), y_power, 0).mul(&g))
    }

    pub fn gcd(&self, other: &Self) -> Result<Self, PolyError> {
        Self::gcd_all(&[self.clone(), other.clone()])
    }

    /// True when the gcd is a nonzero constant.
    pub fn is_unit_gcd(forms: &[Self]) -> Result<bool, PolyError> {
        Ok(Self::gcd_all(forms)?.degree() == 0)
    }
}

impl<T: Ring + fmt::Display> BinForm<T> {
    /// Render with the given variable names, highest power of the first
    /// variable first.
    pub fn display_in(&self, vars: (&str, &str)) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let d = self.degree;
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = k as u32;
            let mut mono = Vec::new();
            for (var, e) in [(vars.0, d - k), (vars.1, k)] {
                match e {
                    0 => {}
                    1 => mono.push(var.to_string()),
                    _ => mono.push(format!("{var}^{e}")),
                }
            }
            let mono = mono.join("*");
            parts.push(if mono.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                mono
            } else {
                format!("{c}*{mono}")
            });
        }
        parts.join(" + ")
    }
}

impl<T: Ring + fmt::Display> fmt::Display for BinForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in(("y", "z")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;
    use crate::Rational;

    fn b(cs: &[i64]) -> BinForm<Rational> {
        BinForm::from_coeffs(cs.iter().map(|&c| qi(c)).collect())
    }

    #[test]
    fn gcd_of_coprime_cubics_is_one() {
        // z^3 and y(y^2 + z^2)
        let g = BinForm::gcd_all(&[b(&[0, 0, 0, 1]), b(&[1, 0, 1, 0])]).unwrap();
        assert_eq!(g, BinForm::constant(qi(1)));
    }

    #[test]
    fn gcd_of_alpha_beta_and_difference_of_squares_is_one() {
        // alpha*beta and alpha^2 - beta^2
        let g = BinForm::gcd_all(&[b(&[0, 1, 0]), b(&[1, 0, -1])]).unwrap();
        assert_eq!(g.degree(), 0);
    }

    #[test]
    fn gcd_extracts_common_z() {
        let g = BinForm::gcd_all(&[b(&[0, 0, 1]), b(&[0, 1, 0])]).unwrap();
        assert_eq!(g, BinForm::z());
    }

    #[test]
    fn gcd_extracts_common_y_power() {
        // y^2 z and y^3
        let g = BinForm::gcd_all(&[b(&[0, 1, 0, 0]), b(&[1, 0, 0, 0])]).unwrap();
        assert_eq!(g, BinForm::monomial(qi(1), 2, 0));
    }

    #[test]
    fn gcd_rejects_all_zero() {
        assert!(matches!(
            BinForm::<Rational>::gcd_all(&[BinForm::zero(2), BinForm::zero(1)]),
            Err(PolyError::AllZero)
        ));
    }

    #[test]
    fn add_checks_degree() {
        assert!(b(&[1, 0]).checked_add(&b(&[1, 0, 0])).is_err());
        assert_eq!(b(&[1, 0]).checked_add(&BinForm::zero(3)).unwrap(), b(&[1, 0]));
    }

    #[test]
    fn zero_forms_compare_equal_across_degrees() {
        assert_eq!(BinForm::<Rational>::zero(1), BinForm::zero(4));
    }

    #[test]
    fn exact_division() {
        let f = BinForm::y().mul(&BinForm::z()).mul(&b(&[1, 1]));
        assert_eq!(f.div_exact(&BinForm::z()).unwrap(), BinForm::y().mul(&b(&[1, 1])));
        assert!(f.div_exact(&b(&[1, -1])).is_none());
    }

    #[test]
    fn display() {
        assert_eq!(b(&[1, 0, 1, 0]).to_string(), "y^3 + y*z^2");
        assert_eq!(b(&[0, 4, 0]).display_in(("a", "b")), "4*a*b");
    }
}
