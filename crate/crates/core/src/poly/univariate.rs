use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Field, Ring};

/// Dense univariate polynomial, coefficients in ascending degree order.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial
/// has an empty coefficient vector and `degree() == None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * t^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The variable `t`.
    pub fn var() -> Self {
        Self::monomial(T::one(), 1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn eval(&self, t: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    /// `p(t + shift)`, by Horner's scheme on polynomials.
    pub fn taylor_shift(&self, shift: &T) -> Self {
        let lin = UniPoly::new(vec![shift.clone(), T::one()]);
        self.coeffs
            .iter()
            .rev()
            .fold(UniPoly::zero(), |acc, c| acc * lin.clone() + UniPoly::constant(c.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }
}

impl<T: Field> UniPoly<T> {
    /// Euclidean division. Panics on division by the zero polynomial.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by zero polynomial");
        let lead_inv = divisor.coeffs[d].inv();
        let mut rem = self.coeffs.clone();
        let Some(n) = self.degree() else {
            return (Self::zero(), Self::zero());
        };
        if n < d {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); n - d + 1];
        for k in (0..=n - d).rev() {
            let c = rem[k + d].clone() * lead_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Exact quotient, or `None` if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Scaled so the leading coefficient is one. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.inv()),
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }
}

impl<T: Ring> Zero for UniPoly<T> {
    fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Ring> One for UniPoly<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

impl<T: Ring> Add for UniPoly<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Ring> Sub for UniPoly<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<T: Ring> Neg for UniPoly<T> {
    type Output = Self;
    fn neg(self) -> Self {
        UniPoly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<T: Ring> Mul for UniPoly<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

impl<T: Ring> Ring for UniPoly<T> {
    fn from_i64(n: i64) -> Self {
        Self::constant(T::from_i64(n))
    }
}

impl<T: Ring + fmt::Display> UniPoly<T> {
    /// Human-readable rendering in the named variable, highest degree first.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            parts.push(if mono.is_empty() {
                format!("{c}")
            } else if c.is_one() {
                mono
            } else {
                format!("{c}*{mono}")
            });
        }
        let mut out = parts[0].clone();
        for part in &parts[1..] {
            match part.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {part}")),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi};
    use crate::Rational;

    fn p(cs: &[i64]) -> UniPoly<Rational> {
        UniPoly::new(cs.iter().map(|&c| qi(c)).collect())
    }

    #[test]
    fn trims_and_degrees() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert_eq!(p(&[0, 0]).degree(), None);
    }

    #[test]
    fn gcd_is_monic() {
        // (t-1)(t+2) and 3(t-1)(t-5)
        let a = p(&[-2, 1, 1]);
        let b = p(&[15, -18, 3]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
    }

    #[test]
    fn div_exact_detects_remainder() {
        let a = p(&[-1, 0, 1]);
        assert_eq!(a.div_exact(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
    }

    #[test]
    fn taylor_shift_matches_substitution() {
        let a = p(&[1, -3, 0, 2]);
        let shifted = a.taylor_shift(&qi(1));
        for t in -3..4 {
            assert_eq!(shifted.eval(&qi(t)), a.eval(&qi(t + 1)));
        }
        assert_eq!(p(&[0, 1]).scale(&q(1, 2)).eval(&qi(4)), qi(2));
    }
}
