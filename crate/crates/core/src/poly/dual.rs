use std::fmt;

use super::{BinForm, PolyError};
use crate::scalar::Ring;

/// `f0 + eps * f1` with `eps^2 = 0`, both parts binary forms of one degree.
#[derive(Clone, Debug)]
pub struct DualBinForm<T> {
    pub base: BinForm<T>,
    pub eps: BinForm<T>,
}

impl<T: Ring> PartialEq for DualBinForm<T> {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.eps == other.eps
    }
}

impl<T: Ring> DualBinForm<T> {
    pub fn new(base: BinForm<T>, eps: BinForm<T>) -> Result<Self, PolyError> {
        if base.degree() != eps.degree() {
            return Err(PolyError::DegreeMismatch { left: base.degree(), right: eps.degree() });
        }
        Ok(DualBinForm { base, eps })
    }

    /// A form with no `eps` part.
    pub fn pure(base: BinForm<T>) -> Self {
        let d = base.degree();
        DualBinForm { base, eps: BinForm::zero(d) }
    }

    /// `eps * f`.
    pub fn infinitesimal(f: BinForm<T>) -> Self {
        let d = f.degree();
        DualBinForm { base: BinForm::zero(d), eps: f }
    }

    pub fn degree(&self) -> u32 {
        self.base.degree()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        Ok(DualBinForm {
            base: self.base.checked_add(&other.base)?,
            eps: self.eps.checked_add(&other.eps)?,
        })
    }

    /// `(a + eps b)(c + eps d) = ac + eps (ad + bc)`.
    pub fn mul(&self, other: &Self) -> Self {
        let base = self.base.mul(&other.base);
        let eps = self
            .base
            .mul(&other.eps)
            .checked_add(&self.eps.mul(&other.base))
            .expect("products of equal-degree factors share a degree");
        DualBinForm { base, eps }
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.eps.is_zero()
    }
}

impl<T: Ring + fmt::Display> fmt::Display for DualBinForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.base.is_zero(), self.eps.is_zero()) {
            (_, true) => write!(f, "{}", self.base),
            (true, false) => write!(f, "eps*({})", self.eps),
            (false, false) => write!(f, "{} + eps*({})", self.base, self.eps),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;
    use crate::Rational;

    #[test]
    fn eps_squared_vanishes() {
        let e: DualBinForm<Rational> = DualBinForm::infinitesimal(BinForm::y());
        assert!(e.mul(&e).is_zero());
    }

    #[test]
    fn product_rule() {
        let a = DualBinForm::new(BinForm::y(), BinForm::z()).unwrap();
        let c = DualBinForm::new(BinForm::z(), BinForm::linear(qi(2), qi(0))).unwrap();
        let prod = a.mul(&c);
        assert_eq!(prod.base, BinForm::y().mul(&BinForm::z()));
        // y*2y + z*z
        assert_eq!(prod.eps, BinForm::from_coeffs(vec![qi(2), qi(0), qi(1)]));
    }
}
