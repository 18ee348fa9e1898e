//! Rational roots of univariate rational polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::UniPoly;
use crate::scalar::Field;
use crate::Rational;

/// Integers above this bound are not trial-factored.
const FACTOR_LIMIT: u128 = 1 << 80;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalRoots {
    /// Distinct rational roots in ascending order, with multiplicity.
    pub roots: Vec<(Rational, u32)>,
    /// What is left after dividing out the rational roots; constant when
    /// the polynomial splits into linear factors over the rationals.
    pub residual: UniPoly<Rational>,
}

/// Find all rational roots by the rational root test. Returns `None` when
/// a coefficient is too large to factor by trial division.
pub fn rational_roots(p: &UniPoly<Rational>) -> Option<RationalRoots> {
    let mut rest = p.clone();
    let mut roots: Vec<(Rational, u32)> = Vec::new();
    if rest.is_zero() {
        return Some(RationalRoots { roots, residual: rest });
    }
    let mut zero_mult = 0;
    while rest.degree().unwrap_or(0) > 0 && rest.coeff(0).is_zero() {
        rest = UniPoly::new(rest.coeffs()[1..].to_vec());
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }
    if rest.degree().unwrap_or(0) > 0 {
        let ints = integer_coefficients(&rest);
        let a0 = ints.first().unwrap().abs();
        let an = ints.last().unwrap().abs();
        let nums = divisors(&a0)?;
        let dens = divisors(&an)?;
        let mut candidates: Vec<Rational> = Vec::new();
        for n in &nums {
            for d in &dens {
                let c = Rational::new(n.clone(), d.clone());
                candidates.push(c.clone());
                candidates.push(-c);
            }
        }
        candidates.sort();
        candidates.dedup();
        for c in candidates {
            let lin = UniPoly::new(vec![-c.clone(), Rational::one()]);
            let mut mult = 0;
            while rest.degree().unwrap_or(0) > 0 && rest.eval(&c).is_zero() {
                rest = rest.div_exact(&lin).expect("root implies linear factor");
                mult += 1;
            }
            if mult > 0 {
                roots.push((c, mult));
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Some(RationalRoots { roots, residual: rest.monic() })
}

/// Scale to a primitive integer polynomial (ascending coefficients).
fn integer_coefficients(p: &UniPoly<Rational>) -> Vec<BigInt> {
    let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u128().filter(|&n| n > 0 && n < FACTOR_LIMIT)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: u128 = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Interpolating polynomial through the given points (distinct abscissae).
pub fn interpolate<T: Field>(points: &[(T, T)]) -> UniPoly<T> {
    // Newton divided differences
    let n = points.len();
    let mut coef: Vec<T> = points.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = coef[i].clone() - coef[i - 1].clone();
            let den = points[i].0.clone() - points[i - j].0.clone();
            coef[i] = num / den;
        }
    }
    let mut out = UniPoly::zero();
    for i in (0..n).rev() {
        let lin = UniPoly::new(vec![-points[i].0.clone(), T::one()]);
        out = out * lin + UniPoly::constant(coef[i].clone());
    }
    out
}
