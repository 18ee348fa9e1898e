//! The intersection ring of `X`: classes in `H^2` and `H^4`, integration,
//! degrees against `N w1 + w2`, twists of rank-2 Chern data and lattice
//! divisibility.
//!
//! `H^2(X)` has basis `w1, w2` (hyperplane classes pulled back from the two
//! factors) and `H^4(X)` has basis `w1^2, w2^2`, with `w1 w2 = w1^2 + w2^2`.
//! The integral lattice of `H^4` is spanned by `w1^2/3` and `w2^2/3`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::UniPoly;
use crate::scalar::{Field, Ring};
use crate::Rational;

/// `a w1 + b w2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2Class<T> {
    pub a: T,
    pub b: T,
}

/// `p w1^2 + q w2^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H4Class<T> {
    pub p: T,
    pub q: T,
}

impl<T: Ring> H2Class<T> {
    pub fn new(a: T, b: T) -> Self {
        H2Class { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        H2Class { a: T::from_i64(a), b: T::from_i64(b) }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn add(&self, o: &Self) -> Self {
        H2Class { a: self.a.clone() + o.a.clone(), b: self.b.clone() + o.b.clone() }
    }

    pub fn scale(&self, c: &T) -> Self {
        H2Class { a: self.a.clone() * c.clone(), b: self.b.clone() * c.clone() }
    }
}

impl<T: Ring> H4Class<T> {
    pub fn new(p: T, q: T) -> Self {
        H4Class { p, q }
    }

    pub fn zero() -> Self {
        H4Class { p: T::zero(), q: T::zero() }
    }

    pub fn add(&self, o: &Self) -> Self {
        H4Class { p: self.p.clone() + o.p.clone(), q: self.q.clone() + o.q.clone() }
    }
}

/// Product of two `H^2` classes, reduced with `w1 w2 = w1^2 + w2^2`.
pub fn h2_product<T: Ring>(c: &H2Class<T>, d: &H2Class<T>) -> H4Class<T> {
    let mixed = c.a.clone() * d.b.clone() + d.a.clone() * c.b.clone();
    H4Class {
        p: c.a.clone() * d.a.clone() + mixed.clone(),
        q: c.b.clone() * d.b.clone() + mixed,
    }
}

pub fn h2_square<T: Ring>(c: &H2Class<T>) -> H4Class<T> {
    h2_product(c, c)
}

/// Integrals over `X` of the degree-three monomials, derived from the
/// ambient ring `Q[w1,w2]/(w1^3, w2^3)` of `P2 x P2`: `X` has class
/// `3 w1 + 3 w2`, and the top class `w1^2 w2^2` integrates to one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    /// `top[i]` is the integral of `w1^i w2^(3-i)`.
    pub top: [i64; 4],
}

/// Truncated ambient product: coefficient arrays indexed by `[i][j]` for
/// `w1^i w2^j`, `i, j <= 2`.
fn ambient_mul(x: &[[i64; 3]; 3], y: &[[i64; 3]; 3]) -> [[i64; 3]; 3] {
    let mut out = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 - i {
                for l in 0..3 - j {
                    out[i + k][j + l] += x[i][j] * y[k][l];
                }
            }
        }
    }
    out
}

impl IntersectionForm {
    pub fn from_ambient() -> Self {
        let mut hyper = [[0; 3]; 3];
        hyper[1][0] = 3;
        hyper[0][1] = 3;
        let mut top = [0; 4];
        for (i, t) in top.iter_mut().enumerate() {
            let mut mono = [[0; 3]; 3];
            if i <= 2 && 3 - i <= 2 {
                mono[i][3 - i] = 1;
            }
            // w1^3 = 0 and w2^3 = 0 already in the ambient ring
            *t = ambient_mul(&mono, &hyper)[2][2];
        }
        IntersectionForm { top }
    }

    /// Shared instance, computed once.
    pub fn get() -> &'static Self {
        static FORM: OnceLock<IntersectionForm> = OnceLock::new();
        FORM.get_or_init(Self::from_ambient)
    }

    /// Integral of `c4 . c2` over `X`.
    pub fn integrate<T: Ring>(&self, c4: &H4Class<T>, c2: &H2Class<T>) -> T {
        let t = |i: usize| T::from_i64(self.top[i]);
        c4.p.clone() * c2.a.clone() * t(3)
            + c4.p.clone() * c2.b.clone() * t(2)
            + c4.q.clone() * c2.a.clone() * t(1)
            + c4.q.clone() * c2.b.clone() * t(0)
    }

    /// Triple product of `H^2` classes straight from the ambient monomial
    /// integrals, with no reduction in `H^4`.
    pub fn triple<T: Ring>(&self, c: &H2Class<T>, d: &H2Class<T>, e: &H2Class<T>) -> T {
        let mut acc = T::zero();
        for (i, x) in [&c.a, &c.b].into_iter().enumerate() {
            for (j, y) in [&d.a, &d.b].into_iter().enumerate() {
                for (k, z) in [&e.a, &e.b].into_iter().enumerate() {
                    // number of w1 factors
                    let w1 = 3 - (i + j + k);
                    acc = acc + x.clone() * y.clone() * z.clone() * T::from_i64(self.top[w1]);
                }
            }
        }
        acc
    }
}

pub fn integrate_x<T: Ring>(c4: &H4Class<T>, c2: &H2Class<T>) -> T {
    IntersectionForm::get().integrate(c4, c2)
}

/// The polarization `N w1 + w2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polarization<T> {
    pub n: T,
}

impl<T: Ring> Polarization<T> {
    pub fn new(n: T) -> Self {
        Polarization { n }
    }

    pub fn class(&self) -> H2Class<T> {
        H2Class { a: self.n.clone(), b: T::one() }
    }
}

/// `c1 . (N w1 + w2)^2`.
pub fn degree<T: Ring>(c1: &H2Class<T>, pol: &Polarization<T>) -> T {
    integrate_x(&h2_square(&pol.class()), c1)
}

pub fn slope<T: Field>(c1: &H2Class<T>, rank: u32, pol: &Polarization<T>) -> T {
    assert!(rank >= 1, "slope needs positive rank");
    degree(c1, pol) / T::from_i64(i64::from(rank))
}

/// The degree as an exact polynomial in `N`.
pub fn symbolic_degree(c1: &H2Class<Rational>) -> UniPoly<Rational> {
    let lift = H2Class { a: UniPoly::constant(c1.a.clone()), b: UniPoly::constant(c1.b.clone()) };
    degree(&lift, &Polarization::new(UniPoly::var()))
}

/// Chern classes of `V(k, l)` for a rank-2 bundle `V` with classes
/// `(c1, c2)`.
pub fn twist_chern<T: Ring>(c1: &H2Class<T>, c2: &H4Class<T>, k: i64, l: i64) -> (H2Class<T>, H4Class<T>) {
    let t = H2Class::from_ints(k, l);
    let c1_new = c1.add(&t.scale(&T::from_i64(2)));
    let c2_new = c2.add(&h2_product(c1, &t)).add(&h2_square(&t));
    (c1_new, c2_new)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divisibility {
    Indivisible,
    DivisibleBy(BigInt),
    Zero,
    NonIntegral,
}

impl H4Class<Rational> {
    /// Coordinates in the lattice basis `w1^2/3, w2^2/3`.
    pub fn integral_coords(&self) -> (Rational, Rational) {
        let three = Rational::from_i64(3);
        (self.p.clone() * three.clone(), self.q.clone() * three)
    }
}

pub fn indivisibility(c: &H4Class<Rational>) -> Divisibility {
    let (x, y) = c.integral_coords();
    if !x.is_integer() || !y.is_integer() {
        return Divisibility::NonIntegral;
    }
    let g = x.to_integer().gcd(&y.to_integer());
    if g.is_zero() {
        Divisibility::Zero
    } else if g.is_one() {
        Divisibility::Indivisible
    } else {
        Divisibility::DivisibleBy(g.abs())
    }
}

fn term<T: fmt::Display + Ring + Signed>(out: &mut String, c: &T, name: &str) {
    if c.is_zero() {
        return;
    }
    if out.is_empty() {
        if c.is_negative() {
            out.push('-');
        }
    } else {
        out.push_str(if c.is_negative() { " - " } else { " + " });
    }
    let a = c.abs();
    if !a.is_one() {
        out.push_str(&format!("{a} "));
    }
    out.push_str(name);
}

impl fmt::Display for H2Class<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        term(&mut s, &self.a, "w1");
        term(&mut s, &self.b, "w2");
        f.write_str(if s.is_empty() { "0" } else { &s })
    }
}

impl fmt::Display for H4Class<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        term(&mut s, &self.p, "w1^2");
        term(&mut s, &self.q, "w2^2");
        f.write_str(if s.is_empty() { "0" } else { &s })
    }
}
