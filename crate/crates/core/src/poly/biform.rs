use std::collections::BTreeMap;
use std::fmt;


use super::{BinForm, PolyError};
use crate::scalar::Ring;

/// Coordinates on P2 x P2: `[x:y:z]` on the first factor, `[u:v:w]` on the
/// second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Z,
    U,
    V,
    W,
}

impl Var {
    pub const ALL: [Var; 6] = [Var::X, Var::Y, Var::Z, Var::U, Var::V, Var::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z", "u", "v", "w"][self.index()]
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }

    fn in_first_factor(self) -> bool {
        self.index() < 3
    }
}

/// Exponents of `(x, y, z, u, v, w)`.
pub type Exponent = [u32; 6];

pub fn bidegree_of(e: &Exponent) -> (u32, u32) {
    (e[0] + e[1] + e[2], e[3] + e[4] + e[5])
}

/// Every exponent vector of the given bidegree, in ascending lex order.
pub fn monomials(bidegree: (u32, u32)) -> Vec<Exponent> {
    let mut out = Vec::new();
    for (i, j, k) in triples(bidegree.0) {
        for (p, q, r) in triples(bidegree.1) {
            out.push([i, j, k, p, q, r]);
        }
    }
    out.sort();
    out
}

fn triples(d: u32) -> impl Iterator<Item = (u32, u32, u32)> {
    (0..=d).flat_map(move |i| (0..=d - i).map(move |j| (i, j, d - i - j)))
}

/// Sparse bihomogeneous polynomial in `(x,y,z; u,v,w)`.
///
/// Terms are kept in a `BTreeMap` keyed by exponent, so iteration and
/// printing are canonical. Zero coefficients are never stored. The zero
/// form still carries a declared bidegree, but zero forms compare equal
/// regardless of it.
#[derive(Clone, Debug)]
pub struct BiForm<T> {
    terms: BTreeMap<Exponent, T>,
    bidegree: (u32, u32),
}

impl<T: Ring> PartialEq for BiForm<T> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<T: Ring> BiForm<T> {
    pub fn zero(bidegree: (u32, u32)) -> Self {
        BiForm { terms: BTreeMap::new(), bidegree }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, [0; 6])
    }

    /// `c * x^e0 y^e1 ... w^e5`; the bidegree is read off the exponent.
    pub fn monomial(c: T, e: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        BiForm { terms, bidegree: bidegree_of(&e) }
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 6];
        e[v.index()] = 1;
        Self::monomial(T::one(), e)
    }

    /// Build from terms, summing repeated exponents. Every exponent must
    /// have the declared bidegree.
    pub fn from_terms(
        bidegree: (u32, u32),
        terms: impl IntoIterator<Item = (Exponent, T)>,
    ) -> Result<Self, PolyError> {
        let mut f = Self::zero(bidegree);
        for (e, c) in terms {
            let got = bidegree_of(&e);
            if got != bidegree {
                return Err(PolyError::NotBihomogeneous { expected: bidegree, found: got });
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, e: Exponent, c: T) {
        let sum = match self.terms.remove(&e) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.bidegree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lex order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponent) -> T {
        self.terms.get(e).cloned().unwrap_or_else(T::zero)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        if self.bidegree != other.bidegree {
            return Err(PolyError::BidegreeMismatch { left: self.bidegree, right: other.bidegree });
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-T::one())
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero(self.bidegree);
        }
        BiForm {
            terms: self.terms.iter().map(|(e, a)| (*e, a.clone() * c.clone())).collect(),
            bidegree: self.bidegree,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let bidegree = (self.bidegree.0 + other.bidegree.0, self.bidegree.1 + other.bidegree.1);
        let mut out = Self::zero(bidegree);
        for (e, a) in &self.terms {
            for (f, b) in &other.terms {
                let mut g = *e;
                for (gi, fi) in g.iter_mut().zip(f) {
                    *gi += fi;
                }
                out.add_term(g, a.clone() * b.clone());
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Formal partial derivative. The result is bihomogeneous of bidegree
    /// one less in the factor containing `var`.
    pub fn partial(&self, var: Var) -> Self {
        let i = var.index();
        let bidegree = if var.in_first_factor() {
            (self.bidegree.0.saturating_sub(1), self.bidegree.1)
        } else {
            (self.bidegree.0, self.bidegree.1.saturating_sub(1))
        };
        let mut out = Self::zero(bidegree);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = *e;
            f[i] -= 1;
            out.add_term(f, c.clone() * T::from_i64(e[i] as i64));
        }
        out
    }

    /// Evaluate at a point `(x, y, z, u, v, w)`.
    pub fn eval(&self, point: &[T; 6]) -> T {
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (k, &n) in e.iter().enumerate() {
                for _ in 0..n {
                    term = term * point[k].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Restriction to the fibre `u = v = 0`, `w = 1`: a ternary form in
    /// `(x,y,z)` returned with bidegree `(d1, 0)`.
    pub fn restrict_fibre(&self) -> Self {
        let mut out = Self::zero((self.bidegree.0, 0));
        for (e, c) in &self.terms {
            if e[3] == 0 && e[4] == 0 {
                out.add_term([e[0], e[1], e[2], 0, 0, 0], c.clone());
            }
        }
        out
    }

    /// Restriction to the line `C = {x = u = v = 0}` with `w = 1`: a binary
    /// form in `(y, z)` of degree `d1`.
    pub fn restrict_to_c(&self) -> BinForm<T> {
        let mut out = BinForm::<T>::zero(self.bidegree.0);
        let mut coeffs = out.coeffs().to_vec();
        for (e, c) in &self.terms {
            if e[0] == 0 && e[3] == 0 && e[4] == 0 {
                let k = e[2] as usize;
                coeffs[k] = coeffs[k].clone() + c.clone();
            }
        }
        if !coeffs.is_empty() {
            out = BinForm::from_coeffs(coeffs);
        }
        out
    }

    /// Substitute linear forms for `x, y, z` in a ternary form (bidegree
    /// `(d, 0)`).
    pub fn substitute_xyz(&self, images: &[BiForm<T>; 3]) -> Result<Self, PolyError> {
        if self.bidegree.1 != 0 {
            return Err(PolyError::NotTernary { bidegree: self.bidegree });
        }
        for im in images {
            if im.bidegree != (1, 0) && !im.is_zero() {
                return Err(PolyError::NotTernary { bidegree: im.bidegree });
            }
        }
        let mut out = Self::zero(self.bidegree);
        for (e, c) in &self.terms {
            let term = images[0]
                .pow(e[0])
                .mul(&images[1].pow(e[1]))
                .mul(&images[2].pow(e[2]))
                .scale(c);
            if term.is_zero() {
                continue;
            }
            out = out.checked_add(&term)?;
        }
        Ok(out)
    }

    /// For a ternary form of degree `d`, the coefficient of `x^i` as a binary
    /// form in `(y, z)` of degree `d - i`, for `i = 0..=d`.
    pub fn x_expansion(&self) -> Result<Vec<BinForm<T>>, PolyError> {
        if self.bidegree.1 != 0 {
            return Err(PolyError::NotTernary { bidegree: self.bidegree });
        }
        let d = self.bidegree.0;
        let mut coeffs: Vec<Vec<T>> = (0..=d).map(|i| vec![T::zero(); (d - i) as usize + 1]).collect();
        for (e, c) in &self.terms {
            coeffs[e[0] as usize][e[2] as usize] = c.clone();
        }
        Ok(coeffs.into_iter().map(BinForm::from_coeffs).collect())
    }

    /// Inverse of [`BiForm::x_expansion`]; entry `i` must have degree `d - i`.
    pub fn from_x_expansion(parts: &[BinForm<T>]) -> Result<Self, PolyError> {
        let d = parts.len() as u32 - 1;
        let mut f = Self::zero((d, 0));
        for (i, part) in parts.iter().enumerate() {
            let i = i as u32;
            if part.is_zero() {
                continue;
            }
            if part.degree() != d - i {
                return Err(PolyError::DegreeMismatch { left: part.degree(), right: d - i });
            }
            for (k, c) in part.coeffs().iter().enumerate() {
                let k = k as u32;
                if !c.is_zero() {
                    f.add_term([i, d - i - k, k, 0, 0, 0], c.clone());
                }
            }
        }
        Ok(f)
    }
}

/// True when the monomial lies in the ideal `(x^2 y, u, v)` of the
/// degenerate fibre `f = {x^2 y = 0 = u = v}`.
pub fn monomial_vanishes_on_fibre(e: &Exponent) -> bool {
    e[3] > 0 || e[4] > 0 || (e[0] >= 2 && e[1] >= 1)
}

impl<T: Ring + fmt::Display> BiForm<T> {
    /// One-line rendering, terms in descending lex order.
    pub fn display_inline(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mono = monomial_string(e, "*");
                if mono.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    mono
                } else {
                    format!("{c}*{mono}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub(crate) fn monomial_string(e: &Exponent, sep: &str) -> String {
    Var::ALL
        .iter()
        .zip(e)
        .filter(|(_, &n)| n > 0)
        .map(|(v, &n)| if n == 1 { v.name().to_string() } else { format!("{}^{n}", v.name()) })
        .collect::<Vec<_>>()
        .join(sep)
}

impl<T: Ring + fmt::Display> fmt::Display for BiForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_inline())
    }
}
