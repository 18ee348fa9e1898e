//! Splitting types of kernels of maps `sum_i O(a_i) -> O(d)` on P1.
//!
//! The kernel of a nonzero map is a vector bundle of rank `n - 1`, hence
//! `sum_j O(b_j)`. Its Hilbert function `h(t) = h^0(K(t))` is measured
//! degree by degree as a null-space dimension, and the `b_j` are read off
//! its second differences.

use std::fmt;

use thiserror::Error;

use crate::linalg::Matrix;
use crate::poly::BinForm;
use crate::scalar::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SplitError {
    #[error("entry {index} has degree {found}, expected {expected}")]
    EntryDegree { index: usize, expected: i64, found: u32 },
    #[error("source degrees and entries differ in length ({sources} vs {entries})")]
    Shape { sources: usize, entries: usize },
    #[error("fit failure: no splitting type reproduces the Hilbert function at t = {t}")]
    FitFailure { t: i64 },
}

/// A map `sum_i O(a_i) -> O(d)` on P1 given by binary forms `f_i` of degree
/// `d - a_i`; an entry that must vanish for degree reasons may be any zero
/// form.
#[derive(Clone, Debug)]
pub struct BundleMapP1<T> {
    sources: Vec<i64>,
    target: i64,
    entries: Vec<BinForm<T>>,
}

impl<T: Field> PartialEq for BundleMapP1<T> {
    fn eq(&self, other: &Self) -> bool {
        self.sources == other.sources && self.target == other.target && self.entries == other.entries
    }
}

impl<T: Field> BundleMapP1<T> {
    pub fn new(sources: Vec<i64>, target: i64, entries: Vec<BinForm<T>>) -> Result<Self, SplitError> {
        if sources.len() != entries.len() {
            return Err(SplitError::Shape { sources: sources.len(), entries: entries.len() });
        }
        for (index, (a, f)) in sources.iter().zip(&entries).enumerate() {
            let expected = target - a;
            if !f.is_zero() && i64::from(f.degree()) != expected {
                return Err(SplitError::EntryDegree { index, expected, found: f.degree() });
            }
        }
        Ok(BundleMapP1 { sources, target, entries })
    }

    pub fn sources(&self) -> &[i64] {
        &self.sources
    }

    pub fn target(&self) -> i64 {
        self.target
    }

    pub fn entries(&self) -> &[BinForm<T>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BinForm::is_zero)
    }

    /// The matrix of `(g_i) -> sum_i f_i g_i` from `sum_i H^0(O(a_i + t))` to
    /// `H^0(O(d + t))` in monomial bases.
    pub fn degree_matrix(&self, t: i64) -> Matrix<T> {
        let widths: Vec<usize> = self.sources.iter().map(|a| (a + t + 1).max(0) as usize).collect();
        let rows = (self.target + t + 1).max(0) as usize;
        let mut m = Matrix::zeros(rows, widths.iter().sum());
        let mut col = 0;
        for (f, &w) in self.entries.iter().zip(&widths) {
            if !f.is_zero() {
                for k in 0..w {
                    // f * y^(w-1-k) z^k contributes to the z^(j+k) coefficient
                    for (j, c) in f.coeffs().iter().enumerate() {
                        m[(j + k, col + k)] = c.clone();
                    }
                }
            }
            col += w;
        }
        m
    }
}

/// `h^0(K(t))` for the kernel `K` of `map`.
pub fn kernel_hilbert<T: Field>(map: &BundleMapP1<T>, t: i64) -> u64 {
    map.degree_matrix(t).nullity() as u64
}

/// `sum_j O(b_j)` on P1, stored in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SplittingType(Vec<i64>);

impl SplittingType {
    pub fn new(mut summands: Vec<i64>) -> Self {
        summands.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType(summands)
    }

    pub fn summands(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// `h^0` of the twist by `O(t)`.
    pub fn hilbert(&self, t: i64) -> u64 {
        self.0.iter().map(|b| (b + t + 1).max(0) as u64).sum()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn h0_of_splitting(s: &SplittingType) -> u64 {
    s.hilbert(0)
}

/// Infer the splitting type of the kernel of `map` from its Hilbert function.
pub fn splitting_type<T: Field>(map: &BundleMapP1<T>) -> Result<SplittingType, SplitError> {
    if map.is_zero() {
        return Ok(SplittingType::new(map.sources.to_vec()));
    }
    let rank = map.sources.len() - 1;
    let max_a = *map.sources.iter().max().expect("nonzero map has a source");
    let sum_a: i64 = map.sources.iter().sum();
    // every b_j <= max_a, and sum_j b_j >= sum_a - d, so every b_j is at
    // least sum_a - d - (rank - 1) * max_a
    let t_lo = -max_a - 1;
    let b_min = sum_a - map.target - (rank as i64 - 1) * max_a;
    let t_hi = (-b_min + 1).max(t_lo + 1);

    let h: Vec<i64> = (t_lo - 1..=t_hi).map(|t| kernel_hilbert(map, t) as i64).collect();
    let at = |t: i64| h[(t - (t_lo - 1)) as usize];
    let delta = |t: i64| at(t) - at(t - 1);
    if at(t_lo) != 0 {
        return Err(SplitError::FitFailure { t: t_lo });
    }
    let mut summands = Vec::new();
    for t in t_lo + 1..=t_hi {
        let mult = delta(t) - delta(t - 1);
        if mult < 0 {
            return Err(SplitError::FitFailure { t });
        }
        summands.extend(std::iter::repeat_n(-t, mult as usize));
    }
    let split = SplittingType::new(summands);
    if split.rank() != rank {
        return Err(SplitError::FitFailure { t: t_hi });
    }
    for t in t_lo - 1..=t_hi + 2 {
        let measured = if t <= t_hi { at(t) as u64 } else { kernel_hilbert(map, t) };
        if split.hilbert(t) != measured {
            return Err(SplitError::FitFailure { t });
        }
    }
    Ok(split)
}
