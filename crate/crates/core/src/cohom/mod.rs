//! Line-bundle cohomology on P2, on `P = P2 x P2`, and on the hypersurface
//! `X` of bidegree (3,3), plus sections of the ideal sheaf of the line `C`.

mod chase;
mod les;

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use num_traits::One;
use thiserror::Error;

use crate::linalg::Matrix;
use crate::poly::monomials;
use crate::Rational;

pub use chase::{end_deformation_dims, DeformationChase};
pub use les::{les_propagate, Assertion, ExactSeq, Fact, RankFact, SeqTerm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomError {
    #[error("inconsistent input dimensions: {0}")]
    Inconsistent(String),
    #[error("chase did not determine {0}")]
    Undetermined(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    /// The ambient `P2 x P2` (dimension 4).
    P,
    /// The (3,3) hypersurface (dimension 3).
    X,
}

impl Space {
    pub fn dim(self) -> usize {
        match self {
            Space::P => 4,
            Space::X => 3,
        }
    }
}

/// `O(a, b)` on `P` or on `X`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LineBundle {
    pub space: Space,
    pub a: i64,
    pub b: i64,
}

impl LineBundle {
    pub fn on_x(a: i64, b: i64) -> Self {
        LineBundle { space: Space::X, a, b }
    }

    pub fn on_p(a: i64, b: i64) -> Self {
        LineBundle { space: Space::P, a, b }
    }

    pub fn twist(self, k: i64, l: i64) -> Self {
        LineBundle { space: self.space, a: self.a + k, b: self.b + l }
    }

    pub fn dual(self) -> Self {
        LineBundle { space: self.space, a: -self.a, b: -self.b }
    }
}

impl fmt::Display for LineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.space {
            Space::P => "P",
            Space::X => "X",
        };
        write!(f, "O_{s}({},{})", self.a, self.b)
    }
}

/// Dimensions `h^0 .. h^dim`, each known or unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohTable {
    pub space: Space,
    pub dims: Vec<Option<u64>>,
}

impl CohTable {
    pub fn unknown(space: Space) -> Self {
        CohTable { space, dims: vec![None; space.dim() + 1] }
    }

    pub fn known(space: Space, dims: &[u64]) -> Self {
        assert_eq!(dims.len(), space.dim() + 1);
        CohTable { space, dims: dims.iter().map(|&d| Some(d)).collect() }
    }

    pub fn h(&self, i: usize) -> Option<u64> {
        self.dims.get(i).copied().flatten()
    }

    pub fn is_determined(&self) -> bool {
        self.dims.iter().all(Option::is_some)
    }

    /// Fill an unknown entry; a known entry may only be "filled" with its
    /// own value.
    pub fn fill(&mut self, i: usize, value: u64) -> Result<(), CohomError> {
        match self.dims[i] {
            Some(v) if v != value => {
                Err(CohomError::Inconsistent(format!("h^{i} already {v}, refusing to revise to {value}")))
            }
            _ => {
                self.dims[i] = Some(value);
                Ok(())
            }
        }
    }

    pub fn euler_characteristic(&self) -> Option<i64> {
        self.dims
            .iter()
            .enumerate()
            .map(|(i, d)| d.map(|d| if i % 2 == 0 { d as i64 } else { -(d as i64) }))
            .sum()
    }
}

impl fmt::Display for CohTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .dims
            .iter()
            .map(|d| d.map_or_else(|| "?".to_string(), |d| d.to_string()))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

fn binom2(n: i64) -> u64 {
    if n < 2 {
        0
    } else {
        (n * (n - 1) / 2) as u64
    }
}

/// `h^i(P2, O(d))`.
pub fn bott_p2(d: i64, i: usize) -> u64 {
    match i {
        0 if d >= 0 => binom2(d + 2),
        2 if d <= -3 => binom2(-d - 1),
        _ => 0,
    }
}

/// `h^i(P1, O(d))` for `i = 0, 1`.
pub fn p1_h(d: i64, i: usize) -> u64 {
    match i {
        0 => (d + 1).max(0) as u64,
        1 => (-d - 1).max(0) as u64,
        _ => 0,
    }
}

/// Cohomology of `O_P(a, b)` by Kunneth.
pub fn kunneth_p(a: i64, b: i64) -> CohTable {
    let dims: Vec<u64> = (0..=4)
        .map(|q| {
            (0..=2usize)
                .filter(|&i| q >= i && q - i <= 2)
                .map(|i| bott_p2(a, i) * bott_p2(b, q - i))
                .sum()
        })
        .collect();
    CohTable::known(Space::P, &dims)
}

/// The long exact sequence of `0 -> O_P(a-3,b-3) -> O_P(a,b) -> O_X(a,b) -> 0`.
pub fn hypersurface_sequence(a: i64, b: i64) -> ExactSeq {
    let kernel = kunneth_p(a - 3, b - 3);
    let ambient = kunneth_p(a, b);
    let mut seq = ExactSeq::new();
    for q in 0..=4 {
        seq = seq
            .known(format!("H{q}(O_P({},{}))", a - 3, b - 3), kernel.h(q).unwrap())
            .known(format!("H{q}(O_P({a},{b}))"), ambient.h(q).unwrap());
        seq = if q < 4 {
            seq.unknown(format!("H{q}(O_X({a},{b}))"))
        } else {
            seq.known(format!("H{q}(O_X({a},{b}))"), 0)
        };
    }
    seq
}

/// `h^i(O_X(a, b))` wherever the divisor sequence forces it.
pub fn hypersurface_coh(a: i64, b: i64) -> Result<CohTable, CohomError> {
    let solved = les_propagate(&hypersurface_sequence(a, b))?;
    let mut table = CohTable::unknown(Space::X);
    for q in 0..=3 {
        if let Some(d) = solved.dim(&format!("H{q}(O_X({a},{b}))")) {
            table.fill(q, d)?;
        }
    }
    Ok(table)
}

/// `h^0(O_P(a, b))`.
pub fn h0_p(a: i64, b: i64) -> u64 {
    bott_p2(a, 0) * bott_p2(b, 0)
}

/// `h^0(O_X(a, b)) = h^0(O_P(a,b)) - h^0(O_P(a-3,b-3))`. Valid because
/// `h^1(O_P(k, l)) = 0` for every `(k, l)`.
pub fn h0_ox(a: i64, b: i64) -> u64 {
    h0_p(a, b) - h0_p(a - 3, b - 3)
}

/// `h^0(I_C(a, b))` on `X`, by linear algebra on monomials.
///
/// Sections of `O_P(a,b)` surject onto those of `O_X(a,b)`, and the kernel
/// `F * H^0(O_P(a-3,b-3))` vanishes on `C` because `C` lies in `X`. So the
/// answer is the dimension of the kernel of restriction
/// `H^0(O_P(a,b)) -> H^0(O_C(a))` (`x, u, v -> 0`, `w -> 1`) minus
/// `h^0(O_P(a-3,b-3))`.
pub fn h0_ic(a: i64, b: i64) -> u64 {
    if a < 0 || b < 0 {
        return 0;
    }
    let basis = monomials((a as u32, b as u32));
    let mut m: Matrix<Rational> = Matrix::zeros(a as usize + 1, basis.len());
    for (j, e) in basis.iter().enumerate() {
        if e[0] == 0 && e[3] == 0 && e[4] == 0 {
            m[(e[2] as usize, j)] = Rational::one();
        }
    }
    m.nullity() as u64 - h0_p(a - 3, b - 3)
}

/// Memo of line-bundle tables and ideal-sheaf section counts.
///
/// Concurrent inserts of the same key write the same value, so races are
/// harmless.
#[derive(Debug, Default)]
pub struct CohomCache {
    tables: RwLock<HashMap<LineBundle, CohTable>>,
    ideal_sections: RwLock<HashMap<(i64, i64), u64>>,
}

impl CohomCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn table(&self, bundle: LineBundle) -> Result<CohTable, CohomError> {
        if let Some(t) = self.tables.read().expect("cache lock").get(&bundle) {
            return Ok(t.clone());
        }
        let t = match bundle.space {
            Space::P => kunneth_p(bundle.a, bundle.b),
            Space::X => hypersurface_coh(bundle.a, bundle.b)?,
        };
        self.tables.write().expect("cache lock").insert(bundle, t.clone());
        Ok(t)
    }

    pub fn h0_ic(&self, a: i64, b: i64) -> u64 {
        if let Some(&v) = self.ideal_sections.read().expect("cache lock").get(&(a, b)) {
            return v;
        }
        let v = h0_ic(a, b);
        self.ideal_sections.write().expect("cache lock").insert((a, b), v);
        v
    }

    pub fn h0_ox(&self, a: i64, b: i64) -> u64 {
        h0_ox(a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bott_values() {
        assert_eq!(bott_p2(2, 0), 6);
        for d in -8..8 {
            assert_eq!(bott_p2(d, 1), 0);
        }
        assert_eq!(bott_p2(-5, 2), 6);
        assert_eq!(bott_p2(-3, 2), 1);
        assert_eq!(bott_p2(-2, 2), 0);
    }

    #[test]
    fn kunneth_values() {
        assert_eq!(kunneth_p(2, -2), CohTable::known(Space::P, &[0, 0, 0, 0, 0]));
        assert_eq!(kunneth_p(0, -5), CohTable::known(Space::P, &[0, 0, 6, 0, 0]));
        assert_eq!(kunneth_p(0, 0), CohTable::known(Space::P, &[1, 0, 0, 0, 0]));
        assert_eq!(kunneth_p(-3, -3), CohTable::known(Space::P, &[0, 0, 0, 0, 1]));
    }

    #[test]
    fn hypersurface_values() {
        assert_eq!(hypersurface_coh(2, -2).unwrap(), CohTable::known(Space::X, &[0, 0, 0, 0]));
        assert_eq!(hypersurface_coh(-2, 2).unwrap(), CohTable::known(Space::X, &[0, 0, 0, 0]));
        assert_eq!(hypersurface_coh(0, 0).unwrap(), CohTable::known(Space::X, &[1, 0, 0, 1]));
        assert_eq!(hypersurface_coh(-5, 0).unwrap().h(2), Some(6));
    }

    #[test]
    fn middle_cohomology_can_stay_unknown() {
        // both H^2(O_P(0,-6)) and H^2(O_P(3,-3)) are nonzero; the map between
        // them is multiplication by F and is not determined by dimensions
        let t = hypersurface_coh(3, -3).unwrap();
        assert_eq!(t.h(0), Some(0));
        assert!(t.h(1).is_none() && t.h(2).is_none());
    }

    #[test]
    fn sections() {
        assert_eq!(h0_ox(1, 0), 3);
        assert_eq!(h0_ox(3, 3), 99);
        assert_eq!(h0_ic(0, 1), 2);
        assert_eq!(h0_ic(1, 0), 1);
        assert_eq!(h0_ic(0, 0), 0);
        assert_eq!(h0_ic(-1, 4), 0);
    }

    #[test]
    fn cache_agrees_with_direct_computation() {
        let cache = CohomCache::new();
        for (a, b) in [(0, 0), (2, -2), (-5, 0)] {
            assert_eq!(cache.table(LineBundle::on_x(a, b)).unwrap(), hypersurface_coh(a, b).unwrap());
            assert_eq!(cache.table(LineBundle::on_x(a, b)).unwrap(), hypersurface_coh(a, b).unwrap());
        }
        assert_eq!(cache.h0_ic(1, 0), 1);
    }
}
