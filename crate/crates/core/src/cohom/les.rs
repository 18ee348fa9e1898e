//! Dimension propagation along long exact sequences.
//!
//! A sequence `0 -> T_0 -> T_1 -> ... -> T_{n-1} -> 0` is exact iff
//! `dim T_i = r_{i-1} + r_i` where `r_i` is the rank of `T_i -> T_{i+1}` and
//! the boundary ranks are zero. Unknown dimensions and ranks are integer
//! intervals; bound propagation runs to a fixpoint and a value is filled in
//! only when its interval collapses to a point. Nothing is guessed.

use std::fmt;

use super::CohomError;

const INF: i64 = i64::MAX / 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqTerm {
    pub label: String,
    pub dim: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankFact {
    Zero,
    Injective,
    Surjective,
    Equals(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fact {
    /// A statement about the map out of term `from`.
    MapRank { from: usize, rank: RankFact },
    /// The dimension of a term, known from outside the sequence.
    TermDim { term: usize, dim: u64 },
}

/// A fact supplied by hand, with the reason it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub fact: Fact,
    pub justification: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSeq {
    pub terms: Vec<SeqTerm>,
    pub assertions: Vec<Assertion>,
    /// Ranks of the maps `T_i -> T_{i+1}` (length `n - 1`), filled by
    /// [`les_propagate`] where forced.
    pub ranks: Vec<Option<u64>>,
}

impl ExactSeq {
    pub fn new() -> Self {
        ExactSeq { terms: Vec::new(), assertions: Vec::new(), ranks: Vec::new() }
    }

    pub fn term(mut self, label: impl Into<String>, dim: Option<u64>) -> Self {
        self.terms.push(SeqTerm { label: label.into(), dim });
        self
    }

    pub fn known(self, label: impl Into<String>, dim: u64) -> Self {
        self.term(label, Some(dim))
    }

    pub fn unknown(self, label: impl Into<String>) -> Self {
        self.term(label, None)
    }

    pub fn assert(mut self, fact: Fact, justification: impl Into<String>) -> Self {
        self.assertions.push(Assertion { fact, justification: justification.into() });
        self
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.terms.iter().position(|t| t.label == label)
    }

    pub fn dim(&self, label: &str) -> Option<u64> {
        self.index_of(label).and_then(|i| self.terms[i].dim)
    }

    /// Assertion log lines, one per hand-supplied fact.
    pub fn assertion_log(&self) -> Vec<String> {
        self.assertions
            .iter()
            .map(|a| {
                let what = match &a.fact {
                    Fact::MapRank { from, rank } => {
                        let src = &self.terms[*from].label;
                        let dst = self.terms.get(from + 1).map_or("0", |t| t.label.as_str());
                        let r = match rank {
                            RankFact::Zero => "is zero".to_string(),
                            RankFact::Injective => "is injective".to_string(),
                            RankFact::Surjective => "is surjective".to_string(),
                            RankFact::Equals(n) => format!("has rank {n}"),
                        };
                        format!("{src} -> {dst} {r}")
                    }
                    Fact::TermDim { term, dim } => format!("dim {} = {dim}", self.terms[*term].label),
                };
                format!("{what} [{}]", a.justification)
            })
            .collect()
    }
}

impl Default for ExactSeq {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for ExactSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0")?;
        for t in &self.terms {
            match t.dim {
                Some(d) => write!(f, " -> {}={d}", t.label)?,
                None => write!(f, " -> {}=?", t.label)?,
            }
        }
        write!(f, " -> 0")
    }
}

#[derive(Clone, Copy, Debug)]
struct Interval {
    lo: i64,
    hi: i64,
}

impl Interval {
    fn unknown() -> Self {
        Interval { lo: 0, hi: INF }
    }
    fn point(v: i64) -> Self {
        Interval { lo: v, hi: v }
    }
    fn meet(&mut self, lo: i64, hi: i64) -> bool {
        let (nlo, nhi) = (self.lo.max(lo), self.hi.min(hi));
        let changed = nlo != self.lo || nhi != self.hi;
        self.lo = nlo;
        self.hi = nhi;
        changed
    }
    fn value(&self) -> Option<u64> {
        (self.lo == self.hi && self.hi < INF).then_some(self.lo as u64)
    }
}

fn add(a: i64, b: i64) -> i64 {
    a.saturating_add(b).min(INF)
}

fn sub(a: i64, b: i64) -> i64 {
    if a >= INF {
        INF
    } else {
        a - b
    }
}

/// Fill every dimension and rank forced by exactness and the asserted facts.
pub fn les_propagate(seq: &ExactSeq) -> Result<ExactSeq, CohomError> {
    let n = seq.terms.len();
    let mut dims: Vec<Interval> = seq
        .terms
        .iter()
        .map(|t| t.dim.map_or_else(Interval::unknown, |d| Interval::point(d as i64)))
        .collect();
    // ranks[i] is the rank of the map into term i; ranks[0] and ranks[n] are 0
    let mut ranks: Vec<Interval> = (0..=n).map(|_| Interval::unknown()).collect();
    ranks[0] = Interval::point(0);
    ranks[n] = Interval::point(0);
    for (i, r) in seq.ranks.iter().enumerate() {
        if let Some(r) = r {
            ranks[i + 1].meet(*r as i64, *r as i64);
        }
    }

    let inconsistent = |what: String| CohomError::Inconsistent(what);
    for a in &seq.assertions {
        match a.fact {
            Fact::TermDim { term, dim } => {
                if term >= n {
                    return Err(inconsistent(format!("assertion refers to missing term {term}")));
                }
                dims[term].meet(dim as i64, dim as i64);
            }
            Fact::MapRank { from, rank: RankFact::Zero } => {
                ranks[from + 1].meet(0, 0);
            }
            Fact::MapRank { from, rank: RankFact::Equals(r) } => {
                ranks[from + 1].meet(r as i64, r as i64);
            }
            Fact::MapRank { .. } => {}
        }
    }

    let mut changed = true;
    let mut rounds = 0;
    while changed {
        changed = false;
        rounds += 1;
        if rounds > 64 * (n + 1) {
            break;
        }
        for i in 0..n {
            // dim T_i = ranks[i] + ranks[i+1]
            let (a, b) = (ranks[i], ranks[i + 1]);
            changed |= dims[i].meet(add(a.lo, b.lo), add(a.hi, b.hi));
            let d = dims[i];
            changed |= ranks[i].meet(d.lo.saturating_sub(b.hi).max(0), sub(d.hi, b.lo));
            let a = ranks[i];
            changed |= ranks[i + 1].meet(d.lo.saturating_sub(a.hi).max(0), sub(d.hi, a.lo));
        }
        for a in &seq.assertions {
            if let Fact::MapRank { from, rank } = a.fact {
                let r = from + 1;
                let target = match rank {
                    RankFact::Injective => Some(from),
                    RankFact::Surjective if from + 1 < n => Some(from + 1),
                    _ => None,
                };
                if let Some(t) = target {
                    let (d, rk) = (dims[t], ranks[r]);
                    changed |= ranks[r].meet(d.lo, d.hi);
                    changed |= dims[t].meet(rk.lo, rk.hi);
                }
            }
        }
        if let Some(i) = dims.iter().position(|d| d.lo > d.hi) {
            return Err(inconsistent(format!("no consistent dimension for {}", seq.terms[i].label)));
        }
        if ranks.iter().any(|r| r.lo > r.hi) {
            return Err(inconsistent("inconsistent input dimensions".to_string()));
        }
    }

    let mut out = seq.clone();
    for (t, d) in out.terms.iter_mut().zip(&dims) {
        if t.dim.is_none() {
            t.dim = d.value();
        }
    }
    out.ranks = (1..n).map(|i| ranks[i].value()).collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn injective_map_forces_zero_kernel() {
        let seq = ExactSeq::new()
            .unknown("A")
            .known("B", 6)
            .known("C", 6)
            .assert(Fact::MapRank { from: 1, rank: RankFact::Injective }, "full rank");
        let out = les_propagate(&seq).unwrap();
        assert_eq!(out.dim("A"), Some(0));
    }

    #[test]
    fn alternating_sum_violation_is_an_error() {
        let seq = ExactSeq::new().known("A", 0).known("B", 1).known("C", 0);
        assert!(matches!(les_propagate(&seq), Err(CohomError::Inconsistent(_))));
    }

    #[test]
    fn unforced_values_stay_unknown() {
        // 0 -> A -> B=1 -> C=1 -> D -> 0: A = D, both in {0, 1}
        let seq = ExactSeq::new().unknown("A").known("B", 1).known("C", 1).unknown("D");
        let out = les_propagate(&seq).unwrap();
        assert_eq!(out.dim("A"), None);
        assert_eq!(out.dim("D"), None);
    }

    #[test]
    fn term_dimension_assertion() {
        let seq = ExactSeq::new()
            .unknown("K")
            .known("V", 1)
            .unknown("W")
            .unknown("Q")
            .known("Z", 0)
            .assert(Fact::MapRank { from: 1, rank: RankFact::Zero }, "generated by a section vanishing on C")
            .assert(Fact::TermDim { term: 2, dim: 2 }, "identification");
        let out = les_propagate(&seq).unwrap();
        assert_eq!(out.dim("K"), Some(1));
        assert_eq!(out.dim("Q"), Some(2));
        assert_eq!(out.assertion_log().len(), 2);
    }

    #[test]
    fn conflicting_assertion_is_an_error() {
        let seq = ExactSeq::new()
            .known("A", 1)
            .known("B", 1)
            .assert(Fact::TermDim { term: 0, dim: 2 }, "wrong");
        assert!(les_propagate(&seq).is_err());
    }
}
