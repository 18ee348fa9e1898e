//! Slope stability of `E` against `N w1 + w2` by enumerating the line
//! subsheaves `O(k, l)` that could destabilize it.
//!
//! `Hom(O(k,l), E) = H^0(E(-k,-l))` is bounded above through the Serre
//! sequence by `h^0(O_X(-k,-l)) + h^0(I_C(-k-2, -l+2))`. A twist with a
//! zero bound cannot map to `E`; one with a negative slope gap cannot
//! destabilize. Whatever survives both tests is reported, not decided.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::chern::{degree, slope, symbolic_degree, H2Class, Polarization};
use crate::cohom::CohomCache;
use crate::poly::UniPoly;
use crate::scalar::qi;
use crate::{Rational, UniPolyQ};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StabilityError {
    #[error("polarization must satisfy N > 1, got N = {0}")]
    PolarizationTooSmall(Rational),
}

/// Upper bound for `dim Hom(O(k,l), E)`.
pub fn section_upper_bound(k: i64, l: i64) -> u64 {
    section_upper_bound_with(&CohomCache::new(), k, l)
}

fn section_upper_bound_with(cache: &CohomCache, k: i64, l: i64) -> u64 {
    cache.h0_ox(-k, -l) + cache.h0_ic(-k - 2, -l + 2)
}

fn c1_e() -> H2Class<Rational> {
    H2Class::from_ints(-2, 2)
}

/// `mu(O(k,l)) - mu(E)` at the polarization `N w1 + w2`.
pub fn slope_gap(k: i64, l: i64, n: &Rational) -> Rational {
    let pol = Polarization::new(n.clone());
    degree(&H2Class::from_ints(k, l), &pol) - slope(&c1_e(), 2, &pol)
}

/// The slope gap as a polynomial in `N`.
pub fn gap_polynomial(k: i64, l: i64) -> UniPolyQ {
    let half = UniPoly::constant(Rational::new(1.into(), 2.into()));
    symbolic_degree(&H2Class::from_ints(k, l)) - symbolic_degree(&c1_e()) * half
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CandidateStatus {
    ExcludedByDegree,
    ExcludedNoSections,
    UnresolvedLifting,
}

impl CandidateStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CandidateStatus::ExcludedByDegree => "EXCLUDED_BY_DEGREE",
            CandidateStatus::ExcludedNoSections => "EXCLUDED_NO_SECTIONS",
            CandidateStatus::UnresolvedLifting => "UNRESOLVED_LIFTING",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub k: i64,
    pub l: i64,
    pub upper_bound: u64,
    pub slope_gap: Rational,
    pub status: CandidateStatus,
}

fn classify(cache: &CohomCache, k: i64, l: i64, n: &Rational) -> Candidate {
    let upper_bound = section_upper_bound_with(cache, k, l);
    let slope_gap = slope_gap(k, l, n);
    let status = if upper_bound == 0 {
        CandidateStatus::ExcludedNoSections
    } else if slope_gap.is_negative() {
        CandidateStatus::ExcludedByDegree
    } else {
        CandidateStatus::UnresolvedLifting
    };
    Candidate { k, l, upper_bound, slope_gap, status }
}

/// Coefficients of the gap polynomial after `N = 1 + t`, as affine
/// functions `c0 + ck k + cl l` of the twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadrantProof {
    pub constant: Vec<Rational>,
    pub k_coeff: Vec<Rational>,
    pub l_coeff: Vec<Rational>,
    pub holds: bool,
}

/// Certify that every `O(k, l)` with `k <= 0`, `l <= 0` has negative slope
/// gap for all `N > 1`.
///
/// The shifted gap is affine in `(k, l)` coefficientwise. If each
/// coefficient has `c0 <= 0`, `ck >= 0`, `cl >= 0`, then on the quadrant
/// every coefficient is at most `c0 <= 0`; one strictly negative `c0` then
/// makes the polynomial negative for every `t > 0`.
pub fn quadrant_proof() -> QuadrantProof {
    let shift = |k, l| gap_polynomial(k, l).taylor_shift(&qi(1));
    let base = shift(0, 0);
    let dk = shift(1, 0) - base.clone();
    let dl = shift(0, 1) - base.clone();
    // affinity check: the (1,1) shift is predicted exactly
    let affine = shift(1, 1) == base.clone() + dk.clone() + dl.clone();
    let len = [&base, &dk, &dl].iter().map(|p| p.coeffs().len()).max().unwrap_or(0);
    let col = |p: &UniPolyQ| (0..len).map(|i| p.coeff(i)).collect::<Vec<_>>();
    let (constant, k_coeff, l_coeff) = (col(&base), col(&dk), col(&dl));
    let signs = constant.iter().all(|c| !c.is_positive())
        && k_coeff.iter().all(|c| !c.is_negative())
        && l_coeff.iter().all(|c| !c.is_negative());
    let strict = constant.iter().any(Signed::is_negative);
    QuadrantProof { constant, k_coeff, l_coeff, holds: affine && signs && strict }
}

/// Every `O(k, l)` that might map nontrivially to `E` and destabilize it,
/// classified, together with boundary witnesses.
///
/// Nonzero bounds come from two branches. For `k, l <= 0` the gap is
/// negative by [`quadrant_proof`]; only the corner `(0, 0)` is listed. For
/// `k = -a - 2`, `l = 2 - b` with `a, b >= 0` the gap is
/// `3(N^2 - 1 - a(2N+1) - b(N^2+2N))`, so a nonnegative gap bounds `(a, b)`
/// to a finite box, each point of which is classified. The first points
/// outside the box in each direction are listed too.
pub fn enumerate_candidates(n: &Rational) -> Result<Vec<Candidate>, StabilityError> {
    if *n <= qi(1) {
        return Err(StabilityError::PolarizationTooSmall(n.clone()));
    }
    let cache = CohomCache::new();
    let budget = n.clone() * n.clone() - qi(1);
    let wa = qi(2) * n.clone() + qi(1);
    let wb = n.clone() * n.clone() + qi(2) * n.clone();
    let mut points = vec![(0, 0)];
    for b in 0.. {
        if qi(b) * wb.clone() > budget {
            points.push((-2, 2 - b));
            break;
        }
        for a in 0.. {
            if qi(a) * wa.clone() + qi(b) * wb.clone() > budget {
                points.push((-a - 2, 2 - b));
                break;
            }
            points.push((-a - 2, 2 - b));
        }
    }
    points.sort_unstable();
    points.dedup();
    Ok(points.into_iter().map(|(k, l)| classify(&cache, k, l, n)).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    /// Stable unless one of these twists maps to `E`; deciding that needs
    /// the extension class of the Serre sequence.
    ConditionallyStable(Vec<(i64, i64)>),
    /// Needs an exhibited section, which upper bounds never provide.
    Unstable((i64, i64)),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Stable => f.write_str("STABLE"),
            Verdict::ConditionallyStable(list) => {
                let parts: Vec<String> = list.iter().map(|(k, l)| format!("({k},{l})")).collect();
                write!(f, "CONDITIONALLY_STABLE([{}])", parts.join(","))
            }
            Verdict::Unstable((k, l)) => write!(f, "UNSTABLE(({k},{l}))"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    pub n: Rational,
    pub candidates: Vec<Candidate>,
    pub verdict: Verdict,
    pub quadrant: QuadrantProof,
    pub notes: Vec<String>,
}

impl StabilityReport {
    pub fn unresolved(&self) -> Vec<(i64, i64)> {
        self.candidates
            .iter()
            .filter(|c| c.status == CandidateStatus::UnresolvedLifting)
            .map(|c| (c.k, c.l))
            .collect()
    }
}

pub fn verdict(n: &Rational) -> Result<StabilityReport, StabilityError> {
    let candidates = enumerate_candidates(n)?;
    let quadrant = quadrant_proof();
    let mut notes = vec!["line subsheaves only; Pic X is generated by O(1,0) and O(0,1) (trusted)".to_string()];
    if !quadrant.holds {
        notes.push("quadrant k, l <= 0 not certified".to_string());
    }
    let unresolved: Vec<(i64, i64)> = candidates
        .iter()
        .filter(|c| c.status == CandidateStatus::UnresolvedLifting)
        .map(|c| (c.k, c.l))
        .collect();
    let verdict = if unresolved.is_empty() && quadrant.holds {
        Verdict::Stable
    } else {
        for (k, l) in &unresolved {
            notes.push(format!(
                "O({k},{l}): H^0(I_C({},{})) != 0; whether a section lifts to E({},{}) depends on the extension class",
                -k - 2,
                -l + 2,
                -k,
                -l
            ));
        }
        Verdict::ConditionallyStable(unresolved)
    };
    Ok(StabilityReport { n: n.clone(), candidates, verdict, quadrant, notes })
}

/// Twists in `[-r, r]^2` with a nonzero section bound and a nonnegative gap.
pub fn brute_force_scan(n: &Rational, r: i64) -> Vec<(i64, i64)> {
    let cache = CohomCache::new();
    let mut out = Vec::new();
    for k in -r..=r {
        for l in -r..=r {
            if section_upper_bound_with(&cache, k, l) > 0 && !slope_gap(k, l, n).is_negative() {
                out.push((k, l));
            }
        }
    }
    out
}

/// Degree of `E` is positive at `n`.
pub fn degree_positive(c1: &H2Class<Rational>, n: &Rational) -> bool {
    let d = degree(c1, &Polarization::new(n.clone()));
    !d.is_zero() && d.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn section_bounds() {
        assert_eq!(section_upper_bound(0, 0), 1);
        assert_eq!(section_upper_bound(-2, 2), 0);
        assert_eq!(section_upper_bound(-3, 2), 1);
    }

    #[test]
    fn gap_polynomial_of_the_unresolved_twist() {
        assert_eq!(gap_polynomial(-3, 2), UniPoly::new(vec![qi(-6), qi(-6), qi(3)]));
        assert_eq!(slope_gap(-3, 2, &qi(3)), qi(3));
        assert_eq!(gap_polynomial(0, 0), UniPoly::new(vec![qi(3), qi(0), qi(-3)]));
    }

    #[test]
    fn quadrant_is_certified() {
        let p = quadrant_proof();
        assert!(p.holds, "{p:?}");
    }

    #[test]
    fn verdict_at_two() {
        let r = verdict(&qi(2)).unwrap();
        assert_eq!(r.verdict, Verdict::Stable);
        assert!(r.unresolved().is_empty());
        assert!(r.candidates.iter().any(|c| (c.k, c.l) == (-2, 2) && c.status == CandidateStatus::ExcludedNoSections));
        assert!(r.candidates.iter().any(|c| (c.k, c.l) == (0, 0) && c.status == CandidateStatus::ExcludedByDegree));
    }

    #[test]
    fn verdict_at_three() {
        let r = verdict(&qi(3)).unwrap();
        assert_eq!(r.verdict, Verdict::ConditionallyStable(vec![(-3, 2)]));
        assert_eq!(r.verdict.to_string(), "CONDITIONALLY_STABLE([(-3,2)])");
        let c = r.candidates.iter().find(|c| (c.k, c.l) == (-3, 2)).unwrap();
        assert_eq!(c.upper_bound, 1);
        assert_eq!(c.slope_gap, qi(3));
    }

    #[test]
    fn verdict_at_three_halves() {
        assert_eq!(verdict(&q(3, 2)).unwrap().verdict, Verdict::Stable);
    }

    #[test]
    fn small_polarizations_are_rejected() {
        assert_eq!(verdict(&qi(1)), Err(StabilityError::PolarizationTooSmall(qi(1))));
        assert!(enumerate_candidates(&q(1, 2)).is_err());
    }

    #[test]
    fn threshold_is_one_plus_root_three() {
        // N^2 - 2N - 2 changes sign between 2.73 and 2.74
        assert_eq!(verdict(&q(273, 100)).unwrap().verdict, Verdict::Stable);
        assert_eq!(verdict(&q(274, 100)).unwrap().verdict, Verdict::ConditionallyStable(vec![(-3, 2)]));
    }

    #[test]
    fn brute_force_agrees_at_two_and_three() {
        assert!(brute_force_scan(&qi(2), 8).is_empty());
        assert_eq!(brute_force_scan(&qi(3), 8), vec![(-3, 2)]);
    }

    #[test]
    fn box_statuses_are_consistent() {
        for n in [q(3, 2), qi(2), q(5, 2), qi(3), qi(10)] {
            for c in enumerate_candidates(&n).unwrap() {
                match c.status {
                    CandidateStatus::ExcludedNoSections => assert_eq!(c.upper_bound, 0),
                    CandidateStatus::UnresolvedLifting => assert!(c.upper_bound > 0 && !c.slope_gap.is_negative()),
                    CandidateStatus::ExcludedByDegree => assert!(c.slope_gap.is_negative()),
                }
            }
            let unresolved: Vec<_> = verdict(&n).unwrap().unresolved();
            let mut scan = brute_force_scan(&n, 8);
            scan.sort_unstable();
            assert_eq!(unresolved, scan);
        }
    }

    #[test]
    fn degrees_positive_on_samples() {
        for n in [q(3, 2), qi(2), q(5, 2), qi(3), qi(10)] {
            assert!(degree_positive(&H2Class::from_ints(-2, 2), &n));
            assert!(degree_positive(&H2Class::from_ints(2, 0), &n));
        }
    }
}
