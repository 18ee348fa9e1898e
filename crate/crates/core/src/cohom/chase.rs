//! The scripted chase computing `h^1(End E)` for the bundle `E` of the
//! sequence `0 -> O_X -> E -> I_C(-2,2) -> 0`.

use super::{hypersurface_coh, les_propagate, p1_h, CohTable, CohomError, ExactSeq, Fact, RankFact};
use crate::split::{h0_of_splitting, SplittingType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationChase {
    pub h1_end: u64,
    pub h0_e: u64,
    pub h1_e: u64,
    pub h1_e_dual: u64,
    pub h2_e_dual: u64,
    pub h1_ic_twisted: u64,
    /// Every sequence after propagation, in the order it was run.
    pub sequences: Vec<ExactSeq>,
}

impl DeformationChase {
    /// The hand-supplied facts of all sequences.
    pub fn assertion_log(&self) -> Vec<String> {
        self.sequences.iter().flat_map(ExactSeq::assertion_log).collect()
    }

    pub fn assertion_count(&self) -> usize {
        self.sequences.iter().map(|s| s.assertions.len()).sum()
    }
}

fn need(seq: &ExactSeq, label: &str) -> Result<u64, CohomError> {
    seq.dim(label).ok_or_else(|| CohomError::Undetermined(label.to_string()))
}

fn determined(t: &CohTable, name: &str) -> Result<Vec<u64>, CohomError> {
    t.dims
        .iter()
        .enumerate()
        .map(|(i, d)| d.ok_or_else(|| CohomError::Undetermined(format!("H{i}({name})"))))
        .collect()
}

/// Replay the dimension chase, given the splitting type of `nu_{C/X}`.
pub fn end_deformation_dims(normal: &SplittingType) -> Result<DeformationChase, CohomError> {
    let ox_m22 = determined(&hypersurface_coh(-2, 2)?, "O_X(-2,2)")?;
    let ox_2m2 = determined(&hypersurface_coh(2, -2)?, "O_X(2,-2)")?;
    let ox = determined(&hypersurface_coh(0, 0)?, "O_X")?;
    let mut sequences = Vec::new();

    // 0 -> I_C(-2,2) -> O_X(-2,2) -> O_C(-2) -> 0
    let mut seq = ExactSeq::new();
    for (q, &h) in ox_m22.iter().enumerate() {
        seq = seq.unknown(format!("H{q}(I_C(-2,2))")).known(format!("H{q}(O_X(-2,2))"), h);
        if q < 2 {
            seq = seq.known(format!("H{q}(O_C(-2))"), p1_h(-2, q));
        } else if q == 2 {
            seq = seq.known("H2(O_C(-2))", 0);
        }
    }
    let a = les_propagate(&seq)?;
    let ic_m22: Vec<u64> = (0..=3).map(|q| need(&a, &format!("H{q}(I_C(-2,2))"))).collect::<Result<_, _>>()?;
    sequences.push(a);

    // 0 -> O_X -> E -> I_C(-2,2) -> 0
    let mut seq = ExactSeq::new();
    for q in 0..=3 {
        seq = seq
            .known(format!("H{q}(O_X)"), ox[q])
            .unknown(format!("H{q}(E)"))
            .known(format!("H{q}(I_C(-2,2))"), ic_m22[q]);
    }
    let b = les_propagate(&seq)?;
    let h0_e = need(&b, "H0(E)")?;
    let h1_e = need(&b, "H1(E)")?;
    sequences.push(b);

    // 0 -> I_C -> O_X -> O_C -> 0, with H0(I_C) computed directly
    let mut seq = ExactSeq::new().known("H0(I_C)", super::h0_ic(0, 0));
    for (q, &h) in ox.iter().enumerate() {
        if q > 0 {
            seq = seq.unknown(format!("H{q}(I_C)"));
        }
        seq = seq.known(format!("H{q}(O_X)"), h);
        if q < 3 {
            seq = seq.known(format!("H{q}(O_C)"), if q < 2 { p1_h(0, q) } else { 0 });
        }
    }
    let c = les_propagate(&seq)?;
    let ic: Vec<u64> = (0..=3).map(|q| need(&c, &format!("H{q}(I_C)"))).collect::<Result<_, _>>()?;
    sequences.push(c);

    // E* = E(2,-2) since E has rank 2 and determinant O(-2,2); twisting the
    // Serre sequence gives 0 -> O_X(2,-2) -> E* -> I_C -> 0
    let mut seq = ExactSeq::new();
    for q in 0..=3 {
        seq = seq
            .known(format!("H{q}(O_X(2,-2))"), ox_2m2[q])
            .unknown(format!("H{q}(E*)"))
            .known(format!("H{q}(I_C)"), ic[q]);
    }
    let d = les_propagate(&seq)?;
    let h1_e_dual = need(&d, "H1(E*)")?;
    let h2_e_dual = need(&d, "H2(E*)")?;
    sequences.push(d);

    // 0 -> E (x) I_C -> E -> E|_C -> 0, cut off at H1(E) = 0
    let seq = ExactSeq::new()
        .unknown("H0(E(x)I_C)")
        .known("H0(E)", h0_e)
        .unknown("H0(E|_C)")
        .unknown("H1(E(x)I_C)")
        .known("H1(E)", h1_e)
        .assert(
            Fact::MapRank { from: 1, rank: RankFact::Zero },
            "H^0(E) is generated by s, and s vanishes on C",
        )
        .assert(Fact::TermDim { term: 2, dim: h0_of_splitting(normal) }, "E|_C is the normal bundle of C in X");
    let e = les_propagate(&seq)?;
    let h1_ic_twisted = need(&e, "H1(E(x)I_C)")?;
    sequences.push(e);

    // E* tensored with the Serre sequence: 0 -> E* -> End E -> E (x) I_C -> 0
    let seq = ExactSeq::new()
        .known("H1(E*)", h1_e_dual)
        .unknown("H1(End E)")
        .known("H1(E(x)I_C)", h1_ic_twisted)
        .known("H2(E*)", h2_e_dual);
    let f = les_propagate(&seq)?;
    let h1_end = need(&f, "H1(End E)")?;
    sequences.push(f);

    Ok(DeformationChase { h1_end, h0_e, h1_e, h1_e_dual, h2_e_dual, h1_ic_twisted, sequences })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chase_for_the_lemma_splitting() {
        let chase = end_deformation_dims(&SplittingType::new(vec![1, -3])).unwrap();
        assert_eq!(chase.h1_end, 2);
        assert_eq!(chase.h0_e, 1);
        assert_eq!(chase.h1_e, 0);
        assert_eq!(chase.h1_e_dual, 0);
        assert_eq!(chase.h2_e_dual, 0);
        assert_eq!(chase.assertion_count(), 2);
        assert_eq!(chase.assertion_log().len(), 2);
    }

    #[test]
    fn ideal_sheaf_twist_has_no_first_cohomology() {
        let chase = end_deformation_dims(&SplittingType::new(vec![1, -3])).unwrap();
        assert_eq!(chase.sequences[0].dim("H1(I_C(-2,2))"), Some(0));
        assert_eq!(chase.sequences[0].dim("H2(I_C(-2,2))"), Some(1));
    }

    #[test]
    fn answer_tracks_the_normal_bundle() {
        let chase = end_deformation_dims(&SplittingType::new(vec![0, -2])).unwrap();
        assert_eq!(chase.h1_end, 1);
    }
}
