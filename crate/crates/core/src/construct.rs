//! The hypersurface `X = {F = 0}`, the curve `C = {x = u = v = 0}`, the
//! Serre construction of `E`, and the local geometric checks near the fibre
//! `f = {u = v = 0, x^2 y = 0}`.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::chern::{indivisibility, twist_chern, Divisibility, H2Class, H4Class};
use crate::cohom::{hypersurface_coh, LineBundle};
use crate::poly::{
    common_zeros_p2, monomial_vanishes_on_fibre, monomials, BiForm, Exponent, ProjPoint, Var, ZerosError,
};
use crate::scalar::{q, qi};
use crate::split::BundleMapP1;
use crate::{BiFormQ, H2ClassQ, H4ClassQ, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum ConstructError {
    #[error("perturbation must have bidegree (3,3), got {0:?}")]
    PerturbationBidegree((u32, u32)),
    #[error("perturbation term {0} does not vanish on the fibre")]
    PerturbationOffFibre(String),
    #[error("{0} is not feasible: H^2 of its dual is not known to vanish")]
    NotFeasible(LineBundle),
    #[error("smoothness argument fails for this p: common zero {0} lies on X")]
    ZeroOnX(Box<ProjPoint>),
    #[error("common zeros with irrational coordinates cannot be checked")]
    IrrationalZeros,
    #[error(transparent)]
    Zeros(#[from] ZerosError),
}

fn mono(e: Exponent) -> BiFormQ {
    BiForm::monomial(qi(1), e)
}

/// `x^2 y w^3 + z^2 y v w^2 + z^3 u w^2 + (x + y)^3 v w^2`.
pub fn canonical_form() -> BiFormQ {
    let x_plus_y = BiForm::var(Var::X).checked_add(&BiForm::var(Var::Y)).expect("same bidegree");
    let vw2 = mono([0, 0, 0, 0, 1, 2]);
    [
        mono([2, 1, 0, 0, 0, 3]),
        mono([0, 1, 2, 0, 1, 2]),
        mono([0, 0, 3, 1, 0, 2]),
        x_plus_y.pow(3).mul(&vw2),
    ]
    .iter()
    .try_fold(BiForm::zero((3, 3)), |acc, t| acc.checked_add(t))
    .expect("all terms have bidegree (3,3)")
}

/// Defining data of `X` and of the Serre construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionData {
    f: BiFormQ,
    p: BiFormQ,
    pub line_bundle: LineBundle,
    pub curve_class: H4ClassQ,
}

impl ConstructionData {
    /// `F = canonical_form() + p`, where every term of `p` must vanish on the
    /// fibre.
    pub fn new(p: BiFormQ) -> Result<Self, ConstructError> {
        if !p.is_zero() && p.bidegree() != (3, 3) {
            return Err(ConstructError::PerturbationBidegree(p.bidegree()));
        }
        if let Some((e, c)) = p.terms().find(|(e, _)| !monomial_vanishes_on_fibre(e)) {
            let term = BiForm::monomial(c.clone(), *e);
            return Err(ConstructError::PerturbationOffFibre(term.display_inline()));
        }
        let p = if p.is_zero() { BiForm::zero((3, 3)) } else { p };
        let f = canonical_form().checked_add(&p).expect("bidegree checked");
        Ok(ConstructionData {
            f,
            p,
            line_bundle: LineBundle::on_x(-2, 2),
            curve_class: H4Class::new(qi(0), q(1, 3)),
        })
    }

    pub fn f(&self) -> &BiFormQ {
        &self.f
    }

    pub fn p(&self) -> &BiFormQ {
        &self.p
    }

    /// The map `nu_{C/P} = O(1) + O + O -> O_C(3)` given by the partials
    /// of `F` in `x, u, v` along `C`; its kernel is `nu_{C/X}`.
    pub fn normal_map(&self) -> BundleMapP1<Rational> {
        let entries = [Var::X, Var::U, Var::V].map(|v| self.f.partial(v).restrict_to_c()).to_vec();
        BundleMapP1::new(vec![1, 0, 0], 3, entries).expect("partials have the right degrees")
    }
}

impl Default for ConstructionData {
    fn default() -> Self {
        ConstructionData::new(BiForm::zero((3, 3))).expect("zero perturbation is admissible")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Unknown,
}

/// The Serre construction with a section vanishing on `C` exists when
/// `H^2(L^*) = 0`.
pub fn serre_feasible(l: LineBundle) -> Feasibility {
    match hypersurface_coh(-l.a, -l.b) {
        Ok(t) if t.h(2) == Some(0) => Feasibility::Feasible,
        _ => Feasibility::Unknown,
    }
}

/// Chern data of `E` from `0 -> O_X -> E -> I_C(L) -> 0`, and of the
/// twist `A = E(1,-1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceRecord {
    pub line_bundle: LineBundle,
    pub sequence: String,
    pub rank: u32,
    pub c1_e: H2ClassQ,
    pub c2_e: H4ClassQ,
    pub twist: (i64, i64),
    pub c1_a: H2ClassQ,
    pub c2_a: H4ClassQ,
    pub a_divisibility: Divisibility,
    pub notes: Vec<String>,
}

pub fn build_e(data: &ConstructionData) -> Result<SequenceRecord, ConstructError> {
    let l = data.line_bundle;
    if serre_feasible(l) != Feasibility::Feasible {
        return Err(ConstructError::NotFeasible(l));
    }
    let c1_e = H2Class::from_ints(l.a, l.b);
    let c2_e = data.curve_class.clone();
    let twist = (1, -1);
    let (c1_a, c2_a) = twist_chern(&c1_e, &c2_e, twist.0, twist.1);
    let a_divisibility = indivisibility(&c2_a);
    Ok(SequenceRecord {
        line_bundle: l,
        sequence: format!("0 -> O_X -> E -> I_C({},{}) -> 0", l.a, l.b),
        rank: 2,
        c1_e,
        c2_e,
        twist,
        c1_a,
        c2_a,
        a_divisibility,
        notes: vec![
            "c1(E) = c1(L), c2(E) = [C]".to_string(),
            format!("H^2(O_X({},{})) = 0", -l.a, -l.b),
        ],
    })
}

/// Generators of the linear system used for the base-locus argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorSet {
    Full,
    /// Negative control: the `x^2 y m'` generators left out.
    WithoutFibreTerms,
}

pub fn base_locus_generators(set: GeneratorSet) -> Vec<Exponent> {
    let mut out = Vec::new();
    for m in monomials((3, 2)) {
        for var in [Var::U, Var::V] {
            let mut e = m;
            e[var.index()] += 1;
            out.push(e);
        }
    }
    if set == GeneratorSet::Full {
        for m in monomials((0, 3)) {
            let mut e = m;
            e[0] += 2;
            e[1] += 1;
            out.push(e);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchWitness {
    /// One of `x, y, z` and one of `u, v, w`, both nonzero on the patch.
    pub patch: (Var, Var),
    pub witnesses: Vec<Exponent>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseLocusReport {
    pub generator_count: usize,
    pub distinct_monomials: usize,
    pub all_vanish_on_fibre: bool,
    pub fibre_restriction_is_x2y: bool,
    pub patches: Vec<PatchWitness>,
}

impl BaseLocusReport {
    pub fn pass(&self) -> bool {
        self.all_vanish_on_fibre && self.fibre_restriction_is_x2y && self.patches.iter().all(|p| p.ok)
    }
}

fn supported_on(e: &Exponent, vars: &[Var]) -> bool {
    Var::ALL.iter().all(|v| e[v.index()] == 0 || vars.contains(v))
}

/// The witness set covers the patch if some witness is a monomial in the
/// patch variables alone, or, on a `w` patch, if for each of `u`, `v` some
/// witness is a monomial in the patch variables and that one.
fn covers(patch: (Var, Var), witnesses: &[Exponent]) -> bool {
    let (a, b) = patch;
    if witnesses.iter().any(|e| supported_on(e, &[a, b])) {
        return true;
    }
    b == Var::W && [Var::U, Var::V].iter().all(|&c| witnesses.iter().any(|e| supported_on(e, &[a, b, c])))
}

/// Check that the sections `u m`, `v m` and `x^2 y m'` cut out exactly the
/// fibre `f`.
pub fn base_locus_check(set: GeneratorSet) -> BaseLocusReport {
    let gens = base_locus_generators(set);
    let distinct: BTreeSet<Exponent> = gens.iter().copied().collect();
    let all_vanish_on_fibre = gens.iter().all(monomial_vanishes_on_fibre);

    // on u = v = 0, w = 1 every generator restricts to a multiple of x^2 y,
    // and x^2 y itself occurs
    let x2y = [2, 1, 0, 0, 0, 0];
    let restricted: Vec<BiFormQ> =
        gens.iter().map(|&e| mono(e).restrict_fibre()).filter(|r| !r.is_zero()).collect();
    let divisible = restricted.iter().all(|r| r.terms().all(|(e, _)| e[0] >= 2 && e[1] >= 1));
    let generated = restricted.iter().any(|r| r.len() == 1 && r.coeff(&x2y) != Rational::zero());
    let fibre_restriction_is_x2y = divisible && generated;

    let mut patches = Vec::new();
    for a in [Var::X, Var::Y, Var::Z] {
        for b in [Var::U, Var::V, Var::W] {
            let mut cube = [0u32; 6];
            cube[a.index()] = 3;
            let wanted: Vec<Exponent> = if b == Var::W {
                [Var::U, Var::V]
                    .iter()
                    .map(|c| {
                        let mut e = cube;
                        e[c.index()] = 1;
                        e[Var::W.index()] = 2;
                        e
                    })
                    .collect()
            } else {
                let mut e = cube;
                e[b.index()] = 3;
                vec![e]
            };
            let present = wanted.iter().all(|e| distinct.contains(e));
            let ok = present && covers((a, b), &wanted);
            patches.push(PatchWitness { patch: (a, b), witnesses: wanted, ok });
        }
    }
    BaseLocusReport {
        generator_count: gens.len(),
        distinct_monomials: distinct.len(),
        all_vanish_on_fibre,
        fibre_restriction_is_x2y,
        patches,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmoothnessReport {
    pub g_u: BiFormQ,
    pub g_v: BiFormQ,
    /// Each rational common zero of `g_u, g_v` with the value of `F` there.
    pub values: Vec<(ProjPoint, Rational)>,
    /// For `p = 0`, whether the zero set is exactly `[1:-1:0]`.
    pub matches_unperturbed: Option<bool>,
    pub caveat: Option<String>,
}

impl SmoothnessReport {
    pub fn pass(&self) -> bool {
        self.values.iter().all(|(_, v)| !v.is_zero()) && self.matches_unperturbed != Some(false)
    }
}

/// `X` is smooth along the fibre over `u = v = 0` wherever `dF/du` or
/// `dF/dv` is nonzero; check that their common zeros there lie off `X`.
pub fn local_smoothness_check(data: &ConstructionData) -> Result<SmoothnessReport, ConstructError> {
    let g_u = data.f.partial(Var::U).restrict_fibre();
    let g_v = data.f.partial(Var::V).restrict_fibre();
    let zeros = common_zeros_p2(&g_u, &g_v)?;
    if zeros.irrational_roots {
        return Err(ConstructError::IrrationalZeros);
    }
    let on_fibre = data.f.restrict_fibre();
    let mut values = Vec::new();
    for pt in &zeros.points {
        let [x, y, z] = pt.0.clone();
        let v = on_fibre.eval(&[x, y, z, qi(0), qi(0), qi(1)]);
        if v.is_zero() {
            return Err(ConstructError::ZeroOnX(Box::new(pt.clone())));
        }
        values.push((pt.clone(), v));
    }
    let unperturbed = data.p.is_zero();
    let matches_unperturbed =
        unperturbed.then(|| zeros.points == vec![ProjPoint::new([qi(1), qi(-1), qi(0)])]);
    let caveat = unperturbed.then(|| {
        "p = 0: every term of F is divisible by w^2, so X is non-reduced; only the local statements \
         along u = v = 0 are checked"
            .to_string()
    });
    Ok(SmoothnessReport { g_u, g_v, values, matches_unperturbed, caveat })
}
