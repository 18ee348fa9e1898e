//! Verification runs and their certificates.
//!
//! A run executes a fixed list of checks and records, for each, its inputs,
//! outputs, hand-supplied assertions and a status. Certificates serialize
//! to JSON with sorted keys and to a line-oriented text form; both are
//! byte-identical across runs on the same input.

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::chern::{indivisibility, symbolic_degree, Divisibility, H2Class};
use crate::cohom::{end_deformation_dims, h0_ic, hypersurface_coh};
use crate::construct::{
    base_locus_check, build_e, local_smoothness_check, ConstructionData, GeneratorSet, SequenceRecord,
};
use crate::deform::{first_order, obstructed, obstructed_all, within_tenth_bound, DeformationDirection, CUBIC_BASIS, THICK_POINT_RING};
use crate::poly::text::{format_biform, parse_biform};
use crate::poly::UniPoly;
use crate::scalar::{q, qi};
use crate::split::{h0_of_splitting, SplittingType};
use crate::stability::{degree_positive, verdict, Verdict};
use crate::{BiFormQ, Rational};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every anchor a check record may carry.
pub const ANCHORS: &[&str] = &[
    "H^2(L^*)=0",
    "H^1(O_X(-2,2))=0",
    "H^1(E)=0=H^2(E^*)",
    "H^1(End E)=H^0(nu_{C/X})",
    "h^0(I_C(1,0))",
    "nu_{C/X}=O_C(1)+O_C(-3)",
    "H^0(nu_{C/X})=C^2",
    "s not in image of restriction",
    "C[e,n]/(e^2,en,n^2)",
    "c_1(E)=2w_2-2w_1, c_2(E)=w_2^2/3",
    "c_2(A)=w_1^2+4/3 w_2^2",
    "6(N^2-1)",
    "12(2N+1)",
    "stable for N>1",
    "base locus = f",
    "[1:-1:0]",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Flagged,
    Skipped,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Flagged => "FLAGGED",
            Status::Skipped => "SKIPPED",
            Status::Fail => "FAIL",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: &'static str,
    pub status: Status,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    pub assertions: Vec<String>,
}

impl CheckRecord {
    fn new(id: &str, anchor: &'static str) -> Self {
        debug_assert!(ANCHORS.contains(&anchor), "unknown anchor {anchor}");
        CheckRecord {
            id: id.to_string(),
            anchor,
            status: Status::Skipped,
            inputs: Map::new(),
            outputs: Map::new(),
            assertions: Vec::new(),
        }
    }

    fn input(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.inputs.insert(key.to_string(), v.into());
        self
    }

    fn output(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.outputs.insert(key.to_string(), v.into());
        self
    }

    fn status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    fn failed(self, err: impl fmt::Display) -> Self {
        self.output("error", err.to_string()).status(Status::Fail)
    }

    fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status.as_str(),
            "inputs": Value::Object(self.inputs.clone()),
            "outputs": Value::Object(self.outputs.clone()),
            "assertions": self.assertions,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub version: String,
    pub input_digest: String,
    pub checks: Vec<CheckRecord>,
}

impl Certificate {
    pub fn overall(&self) -> Status {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else {
            Status::Pass
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.overall() {
            Status::Fail => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "version": self.version,
            "input_digest": self.input_digest,
            "checks": self.checks.iter().map(CheckRecord::to_json).collect::<Vec<_>>(),
            "overall": self.overall().as_str(),
        })
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("certificate serializes");
                s.push('\n');
                s
            }
            Format::Text => self.to_text(),
        }
    }

    fn to_text(&self) -> String {
        let mut out = format!("bundlecheck {}\ninput digest {}\n", self.version, self.input_digest);
        for c in &self.checks {
            out.push_str(&format!("{:<8} {:<24} {}\n", c.status.as_str(), c.id, c.anchor));
            if matches!(c.status, Status::Fail | Status::Flagged) {
                for (k, v) in &c.outputs {
                    out.push_str(&format!("    {k}: {}\n", text_value(v)));
                }
                for a in &c.assertions {
                    out.push_str(&format!("    assert: {a}\n"));
                }
            }
        }
        out.push_str(&format!("overall: {}\n", self.overall().as_str()));
        out
    }
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    All,
    Cohomology,
    Lemma1,
    Lemma2,
    Chern,
    Stability,
    Geometry,
}

#[derive(Debug, Error, PartialEq)]
pub enum RunError {
    #[error("N>1 required (got N = {0})")]
    Polarization(Rational),
    #[error("bad polarization `{0}`")]
    BadNumber(String),
    #[error("perturbation: {0}")]
    Perturbation(String),
}

impl RunError {
    /// All run errors are input or usage errors.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Inputs of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub p: BiFormQ,
    pub n: Rational,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { p: crate::poly::BiForm::zero((3, 3)), n: qi(2) }
    }
}

impl RunOptions {
    pub fn with_perturbation_text(mut self, text: &str) -> Result<Self, RunError> {
        self.p = parse_biform(text, Some((3, 3))).map_err(|e| RunError::Perturbation(e.to_string()))?;
        Ok(self)
    }

    pub fn with_n_text(mut self, text: &str) -> Result<Self, RunError> {
        self.n = Rational::from_str(text.trim()).map_err(|_| RunError::BadNumber(text.to_string()))?;
        Ok(self)
    }
}

pub fn input_digest(data: &ConstructionData) -> String {
    let mut h = Sha256::new();
    h.update(format_biform(data.f()).as_bytes());
    h.update(b"--\n");
    h.update(format_biform(data.p()).as_bytes());
    hex::encode(h.finalize())
}

/// Run the checks of `command`.
pub fn run(command: Command, opts: &RunOptions) -> Result<Certificate, RunError> {
    if opts.n <= qi(1) {
        return Err(RunError::Polarization(opts.n.clone()));
    }
    let data = ConstructionData::new(opts.p.clone()).map_err(|e| RunError::Perturbation(e.to_string()))?;
    let mut checks = Vec::new();
    let wants = |c: Command| command == Command::All || command == c;
    if wants(Command::Cohomology) {
        checks.extend(cohomology_checks(&data));
    }
    if wants(Command::Lemma1) {
        checks.extend(lemma1_checks(&data));
    }
    if wants(Command::Lemma2) {
        checks.extend(lemma2_checks(&data));
    }
    if wants(Command::Chern) {
        checks.extend(chern_checks(&data));
    }
    if wants(Command::Stability) {
        checks.extend(stability_checks(&opts.n));
    }
    if wants(Command::Geometry) {
        checks.extend(geometry_checks(&data));
    }
    Ok(Certificate { version: VERSION.to_string(), input_digest: input_digest(&data), checks })
}

fn table_json(dims: &[Option<u64>]) -> Value {
    dims.iter().map(|d| d.map_or(Value::String("?".into()), |d| json!(d))).collect()
}

fn cohomology_checks(data: &ConstructionData) -> Vec<CheckRecord> {
    let mut out = Vec::new();

    let rec = CheckRecord::new("cohom.feasibility", "H^2(L^*)=0").input("bundle", "O_X(2,-2)");
    out.push(match hypersurface_coh(2, -2) {
        Ok(t) => rec
            .output("h", table_json(&t.dims))
            .status(Status::from_bool((0..4).all(|i| t.h(i) == Some(0)))),
        Err(e) => rec.failed(e),
    });

    let rec = CheckRecord::new("cohom.o_x(-2,2)", "H^1(O_X(-2,2))=0").input("bundle", "O_X(-2,2)");
    out.push(match hypersurface_coh(-2, 2) {
        Ok(t) => rec.output("h", table_json(&t.dims)).status(Status::from_bool(t.h(1) == Some(0))),
        Err(e) => rec.failed(e),
    });

    let normal = first_order(data).map(|f| f.splitting);
    let rec = CheckRecord::new("cohom.end_e", "H^1(End E)=H^0(nu_{C/X})");
    out.push(match normal.as_ref().map_err(ToString::to_string).and_then(|s| end_deformation_dims(s).map_err(|e| e.to_string())) {
        Ok(chase) => {
            let expected = h0_of_splitting(normal.as_ref().expect("checked"));
            let ok = chase.h1_end == expected && chase.assertion_count() == 2 && chase.h1_e == 0 && chase.h2_e_dual == 0;
            let mut rec = rec
                .input("splitting", normal.as_ref().expect("checked").to_string())
                .output("h0(E)", chase.h0_e)
                .output("h1(E)", chase.h1_e)
                .output("h1(E*)", chase.h1_e_dual)
                .output("h2(E*)", chase.h2_e_dual)
                .output("h1(E(x)I_C)", chase.h1_ic_twisted)
                .output("h1(End E)", chase.h1_end)
                .output("manual_assertions", chase.assertion_count() as u64)
                .status(Status::from_bool(ok));
            rec.assertions = chase.assertion_log();
            rec
        }
        Err(e) => rec.failed(e),
    });

    let computed = h0_ic(1, 0);
    out.push(
        CheckRecord::new("cohom.h0_ic(1,0)", "h^0(I_C(1,0))")
            .input("bundle", "I_C(1,0)")
            .output("computed", computed)
            .output("criterion a>=0, b>=1 predicts", 0u64)
            .output("witness", "x")
            .status(if computed == 0 { Status::Pass } else { Status::Flagged }),
    );
    out
}

fn lemma1_checks(data: &ConstructionData) -> Vec<CheckRecord> {
    let map = data.normal_map();
    let entries: Vec<String> = map.entries().iter().map(ToString::to_string).collect();
    let rec = CheckRecord::new("lemma1.splitting", "nu_{C/X}=O_C(1)+O_C(-3)")
        .input("sources", "(1,0,0)")
        .input("target", 3u64)
        .input("entries", entries);
    let rec = match first_order(data) {
        Ok(fo) => {
            let ok = fo.splitting == SplittingType::new(vec![1, -3]) && fo.dimension == 2;
            rec.output("splitting", fo.splitting.to_string())
                .output("h0", fo.dimension)
                .status(Status::from_bool(ok))
        }
        Err(e) => rec.failed(e),
    };
    vec![rec]
}

fn lemma2_checks(data: &ConstructionData) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let mut rec = CheckRecord::new("lemma2.directions", "s not in image of restriction")
        .input("basis", CUBIC_BASIS.to_vec());
    let mut ok = true;
    for (a, b) in [(1, 0), (0, 1), (1, 1)] {
        let key = format!("obstructed({a},{b})");
        match obstructed(&DeformationDirection::from_ints(a, b), data) {
            Ok(v) => {
                ok &= v;
                rec = rec.output(&key, v);
            }
            Err(e) => {
                ok = false;
                rec = rec.output(&key, e.to_string());
            }
        }
    }
    out.push(rec.status(Status::from_bool(ok)));

    let rec = CheckRecord::new("lemma2.all_directions", "C[e,n]/(e^2,en,n^2)")
        .input("p_within_1/10", within_tenth_bound(data));
    out.push(match obstructed_all(data) {
        Ok(v) => {
            let forms: Vec<String> = v.compatibility_forms.iter().map(|f| f.display_in(("a", "b"))).collect();
            let gcd = v.gcd.as_ref().map_or("undefined".to_string(), |g| g.display_in(("a", "b")));
            let ok = v.all_obstructed && v.ring == THICK_POINT_RING;
            rec.output("compatibility_forms", forms)
                .output("gcd", gcd)
                .output("first_order_dim", v.first_order_dim)
                .output("ring", v.ring)
                .status(Status::from_bool(ok))
        }
        Err(e) => rec.failed(e),
    });
    out
}

fn sequence_outputs(rec: CheckRecord, s: &SequenceRecord) -> CheckRecord {
    rec.output("sequence", s.sequence.clone())
        .output("c1(E)", s.c1_e.to_string())
        .output("c2(E)", s.c2_e.to_string())
}

fn chern_checks(data: &ConstructionData) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let rec = CheckRecord::new("chern.e", "c_1(E)=2w_2-2w_1, c_2(E)=w_2^2/3").input("L", "O_X(-2,2)");
    let built = build_e(data);
    out.push(match &built {
        Ok(s) => {
            let ok = s.c1_e == H2Class::from_ints(-2, 2) && s.c2_e == crate::chern::H4Class::new(qi(0), q(1, 3));
            sequence_outputs(rec, s).status(Status::from_bool(ok))
        }
        Err(e) => rec.failed(e),
    });

    let rec = CheckRecord::new("chern.a", "c_2(A)=w_1^2+4/3 w_2^2").input("twist", "(1,-1)");
    out.push(match &built {
        Ok(s) => {
            let (x, y) = s.c2_a.integral_coords();
            let div = match indivisibility(&s.c2_a) {
                Divisibility::Indivisible => "indivisible".to_string(),
                Divisibility::DivisibleBy(m) => format!("divisible by {m}"),
                Divisibility::Zero => "zero".to_string(),
                Divisibility::NonIntegral => "non-integral".to_string(),
            };
            let ok = s.c1_a == H2Class::zero() && (x.clone(), y.clone()) == (qi(3), qi(4)) && s.a_divisibility == Divisibility::Indivisible;
            rec.output("c1(A)", s.c1_a.to_string())
                .output("c2(A)", s.c2_a.to_string())
                .output("integral_coords", format!("({x},{y})"))
                .output("divisibility", div)
                .status(Status::from_bool(ok))
        }
        Err(e) => rec.failed(e),
    });

    let deg_e = symbolic_degree(&H2Class::from_ints(-2, 2));
    let expected = UniPoly::new(vec![qi(-6), qi(0), qi(6)]);
    out.push(
        CheckRecord::new("chern.degree_e", "6(N^2-1)")
            .input("c1", "-2 w1 + 2 w2")
            .output("degree", deg_e.display_in("N"))
            .status(Status::from_bool(deg_e == expected)),
    );

    let c1_twist = H2Class::from_ints(2, 0);
    let oracle = symbolic_degree(&c1_twist);
    let stated = UniPoly::new(vec![qi(12), qi(24)]);
    let samples = [q(3, 2), qi(2), q(5, 2), qi(3), qi(10)];
    let positive = samples.iter().all(|n| degree_positive(&c1_twist, n));
    let status = if !positive {
        Status::Fail
    } else if oracle == stated {
        Status::Pass
    } else {
        Status::Flagged
    };
    out.push(
        CheckRecord::new("chern.degree_e(2,-1)", "12(2N+1)")
            .input("c1", "2 w1")
            .output("oracle", oracle.display_in("N"))
            .output("stated", stated.display_in("N"))
            .output("positive_at", samples.iter().map(ToString::to_string).collect::<Vec<_>>())
            .output("positive", positive)
            .status(status),
    );
    out
}

fn stability_checks(n: &Rational) -> Vec<CheckRecord> {
    let rec = CheckRecord::new("stability.verdict", "stable for N>1").input("N", n.to_string());
    let rec = match verdict(n) {
        Ok(r) => {
            let status = match r.verdict {
                Verdict::Stable => Status::Pass,
                Verdict::ConditionallyStable(_) => Status::Flagged,
                Verdict::Unstable(_) => Status::Fail,
            };
            let candidates: Vec<Value> = r
                .candidates
                .iter()
                .map(|c| {
                    json!({
                        "k": c.k,
                        "l": c.l,
                        "upper_bound": c.upper_bound,
                        "slope_gap": c.slope_gap.to_string(),
                        "status": c.status.as_str(),
                    })
                })
                .collect();
            let mut rec = rec
                .output("verdict", r.verdict.to_string())
                .output("candidates", candidates)
                .output("quadrant_certified", r.quadrant.holds)
                .status(status);
            rec.assertions = r.notes.clone();
            rec
        }
        Err(e) => rec.failed(e),
    };
    vec![rec]
}

fn geometry_checks(data: &ConstructionData) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let b = base_locus_check(GeneratorSet::Full);
    let control = base_locus_check(GeneratorSet::WithoutFibreTerms);
    let patches: Vec<String> = b
        .patches
        .iter()
        .map(|p| format!("{}{}:{}", p.patch.0.name(), p.patch.1.name(), if p.ok { "ok" } else { "missing" }))
        .collect();
    out.push(
        CheckRecord::new("geometry.base_locus", "base locus = f")
            .output("generators", b.generator_count as u64)
            .output("distinct_monomials", b.distinct_monomials as u64)
            .output("vanish_on_f", b.all_vanish_on_fibre)
            .output("fibre_ideal_x2y", b.fibre_restriction_is_x2y)
            .output("patches", patches)
            .output("control_without_x2y_terms_fails", !control.pass())
            .status(Status::from_bool(b.pass() && !control.pass())),
    );

    let rec = CheckRecord::new("geometry.smoothness", "[1:-1:0]");
    out.push(match local_smoothness_check(data) {
        Ok(r) => {
            let values: Vec<String> = r.values.iter().map(|(p, v)| format!("F{p} = {v}")).collect();
            let mut rec = rec
                .input("g_u", r.g_u.display_inline())
                .input("g_v", r.g_v.display_inline())
                .output("common_zeros", values)
                .status(Status::from_bool(r.pass()));
            if let Some(m) = r.matches_unperturbed {
                rec = rec.output("zero_set_is_[1:-1:0]", m);
            }
            if let Some(c) = r.caveat {
                rec.assertions.push(c);
            }
            rec
        }
        Err(e) => rec.failed(e),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn status_of(cert: &Certificate, id: &str) -> Status {
        cert.checks.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("no check {id}")).status
    }

    #[test]
    fn full_run_passes_with_flags() {
        let cert = run(Command::All, &RunOptions::default()).unwrap();
        assert_eq!(cert.overall(), Status::Pass);
        assert_eq!(cert.exit_code(), 0);
        assert_eq!(status_of(&cert, "chern.degree_e(2,-1)"), Status::Flagged);
        assert_eq!(status_of(&cert, "cohom.h0_ic(1,0)"), Status::Flagged);
        assert_eq!(status_of(&cert, "stability.verdict"), Status::Pass);
        for c in &cert.checks {
            assert!(ANCHORS.contains(&c.anchor));
        }
    }

    #[test]
    fn stability_at_three_is_flagged() {
        let opts = RunOptions::default().with_n_text("3").unwrap();
        let cert = run(Command::Stability, &opts).unwrap();
        assert_eq!(status_of(&cert, "stability.verdict"), Status::Flagged);
        assert_eq!(cert.exit_code(), 0);
    }

    #[test]
    fn polarization_must_exceed_one() {
        let opts = RunOptions::default().with_n_text("1").unwrap();
        let err = run(Command::Stability, &opts).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("N>1 required"));
    }

    #[test]
    fn json_is_deterministic() {
        let a = run(Command::All, &RunOptions::default()).unwrap().emit(Format::Json);
        let b = run(Command::All, &RunOptions::default()).unwrap().emit(Format::Json);
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["overall"], "PASS");
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["checks", "input_digest", "overall", "version"]);
    }

    #[test]
    fn flagged_degree_record_shows_both_values() {
        let cert = run(Command::Chern, &RunOptions::default()).unwrap();
        let rec = cert.checks.iter().find(|c| c.id == "chern.degree_e(2,-1)").unwrap();
        assert_eq!(rec.outputs["oracle"], "12*N + 6");
        assert_eq!(rec.outputs["stated"], "24*N + 12");
        let text = cert.emit(Format::Text);
        assert!(text.contains("oracle: 12*N + 6"));
    }

    #[test]
    fn digest_depends_on_p() {
        let a = run(Command::Lemma1, &RunOptions::default()).unwrap().input_digest;
        let opts = RunOptions::default().with_perturbation_text("1/20 y^3 u w^2").unwrap();
        let b = run(Command::Lemma1, &opts).unwrap().input_digest;
        assert_ne!(a, b);
        assert_eq!(a.len(), 64);
    }

    #[test]
    fn bad_perturbation_is_an_input_error() {
        let opts = RunOptions::default().with_perturbation_text("y^3 w^3").unwrap();
        assert!(matches!(run(Command::Lemma1, &opts), Err(RunError::Perturbation(_))));
        assert!(RunOptions::default().with_perturbation_text("x u").is_err());
    }

    #[test]
    fn failing_check_sets_exit_code() {
        // dF/dv on C loses y^3, so one direction extends
        let opts = RunOptions::default().with_perturbation_text("-y^3 v w^2").unwrap();
        let cert = run(Command::Lemma2, &opts).unwrap();
        assert_eq!(cert.overall(), Status::Fail);
        assert_eq!(cert.exit_code(), 1);
    }
}
