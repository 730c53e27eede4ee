//! Per-(curve, prime) divisibility verdicts built from reduction data,
//! Frobenius-trace scans and exact prime thresholds.
//!
//! The criteria are sufficient conditions only. `CriterionFails` means the
//! criterion does not apply, never that divisibility fails.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_fundamental_discriminant, squarefree_kernel};
use crate::dataset::resolution_for;
use crate::elliptic::{
    frobenius_traces, has_full_rational_2torsion, is_supersingular, quadratic_twist, reduction_type, EllipticCurveQ,
    EllipticError, FrobeniusData, ReductionType,
};
use crate::fp::is_prime;
use crate::galois::{
    default_character_modulus, dirichlet_pair_scan, test_cyclotomic_pair, GaloisError, HypothesisVerdict, PairShape,
    SemisimpHypothesis, SqrtThreshold,
};

pub const DEFAULT_TRACE_BOUND: u64 = 1000;
pub const TWIST_DMAX_LIMIT: u64 = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisibilityError {
    #[error("p = {0} is not an odd prime")]
    UnsupportedPrime(u64),
    #[error("twist bound {0} exceeds {TWIST_DMAX_LIMIT}")]
    TwistBoundTooLarge(u64),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error(transparent)]
    Galois(#[from] GaloisError),
}

pub type Result<T> = std::result::Result<T, DivisibilityError>;

/// Which characters the bad-shape scan considers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CharacterMode {
    /// Powers of the cyclotomic character only.
    Cyclotomic,
    /// Dirichlet characters modulo `rad(disc) * p`, when that modulus is at most `modulus_cap`.
    Dirichlet { modulus_cap: u64 },
}

/// Facts about a curve the engine cannot compute and accepts on trust.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CurveMetadata {
    pub analytic_rank: Option<u32>,
    pub semistable: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerdictConfig {
    pub trace_bound: u64,
    pub character_mode: CharacterMode,
    /// Suppresses model-minimality warnings.
    pub assume_minimal: bool,
    pub metadata: CurveMetadata,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            trace_bound: DEFAULT_TRACE_BOUND,
            character_mode: CharacterMode::Cyclotomic,
            assume_minimal: false,
            metadata: CurveMetadata::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rigor {
    Rigorous,
    Heuristic,
    UserSupplied,
}

/// One step of a reason chain. `theorem` names the criterion applied and
/// `quote_tag` the hypothesis of it that was checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReasonStep {
    pub theorem: String,
    pub quote_tag: String,
    pub inputs: BTreeMap<String, String>,
    pub rigor: Rigor,
}

impl ReasonStep {
    fn new(theorem: &str, quote_tag: &str, rigor: Rigor, inputs: &[(&str, String)]) -> Self {
        ReasonStep {
            theorem: theorem.to_string(),
            quote_tag: quote_tag.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            rigor,
        }
    }
}

/// Criterion identifiers used in reason chains.
pub mod criteria {
    pub const LARGE_PRIME: &str = "large-prime";
    pub const REGULAR_PRIME_RESOLUTION: &str = "regular-prime-resolution";
    pub const SUPERSINGULAR_OR_NONSPLIT: &str = "supersingular-or-nonsplit";
    pub const RATIONAL_TWO_TORSION: &str = "rational-two-torsion";
    pub const BAD_SHAPE_SCAN: &str = "bad-shape-scan";
    pub const SEMISTABLE_RANK_ZERO: &str = "semistable-rank-zero";
    pub const UNIFORM_DEGREE_BOUND: &str = "uniform-degree-bound";
    pub const REFINED_DEGREE_BOUND: &str = "refined-degree-bound";
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Guaranteed,
    CriterionFails,
    Inconclusive,
}

/// The result of testing one bad semisimplification shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeEvidence {
    pub hypothesis: SemisimpHypothesis,
    pub refuted: bool,
    /// Refuting prime, if any.
    pub ell: Option<u64>,
    pub observed_trace: Option<i64>,
    pub expected_residue: Option<u64>,
    /// Number of primes the hypothesis survived.
    pub primes_checked: usize,
    pub trace_bound: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub shapes: Vec<ShapeEvidence>,
    pub notes: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisibilityVerdict {
    pub curve: String,
    pub p: u64,
    pub outcome: Outcome,
    pub chain: Vec<ReasonStep>,
    pub evidence: Evidence,
}

impl DivisibilityVerdict {
    /// Guaranteed needs a non-empty chain with no heuristic step.
    pub fn is_well_formed(&self) -> bool {
        !self.chain.is_empty()
            && (self.outcome != Outcome::Guaranteed || self.chain.iter().all(|s| s.rigor != Rigor::Heuristic))
    }

    pub fn first_reason(&self) -> &str {
        self.chain.first().map(|s| s.theorem.as_str()).unwrap_or("")
    }

    pub fn has_step(&self, theorem: &str) -> bool {
        self.chain.iter().any(|s| s.theorem == theorem)
    }

    pub fn tsv_header() -> &'static str {
        "curve\tp\toutcome\tfirst_reason"
    }

    pub fn tsv_row(&self) -> String {
        format!("{}\t{}\t{:?}\t{}", self.curve, self.p, self.outcome, self.first_reason())
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(DivisibilityError::UnsupportedPrime(p));
    }
    Ok(())
}

fn curve_name(e: &EllipticCurveQ, label: Option<&str>) -> String {
    label.map(str::to_string).unwrap_or_else(|| {
        let a = e.ainvs();
        format!("[{},{},{},{},{}]", a[0], a[1], a[2], a[3], a[4])
    })
}

/// Bad semisimplifications that must be excluded at `p ∈ {3, 5, 7}`, as exponent pairs of ε_p.
pub fn bad_cyclotomic_shapes(p: u64) -> Vec<(u64, u64)> {
    match p {
        5 => vec![(0, 1), (2, 3)],
        3 | 7 => vec![(0, 1)],
        _ => Vec::new(),
    }
}

/// Verdict for `e` over Q at the odd prime `p`.
pub fn verdict_over_q(e: &EllipticCurveQ, label: Option<&str>, p: u64, cfg: &VerdictConfig) -> Result<DivisibilityVerdict> {
    verdict_over_q_with(e, label, p, cfg, None)
}

/// As [`verdict_over_q`], reusing precomputed traces when given.
pub fn verdict_over_q_with(
    e: &EllipticCurveQ,
    label: Option<&str>,
    p: u64,
    cfg: &VerdictConfig,
    traces: Option<&FrobeniusData>,
) -> Result<DivisibilityVerdict> {
    check_odd_prime(p)?;
    let mut v = DivisibilityVerdict {
        curve: curve_name(e, label),
        p,
        outcome: Outcome::Inconclusive,
        chain: Vec::new(),
        evidence: Evidence::default(),
    };

    if p > 7 {
        v.outcome = Outcome::Guaranteed;
        v.chain.push(ReasonStep::new(criteria::LARGE_PRIME, "p > 7", Rigor::Rigorous, &[("p", p.to_string())]));
        if let Some(r) = resolution_for(e, label, p) {
            v.chain.push(ReasonStep::new(
                criteria::REGULAR_PRIME_RESOLUTION,
                "reducible exception resolved",
                Rigor::Rigorous,
                &[("table_label", r.label.clone()), ("p", p.to_string()), ("reason", r.reason.clone())],
            ));
        }
        if let (Some(0), Some(true)) = (cfg.metadata.analytic_rank, cfg.metadata.semistable) {
            v.chain.push(ReasonStep::new(
                criteria::SEMISTABLE_RANK_ZERO,
                "semistable, analytic rank 0",
                Rigor::UserSupplied,
                &[("analytic_rank", "0".into()), ("semistable", "true".into())],
            ));
        }
        return Ok(v);
    }

    let red = reduction_type(e, p)?;
    let supersingular = red == ReductionType::Good && is_supersingular(e, p)?;
    if supersingular || red == ReductionType::MultiplicativeNonsplit {
        v.outcome = Outcome::Guaranteed;
        let tag = if supersingular { "supersingular at p" } else { "non-split multiplicative at p" };
        v.chain.push(ReasonStep::new(
            criteria::SUPERSINGULAR_OR_NONSPLIT,
            tag,
            Rigor::Rigorous,
            &[("p", p.to_string()), ("reduction", format!("{red:?}"))],
        ));
        return Ok(v);
    }

    if p >= 5 && has_full_rational_2torsion(e) {
        v.outcome = Outcome::Guaranteed;
        v.chain.push(ReasonStep::new(
            criteria::RATIONAL_TWO_TORSION,
            "full rational 2-torsion, p >= 5",
            Rigor::Rigorous,
            &[("p", p.to_string())],
        ));
        return Ok(v);
    }

    let owned;
    let fd = match traces {
        Some(fd) => fd,
        None => {
            owned = frobenius_traces(e, cfg.trace_bound);
            &owned
        }
    };
    scan_bad_shapes(e, p, cfg, fd, &mut v)?;
    Ok(v)
}

fn scan_bad_shapes(e: &EllipticCurveQ, p: u64, cfg: &VerdictConfig, fd: &FrobeniusData, v: &mut DivisibilityVerdict) -> Result<()> {
    let mut any_consistent = false;
    let mut all_checked = true;
    for pair in bad_cyclotomic_shapes(p) {
        let verdict = test_cyclotomic_pair(fd, p, pair);
        let hypothesis = SemisimpHypothesis::CyclotomicPair { a: pair.0, b: pair.1 };
        let ev = match verdict {
            HypothesisVerdict::RefutedAt { ell, observed, expected } => ShapeEvidence {
                hypothesis,
                refuted: true,
                ell: Some(ell),
                observed_trace: Some(observed),
                expected_residue: Some(expected),
                primes_checked: 0,
                trace_bound: fd.bound,
            },
            HypothesisVerdict::Consistent { checked } => {
                if checked.is_empty() {
                    all_checked = false;
                } else {
                    any_consistent = true;
                }
                ShapeEvidence {
                    hypothesis,
                    refuted: false,
                    ell: None,
                    observed_trace: None,
                    expected_residue: None,
                    primes_checked: checked.len(),
                    trace_bound: fd.bound,
                }
            }
        };
        v.evidence.shapes.push(ev);
    }

    if p == 5 {
        match cfg.character_mode {
            CharacterMode::Cyclotomic => v.evidence.notes.push(
                "only the cyclotomic form of the chi + chi^2 shape was scanned; other characters with chi^3 = eps_5 are not excluded"
                    .into(),
            ),
            CharacterMode::Dirichlet { modulus_cap } => {
                let modulus = default_character_modulus(&e.bad_primes()?, p);
                if modulus > modulus_cap {
                    v.evidence.notes.push(format!("character modulus {modulus} exceeds cap {modulus_cap}; Dirichlet scan skipped"));
                } else {
                    match dirichlet_pair_scan(fd, p, modulus, PairShape::ChiChiSquared) {
                        Ok(found) => {
                            v.evidence.notes.push(format!(
                                "Dirichlet scan mod {modulus}: {} chi + chi^2 candidate(s) consistent",
                                found.len()
                            ));
                            for hypothesis in found {
                                any_consistent = true;
                                v.evidence.shapes.push(ShapeEvidence {
                                    hypothesis,
                                    refuted: false,
                                    ell: None,
                                    observed_trace: None,
                                    expected_residue: None,
                                    primes_checked: fd.good().filter(|x| modulus % x.ell != 0).count(),
                                    trace_bound: fd.bound,
                                });
                            }
                        }
                        Err(GaloisError::BudgetExceeded { needed, budget }) => {
                            all_checked = false;
                            v.evidence.notes.push(format!("Dirichlet scan needs {needed} characters, budget {budget}"));
                        }
                        Err(err) => return Err(err.into()),
                    }
                }
            }
        }
    }

    let refuting: Vec<String> = v
        .evidence
        .shapes
        .iter()
        .filter(|s| s.refuted)
        .map(|s| format!("{} at {}", s.hypothesis, s.ell.unwrap_or(0)))
        .collect();
    if any_consistent {
        v.outcome = Outcome::CriterionFails;
        let consistent: Vec<String> =
            v.evidence.shapes.iter().filter(|s| !s.refuted).map(|s| s.hypothesis.to_string()).collect();
        v.chain.push(ReasonStep::new(
            criteria::BAD_SHAPE_SCAN,
            "bad semisimplification not excluded",
            Rigor::Heuristic,
            &[
                ("p", p.to_string()),
                ("consistent", consistent.join("; ")),
                ("trace_bound", fd.bound.to_string()),
            ],
        ));
        v.evidence.notes.push(format!(
            "consistent up to ell <= {}: the criterion does not apply; this is not evidence against divisibility",
            fd.bound
        ));
        if p == 5 || p == 7 {
            semistability_check(e, p, cfg, v)?;
        }
    } else if all_checked {
        v.outcome = Outcome::Guaranteed;
        v.chain.push(ReasonStep::new(
            criteria::BAD_SHAPE_SCAN,
            "every bad semisimplification refuted",
            Rigor::Rigorous,
            &[("p", p.to_string()), ("refutations", refuting.join("; "))],
        ));
    } else {
        v.outcome = Outcome::Inconclusive;
        v.chain.push(ReasonStep::new(
            criteria::BAD_SHAPE_SCAN,
            "scan incomplete",
            Rigor::Heuristic,
            &[("p", p.to_string()), ("trace_bound", fd.bound.to_string())],
        ));
    }
    Ok(())
}

/// When the criterion fails at 5 or 7 the curve should be semistable away from p;
/// additive reduction there points at a non-minimal model.
fn semistability_check(e: &EllipticCurveQ, p: u64, cfg: &VerdictConfig, v: &mut DivisibilityVerdict) -> Result<()> {
    if cfg.assume_minimal && cfg.metadata.semistable == Some(true) {
        return Ok(());
    }
    for ell in e.bad_primes()? {
        if ell == p {
            continue;
        }
        // on any model the reduction is multiplicative iff ell does not divide c4
        if (&e.c4 % ell).is_zero() {
            let msg = if cfg.assume_minimal {
                format!("additive reduction at {ell} on a model declared minimal: semistability away from {p} is violated")
            } else {
                format!("model-minimality warning: additive reduction at {ell} on the supplied model")
            };
            v.evidence.warnings.push(msg);
        }
    }
    Ok(())
}

/// An auxiliary place of good reduction with norm `norm` and residue characteristic `residue_char`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuxPlace {
    pub norm: u64,
    pub residue_char: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NumberFieldData {
    pub degree: u32,
    pub places: Vec<AuxPlace>,
    /// User-supplied: no p-torsion over the field.
    pub torsion_absent: Option<bool>,
}

impl NumberFieldData {
    /// Data for k = Q: each good prime is a place of norm ℓ.
    pub fn over_q(fd: &FrobeniusData) -> Self {
        NumberFieldData {
            degree: 1,
            places: fd.good().map(|e| AuxPlace { norm: e.ell, residue_char: e.ell }).collect(),
            torsion_absent: None,
        }
    }
}

/// Degree-parameterized verdict over a number field of degree `d`.
pub fn verdict_number_field(data: &NumberFieldData, p: u64) -> Result<DivisibilityVerdict> {
    check_odd_prime(p)?;
    let d = data.degree;
    if d == 0 {
        return Err(DivisibilityError::ZeroDegree);
    }
    let mut v = DivisibilityVerdict {
        curve: format!("degree-{d} field data"),
        p,
        outcome: Outcome::Inconclusive,
        chain: Vec::new(),
        evidence: Evidence::default(),
    };
    let uniform = SqrtThreshold::uniform_degree(d);
    if uniform.is_exceeded_by(p) {
        v.outcome = Outcome::Guaranteed;
        v.chain.push(ReasonStep::new(
            criteria::UNIFORM_DEGREE_BOUND,
            "p > (2^d + 2^(d/2))^2",
            Rigor::Rigorous,
            &[("d", d.to_string()), ("p", p.to_string()), ("bound", uniform.decimal(3))],
        ));
        return Ok(v);
    }
    v.evidence.notes.push(format!("uniform bound not met: p <= {}", uniform.decimal(3)));

    let mut failed = Vec::new();
    let mut rigor = Rigor::Rigorous;
    let cyclotomic_ok = p - 1 >= 3 * d as u64;
    if !cyclotomic_ok {
        failed.push("(i) (p - 1)/d >= 3".to_string());
    }
    let torsion = SqrtThreshold::torsion_degree(d);
    let torsion_ok = if torsion.is_exceeded_by(p) {
        true
    } else if data.torsion_absent == Some(true) {
        rigor = Rigor::UserSupplied;
        true
    } else {
        failed.push(format!("(ii) p > (1 + 3^(d/2))^2 = {} or no p-torsion supplied", torsion.decimal(3)));
        false
    };
    let place = data
        .places
        .iter()
        .find(|w| w.residue_char != 3 && w.residue_char != p && SqrtThreshold::nv(w.norm).is_exceeded_by(p));
    if place.is_none() {
        failed.push("(iii) a good place v not over 3p with p > (Nv + sqrt Nv)^2".to_string());
    }
    if let (true, true, Some(w)) = (cyclotomic_ok, torsion_ok, place) {
        v.outcome = Outcome::Guaranteed;
        v.chain.push(ReasonStep::new(
            criteria::REFINED_DEGREE_BOUND,
            "conditions (i)-(iii)",
            rigor,
            &[("d", d.to_string()), ("p", p.to_string()), ("Nv", w.norm.to_string())],
        ));
    } else {
        v.chain.push(ReasonStep::new(
            criteria::REFINED_DEGREE_BOUND,
            "conditions (i)-(iii)",
            Rigor::Rigorous,
            &[("d", d.to_string()), ("p", p.to_string()), ("failed", failed.join("; "))],
        ));
    }
    Ok(v)
}

/// Largest number of twists allowed to fail at `p`.
pub fn twist_failure_cap(p: u64) -> Option<usize> {
    match p {
        3 | 5 => Some(2),
        7 => Some(1),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistRow {
    /// Fundamental discriminant.
    pub d: i64,
    pub verdict: DivisibilityVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistScanReport {
    pub base: String,
    pub p: u64,
    pub dmax: u64,
    pub rows: Vec<TwistRow>,
    pub failures: usize,
    pub cap: Option<usize>,
}

impl TwistScanReport {
    pub fn within_cap(&self) -> bool {
        self.cap.is_none_or(|c| self.failures <= c)
    }

    pub fn failing_discriminants(&self) -> Vec<i64> {
        self.rows.iter().filter(|r| r.verdict.outcome == Outcome::CriterionFails).map(|r| r.d).collect()
    }
}

/// Fundamental discriminants `d` with `|d| <= dmax`, including 1, in increasing order.
pub fn fundamental_discriminants(dmax: u64) -> Vec<i64> {
    let m = dmax as i64;
    (-m..=m).filter(|&d| is_fundamental_discriminant(d)).collect()
}

/// Runs [`verdict_over_q`] on every twist `E^d` by a fundamental discriminant `|d| <= dmax`.
pub fn twist_scan(e: &EllipticCurveQ, label: Option<&str>, p: u64, dmax: u64, cfg: &VerdictConfig) -> Result<TwistScanReport> {
    check_odd_prime(p)?;
    if dmax > TWIST_DMAX_LIMIT {
        return Err(DivisibilityError::TwistBoundTooLarge(dmax));
    }
    let base = curve_name(e, label);
    let rows = fundamental_discriminants(dmax)
        .into_par_iter()
        .map(|d| {
            let twist = quadratic_twist(e, squarefree_kernel(d))?;
            let name = if d == 1 { base.clone() } else { format!("{base}^({d})") };
            // the base label only identifies the untwisted curve
            let verdict = verdict_over_q(&twist, Some(&name), p, cfg)?;
            Ok(TwistRow { d, verdict })
        })
        .collect::<Result<Vec<_>>>()?;
    let failures = rows.iter().filter(|r| r.verdict.outcome == Outcome::CriterionFails).count();
    Ok(TwistScanReport { base, p, dmax, rows, failures, cap: twist_failure_cap(p) })
}

/// True iff `p = 3`: the only odd prime with `[Q_p(ζ_p) : Q_p] = p - 1 <= 2`, where a
/// quasi-unipotent action with unipotent reduction need not be unipotent.
pub fn unipotent_lift_exception(p: u64) -> Result<bool> {
    check_odd_prime(p)?;
    Ok(p - 1 <= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::embedded_curve;

    fn cfg() -> VerdictConfig {
        VerdictConfig::default()
    }

    #[test]
    fn large_primes_need_no_traces() {
        let e = embedded_curve("121-B1").unwrap();
        let empty = FrobeniusData { curve: e.clone(), bound: 0, entries: Vec::new() };
        for p in [11u64, 13, 17, 101] {
            let a = verdict_over_q(&e, Some("121-B1"), p, &cfg()).unwrap();
            let b = verdict_over_q_with(&e, Some("121-B1"), p, &cfg(), Some(&empty)).unwrap();
            assert_eq!(a, b);
            assert_eq!(a.outcome, Outcome::Guaranteed);
            assert_eq!(a.first_reason(), criteria::LARGE_PRIME);
        }
    }

    #[test]
    fn conductor_121_resolution() {
        let e = embedded_curve("121-C1").unwrap();
        let v = verdict_over_q(&e, None, 11, &cfg()).unwrap();
        assert_eq!(v.outcome, Outcome::Guaranteed);
        assert_eq!(v.chain.last().unwrap().theorem, criteria::REGULAR_PRIME_RESOLUTION);
        let b = verdict_over_q(&embedded_curve("121-B1").unwrap(), None, 11, &cfg()).unwrap();
        assert!(!b.has_step(criteria::REGULAR_PRIME_RESOLUTION));
    }

    #[test]
    fn legendre_at_five() {
        let e = embedded_curve("legendre").unwrap();
        let v = verdict_over_q(&e, Some("legendre"), 5, &cfg()).unwrap();
        assert_eq!(v.outcome, Outcome::Guaranteed);
        assert_eq!(v.first_reason(), criteria::RATIONAL_TWO_TORSION);
        // at 3 it is supersingular (3 ≡ 3 mod 4)
        let v3 = verdict_over_q(&e, Some("legendre"), 3, &cfg()).unwrap();
        assert_eq!(v3.first_reason(), criteria::SUPERSINGULAR_OR_NONSPLIT);
    }

    #[test]
    fn rational_five_torsion_fails_criterion() {
        let e = embedded_curve("11a1").unwrap();
        let v = verdict_over_q(&e, Some("11a1"), 5, &cfg()).unwrap();
        assert_eq!(v.outcome, Outcome::CriterionFails);
        assert!(v.is_well_formed());
        assert!(v.evidence.shapes.iter().any(|s| !s.refuted && s.hypothesis == SemisimpHypothesis::CyclotomicPair { a: 0, b: 1 }));
        // 11a1 is semistable: no warnings
        assert!(v.evidence.warnings.is_empty());
        let v3 = verdict_over_q(&e, Some("11a1"), 3, &cfg()).unwrap();
        assert_eq!(v3.outcome, Outcome::Guaranteed);
        assert!(v3.is_well_formed());
    }

    #[test]
    fn dirichlet_mode_agrees_on_11a1() {
        let e = embedded_curve("11a1").unwrap();
        let c = VerdictConfig { character_mode: CharacterMode::Dirichlet { modulus_cap: 10_000 }, ..cfg() };
        let v = verdict_over_q(&e, Some("11a1"), 5, &c).unwrap();
        assert_eq!(v.outcome, Outcome::CriterionFails);
        assert!(v.evidence.notes.iter().any(|n| n.starts_with("Dirichlet scan mod 55")));
    }

    #[test]
    fn refutation_chain_replays() {
        let e = embedded_curve("121-B1").unwrap();
        for p in [3u64, 5, 7] {
            let v = verdict_over_q(&e, None, p, &cfg()).unwrap();
            for s in v.evidence.shapes.iter().filter(|s| s.refuted) {
                let ell = s.ell.unwrap();
                let a = crate::elliptic::trace_of_frobenius(&e, ell).unwrap();
                assert_eq!(Some(a), s.observed_trace);
                assert_ne!(a.rem_euclid(p as i64) as u64, s.expected_residue.unwrap());
            }
            let again = verdict_over_q(&e, None, p, &cfg()).unwrap();
            assert_eq!(v, again);
        }
    }

    #[test]
    fn even_prime_rejected() {
        let e = embedded_curve("11a1").unwrap();
        assert_eq!(verdict_over_q(&e, None, 2, &cfg()), Err(DivisibilityError::UnsupportedPrime(2)));
        assert!(verdict_over_q(&e, None, 9, &cfg()).is_err());
    }

    #[test]
    fn number_field_bounds() {
        let none = NumberFieldData { degree: 1, places: Vec::new(), torsion_absent: None };
        assert_eq!(verdict_number_field(&none, 13).unwrap().outcome, Outcome::Guaranteed);
        let v = verdict_number_field(&none, 11).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert_eq!(v.first_reason(), criteria::REFINED_DEGREE_BOUND);
        // d = 1, p = 11: even norm 2 gives (2 + sqrt 2)^2 > 11
        let two = NumberFieldData { degree: 1, places: vec![AuxPlace { norm: 2, residue_char: 2 }], torsion_absent: None };
        let v = verdict_number_field(&two, 11).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!(v.chain[0].inputs["failed"].starts_with("(iii)"));
        // d = 2, p = 29: uniform bound 36 fails, the refined path succeeds with Nv = 2
        let d2 = NumberFieldData {
            degree: 2,
            places: vec![AuxPlace { norm: 4, residue_char: 2 }, AuxPlace { norm: 2, residue_char: 2 }],
            torsion_absent: None,
        };
        let v = verdict_number_field(&d2, 29).unwrap();
        assert_eq!(v.outcome, Outcome::Guaranteed);
        assert_eq!(v.chain[0].inputs["Nv"], "2");
        // d = 2, p = 7: (1 + 3)^2 = 16 > 7
        let d2 = NumberFieldData { degree: 2, places: vec![AuxPlace { norm: 2, residue_char: 2 }], torsion_absent: None };
        let v = verdict_number_field(&d2, 7).unwrap();
        assert_eq!(v.outcome, Outcome::Inconclusive);
        assert!(v.chain[0].inputs["failed"].contains("(ii)"));
    }

    #[test]
    fn twist_scan_basics() {
        let e = embedded_curve("11a1").unwrap();
        let r = twist_scan(&e, Some("11a1"), 5, 1, &cfg()).unwrap();
        assert_eq!(r.rows.len(), 1);
        assert_eq!(r.rows[0].d, 1);
        assert_eq!(r.rows[0].verdict, verdict_over_q(&e, Some("11a1"), 5, &cfg()).unwrap());
        let r = twist_scan(&e, Some("11a1"), 5, 60, &cfg()).unwrap();
        assert!(r.within_cap());
        assert_eq!(r.failing_discriminants(), vec![1, 5]);
        assert!(twist_scan(&e, None, 5, 20_000, &cfg()).is_err());
    }

    #[test]
    fn discriminant_list() {
        assert_eq!(fundamental_discriminants(13), vec![-11, -8, -7, -4, -3, 1, 5, 8, 12, 13]);
    }

    #[test]
    fn unipotent_exception() {
        assert!(unipotent_lift_exception(3).unwrap());
        assert!(!unipotent_lift_exception(5).unwrap());
        assert!(!unipotent_lift_exception(7).unwrap());
        assert!(unipotent_lift_exception(2).is_err());
    }

    #[test]
    fn tsv_rendering() {
        let e = embedded_curve("121-B1").unwrap();
        let v = verdict_over_q(&e, Some("121-B1"), 13, &cfg()).unwrap();
        assert_eq!(v.tsv_row(), "121-B1\t13\tGuaranteed\tlarge-prime");
    }
}
