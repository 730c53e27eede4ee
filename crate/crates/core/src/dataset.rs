//! Curves shipped with the crate so everything runs offline.

use std::sync::OnceLock;

use serde::Deserialize;

use crate::elliptic::{parse_curve_file, CurveRecord, EllipticCurveQ};

const CURVES: &str = include_str!("../data/curves.txt");
const RESOLUTIONS: &str = include_str!("../data/regular_prime_resolutions.json");

pub fn embedded_curves() -> Vec<CurveRecord> {
    parse_curve_file(CURVES).expect("embedded curve file parses")
}

/// Looks up an embedded curve by label.
pub fn embedded_curve(label: &str) -> Option<EllipticCurveQ> {
    embedded_curves()
        .into_iter()
        .find(|r| r.label.as_deref() == Some(label))
        .map(|r| r.curve().expect("embedded curves are nonsingular"))
}

/// A (curve, prime) pair whose divisibility is settled by a non-computational argument.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct Resolution {
    pub label: String,
    pub ainvs: [i64; 5],
    pub p: u64,
    pub reason: String,
}

pub fn resolutions() -> &'static [Resolution] {
    static TABLE: OnceLock<Vec<Resolution>> = OnceLock::new();
    TABLE.get_or_init(|| serde_json::from_str(RESOLUTIONS).expect("embedded resolution table parses"))
}

/// The resolution entry matching this curve (by label or by a-invariants) at `p`.
pub fn resolution_for(e: &EllipticCurveQ, label: Option<&str>, p: u64) -> Option<&'static Resolution> {
    let ainvs = e.ainvs_i64();
    resolutions()
        .iter()
        .find(|r| r.p == p && (label == Some(r.label.as_str()) || ainvs == Some(r.ainvs)))
}
