//! Output documents. Floating-point numbers are emitted with 17 significant
//! digits so every value round-trips exactly through the text form.

use serde::ser::{Error as _, SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

pub const SCHEMA_VERSION: &str = "1";

/// 17-significant-digit literal for a finite f64; valid JSON.
pub fn format_f64(v: f64) -> String {
    debug_assert!(v.is_finite(), "output values must be finite");
    format!("{v:.16e}")
}

pub fn f17<S: Serializer>(v: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    let raw = RawValue::from_string(format_f64(*v)).map_err(S::Error::custom)?;
    raw.serialize(serializer)
}

pub fn f17_slice<S: Serializer>(values: &Vec<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    let mut seq = serializer.serialize_seq(Some(values.len()))?;
    for &v in values {
        let raw = RawValue::from_string(format_f64(v)).map_err(S::Error::custom)?;
        seq.serialize_element(&raw)?;
    }
    seq.end()
}

pub fn f17_opt<S: Serializer>(value: &Option<f64>, serializer: S) -> Result<S::Ok, S::Error> {
    match value {
        Some(v) => f17(v, serializer),
        None => serializer.serialize_none(),
    }
}

#[derive(Serialize)]
pub struct MaxentDoc {
    pub schema_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    #[serde(serialize_with = "f17_slice")]
    pub r: Vec<f64>,
    pub k: u32,
    #[serde(serialize_with = "f17_slice")]
    pub q: Vec<f64>,
    #[serde(serialize_with = "f17")]
    pub entropy: f64,
    #[serde(serialize_with = "f17")]
    pub primal_value: f64,
    #[serde(serialize_with = "f17")]
    pub dual_value: f64,
    #[serde(serialize_with = "f17")]
    pub gap: f64,
    pub converged: bool,
    pub iterations: u32,
}

#[derive(Serialize)]
pub struct KEntry {
    pub k: u32,
    #[serde(serialize_with = "f17")]
    pub max_entropy: f64,
    pub satisfied: bool,
    #[serde(serialize_with = "f17")]
    pub gap: f64,
}

#[derive(Serialize)]
pub struct CheckDoc {
    pub schema_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    #[serde(serialize_with = "f17_slice")]
    pub r: Vec<f64>,
    pub k_max: u32,
    pub per_k: Vec<KEntry>,
    pub overall: bool,
    pub theorem_consistent: bool,
    /// The bound quantifies over every order; this records why the finite
    /// prefix decides the verdict.
    pub note: &'static str,
}

#[derive(Serialize)]
pub struct ClassicalDoc {
    pub schema_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    #[serde(serialize_with = "f17_slice")]
    pub r: Vec<f64>,
    pub classical: bool,
    pub feasible: bool,
    /// Minimum 2-norm over nonnegative representations; absent when
    /// infeasible.
    #[serde(serialize_with = "f17_opt")]
    pub value: Option<f64>,
    #[serde(serialize_with = "f17")]
    pub threshold: f64,
    #[serde(serialize_with = "f17")]
    pub tol: f64,
}

#[derive(Serialize)]
pub struct FmaxDoc {
    pub schema_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub k: u32,
    pub mode: &'static str,
    #[serde(serialize_with = "f17")]
    pub max_f: f64,
    #[serde(serialize_with = "f17")]
    pub bound: f64,
    /// Nonzero-weight count of the best point's class.
    pub argmax_class: usize,
    #[serde(serialize_with = "f17")]
    pub foc_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_starts: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Serialize)]
pub struct ProbeDoc {
    pub schema_version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    #[serde(serialize_with = "f17")]
    pub alpha: f64,
    pub order: u32,
    #[serde(serialize_with = "f17_slice")]
    pub steps: Vec<f64>,
    #[serde(serialize_with = "f17_slice")]
    pub plus: Vec<f64>,
    #[serde(serialize_with = "f17_slice")]
    pub minus: Vec<f64>,
    #[serde(serialize_with = "f17")]
    pub plus_limit: f64,
    #[serde(serialize_with = "f17")]
    pub minus_limit: f64,
    #[serde(serialize_with = "f17")]
    pub noise_floor: f64,
    pub classification: &'static str,
}
