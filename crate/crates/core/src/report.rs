//! Run reports and their table, structured and CSV renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::cgb::ChernGaussBonnetLedger;
use crate::renorm::{AnomalyReport, SpecialPhiCheck, VolumeExpansion};

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: &str = "direction,Scal,A_re,A_im,v2";

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Stats {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Stats {
    /// Plain (unweighted) statistics over mesh nodes.
    pub fn of(values: &[f64]) -> Stats {
        if values.is_empty() {
            return Stats::default();
        }
        Stats {
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: values.iter().sum::<f64>() / values.len() as f64,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct InvariantSummary {
    pub points: usize,
    #[serde(rename = "Scal")]
    pub scal: Stats,
    pub abs_a2: Stats,
    pub v2: Stats,
    pub max_structure_residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Integrals {
    pub c0: f64,
    pub c1: f64,
    #[serde(rename = "L")]
    pub l: f64,
    /// `|L(mesh) − L(coarser mesh)|` with a rounding floor.
    pub l_uncertainty: f64,
    /// Integral of the absolute integrand of L.
    pub l_scale: f64,
    pub contact_volume: f64,
}

/// One row of the closed-form ball profile table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BallRow {
    pub phi: f64,
    #[serde(rename = "R")]
    pub radius: f64,
    pub h_tilde: f64,
    pub r: f64,
    pub s: f64,
    pub dv_profile: f64,
}

/// One mesh node for field dumps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointRow {
    pub eta: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub scal: f64,
    pub a_re: f64,
    pub a_im: f64,
    pub v2: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<String>,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<InvariantSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrals: Option<Integrals>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume_fit: Option<VolumeExpansion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub renormalized_volume: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub special_phi: Option<SpecialPhiCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ball_profile: Option<Vec<BallRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anomaly: Option<AnomalyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ledger: Option<ChernGaussBonnetLedger>,
    /// Tolerances applied during the run, by name.
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip)]
    pub points: Vec<PointRow>,
    /// Seconds per stage; kept out of structured output so it stays reproducible.
    #[serde(skip)]
    pub wall_times: Vec<(String, f64)>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport { schema_version: SCHEMA_VERSION, command: command.to_string(), ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Structured,
    Csv,
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

pub fn emit_report(r: &RunReport, format: Format) -> String {
    match format {
        Format::Structured => {
            let mut s = serde_json::to_string_pretty(r).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Table => {
            let value = serde_json::to_value(r).expect("report serializes");
            let mut rows = Vec::new();
            flatten("", &value, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut s = String::new();
            for (k, v) in rows {
                let _ = writeln!(s, "{k:<width$}  {v}");
            }
            for (stage, secs) in &r.wall_times {
                let _ = writeln!(s, "{:<width$}  {secs:.3}s", format!("time.{stage}"));
            }
            s
        }
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for p in &r.points {
                let _ = writeln!(s, "{}:{}:{},{},{},{},{}", p.eta, p.xi1, p.xi2, p.scal, p.a_re, p.a_im, p.v2);
            }
            s
        }
    }
}
