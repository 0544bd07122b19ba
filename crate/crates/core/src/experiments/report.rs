use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Deserialize;

use super::{CountTable, Outcome, SettingsQuartet};
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

pub const COUNTS_HEADER: &str = "a_setting,b_setting,outcome_a,outcome_b,count";
pub const TRAJECTORY_HEADER: &str = "run_index,step_index,w";

/// Rounds to 12 significant digits, ties to even.
pub fn quantize(x: f64) -> f64 {
    format_real(x).parse().unwrap_or(x)
}

/// Scientific notation with 12 significant digits.
pub fn format_real(x: f64) -> String {
    // Folds -0 into 0.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CountRow {
    pub a_setting: f64,
    pub b_setting: f64,
    pub outcome_a: i64,
    pub outcome_b: i64,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrajectoryRow {
    pub run_index: u64,
    pub step_index: u64,
    pub w: f64,
}

/// Serializable outcome of one experiment. Every real is held already
/// rounded to its serialized precision, so emitting and re-reading a report
/// reproduces it exactly.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub experiment: String,
    pub seed: u64,
    pub fingerprint: String,
    pub statistics: BTreeMap<String, f64>,
    pub counts: Vec<CountRow>,
    #[serde(default)]
    pub trajectories: Vec<TrajectoryRow>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment: experiment.to_string(),
            seed,
            fingerprint: String::new(),
            statistics: BTreeMap::new(),
            counts: Vec::new(),
            trajectories: Vec::new(),
        }
    }

    pub fn set(&mut self, key: impl Into<String>, value: f64) {
        self.statistics.insert(key.into(), quantize(value));
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.statistics.get(key).copied()
    }

    pub fn push_trajectory(&mut self, run_index: u64, weights: &[f64]) {
        for (i, &w) in weights.iter().enumerate() {
            self.trajectories.push(TrajectoryRow {
                run_index,
                step_index: i as u64,
                w: quantize(w),
            });
        }
    }

    /// Stores a count table as 16 rows: setting pairs `(a,b) (a,b') (a',b)
    /// (a',b')`, outcomes `++ +- -+ --` within each.
    pub fn set_counts(&mut self, table: &CountTable) {
        self.counts.clear();
        for ai in 0..2 {
            for bi in 0..2 {
                for a in [Outcome::Plus, Outcome::Minus] {
                    for b in [Outcome::Plus, Outcome::Minus] {
                        self.counts.push(CountRow {
                            a_setting: quantize(table.quartet.a_setting(ai)),
                            b_setting: quantize(table.quartet.b_setting(bi)),
                            outcome_a: a.sign(),
                            outcome_b: b.sign(),
                            count: table.get(ai, bi, a, b),
                        });
                    }
                }
            }
        }
    }

    /// Inverse of [`ExperimentReport::set_counts`].
    pub fn count_table(&self) -> Result<CountTable> {
        if self.counts.len() != 16 {
            return Err(Error::InsufficientData(format!(
                "expected 16 count rows, found {}",
                self.counts.len()
            )));
        }
        let row = |k: usize| &self.counts[k];
        let quartet = SettingsQuartet::new(row(0).a_setting, row(8).a_setting, row(0).b_setting, row(4).b_setting)?;
        let mut table = CountTable::new(quartet);
        for (k, r) in self.counts.iter().enumerate() {
            let (ai, bi) = (k / 8, (k / 4) % 2);
            if r.a_setting != quartet.a_setting(ai) || r.b_setting != quartet.b_setting(bi) {
                return Err(Error::Input(format!("count row {k} is out of order")));
            }
            table.add(ai, bi, Outcome::from_sign(r.outcome_a)?, Outcome::from_sign(r.outcome_b)?, r.count);
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        let q = |s: &str| serde_json::to_string(s).expect("string serialization");
        out.push_str("{\n");
        let _ = writeln!(out, "  \"schemaVersion\": {},", self.schema_version);
        let _ = writeln!(out, "  \"experiment\": {},", q(&self.experiment));
        let _ = writeln!(out, "  \"seed\": {},", self.seed);
        let _ = writeln!(out, "  \"fingerprint\": {},", q(&self.fingerprint));
        out.push_str("  \"statistics\": {");
        for (i, (k, v)) in self.statistics.iter().enumerate() {
            let sep = if i == 0 { "\n" } else { ",\n" };
            let _ = write!(out, "{sep}    {}: {}", q(k), json_real(*v));
        }
        out.push_str(if self.statistics.is_empty() { "},\n" } else { "\n  },\n" });
        out.push_str("  \"counts\": [");
        for (i, r) in self.counts.iter().enumerate() {
            let sep = if i == 0 { "\n" } else { ",\n" };
            let _ = write!(
                out,
                "{sep}    {{\"aSetting\": {}, \"bSetting\": {}, \"outcomeA\": {}, \"outcomeB\": {}, \"count\": {}}}",
                json_real(r.a_setting),
                json_real(r.b_setting),
                r.outcome_a,
                r.outcome_b,
                r.count
            );
        }
        out.push_str(if self.counts.is_empty() { "]" } else { "\n  ]" });
        if !self.trajectories.is_empty() {
            out.push_str(",\n  \"trajectories\": [");
            for (i, r) in self.trajectories.iter().enumerate() {
                let sep = if i == 0 { "\n" } else { ",\n" };
                let _ = write!(
                    out,
                    "{sep}    {{\"runIndex\": {}, \"stepIndex\": {}, \"w\": {}}}",
                    r.run_index,
                    r.step_index,
                    json_real(r.w)
                );
            }
            out.push_str("\n  ]");
        }
        out.push_str("\n}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(text).map_err(|e| Error::Input(format!("report JSON: {e}")))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::Input(format!("unsupported schemaVersion {}", r.schema_version)));
        }
        Ok(r)
    }

    /// Counts as CSV; header only when the report has no counts.
    pub fn counts_csv(&self) -> String {
        let mut out = format!("{COUNTS_HEADER}\n");
        for r in &self.counts {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                format_real(r.a_setting),
                format_real(r.b_setting),
                r.outcome_a,
                r.outcome_b,
                r.count
            );
        }
        out
    }

    pub fn trajectories_csv(&self) -> String {
        let mut out = format!("{TRAJECTORY_HEADER}\n");
        for r in &self.trajectories {
            let _ = writeln!(out, "{},{},{}", r.run_index, r.step_index, format_real(r.w));
        }
        out
    }
}

fn json_real(x: f64) -> String {
    if x.is_finite() {
        format_real(x)
    } else {
        "null".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantize_is_idempotent() {
        for x in [std::f64::consts::PI, 2.0f64.sqrt() * 2.0, 1e-17, -3.5, 0.1 + 0.2] {
            let q = quantize(x);
            assert_eq!(quantize(q), q);
            assert_eq!(format_real(q), format_real(x));
        }
        assert_eq!(format_real(1.0), "1.00000000000e0");
    }

    #[test]
    fn empty_counts_csv_is_header_only() {
        let r = ExperimentReport::new("born", 1);
        assert_eq!(r.counts_csv(), format!("{COUNTS_HEADER}\n"));
    }

    #[test]
    fn json_round_trip() {
        let mut t = CountTable::new(SettingsQuartet::optimal());
        t.add(0, 1, Outcome::Plus, Outcome::Minus, 7);
        t.add(1, 1, Outcome::Minus, Outcome::Minus, 3);
        let mut r = ExperimentReport::new("chsh-quantum", 42);
        r.fingerprint = "ab\"c".into();
        r.set("S", 2.0 * 2.0f64.sqrt());
        r.set("tiny", 1.234567890123456e-40);
        r.set_counts(&t);
        r.push_trajectory(3, &[0.5, 0.51, 1.0]);
        let back = ExperimentReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let table = back.count_table().unwrap();
        assert_eq!(table.get(0, 1, Outcome::Plus, Outcome::Minus), 7);
        assert_eq!(table.get(1, 1, Outcome::Minus, Outcome::Minus), 3);
        assert_eq!(table.total(0, 0), 0);
        assert_eq!(table.quartet.a_prime, quantize(std::f64::consts::FRAC_PI_2));
    }

    #[test]
    fn unknown_schema_rejected() {
        let text = ExperimentReport::new("x", 0).to_json().replace("\"schemaVersion\": 1", "\"schemaVersion\": 9");
        assert!(ExperimentReport::from_json(&text).is_err());
    }
}
