//! Run configuration: a TOML document of flat dotted keys.
//!
//! ```toml
//! experiment = "chsh-quantum"
//! seed = 7
//! runs = 100000
//! chsh.engine = "collapse"
//! collapse.delta = 0.01
//! ```
//!
//! Every key has a documented default except `experiment` and `seed`.
//! Unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use toml::Value;

use crate::collapse::{AbsorbRule, CollapseParams};
use crate::experiments::SettingsQuartet;
use crate::{Error, Result};

pub const EXPERIMENTS: [&str; 7] = [
    "born",
    "chsh-quantum",
    "chsh-lhv",
    "nosignal",
    "order-invariance",
    "conservation",
    "collapse-trace",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy)]
enum Kind {
    Str,
    Int,
    Real,
    RealList,
    Choice(&'static [&'static str]),
}

/// `(key, kind, default)`. A `None` default means the key is optional and
/// absent unless given.
fn schema() -> Vec<(&'static str, Kind, Option<Value>)> {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
    let q = SettingsQuartet::optimal();
    let real = Value::Float;
    vec![
        ("experiment", Kind::Choice(&EXPERIMENTS), None),
        ("seed", Kind::Int, None),
        ("runs", Kind::Int, None),
        ("output.path", Kind::Str, None),
        ("output.format", Kind::Choice(&["json", "csv"]), Some("json".into())),
        ("collapse.delta", Kind::Real, Some(real(CollapseParams::DEFAULT_DELTA))),
        ("collapse.absorb", Kind::Choice(&["exact", "nearest"]), Some("exact".into())),
        ("chsh.a", Kind::Real, Some(real(q.a))),
        ("chsh.a_prime", Kind::Real, Some(real(q.a_prime))),
        ("chsh.b", Kind::Real, Some(real(q.b))),
        ("chsh.b_prime", Kind::Real, Some(real(q.b_prime))),
        ("chsh.engine", Kind::Choice(&["collapse", "born"]), Some("collapse".into())),
        (
            "born.weights",
            Kind::RealList,
            Some(Value::Array([0.1, 0.25, 0.5, 0.75, 0.9].map(real).to_vec())),
        ),
        (
            "lhv.model",
            Kind::Choice(&["randomized", "sign-cosine", "constant", "fair-coin"]),
            Some("randomized".into()),
        ),
        ("lhv.models", Kind::Int, Some(Value::Integer(10))),
        ("order.preparation", Kind::Choice(&["singlet", "product"]), Some("singlet".into())),
        ("order.angle_a", Kind::Real, Some(real(0.0))),
        ("order.angle_b", Kind::Real, Some(real(0.0))),
        ("order.theta_a", Kind::Real, Some(real(FRAC_PI_4))),
        ("order.theta_b", Kind::Real, Some(real(FRAC_PI_2))),
        ("order.engine", Kind::Choice(&["collapse", "biased"]), Some("collapse".into())),
        ("order.bias", Kind::Real, Some(real(0.2))),
        ("conservation.reflectivity", Kind::Real, Some(real(0.5))),
        (
            "conservation.preparation",
            Kind::Choice(&["entangled", "non-entangled"]),
            Some("entangled".into()),
        ),
        ("trace.mode", Kind::Choice(&["weight", "scattering"]), Some("weight".into())),
        ("trace.w0", Kind::Real, Some(real(0.3))),
        ("trace.barrier_ratio", Kind::Real, Some(real(2.0))),
        ("trace.potential", Kind::Str, None),
    ]
}

/// Runs per experiment when `runs` is not given. Paired experiments count
/// runs per setting pair.
pub fn default_runs(experiment: &str) -> u64 {
    match experiment {
        "chsh-quantum" | "chsh-lhv" | "nosignal" => 100_000,
        "collapse-trace" => 10,
        _ => 10_000,
    }
}

/// Values given on the command line; each replaces its config key.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub experiment: Option<String>,
    pub seed: Option<u64>,
    pub runs: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<String, Value>,
    fingerprint: String,
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

fn type_error(key: &str, expected: &str, got: &Value) -> Error {
    Error::config(key, format!("expected {expected}, found {}", got.type_str()))
}

fn check(key: &str, kind: Kind, v: Value) -> Result<Value> {
    match (kind, v) {
        (Kind::Str, v @ Value::String(_)) => Ok(v),
        (Kind::Int, Value::Integer(i)) if i >= 0 => Ok(Value::Integer(i)),
        (Kind::Int, Value::Integer(i)) => Err(Error::config(key, format!("must be nonnegative, found {i}"))),
        (Kind::Real, Value::Integer(i)) => Ok(Value::Float(i as f64)),
        (Kind::Real, Value::Float(x)) if x.is_finite() => Ok(Value::Float(x)),
        (Kind::Real, Value::Float(x)) => Err(Error::config(key, format!("must be finite, found {x}"))),
        (Kind::RealList, Value::Array(items)) => items
            .into_iter()
            .enumerate()
            .map(|(i, v)| check(&format!("{key}[{i}]"), Kind::Real, v))
            .collect::<Result<Vec<_>>>()
            .map(Value::Array),
        (Kind::Choice(options), Value::String(s)) => {
            if options.contains(&s.as_str()) {
                Ok(Value::String(s))
            } else if key == "experiment" {
                Err(Error::UnknownExperiment(s))
            } else {
                Err(Error::config(key, format!("`{s}` is not one of {}", options.join(", "))))
            }
        }
        (Kind::Str | Kind::Choice(_), v) => Err(type_error(key, "string", &v)),
        (Kind::Int, v) => Err(type_error(key, "integer", &v)),
        (Kind::Real, v) => Err(type_error(key, "number", &v)),
        (Kind::RealList, v) => Err(type_error(key, "array of numbers", &v)),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, &Overrides::default())
    }

    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        Self::parse_with(&std::fs::read_to_string(path)?, overrides)
    }

    pub fn parse_with(text: &str, overrides: &Overrides) -> Result<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            Error::config("<document>", e.message().to_string())
        })?;
        let mut raw = BTreeMap::new();
        flatten("", &table, &mut raw);
        if let Some(e) = &overrides.experiment {
            raw.insert("experiment".into(), Value::String(e.clone()));
        }
        if let Some(s) = overrides.seed {
            let s = i64::try_from(s).map_err(|_| Error::config("seed", "must be below 2^63"))?;
            raw.insert("seed".into(), Value::Integer(s));
        }
        if let Some(r) = overrides.runs {
            let r = i64::try_from(r).map_err(|_| Error::config("runs", "too large"))?;
            raw.insert("runs".into(), Value::Integer(r));
        }
        if let Some(p) = &overrides.out {
            raw.insert("output.path".into(), Value::String(p.to_string_lossy().into_owned()));
        }
        if let Some(f) = &overrides.format {
            raw.insert("output.format".into(), Value::String(f.clone()));
        }

        let schema = schema();
        if let Some(unknown) = raw.keys().find(|k| !schema.iter().any(|(s, _, _)| s == k)) {
            return Err(Error::config(unknown.clone(), "unknown key"));
        }
        let mut values = BTreeMap::new();
        for (key, kind, default) in schema {
            match raw.remove(key) {
                Some(v) => {
                    values.insert(key.to_string(), check(key, kind, v)?);
                }
                None => {
                    if let Some(d) = default {
                        values.insert(key.to_string(), d);
                    }
                }
            }
        }
        for required in ["experiment", "seed"] {
            if !values.contains_key(required) {
                return Err(Error::config(required, "required key is missing"));
            }
        }
        if !values.contains_key("runs") {
            let experiment = values["experiment"].as_str().unwrap_or_default();
            values.insert("runs".into(), Value::Integer(default_runs(experiment) as i64));
        }
        if values["runs"].as_integer() == Some(0) {
            return Err(Error::config("runs", "must be at least 1"));
        }
        let mut config = Self { values, fingerprint: String::new() };
        config.fingerprint = hex::encode(Sha256::digest(config.canonical_body(false).as_bytes()));
        config.validate()?;
        Ok(config)
    }

    fn canonical_body(&self, with_output: bool) -> String {
        self.values
            .iter()
            .filter(|(k, _)| with_output || !k.starts_with("output."))
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Every key, defaults included, one `key = value` line each in key
    /// order. Parses back to an equal config.
    pub fn canonical(&self) -> String {
        self.canonical_body(true)
    }

    /// SHA-256 of the canonical form without the `output.*` keys, which do
    /// not affect results.
    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    fn validate(&self) -> Result<()> {
        self.collapse_params()?;
        self.quartet()?;
        if self.experiment() == "born" {
            for (i, w) in self.born_weights().iter().enumerate() {
                if !(*w > 0.0 && *w < 1.0) {
                    return Err(Error::config(format!("born.weights[{i}]"), "must lie in (0, 1)"));
                }
            }
        }
        let r = self.real("conservation.reflectivity");
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::config("conservation.reflectivity", "must lie in [0, 1]"));
        }
        let w = self.real("trace.w0");
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::config("trace.w0", "must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn str(&self, key: &str) -> &str {
        self.values.get(key).and_then(Value::as_str).unwrap_or_default()
    }

    pub fn real(&self, key: &str) -> f64 {
        self.values.get(key).and_then(Value::as_float).unwrap_or(f64::NAN)
    }

    pub fn int(&self, key: &str) -> u64 {
        self.values.get(key).and_then(Value::as_integer).unwrap_or(0) as u64
    }

    pub fn experiment(&self) -> &str {
        self.str("experiment")
    }

    pub fn seed(&self) -> u64 {
        self.int("seed")
    }

    pub fn runs(&self) -> u64 {
        self.int("runs")
    }

    /// `None` means standard output.
    pub fn output_path(&self) -> Option<PathBuf> {
        match self.values.get("output.path").and_then(Value::as_str) {
            None | Some("-") => None,
            Some(p) => Some(PathBuf::from(p)),
        }
    }

    /// Interaction table for the scattering trace, if one was given.
    pub fn trace_potential(&self) -> Option<PathBuf> {
        self.values.get("trace.potential").and_then(Value::as_str).map(PathBuf::from)
    }

    pub fn format(&self) -> Format {
        match self.str("output.format") {
            "csv" => Format::Csv,
            _ => Format::Json,
        }
    }

    pub fn born_weights(&self) -> Vec<f64> {
        match self.values.get("born.weights") {
            Some(Value::Array(items)) => items.iter().filter_map(Value::as_float).collect(),
            _ => Vec::new(),
        }
    }

    pub fn collapse_params(&self) -> Result<CollapseParams> {
        let mut p = CollapseParams::new(self.real("collapse.delta"))
            .map_err(|e| Error::config("collapse.delta", e.to_string()))?;
        p.absorb = match self.str("collapse.absorb") {
            "nearest" => AbsorbRule::NearestBoundary,
            _ => AbsorbRule::ExactBernoulli,
        };
        Ok(p)
    }

    pub fn quartet(&self) -> Result<SettingsQuartet> {
        SettingsQuartet::new(
            self.real("chsh.a"),
            self.real("chsh.a_prime"),
            self.real("chsh.b"),
            self.real("chsh.b_prime"),
        )
        .map_err(|e| Error::config("chsh", e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_gets_defaults() {
        let c = RunConfig::parse("experiment = \"born\"\nseed = 3\n").unwrap();
        assert_eq!(c.runs(), 10_000);
        assert_eq!(c.born_weights(), vec![0.1, 0.25, 0.5, 0.75, 0.9]);
        assert_eq!(c.format(), Format::Json);
        assert_eq!(c.output_path(), None);
        assert_eq!(c.collapse_params().unwrap(), CollapseParams::default());
    }

    #[test]
    fn unknown_key_is_named() {
        let e = RunConfig::parse("experiment = \"born\"\nseed = 1\nspeling_error = 2\n").unwrap_err();
        assert!(matches!(&e, Error::Config { key, .. } if key == "speling_error"), "{e}");
        assert_eq!(e.exit_code(), 2);
        let e = RunConfig::parse("experiment = \"born\"\nseed = 1\n[chsh]\nc = 2\n").unwrap_err();
        assert!(matches!(&e, Error::Config { key, .. } if key == "chsh.c"), "{e}");
    }

    #[test]
    fn canonical_round_trip() {
        let c = RunConfig::parse("seed = 9\nexperiment = \"chsh-quantum\"\n[chsh]\nb = 1\nengine = \"born\"\n").unwrap();
        let again = RunConfig::parse(&c.canonical()).unwrap();
        assert_eq!(again.fingerprint(), c.fingerprint());
        assert_eq!(again, c);
    }

    #[test]
    fn errors_name_the_key() {
        let bad = |text: &str, key: &str| {
            let e = RunConfig::parse(text).unwrap_err();
            assert!(matches!(&e, Error::Config { key: k, .. } if k == key), "{text}: {e}");
        };
        bad("experiment = \"born\"\n", "seed");
        bad("seed = 1\n", "experiment");
        bad("experiment = \"born\"\nseed = \"x\"\n", "seed");
        bad("experiment = \"born\"\nseed = 1\ncollapse.delta = 0.7\n", "collapse.delta");
        bad("experiment = \"born\"\nseed = 1\nborn.weights = [0.5, 1.0]\n", "born.weights[1]");
        bad("experiment = \"born\"\nseed = 1\nborn.weights = [0.5, \"a\"]\n", "born.weights[1]");
        bad("experiment = \"born\"\nseed = -1\n", "seed");
    }

    #[test]
    fn unknown_experiment_exit_code() {
        let e = RunConfig::parse("experiment = \"teleport\"\nseed = 1\n").unwrap_err();
        assert!(matches!(e, Error::UnknownExperiment(_)));
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn output_keys_do_not_change_fingerprint() {
        let a = RunConfig::parse("experiment = \"born\"\nseed = 1\n").unwrap();
        let b = RunConfig::parse("experiment = \"born\"\nseed = 1\noutput.path = \"x.csv\"\noutput.format = \"csv\"\n")
            .unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = RunConfig::parse("experiment = \"born\"\nseed = 2\n").unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn overrides_replace_document_values() {
        let o = Overrides { seed: Some(5), runs: Some(7), format: Some("csv".into()), ..Default::default() };
        let c = RunConfig::parse_with("experiment = \"born\"\nseed = 1\n", &o).unwrap();
        assert_eq!((c.seed(), c.runs(), c.format()), (5, 7, Format::Csv));
    }
}
