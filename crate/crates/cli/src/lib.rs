//! Output payloads and rendering for the `syracuse` command-line tool.
//!
//! Every command produces typed records. In `json` mode each record is one
//! self-contained object per line, integers rendered as decimal strings so
//! no consumer ever truncates them; `text` and `csv` are flat projections
//! of the same fields, nested values shown as compact JSON.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use syracuse::descent::{DescentOutcome, IdentityReport};
use syracuse::{CaseKind, Nat, OddNat, TrajectoryStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// `step --map g`: one applied Collatz step.
#[derive(Debug, Serialize, Deserialize)]
pub struct StepG {
    pub map: String,
    #[serde(with = "int_string")]
    pub index: u64,
    pub input: Nat,
    pub value: Nat,
}

/// `step --map f`: one applied Syracuse step.
#[derive(Debug, Serialize, Deserialize)]
pub struct StepF {
    pub map: String,
    #[serde(with = "int_string")]
    pub index: u64,
    pub k: OddNat,
    pub next: OddNat,
    #[serde(with = "int_string")]
    pub valuation: u32,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ClassifyPayload {
    pub k: OddNat,
    pub case: CaseKind,
    #[serde(with = "int_string")]
    pub p: u32,
    pub h: OddNat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<Nat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hbar: Option<OddNat>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DescendPayload {
    #[serde(flatten)]
    pub outcome: DescentOutcome,
    /// Present for cases 3/4 when `r` is integral.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity: Option<IdentityReport>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExpandPayload {
    pub k: OddNat,
    #[serde(with = "int_string")]
    pub p: u32,
    pub h: OddNat,
    #[serde(with = "int_string")]
    pub n: u32,
    pub value: OddNat,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PeakPayload {
    pub k: OddNat,
    #[serde(with = "int_string")]
    pub p: u32,
    pub h: OddNat,
    pub pre_division: Nat,
    pub odd_part: OddNat,
    #[serde(with = "int_string")]
    pub valuation: u32,
}

pub type OrbitPayload = TrajectoryStats;

/// `records`: one row per record-setter, uniform shape across both lists.
#[derive(Debug, Serialize, Deserialize)]
pub struct RecordRow {
    pub list: String,
    pub k: OddNat,
    #[serde(with = "opt_int_string")]
    pub collatz_steps: Option<u64>,
    pub peak: Option<Nat>,
}

mod int_string {
    pub use syracuse::serde_int_string::{deserialize, serialize};
}

mod opt_int_string {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T, S>(value: &Option<T>, serializer: S) -> Result<S::Ok, S::Error>
    where
        T: Display,
        S: Serializer,
    {
        match value {
            Some(v) => serializer.collect_str(v),
            None => serializer.serialize_none(),
        }
    }

    pub fn deserialize<'de, T, D>(deserializer: D) -> Result<Option<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        let raw = Option::<String>::deserialize(deserializer)?;
        raw.map(|s| s.parse().map_err(de::Error::custom))
            .transpose()
    }
}

/// Accumulates records for one command invocation and renders them in the
/// selected format.
#[derive(Debug, Default)]
pub struct Output {
    lines: Vec<Value>,
}

impl Output {
    pub fn push<T: Serialize>(&mut self, command: &str, payload: &T) {
        let mut object = serde_json::Map::new();
        object.insert("command".into(), Value::String(command.into()));
        match serde_json::to_value(payload).expect("payloads serialize") {
            Value::Object(fields) => object.extend(fields),
            other => {
                object.insert("value".into(), other);
            }
        }
        self.lines.push(Value::Object(object));
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self
                .lines
                .iter()
                .map(|line| serde_json::to_string(line).expect("values serialize"))
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Text => self
                .lines
                .iter()
                .map(render_text_line)
                .collect::<Vec<_>>()
                .join("\n"),
            Format::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> String {
        let Some(first) = self.lines.first() else {
            return String::new();
        };
        let headers: Vec<&str> = first
            .as_object()
            .expect("records are objects")
            .keys()
            .map(String::as_str)
            .collect();
        let mut out = headers
            .iter()
            .map(|h| csv_escape(h))
            .collect::<Vec<_>>()
            .join(",");
        for line in &self.lines {
            let object = line.as_object().expect("records are objects");
            out.push('\n');
            let row = headers
                .iter()
                .map(|&h| csv_escape(&scalar_text(object.get(h).unwrap_or(&Value::Null))))
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&row);
        }
        out
    }
}

fn render_text_line(line: &Value) -> String {
    line.as_object()
        .expect("records are objects")
        .iter()
        .map(|(key, value)| format!("{key}={}", scalar_text(value)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn scalar_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        nested => serde_json::to_string(nested).expect("values serialize"),
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_owned()
    }
}
