//! CSV / JSON rendering. Numbers use Rust's shortest round-trip formatting so
//! identical inputs give byte-identical files.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::{Map, Value};

use pulsebloch::SweepRecord;

use crate::error::{CliError, Result};

/// Shortest round-trip decimal, switching to exponent form for very small or large magnitudes.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub const SWEEP_HEADER: &str = "theta,phi,delta,tau,param,mode,qfi,branch,norm";

/// Ordered `# key: value` metadata lines.
#[derive(Debug, Clone, Default)]
pub struct Metadata(Vec<(String, String)>);

impl Metadata {
    pub fn new(command: &str) -> Self {
        let mut m = Self::default();
        m.push("tool", format!("pulsebloch {}", env!("CARGO_PKG_VERSION")));
        m.push("command", command);
        m
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.0.push((key.into(), value.to_string()));
        self
    }

    fn write_csv(&self, out: &mut String) {
        for (k, v) in &self.0 {
            writeln!(out, "# {k}: {v}").unwrap();
        }
    }

    fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, v) in &self.0 {
            // repeated keys collect into arrays
            match map.get_mut(k) {
                Some(Value::Array(a)) => a.push(Value::String(v.clone())),
                Some(prev) => {
                    let first = prev.take();
                    *prev = Value::Array(vec![first, Value::String(v.clone())]);
                }
                None => {
                    map.insert(k.clone(), Value::String(v.clone()));
                }
            }
        }
        Value::Object(map)
    }
}

pub fn csv(meta: &Metadata, header: &str, rows: &[String]) -> String {
    let mut out = String::new();
    meta.write_csv(&mut out);
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out
}

pub fn json<T: Serialize>(meta: &Metadata, key: &str, rows: &T) -> String {
    let mut map = Map::new();
    map.insert("metadata".into(), meta.to_json());
    map.insert(
        key.into(),
        serde_json::to_value(rows).expect("records serialize"),
    );
    let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("json serializes");
    s.push('\n');
    s
}

pub fn sweep_row(r: &SweepRecord) -> String {
    let (qfi, branch) = match r.qfi {
        Some(q) => (q.value, q.branch.as_str()),
        None => (f64::NAN, "unphysical"),
    };
    format!(
        "{},{},{},{},{},{},{},{},{}",
        num(r.theta),
        num(r.phi),
        num(r.delta),
        num(r.tau),
        r.parameter,
        r.mode,
        num(qfi),
        branch,
        num(r.norm)
    )
}

#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub theta: f64,
    pub phi: f64,
    pub delta: f64,
    pub tau: f64,
    pub param: &'static str,
    pub mode: &'static str,
    pub qfi: Option<f64>,
    pub branch: &'static str,
    pub norm: f64,
}

impl From<&SweepRecord> for SweepRow {
    fn from(r: &SweepRecord) -> Self {
        SweepRow {
            theta: r.theta,
            phi: r.phi,
            delta: r.delta,
            tau: r.tau,
            param: r.parameter.as_str(),
            mode: r.mode.as_str(),
            qfi: r.qfi.map(|q| q.value),
            branch: r.qfi.map_or("unphysical", |q| q.branch.as_str()),
            norm: r.norm,
        }
    }
}

/// Write to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(contents.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
