//! Output records shared by every subcommand.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use trl_core::bounds::{Bound, BoundInterval, ExactRoot};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    pub certified: bool,
    /// "certified" or "heuristic".
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

fn status(certified: bool) -> &'static str {
    if certified {
        "certified"
    } else {
        "heuristic"
    }
}

impl Row {
    pub fn value(name: impl Into<String>, value: f64, certified: bool) -> Row {
        Row {
            name: name.into(),
            value: Some(value),
            lower: None,
            upper: None,
            exact: None,
            certified,
            status: status(certified).into(),
            source: None,
            witness: None,
            expected: None,
            pass: None,
        }
    }

    pub fn bound(name: impl Into<String>, b: &Bound) -> Row {
        Row::value(name, b.value, b.certified)
            .with_exact(b.exact.as_ref())
            .with_source(b.source.to_string())
    }

    pub fn interval(name: impl Into<String>, i: &BoundInterval) -> Row {
        let mut r = Row::value(name, i.lower.value, i.certified);
        r.value = if i.is_collapsed(1e-12) { Some(i.upper.value) } else { None };
        r.lower = Some(i.lower.value);
        r.upper = Some(i.upper.value);
        if let (Some(a), Some(b)) = (&i.lower.exact, &i.upper.exact) {
            r.exact = Some(if a == b { a.to_string() } else { format!("[{a}, {b}]") });
        }
        r.source = Some(format!("{} / {}", i.lower.source, i.upper.source));
        r
    }

    pub fn with_exact(mut self, e: Option<&ExactRoot>) -> Row {
        self.exact = e.map(ToString::to_string);
        self
    }

    pub fn with_exact_str(mut self, e: Option<String>) -> Row {
        self.exact = e;
        self
    }

    pub fn with_source(mut self, s: impl Into<String>) -> Row {
        self.source = Some(s.into());
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Row {
        self.witness = Some(w.into());
        self
    }

    pub fn check(mut self, expected: impl Into<String>, pass: bool) -> Row {
        self.expected = Some(expected.into());
        self.pass = Some(pass);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub results: Vec<Row>,
    /// Full solver output (witnesses, decompositions) keyed by name.
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub details: serde_json::Map<String, serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: &[&[u8]], seed: u64) -> Report {
        let mut h = Sha256::new();
        for part in inputs {
            h.update((part.len() as u64).to_le_bytes());
            h.update(part);
        }
        Report {
            command: command.into(),
            inputs_digest: hex::encode(h.finalize()),
            seed,
            results: Vec::new(),
            details: serde_json::Map::new(),
            timing_ms: None,
        }
    }

    pub fn push(&mut self, row: Row) {
        self.results.push(row);
    }

    pub fn detail(&mut self, key: impl Into<String>, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.details.insert(key.into(), v);
    }

    /// True unless some golden comparison failed.
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass != Some(false))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> anyhow::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "value", "lower", "upper", "exact", "status", "source", "expected", "pass"])?;
        let f = |v: Option<f64>| v.map(|x| format!("{x:.12}")).unwrap_or_default();
        for r in &self.results {
            w.write_record([
                r.name.clone(),
                f(r.value),
                f(r.lower),
                f(r.upper),
                r.exact.clone().unwrap_or_default(),
                r.status.to_string(),
                r.source.clone().unwrap_or_default(),
                r.expected.clone().unwrap_or_default(),
                r.pass.map(|p| if p { "pass" } else { "FAIL" }.to_string()).unwrap_or_default(),
            ])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// Aligned text table.
    pub fn to_table(&self, show_exact: bool) -> String {
        let mut rows: Vec<Vec<String>> = vec![vec![
            "name".into(),
            "value".into(),
            "interval".into(),
            if show_exact { "exact".into() } else { String::new() },
            "status".into(),
            "check".into(),
        ]];
        for r in &self.results {
            let value = r.value.map(|v| format!("{v:.10}")).unwrap_or_else(|| "-".into());
            let interval = match (r.lower, r.upper) {
                (Some(a), Some(b)) => format!("[{a:.8}, {b:.8}]"),
                _ => String::new(),
            };
            let check = match (r.pass, &r.expected) {
                (Some(true), Some(e)) => format!("pass ({e})"),
                (Some(false), Some(e)) => format!("FAIL (expected {e})"),
                _ => String::new(),
            };
            rows.push(vec![
                r.name.clone(),
                value,
                interval,
                if show_exact { r.exact.clone().unwrap_or_default() } else { String::new() },
                r.status.to_string(),
                check,
            ]);
        }
        let widths: Vec<usize> = (0..6).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
        let mut out = String::new();
        let _ = writeln!(out, "# {}  (seed {}, inputs {})", self.command, self.seed, &self.inputs_digest[..12]);
        for r in rows {
            let line: Vec<String> = r
                .iter()
                .zip(&widths)
                .filter(|(_, w)| **w > 0)
                .map(|(c, w)| format!("{c:<w$}", w = *w))
                .collect();
            let _ = writeln!(out, "{}", line.join("  ").trim_end());
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(out, "# {t:.1} ms");
        }
        out
    }
}
