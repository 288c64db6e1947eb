//! Reports: JSON on stdout, optionally one CSV row per quantity.
//!
//! Everything except the `timing` object is a pure function of the config
//! and seed, so two runs agree byte for byte once [`strip_timestamps`] has
//! removed it.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use hardy_core::spaces::{Mode, NormEstimate};
use hardy_core::Verdict;
use serde::{Serialize, Serializer};

use crate::config::Budgets;
use crate::error::Result;

/// Finite values as numbers; `inf`, `-inf` and `nan` as strings, since JSON
/// has no literal for them.
fn finite_or_tag<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// A named number with its mode tag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    #[serde(serialize_with = "finite_or_tag")]
    pub value: f64,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Quantity {
    pub fn new(name: impl Into<String>, value: f64, mode: Mode) -> Self {
        Self { name: name.into(), value, mode, slack: None, note: None }
    }

    pub fn exact(name: impl Into<String>, value: f64) -> Self {
        Self::new(name, value, Mode::Exact)
    }

    pub fn from_estimate(name: impl Into<String>, est: &NormEstimate) -> Self {
        Self { name: name.into(), value: est.value, mode: est.mode, slack: None, note: est.note.clone() }
    }

    pub fn with_slack(mut self, slack: f64) -> Self {
        self.slack = Some(slack);
        self
    }
}

/// A symbolic result (a space, a family, a flag).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fact {
    pub name: String,
    pub value: String,
}

/// A verdict with the inequality it checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictLine {
    pub name: String,
    pub inequality: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// The configuration as the run actually used it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResolvedConfig {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symbol: Option<Vec<(i64, f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spaces: Vec<String>,
    pub budgets: Budgets,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timing {
    pub wall_time_s: f64,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub sections: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: ResolvedConfig,
    pub quantities: Vec<Quantity>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub facts: Vec<Fact>,
    pub verdicts: Vec<VerdictLine>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &str, config: ResolvedConfig) -> Self {
        Self {
            command: command.to_string(),
            config,
            quantities: Vec::new(),
            facts: Vec::new(),
            verdicts: Vec::new(),
            verdict: Verdict::Pass,
            notes: Vec::new(),
            timing: Timing::default(),
        }
    }

    pub fn quantity(&mut self, q: Quantity) {
        self.quantities.push(q);
    }

    pub fn fact(&mut self, name: impl Into<String>, value: impl ToString) {
        self.facts.push(Fact { name: name.into(), value: value.to_string() });
    }

    pub fn check(&mut self, name: impl Into<String>, inequality: impl Into<String>, verdict: Verdict, detail: String) {
        self.verdicts.push(VerdictLine { name: name.into(), inequality: inequality.into(), verdict, detail });
        self.verdict = Verdict::all(self.verdicts.iter().map(|v| v.verdict));
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    /// 0 when nothing failed, 1 otherwise. Exploratory verdicts do not fail.
    pub fn exit_code(&self) -> i32 {
        if self.verdict == Verdict::Fail {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        #[derive(Serialize)]
        struct Row<'a> {
            command: &'a str,
            name: &'a str,
            #[serde(serialize_with = "finite_or_tag")]
            value: f64,
            mode: String,
            slack: Option<f64>,
        }
        let mut w = csv::Writer::from_path(path)?;
        for q in &self.quantities {
            w.serialize(Row {
                command: &self.command,
                name: &q.name,
                value: q.value,
                mode: q.mode.to_string(),
                slack: q.slack,
            })?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Removes every `timing` member from a JSON report.
pub fn strip_timestamps(json: &str) -> String {
    fn strip(v: &mut serde_json::Value) {
        match v {
            serde_json::Value::Object(map) => {
                map.remove("timing");
                map.values_mut().for_each(strip);
            }
            serde_json::Value::Array(items) => items.iter_mut().for_each(strip),
            _ => {}
        }
    }
    match serde_json::from_str::<serde_json::Value>(json) {
        Ok(mut v) => {
            strip(&mut v);
            let mut out = Vec::new();
            serde_json::to_writer_pretty(&mut out, &v).expect("values serialize");
            out.write_all(b"\n").expect("in-memory write");
            String::from_utf8(out).expect("JSON is UTF-8")
        }
        Err(_) => json.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let cfg = ResolvedConfig {
            seed: 1,
            symbol: None,
            x: None,
            y: None,
            spaces: vec![],
            budgets: Budgets::default(),
            sweep: None,
        };
        Report::new("norm", cfg)
    }

    #[test]
    fn nonfinite_values_keep_their_tag() {
        let mut r = sample();
        r.quantity(Quantity::new("riesz", f64::INFINITY, Mode::LowerBound));
        let json = r.to_json();
        assert!(json.contains("\"value\": \"inf\""), "{json}");
        assert!(json.contains("\"mode\": \"lower-bound\""));
    }

    #[test]
    fn verdicts_aggregate() {
        let mut r = sample();
        r.check("a", "x <= y", Verdict::Pass, String::new());
        assert_eq!(r.exit_code(), 0);
        r.check("b", "x <= y", Verdict::Exploratory, String::new());
        assert_eq!((r.verdict, r.exit_code()), (Verdict::Exploratory, 0));
        r.check("c", "x <= y", Verdict::Fail, String::new());
        assert_eq!((r.verdict, r.exit_code()), (Verdict::Fail, 1));
    }

    #[test]
    fn stripping_removes_only_timing() {
        let mut a = sample();
        a.timing.wall_time_s = 1.5;
        let mut b = sample();
        b.timing.wall_time_s = 9.0;
        assert_ne!(a.to_json(), b.to_json());
        assert_eq!(strip_timestamps(&a.to_json()), strip_timestamps(&b.to_json()));
        assert!(strip_timestamps(&a.to_json()).contains("\"command\""));
    }
}
