//! Report values and their two renderings: an aligned text table and a JSON
//! document. Field names are listed in `docs/report-format.md`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use fbelief_core::scalar::decimal_string;
use fbelief_core::{Rational, Scalar};
use serde::{Deserialize, Serialize};

pub const FORMAT: &str = "fbelief-report/1";

/// A number in both exact and human form. With the float backend `value` is the
/// shortest decimal that reads back as the same `f64`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Number {
    pub value: String,
    pub decimal: String,
}

impl Number {
    pub fn exact(x: &Rational) -> Number {
        Number {
            value: format!("{}/{}", x.numer(), x.denom()),
            decimal: decimal_string(Scalar::to_f64(x), 6),
        }
    }

    pub fn float(x: f64) -> Number {
        Number {
            value: format!("{x:?}"),
            decimal: decimal_string(x, 6),
        }
    }

    fn cell(&self) -> String {
        let short = self.value.strip_suffix("/1").unwrap_or(&self.value);
        if short == self.decimal {
            short.to_string()
        } else {
            format!("{short} ({})", self.decimal)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub event: String,
    pub belief: Number,
    /// `closed-form` or `oracle`.
    pub belief_source: String,
    pub plausibility: Option<Number>,
    pub plausibility_source: Option<String>,
    pub classical: Option<Number>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerSummary {
    pub guilty: Number,
    pub not_guilty: Number,
    pub ignorance: Number,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FocalEntry {
    pub set: String,
    pub mass: Number,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioEcho {
    pub kind: String,
    pub parameters: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub scenario: String,
    pub point: BTreeMap<String, String>,
    pub closed_form: Option<Number>,
    pub oracle: Option<Number>,
    pub failed_checks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioTally {
    pub scenario: String,
    pub runs: usize,
    pub passed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub passed: bool,
    pub runs: usize,
    pub checks: usize,
    pub max_population: u64,
    pub scenarios: Vec<ScenarioTally>,
    pub mismatches: Vec<Mismatch>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub command: String,
    pub backend: String,
    pub scenario: Option<ScenarioEcho>,
    pub rows: Vec<Row>,
    pub ledger: Option<LedgerSummary>,
    pub conditioned_mass: Option<Vec<FocalEntry>>,
    pub verification: Option<Verification>,
}

impl Report {
    pub fn new(command: &str, backend: &str) -> Report {
        Report {
            format: FORMAT.into(),
            command: command.into(),
            backend: backend.into(),
            scenario: None,
            rows: Vec::new(),
            ledger: None,
            conditioned_mass: None,
            verification: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Report> {
        serde_json::from_str(text)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        if let Some(sc) = &self.scenario {
            let _ = writeln!(out, "scenario: {}", sc.kind);
            for (k, v) in &sc.parameters {
                let _ = writeln!(out, "  {k} = {v}");
            }
            let _ = writeln!(out, "backend: {}", self.backend);
        }
        if let Some(mass) = &self.conditioned_mass {
            out.push('\n');
            let rows: Vec<Vec<String>> = mass.iter().map(|f| vec![f.set.clone(), f.mass.cell()]).collect();
            table(&mut out, &["conditioned focal set", "mass"], &rows);
        }
        if !self.rows.is_empty() {
            out.push('\n');
            let show = |n: &Option<Number>, src: Option<&str>| match (n, src) {
                (Some(n), Some(s)) if s != "closed-form" => format!("{} [{s}]", n.cell()),
                (Some(n), _) => n.cell(),
                (None, _) => "-".into(),
            };
            let rows: Vec<Vec<String>> = self
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.event.clone(),
                        show(&Some(r.belief.clone()), Some(&r.belief_source)),
                        show(&r.plausibility, r.plausibility_source.as_deref()),
                        show(&r.classical, None),
                    ]
                })
                .collect();
            table(&mut out, &["event", "belief", "plausibility", "classical"], &rows);
        }
        if let Some(l) = &self.ledger {
            out.push('\n');
            let rows = vec![
                vec!["guilty".into(), l.guilty.cell()],
                vec!["not guilty".into(), l.not_guilty.cell()],
                vec!["ignorance".into(), l.ignorance.cell()],
            ];
            table(&mut out, &["posterior given E=1", "mass"], &rows);
        }
        if let Some(v) = &self.verification {
            let rows: Vec<Vec<String>> = v
                .scenarios
                .iter()
                .map(|t| vec![t.scenario.clone(), t.runs.to_string(), t.passed.to_string()])
                .collect();
            table(&mut out, &["scenario", "runs", "passed"], &rows);
            out.push('\n');
            for m in &v.mismatches {
                let point: Vec<String> = m.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let val = |n: &Option<Number>| n.as_ref().map_or("impossible".into(), Number::cell);
                let _ = writeln!(
                    out,
                    "MISMATCH {} [{}]: closed form {}, oracle {}",
                    m.scenario,
                    point.join(" "),
                    val(&m.closed_form),
                    val(&m.oracle)
                );
                for c in &m.failed_checks {
                    let _ = writeln!(out, "  failed check: {c}");
                }
            }
            let _ = writeln!(
                out,
                "{}: {} oracle runs, {} checks, {} mismatches (populations up to {})",
                if v.passed { "verified" } else { "FAILED" },
                v.runs,
                v.checks,
                v.mismatches.len(),
                v.max_population
            );
        }
        out
    }
}

fn table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let _ = writeln!(out, "{}", line(header.to_vec()));
    let dashes: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    let _ = writeln!(out, "{}", line(dashes.iter().map(String::as_str).collect()));
    for r in rows {
        let _ = writeln!(out, "{}", line(r.iter().map(String::as_str).collect()));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::parse_rational;
    use fbelief_core::scalar::rat;

    #[test]
    fn numbers() {
        let n = Number::exact(&rat(1, 8));
        assert_eq!((n.value.as_str(), n.decimal.as_str()), ("1/8", "0.125"));
        assert_eq!(Number::exact(&rat(1, 1)).value, "1/1");
        assert_eq!(Number::exact(&rat(2, 3)).decimal, "0.666667");
        assert_eq!(parse_rational(&Number::exact(&rat(-7, 12)).value), Some(rat(-7, 12)));
        let f = Number::float(0.1);
        assert_eq!(f.value.parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("evaluate", "exact");
        r.rows.push(Row {
            event: "C in {1}".into(),
            belief: Number::exact(&rat(1, 8)),
            belief_source: "closed-form".into(),
            plausibility: None,
            plausibility_source: None,
            classical: Some(Number::exact(&rat(2, 5))),
        });
        let text = r.to_json();
        assert_eq!(Report::from_json(&text).unwrap(), r);
        assert!(r.to_table().contains("1/8 (0.125)"));
    }
}
