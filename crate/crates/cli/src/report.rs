//! Report bundle: CSV tables, JSONL rows and the JSON summary.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use siftlab_core::expsum::{rows_to_csv, rows_to_jsonl, InequalityRow, TheoremTag, CSV_HEADER};
use siftlab_core::sieve::lemmas::LemmaCheck;

use crate::error::{CliError, Result};

pub const INEQUALITIES_CSV: &str = "inequalities.csv";
pub const INEQUALITIES_JSONL: &str = "inequalities.jsonl";
pub const LEMMAS_CSV: &str = "lemmas.csv";
pub const DIAGNOSTICS_CSV: &str = "diagnostics.csv";
pub const LEVELSETS_CSV: &str = "levelsets.csv";
pub const SUMMARY_JSON: &str = "summary.json";

/// Outcome of one diagnostic. Only `Pass` and `Fail` are hard.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SOFT")]
    Soft,
    #[serde(rename = "NOT-ASSERTED")]
    NotAsserted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub run: String,
    pub check: String,
    pub n: Option<u64>,
    pub value: f64,
    pub threshold: Option<f64>,
    pub status: Status,
    pub hard: bool,
    pub note: String,
}

/// One exact inequality with both sides as reduced fractions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LemmaRow {
    pub run: String,
    pub lemma: String,
    pub y: f64,
    pub z0: f64,
    pub d: u64,
    pub lhs: String,
    pub rhs: String,
    pub holds: bool,
    pub asserted: bool,
}

impl LemmaRow {
    pub fn from_check(run: &str, c: &LemmaCheck) -> Self {
        LemmaRow {
            run: run.to_string(),
            lemma: c.id.label().to_string(),
            y: c.y,
            z0: c.z0,
            d: c.d,
            lhs: c.lhs.to_string(),
            rhs: c.rhs.to_string(),
            holds: c.holds(),
            asserted: c.id.asserted(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub run: String,
    pub n: u64,
    pub j: u32,
    pub xi: f64,
    pub count: usize,
    pub bound: f64,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub name: String,
    pub rows: Vec<InequalityRow>,
    pub lemmas: Vec<LemmaRow>,
    pub diagnostics: Vec<Diagnostic>,
    pub levels: Vec<LevelRow>,
    pub runtime_ms: f64,
}

impl RunReport {
    pub fn new(name: &str) -> Self {
        RunReport {
            name: name.to_string(),
            rows: Vec::new(),
            lemmas: Vec::new(),
            diagnostics: Vec::new(),
            levels: Vec::new(),
            runtime_ms: 0.0,
        }
    }

    pub fn hard_failures(&self) -> usize {
        self.diagnostics.iter().filter(|d| d.status == Status::Fail).count()
    }
}

/// Series a row belongs to when tracking measured constants. Weighted
/// two-squares rows are compared across `z` at fixed `N`; all others across `N`.
pub fn series_key(r: &InequalityRow) -> String {
    let mut key = r.theorem.label().to_string();
    if let Some(ell) = r.ell {
        key.push_str(&format!("/ell={ell}"));
    }
    if r.theorem == TheoremTag::TwoSquares {
        key.push_str(&format!("/N={}", r.n));
    }
    key
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvironmentStamp {
    pub version: String,
    pub os: String,
    pub arch: String,
    pub workers: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasuredConstant {
    pub theorem: String,
    pub n: u64,
    pub z: f64,
    pub ell: Option<f64>,
    pub constant: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub name: String,
    pub pass: bool,
    pub hard_checks: usize,
    pub hard_failures: usize,
    /// Status per check name (the worst status when a check repeats).
    pub checks: BTreeMap<String, Status>,
    pub constants: Vec<MeasuredConstant>,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: bool,
    pub environment: EnvironmentStamp,
    pub runs: Vec<RunSummary>,
}

#[derive(Clone, Debug)]
pub struct ReportBundle {
    pub environment: EnvironmentStamp,
    pub runs: Vec<RunReport>,
}

fn worse(a: Status, b: Status) -> Status {
    let rank = |s| match s {
        Status::Fail => 3,
        Status::Pass => 2,
        Status::NotAsserted => 1,
        Status::Soft => 0,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn to_csv<T: Serialize>(items: impl IntoIterator<Item = T>, header: &[&str]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for item in items {
        w.serialize(item)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io("csv buffer", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

impl ReportBundle {
    pub fn new(workers: usize, seed: u64) -> Self {
        ReportBundle {
            environment: EnvironmentStamp {
                version: env!("CARGO_PKG_VERSION").to_string(),
                os: std::env::consts::OS.to_string(),
                arch: std::env::consts::ARCH.to_string(),
                workers,
                seed,
            },
            runs: Vec::new(),
        }
    }

    pub fn pass(&self) -> bool {
        self.runs.iter().all(|r| r.hard_failures() == 0)
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &InequalityRow)> {
        self.runs.iter().flat_map(|r| r.rows.iter().map(move |row| (r.name.as_str(), row)))
    }

    /// Inequality rows with a leading `run` column; runtimes are omitted.
    pub fn inequalities_csv(&self) -> String {
        let mut out = format!("run,{CSV_HEADER}\n");
        for r in &self.runs {
            for line in rows_to_csv(&r.rows, false).lines().skip(1) {
                out.push_str(&r.name);
                out.push(',');
                out.push_str(line);
                out.push('\n');
            }
        }
        out
    }

    pub fn inequalities_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.runs {
            for line in rows_to_jsonl(&r.rows)?.lines() {
                let mut v: serde_json::Value = serde_json::from_str(line)?;
                v["run"] = serde_json::Value::String(r.name.clone());
                out.push_str(&serde_json::to_string(&v)?);
                out.push('\n');
            }
        }
        Ok(out)
    }

    pub fn lemmas_csv(&self) -> Result<String> {
        to_csv(
            self.runs.iter().flat_map(|r| &r.lemmas),
            &["run", "lemma", "y", "z0", "d", "lhs", "rhs", "holds", "asserted"],
        )
    }

    pub fn diagnostics_csv(&self) -> Result<String> {
        to_csv(
            self.runs.iter().flat_map(|r| &r.diagnostics),
            &["run", "check", "n", "value", "threshold", "status", "hard", "note"],
        )
    }

    pub fn levelsets_csv(&self) -> Result<String> {
        to_csv(self.runs.iter().flat_map(|r| &r.levels), &["run", "n", "j", "xi", "count", "bound"])
    }

    pub fn summary(&self) -> Summary {
        let runs = self
            .runs
            .iter()
            .map(|r| {
                let mut checks = BTreeMap::new();
                for d in &r.diagnostics {
                    let e = checks.entry(d.check.clone()).or_insert(d.status);
                    *e = worse(*e, d.status);
                }
                RunSummary {
                    name: r.name.clone(),
                    pass: r.hard_failures() == 0,
                    hard_checks: r.diagnostics.iter().filter(|d| d.hard).count(),
                    hard_failures: r.hard_failures(),
                    checks,
                    constants: r
                        .rows
                        .iter()
                        .map(|row| MeasuredConstant {
                            theorem: row.theorem.label().to_string(),
                            n: row.n,
                            z: row.z,
                            ell: row.ell,
                            constant: row.constant,
                        })
                        .collect(),
                    runtime_ms: r.runtime_ms,
                }
            })
            .collect();
        Summary { pass: self.pass(), environment: self.environment.clone(), runs }
    }

    /// Write every table to `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let files = [
            (INEQUALITIES_CSV, self.inequalities_csv()),
            (INEQUALITIES_JSONL, self.inequalities_jsonl()?),
            (LEMMAS_CSV, self.lemmas_csv()?),
            (DIAGNOSTICS_CSV, self.diagnostics_csv()?),
            (LEVELSETS_CSV, self.levelsets_csv()?),
            (SUMMARY_JSON, serde_json::to_string_pretty(&self.summary())? + "\n"),
        ];
        for (name, body) in files {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }
}

/// Recompute the overall and per-run verdicts from `diagnostics.csv` and
/// compare them with `summary.json`.
pub fn summary_matches_csv(summary: &Summary, diagnostics_csv: &str) -> Result<bool> {
    let mut failures: BTreeMap<String, usize> = BTreeMap::new();
    let mut reader = csv::Reader::from_reader(diagnostics_csv.as_bytes());
    for d in reader.deserialize::<Diagnostic>() {
        let d = d?;
        let f = failures.entry(d.run).or_default();
        if d.hard && d.status == Status::Fail {
            *f += 1;
        }
    }
    let runs_ok = summary.runs.iter().all(|r| {
        let f = failures.get(&r.name).copied().unwrap_or(0);
        r.hard_failures == f && r.pass == (f == 0)
    });
    let overall = failures.values().all(|&f| f == 0);
    Ok(runs_ok && summary.pass == overall)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(run: &str, status: Status) -> Diagnostic {
        Diagnostic {
            run: run.into(),
            check: "c".into(),
            n: Some(4),
            value: 0.5,
            threshold: None,
            hard: matches!(status, Status::Pass | Status::Fail),
            status,
            note: "a, b".into(),
        }
    }

    #[test]
    fn summary_recomputes_from_csv() {
        let mut b = ReportBundle::new(1, 0);
        let mut r = RunReport::new("a");
        r.diagnostics = vec![diag("a", Status::Pass), diag("a", Status::Soft)];
        b.runs.push(r);
        let mut r = RunReport::new("b");
        r.diagnostics = vec![diag("b", Status::Fail), diag("b", Status::NotAsserted)];
        b.runs.push(r);
        let s = b.summary();
        assert!(!s.pass);
        assert_eq!(s.runs[1].checks["c"], Status::Fail);
        let csv = b.diagnostics_csv().unwrap();
        assert!(summary_matches_csv(&s, &csv).unwrap());
        let mut forged = s.clone();
        forged.pass = true;
        assert!(!summary_matches_csv(&forged, &csv).unwrap());
    }

    #[test]
    fn csv_round_trips_quoted_notes() {
        let mut b = ReportBundle::new(1, 0);
        let mut r = RunReport::new("a");
        r.diagnostics = vec![diag("a", Status::Pass)];
        b.runs.push(r);
        let csv = b.diagnostics_csv().unwrap();
        let back: Vec<Diagnostic> = csv::Reader::from_reader(csv.as_bytes()).deserialize().collect::<std::result::Result<_, _>>().unwrap();
        assert_eq!(back, b.runs[0].diagnostics);
    }
}
