//! Fixture corpus: loading with located diagnostics, concurrent evaluation
//! of expectations and report rendering.

mod checks;
pub mod eval;
pub mod model;
pub mod tools;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::ideal::Budget;
pub use checks::parse_range;
pub use model::{FixtureFile, Kind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("{file}: at '{path}': {reason}")]
    Located { file: String, path: String, reason: String },
    #[error("{file}: {reason}")]
    Io { file: String, reason: String },
    #[error("duplicate fixture id '{id}' ({first} and {second})")]
    Duplicate { id: String, first: String, second: String },
    #[error("unknown fixture reference '{0}'")]
    Unknown(String),
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub file: FixtureFile,
    pub path: PathBuf,
}

impl Fixture {
    pub fn id(&self) -> &str {
        &self.file.id
    }

    /// Decode `input` as the given type, reporting the JSON path on failure.
    pub fn input<T: serde::de::DeserializeOwned>(&self) -> Result<T, FixtureError> {
        serde_path_to_error::deserialize(&self.file.input).map_err(|e| FixtureError::Located {
            file: self.path.display().to_string(),
            path: format!("input.{}", e.path()),
            reason: e.inner().to_string(),
        })
    }
}

pub fn read_fixture(path: &Path) -> Result<Fixture, FixtureError> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| FixtureError::Io { file: file.clone(), reason: e.to_string() })?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let parsed: FixtureFile = serde_path_to_error::deserialize(de).map_err(|e| FixtureError::Located {
        file: file.clone(),
        path: e.path().to_string(),
        reason: e.inner().to_string(),
    })?;
    for (i, x) in parsed.expect.iter().enumerate() {
        let tagged = ["[PAPER", "[DERIVED", "[TRIVIAL"].iter().any(|t| x.source.starts_with(t));
        if !tagged {
            return Err(FixtureError::Located {
                file,
                path: format!("expect[{i}].source"),
                reason: "provenance must start with [PAPER, [DERIVED or [TRIVIAL".into(),
            });
        }
    }
    Ok(Fixture { file: parsed, path: path.to_path_buf() })
}

/// Locate a fixture given a path that may omit the kind subdirectory.
pub fn resolve_path(arg: &Path, fixture_dir: Option<&Path>) -> Option<PathBuf> {
    if arg.is_file() {
        return Some(arg.to_path_buf());
    }
    let name = arg.file_name()?;
    let mut roots: Vec<PathBuf> = Vec::new();
    if let Some(d) = fixture_dir {
        roots.push(d.to_path_buf());
    }
    if let Some(p) = arg.parent() {
        roots.push(if p.as_os_str().is_empty() { PathBuf::from(".") } else { p.to_path_buf() });
    }
    for root in roots {
        for k in Kind::ALL {
            let cand = root.join(k.dir()).join(name);
            if cand.is_file() {
                return Some(cand);
            }
        }
    }
    None
}

/// The fixture tree root for a fixture file inside `<root>/<kind>/`.
pub fn corpus_root_of(path: &Path) -> PathBuf {
    let parent = path.parent().unwrap_or(Path::new("."));
    let is_kind_dir = parent.file_name().and_then(|n| n.to_str()).is_some_and(|n| Kind::ALL.iter().any(|k| k.dir() == n));
    if is_kind_dir {
        parent.parent().unwrap_or(Path::new(".")).to_path_buf()
    } else {
        parent.to_path_buf()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub root: PathBuf,
    pub fixtures: BTreeMap<String, Fixture>,
}

impl Corpus {
    pub fn load(root: &Path) -> Result<Corpus, FixtureError> {
        let mut corpus = Corpus { root: root.to_path_buf(), fixtures: BTreeMap::new() };
        for kind in Kind::ALL {
            let dir = root.join(kind.dir());
            let Ok(entries) = std::fs::read_dir(&dir) else { continue };
            let mut paths: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect();
            paths.sort();
            for p in paths {
                let fx = read_fixture(&p)?;
                if fx.file.kind != kind {
                    return Err(FixtureError::Located {
                        file: p.display().to_string(),
                        path: "kind".into(),
                        reason: format!("kind {:?} does not match directory '{}'", fx.file.kind, kind.dir()),
                    });
                }
                corpus.insert(fx)?;
            }
        }
        Ok(corpus)
    }

    pub fn insert(&mut self, fx: Fixture) -> Result<(), FixtureError> {
        if let Some(prev) = self.fixtures.get(fx.id()) {
            if prev.path != fx.path {
                return Err(FixtureError::Duplicate {
                    id: fx.id().to_string(),
                    first: prev.path.display().to_string(),
                    second: fx.path.display().to_string(),
                });
            }
        }
        self.fixtures.insert(fx.id().to_string(), fx);
        Ok(())
    }

    /// Look up by id, or by a path relative to the corpus root.
    pub fn get(&self, reference: &str) -> Result<&Fixture, FixtureError> {
        let stem = Path::new(reference).file_stem().and_then(|s| s.to_str()).unwrap_or(reference);
        self.fixtures
            .get(reference)
            .or_else(|| self.fixtures.get(stem))
            .ok_or_else(|| FixtureError::Unknown(reference.to_string()))
    }

    pub fn count(&self, kind: Kind) -> usize {
        self.fixtures.values().filter(|f| f.file.kind == kind).count()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Also run fixtures marked slow.
    pub extended: bool,
    pub budget: Budget,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { extended: false, budget: Budget::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Skip,
    Fail,
    Budget,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Skip => "skip",
            Status::Fail => "fail",
            Status::Budget => "budget",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub args: Value,
    pub expected: Value,
    pub measured: Value,
    pub status: Status,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureReport {
    pub id: String,
    pub kind: Kind,
    pub status: Status,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub millis: u64,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Report {
    pub fixtures: Vec<FixtureReport>,
}

/// Failure while evaluating a check.
#[derive(Debug, Clone)]
pub(crate) enum CheckError {
    Budget(String),
    Other(String),
}

impl<E: std::fmt::Display> From<E> for CheckError {
    fn from(e: E) -> Self {
        let s = e.to_string();
        if s.contains("budget exceeded") {
            CheckError::Budget(s)
        } else {
            CheckError::Other(s)
        }
    }
}

pub fn run_fixture(corpus: &Corpus, fx: &Fixture, opts: &RunOptions) -> FixtureReport {
    let start = Instant::now();
    let mut report = FixtureReport {
        id: fx.id().to_string(),
        kind: fx.file.kind,
        status: Status::Pass,
        checks: Vec::new(),
        error: None,
        millis: 0,
    };
    if fx.file.slow && !opts.extended {
        report.status = Status::Skip;
        report.checks = fx
            .file
            .expect
            .iter()
            .map(|x| CheckResult {
                check: x.check.clone(),
                args: x.args.clone(),
                expected: x.value.clone(),
                measured: Value::Null,
                status: Status::Skip,
                source: x.source.clone(),
                message: Some("slow fixture; run with --extended".into()),
            })
            .collect();
        return report;
    }
    match checks::evaluate(corpus, fx, opts) {
        Ok(results) => report.checks = results,
        Err(e) => {
            report.status = match e {
                CheckError::Budget(_) => Status::Budget,
                CheckError::Other(_) => Status::Fail,
            };
            report.error = Some(match e {
                CheckError::Budget(s) | CheckError::Other(s) => s,
            });
        }
    }
    if let Some(worst) = report.checks.iter().map(|c| c.status).max() {
        report.status = report.status.max(worst);
    }
    report.millis = start.elapsed().as_millis() as u64;
    report
}

/// Run every fixture concurrently; the report is sorted by id.
pub fn run_all(corpus: &Corpus, opts: &RunOptions) -> Report {
    let list: Vec<&Fixture> = corpus.fixtures.values().collect();
    let mut fixtures: Vec<FixtureReport> = list.par_iter().map(|fx| run_fixture(corpus, fx, opts)).collect();
    fixtures.sort_by(|a, b| a.id.cmp(&b.id));
    Report { fixtures }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Tsv,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            _ => Err(format!("unknown format '{s}' (text, json, tsv)")),
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

impl Report {
    pub fn status(&self) -> Status {
        self.fixtures.iter().map(|f| f.status).filter(|s| *s != Status::Skip).max().unwrap_or(Status::Pass)
    }

    /// 0 all pass, 1 some failure, 3 budget abort.
    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Pass | Status::Skip => 0,
            Status::Fail => 1,
            Status::Budget => 3,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Format::Tsv => {
                let mut out = String::from("id\tkind\tcheck\tstatus\texpected\tmeasured\tmillis\n");
                for f in &self.fixtures {
                    if f.checks.is_empty() {
                        let err = f.error.clone().unwrap_or_default();
                        let _ = writeln!(out, "{}\t{:?}\t-\t{}\t-\t{}\t{}", f.id, f.kind, f.status.as_str(), err, f.millis);
                    }
                    for c in &f.checks {
                        let _ = writeln!(
                            out,
                            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                            f.id,
                            f.kind.dir(),
                            c.check,
                            c.status.as_str(),
                            compact(&c.expected),
                            compact(&c.measured),
                            f.millis
                        );
                    }
                }
                out
            }
            Format::Text => {
                let mut out = String::new();
                for f in &self.fixtures {
                    let _ = writeln!(out, "{:<7} {} ({} ms)", f.status.as_str().to_uppercase(), f.id, f.millis);
                    if let Some(e) = &f.error {
                        let _ = writeln!(out, "        error: {e}");
                    }
                    for c in &f.checks {
                        if c.status == Status::Pass || c.status == Status::Skip {
                            continue;
                        }
                        let _ = writeln!(
                            out,
                            "        {} {}: expected {}, measured {}{}",
                            c.status.as_str(),
                            c.check,
                            compact(&c.expected),
                            compact(&c.measured),
                            c.message.as_ref().map(|m| format!(" ({m})")).unwrap_or_default()
                        );
                    }
                }
                let count = |s: Status| self.fixtures.iter().filter(|f| f.status == s).count();
                let _ = writeln!(
                    out,
                    "{} fixtures: {} pass, {} fail, {} skip, {} budget",
                    self.fixtures.len(),
                    count(Status::Pass),
                    count(Status::Fail),
                    count(Status::Skip),
                    count(Status::Budget)
                );
                out
            }
        }
    }
}
