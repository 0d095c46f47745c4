use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::{ScenarioConfig, ScenarioKind};
use crate::LabError;

pub const CSV_HEADER: &str = "scenario,m,n,value,alpha_m,deviation,flag";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    Ok,
    Fail,
}

impl Flag {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Flag::Ok
        } else {
            Flag::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Ok => "ok",
            Flag::Fail => "fail",
        }
    }
}

/// One `(m, n)` cell of a scenario table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub m: usize,
    pub n: usize,
    pub value: f64,
    pub alpha_m: f64,
    pub deviation: f64,
    pub flag: Flag,
    /// Invariant the flag tests.
    pub invariant: String,
}

/// A named pass/fail claim with the coordinates it refers to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub invariant: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub subject: String,
}

impl Check {
    pub fn new(invariant: &str, passed: bool, value: f64, threshold: f64) -> Self {
        Check {
            invariant: invariant.to_string(),
            passed,
            value,
            threshold,
            m: None,
            n: None,
            subject: String::new(),
        }
    }

    pub fn at(mut self, m: Option<usize>, n: Option<usize>) -> Self {
        self.m = m;
        self.n = n;
        self
    }

    pub fn on(mut self, subject: &str) -> Self {
        self.subject = subject.to_string();
        self
    }
}

/// Smallest `N` whose tail supremum falls below `eps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NOfEps {
    pub eps: f64,
    pub n: Option<usize>,
}

/// Tail suprema of a deviation surface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailSummary {
    /// What the surface holds.
    pub surface: String,
    /// `tail[N] = sup{D[m][n] : m > N, n > N}`.
    pub joint: Vec<f64>,
    /// `tail[N] = sup{D[m][n] : n > N}` over all rows.
    pub columns: Vec<f64>,
    pub n_of_eps_joint: Vec<NOfEps>,
    pub n_of_eps_columns: Vec<NOfEps>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config: ScenarioConfig,
    pub versions: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: ScenarioKind,
    pub rows: Vec<Row>,
    pub checks: Vec<Check>,
    pub tails: Vec<TailSummary>,
    /// Labels of the `m` index when it enumerates corpus members.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub members: BTreeMap<usize, String>,
    pub provenance: Provenance,
}

impl ScenarioReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.flag == Flag::Ok) && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        let rows = self.rows.iter().filter(|r| r.flag == Flag::Fail).map(|r| {
            format!(
                "{} at (m={}, n={}): value {}",
                r.invariant, r.m, r.n, r.value
            )
        });
        let checks = self.checks.iter().filter(|c| !c.passed).map(|c| {
            format!(
                "{}{} value {} threshold {}",
                c.invariant,
                if c.subject.is_empty() {
                    String::new()
                } else {
                    format!(" [{}]", c.subject)
                },
                c.value,
                c.threshold
            )
        });
        rows.chain(checks).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        let tag = self.scenario.as_str();
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{tag},{},{},{},{},{},{}",
                r.m,
                r.n,
                fixed8(r.value),
                fixed8(r.alpha_m),
                fixed8(r.deviation),
                r.flag.as_str()
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        serde_json::to_string_pretty(self).map_err(|e| LabError::Json(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self, LabError> {
        serde_json::from_str(text).map_err(|e| LabError::Json(e.to_string()))
    }
}

/// Eight decimals, trailing zeros trimmed down to one.
pub fn fixed8(x: f64) -> String {
    let mut s = format!("{x:.8}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s.remove(0);
    }
    while s.ends_with('0') && !s.ends_with(".0") {
        s.pop();
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Writes `<out_dir>/<scenario>.<ext>` and returns the path.
pub fn export_report(
    rep: &ScenarioReport,
    format: Format,
    out_dir: &Path,
) -> Result<PathBuf, LabError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| LabError::Io { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    let (ext, body) = match format {
        Format::Csv => ("csv", rep.to_csv()),
        Format::Json => ("json", rep.to_json()?),
    };
    let path = out_dir.join(format!("{}.{ext}", rep.scenario.as_str()));
    fs::write(&path, body).map_err(io(&path))?;
    Ok(path)
}
