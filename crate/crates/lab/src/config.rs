use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Counterexample,
    Theorem1,
    Theorem2,
    ZalcmanScan,
    InequalityAudit,
}

impl ScenarioKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::Counterexample => "counterexample",
            ScenarioKind::Theorem1 => "theorem1",
            ScenarioKind::Theorem2 => "theorem2",
            ScenarioKind::ZalcmanScan => "zalcman_scan",
            ScenarioKind::InequalityAudit => "inequality_audit",
        }
    }

    /// Tolerances a scenario reads, with their defaults.
    pub fn default_tolerances(self) -> BTreeMap<String, f64> {
        let pairs: &[(&str, f64)] = match self {
            ScenarioKind::Counterexample => &[("closed_form", 1e-12), ("diagonal_floor", 0.36)],
            ScenarioKind::Theorem1 => &[("closed_form", 1e-12), ("tail_target", 0.01)],
            ScenarioKind::Theorem2 => &[
                ("tail_target", 0.05),
                ("bracket_width", 5e-3),
                ("alpha_closed_form", 1e-3),
            ],
            ScenarioKind::ZalcmanScan => &[("zalcman_slack", 1e-9), ("bieberbach_slack", 1e-12)],
            ScenarioKind::InequalityAudit => &[
                ("bazilevich_slack", 5e-3),
                ("bracket_width", 5e-3),
                ("defect_full", 1e-4),
                ("defect_nonfull_floor", 1e-6),
                ("grunsky_norm_slack", 1e-9),
                ("identity_residual", 1e-8),
                ("lemma3_residual", 5e-3),
                ("symmetry", 1e-10),
                ("tauber_residual", 1e-10),
            ],
        };
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn default_tail_index(self) -> usize {
        match self {
            ScenarioKind::Theorem1 => 100,
            _ => 128,
        }
    }
}

fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_w_modulus() -> f64 {
    0.3
}

fn default_grid() -> usize {
    schlicht_core::families::DEFAULT_GRID
}

fn default_t_grid() -> Vec<f64> {
    schlicht_core::tauber::default_t_grid()
}

fn default_z() -> [f64; 2] {
    [0.5, 0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    /// Schedule index range; the corpus scenarios index members instead.
    pub m_range: [usize; 2],
    pub n_range: [usize; 2],
    pub series_order: usize,
    pub grunsky_order: usize,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    /// `|w_m|` of the Koebe-transform schedule `w_m = |w| e^{i/m}`.
    #[serde(default = "default_w_modulus")]
    pub w_modulus: f64,
    #[serde(default = "default_grid")]
    pub max_modulus_grid: usize,
    /// Abel grid for the uniform-convergence proxy.
    #[serde(default = "default_t_grid")]
    pub t_grid: Vec<f64>,
    /// `N` at which the tail supremum is compared with `tail_target`.
    #[serde(default)]
    pub tail_index: Option<usize>,
    /// Evaluation point of the full-mapping defect.
    #[serde(default = "default_z")]
    pub z: [f64; 2],
    /// Corpus members to scan; all of them when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<String>>,
}

impl ScenarioConfig {
    pub fn from_path(path: &Path) -> Result<Self, LabError> {
        let text = std::fs::read_to_string(path).map_err(|source| LabError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let cfg: ScenarioConfig = serde_json::from_str(&text)
            .map_err(|e| LabError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Configuration of a scenario with every optional field at its default.
    pub fn preset(scenario: ScenarioKind) -> Self {
        let (m_range, n_range, series_order, grunsky_order) = match scenario {
            ScenarioKind::Counterexample => ([2, 64], [1, 64], 64, 8),
            ScenarioKind::Theorem1 => ([2, 200], [1, 256], 256, 8),
            ScenarioKind::Theorem2 => ([1, 64], [1, 256], 256, 8),
            ScenarioKind::ZalcmanScan => ([1, 1], [1, 32], 64, 8),
            ScenarioKind::InequalityAudit => ([1, 1], [2, 64], 130, 64),
        };
        ScenarioConfig {
            scenario,
            m_range,
            n_range,
            series_order,
            grunsky_order,
            tolerances: BTreeMap::new(),
            seed: 0,
            out_dir: default_out_dir(),
            w_modulus: default_w_modulus(),
            max_modulus_grid: default_grid(),
            t_grid: default_t_grid(),
            tail_index: None,
            z: default_z(),
            members: None,
        }
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let bad = |msg: String| Err(LabError::Config(msg));
        let [m_lo, m_hi] = self.m_range;
        let [n_lo, n_hi] = self.n_range;
        if m_lo > m_hi {
            return bad(format!("empty m range [{m_lo}, {m_hi}]"));
        }
        if n_lo > n_hi {
            return bad(format!("empty n range [{n_lo}, {n_hi}]"));
        }
        if self.series_order < 8 || self.grunsky_order < 8 {
            return bad(format!(
                "orders must be at least 8 (series {}, grunsky {})",
                self.series_order, self.grunsky_order
            ));
        }
        if self.max_modulus_grid < 64 {
            return bad(format!(
                "max_modulus_grid {} is below 64",
                self.max_modulus_grid
            ));
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return bad("t_grid must be non-empty and lie in [0, 1]".into());
        }
        if self.t_grid.windows(2).any(|w| w[1] <= w[0]) {
            return bad("t_grid must be strictly increasing".into());
        }
        let allowed = self.scenario.default_tolerances();
        if let Some(k) = self.tolerances.keys().find(|k| !allowed.contains_key(*k)) {
            let names: Vec<&str> = allowed.keys().map(String::as_str).collect();
            return bad(format!(
                "unknown tolerance {k:?} for {}; expected one of {names:?}",
                self.scenario.as_str()
            ));
        }
        if let Some((k, v)) = self
            .tolerances
            .iter()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return bad(format!(
                "tolerance {k} = {v} must be finite and non-negative"
            ));
        }
        if let Some(names) = &self.members {
            if names.is_empty() {
                return bad("members list is empty".into());
            }
            let corpus = schlicht_core::standard_corpus();
            if let Some(unknown) = names.iter().find(|n| !corpus.iter().any(|c| &c.name == *n)) {
                return bad(format!("unknown corpus member {unknown:?}"));
            }
        }
        match self.scenario {
            ScenarioKind::Counterexample | ScenarioKind::Theorem1 => {
                if m_lo < 2 {
                    return bad("dilation schedule r_m = 1 - 1/m needs m >= 2".into());
                }
                if n_lo < 1 || n_hi > self.series_order {
                    return bad(format!(
                        "n range must lie in [1, series_order = {}]",
                        self.series_order
                    ));
                }
            }
            ScenarioKind::Theorem2 => {
                if m_lo < 1 {
                    return bad("w_m schedule needs m >= 1".into());
                }
                if !(self.w_modulus > 0.0 && self.w_modulus < 1.0) {
                    return bad(format!("w_modulus {} must lie in (0, 1)", self.w_modulus));
                }
                if n_lo < 1 || n_hi > self.series_order {
                    return bad(format!(
                        "n range must lie in [1, series_order = {}]",
                        self.series_order
                    ));
                }
            }
            ScenarioKind::ZalcmanScan => {
                if n_lo < 1 || 2 * n_hi > self.series_order + 1 {
                    return bad(format!(
                        "zalcman scan needs 1 <= n and 2n - 1 <= series_order = {}",
                        self.series_order
                    ));
                }
            }
            ScenarioKind::InequalityAudit => {
                if self.series_order < 2 * self.grunsky_order + 1 {
                    return bad(format!(
                        "grunsky order {} needs series_order >= {}",
                        self.grunsky_order,
                        2 * self.grunsky_order + 1
                    ));
                }
                if n_lo < 2 || n_hi + 1 > self.series_order {
                    return bad(format!(
                        "audit n range must lie in [2, series_order - 1 = {}]",
                        self.series_order - 1
                    ));
                }
                if self.z[0].hypot(self.z[1]) >= 1.0 {
                    return bad(format!("z = {:?} lies outside the unit disk", self.z));
                }
            }
        }
        Ok(())
    }

    /// Declared tolerance, falling back to the scenario default.
    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances
            .get(name)
            .copied()
            .or_else(|| self.scenario.default_tolerances().get(name).copied())
            .unwrap_or_else(|| panic!("no tolerance named {name}"))
    }

    pub fn tail_index(&self) -> usize {
        self.tail_index
            .unwrap_or_else(|| self.scenario.default_tail_index())
    }

    pub fn m_values(&self) -> Vec<usize> {
        (self.m_range[0]..=self.m_range[1]).collect()
    }

    pub fn n_values(&self) -> Vec<usize> {
        (self.n_range[0]..=self.n_range[1]).collect()
    }
}
