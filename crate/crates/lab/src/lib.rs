//! Scenario runner for the coefficient experiments: builds the preset
//! families, drives the core modules over `(m, n)` grids and writes reports.

use std::path::PathBuf;

use thiserror::Error;

pub mod config;
pub mod report;
pub mod scenarios;

pub use config::{ScenarioConfig, ScenarioKind};
pub use report::{export_report, Check, Flag, Format, Row, ScenarioReport};
pub use scenarios::{grunsky_summary, run_scenario, GrunskySummary};

pub const THREADS_ENV: &str = "SCHLICHT_LAB_THREADS";

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("json error: {0}")]
    Json(String),
    #[error("{} failed: {message}", coordinates(*m, *n))]
    Module {
        m: Option<usize>,
        n: Option<usize>,
        message: String,
    },
}

fn coordinates(m: Option<usize>, n: Option<usize>) -> String {
    match (m, n) {
        (Some(m), Some(n)) => format!("(m={m}, n={n})"),
        (Some(m), None) => format!("(m={m})"),
        (None, Some(n)) => format!("(n={n})"),
        (None, None) => "computation".to_string(),
    }
}

impl LabError {
    /// Wraps a module error with the grid point it came from.
    pub fn at<E: std::fmt::Display>(m: Option<usize>, n: Option<usize>) -> impl Fn(E) -> LabError {
        move |e| LabError::Module {
            m,
            n,
            message: e.to_string(),
        }
    }
}

/// Sizes the global rayon pool from `SCHLICHT_LAB_THREADS` when it is set.
pub fn configure_threads() -> Result<(), LabError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        LabError::Config(format!("{THREADS_ENV}={raw:?} is not a positive integer"))
    })?;
    // a pool built earlier in the process keeps its size
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}
