use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use schlicht_lab::report::Format;
use schlicht_lab::{
    configure_threads, export_report, grunsky_summary, run_scenario, LabError, ScenarioConfig,
    ScenarioKind, ScenarioReport,
};

#[derive(Parser)]
#[command(
    name = "schlicht-lab",
    version,
    about = "Coefficient experiments on schlicht functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write `<out_dir>/<scenario>.csv` and `.json`.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the inequality audit on one corpus member.
    Audit {
        #[arg(long)]
        function: String,
        #[arg(long)]
        order: usize,
        /// Print the full report as JSON instead of the check summary.
        #[arg(long)]
        json: bool,
    },
    /// Print the Grunsky summary of one corpus member as JSON.
    Grunsky {
        #[arg(long)]
        function: String,
        #[arg(long)]
        order: usize,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        z: Complex64,
    },
}

fn parse_point(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected re,im, got {s:?}"))?;
    let part = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("{p:?}: {e}"));
    Ok(Complex64::new(part(re)?, part(im)?))
}

fn audit_config(function: &str, order: usize) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::preset(ScenarioKind::InequalityAudit);
    cfg.series_order = order;
    cfg.grunsky_order = (order.saturating_sub(1) / 2).min(64);
    cfg.n_range = [2, order.saturating_sub(1).min(64)];
    cfg.members = Some(vec![function.to_string()]);
    cfg
}

fn print_summary(rep: &ScenarioReport) {
    for c in &rep.checks {
        let coord = match (c.m, c.n) {
            (Some(m), Some(n)) => format!(" m={m} n={n}"),
            (Some(m), None) => format!(" m={m}"),
            (None, Some(n)) => format!(" n={n}"),
            (None, None) => String::new(),
        };
        let subject = if c.subject.is_empty() {
            String::new()
        } else {
            format!(" [{}]", c.subject)
        };
        println!(
            "{} {}{subject}{coord}: {} (threshold {})",
            if c.passed { "ok  " } else { "FAIL" },
            c.invariant,
            c.value,
            c.threshold
        );
    }
    let failed_rows = rep
        .rows
        .iter()
        .filter(|r| r.flag == schlicht_lab::Flag::Fail)
        .count();
    println!("{} rows, {failed_rows} failed", rep.rows.len());
}

fn execute(cli: Cli) -> Result<bool, LabError> {
    configure_threads()?;
    match cli.command {
        Command::Run { config } => {
            let cfg = ScenarioConfig::from_path(&config)?;
            let rep = run_scenario(&cfg)?;
            for format in [Format::Csv, Format::Json] {
                let path = export_report(&rep, format, &cfg.out_dir)?;
                println!("wrote {}", path.display());
            }
            for line in rep.failures() {
                println!("FAIL {line}");
            }
            Ok(rep.all_ok())
        }
        Command::Audit {
            function,
            order,
            json,
        } => {
            let rep = run_scenario(&audit_config(&function, order))?;
            if json {
                println!("{}", rep.to_json()?);
            } else {
                print_summary(&rep);
            }
            Ok(rep.all_ok())
        }
        Command::Grunsky { function, order, z } => {
            let s = grunsky_summary(&function, order, z)?;
            let text =
                serde_json::to_string_pretty(&s).map_err(|e| LabError::Json(e.to_string()))?;
            println!("{text}");
            Ok(s.max_asymmetry <= 1e-10 && s.strong_norm <= 1.0 + 1e-9)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
