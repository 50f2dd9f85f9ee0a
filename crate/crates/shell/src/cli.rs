use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use spindual::json::to_pretty;
use spindual::lab::{run_scenario, ScenarioParams, ScenarioSize, SCENARIOS};
use spindual::rotation::conjugate_sequence;
use spindual::spectra::{extremal_eigs_with, full_spectrum_capped, gap_scan_with, uniform_grid, Caps, Method};
use spindual::{GateScript, Hamiltonian};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "spindual", version, about = "Pauli-string dualities for spin models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args, Clone, Copy)]
pub struct CapArgs {
    /// Largest site count for dense diagonalization.
    #[arg(long, default_value_t = Caps::default().dense)]
    pub cap_dense: usize,
    /// Largest site count for the iterative eigensolver.
    #[arg(long, default_value_t = Caps::default().iterative)]
    pub cap_iter: usize,
}

impl From<CapArgs> for Caps {
    fn from(a: CapArgs) -> Self {
        Caps { dense: a.cap_dense, iterative: a.cap_iter }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List or run duality scenarios.
    Scenario {
        #[command(subcommand)]
        action: ScenarioCmd,
    },
    /// Apply a gate script to a Hamiltonian.
    Transform {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        script: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenvalues of a Hamiltonian: all of them, or the lowest K.
    Spectrum {
        #[arg(long)]
        hamiltonian: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Gap along (1 - s) H0 + s H1 on M + 1 evenly spaced points.
    Gapscan {
        #[arg(long)]
        h0: PathBuf,
        #[arg(long)]
        h1: PathBuf,
        #[arg(long, default_value_t = 20)]
        grid: usize,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Start the HTTP session service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScenarioCmd {
    List,
    Run {
        name: String,
        /// Chain length `6`, grid `3x3`, or wire lengths `3,2`.
        #[arg(long)]
        size: Option<ScenarioSize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        g: f64,
        #[arg(long = "J", default_value_t = 1.0, allow_negative_numbers = true)]
        j: f64,
        /// Report directory; defaults to $SPINDUAL_RESULTS_DIR, then ./results.
        #[arg(long, env = "SPINDUAL_RESULTS_DIR", default_value = "results")]
        out: PathBuf,
    },
}

fn read_json<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: malformed input", path.display()))
}

fn report_name(name: &str, size: &ScenarioSize) -> String {
    format!("{name}_{}.json", size.to_string().replace(',', "-"))
}

/// Runs one command, writing results to `out`. Errors are usage or input errors.
pub fn execute(cli: Cli, out: &mut impl Write) -> Result<i32> {
    match cli.command {
        Command::Scenario { action: ScenarioCmd::List } => {
            for s in SCENARIOS {
                writeln!(out, "{:<28} sizes {:<20} {}", s.name, s.sizes.join(" "), s.summary)?;
            }
            Ok(EXIT_PASS)
        }
        Command::Scenario { action: ScenarioCmd::Run { name, size, seed, g, j, out: dir } } => {
            let params = ScenarioParams { size, seed, g, j };
            let report = run_scenario(&name, &params)?;
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(report_name(&name, &report.size));
            fs::write(&path, to_pretty(&report)).with_context(|| format!("writing {}", path.display()))?;
            for c in &report.checks {
                writeln!(out, "{}  {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
            for s in &report.skipped {
                writeln!(out, "SKIP  {s}")?;
            }
            if let Some(gap) = report.gap.as_ref().and_then(|g| g.gap) {
                writeln!(out, "gap {gap:.12}")?;
            }
            writeln!(out, "report {}", path.display())?;
            Ok(if report.passed { EXIT_PASS } else { EXIT_CHECK_FAILED })
        }
        Command::Transform { hamiltonian, script, out: dest } => {
            let h: Hamiltonian = read_json(&hamiltonian)?;
            let s: GateScript = read_json(&script)?;
            let result = to_pretty(&conjugate_sequence(&h, &s)?);
            match dest {
                Some(p) => fs::write(&p, result).with_context(|| format!("writing {}", p.display()))?,
                None => out.write_all(result.as_bytes())?,
            }
            Ok(EXIT_PASS)
        }
        Command::Spectrum { hamiltonian, k, caps } => {
            let h: Hamiltonian = read_json(&hamiltonian)?;
            let spec = match k {
                None => full_spectrum_capped(&h, caps.into())?,
                Some(k) => extremal_eigs_with(&h, k, Method::Auto, caps.into())?,
            };
            out.write_all(to_pretty(&spec).as_bytes())?;
            Ok(EXIT_PASS)
        }
        Command::Gapscan { h0, h1, grid, caps } => {
            let a: Hamiltonian = read_json(&h0)?;
            let b: Hamiltonian = read_json(&h1)?;
            let scan = gap_scan_with(&a, &b, &uniform_grid(grid), Method::Auto, caps.into())?;
            out.write_all(to_pretty(&scan).as_bytes())?;
            Ok(EXIT_PASS)
        }
        Command::Serve { port, caps } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(crate::api::serve(port, caps.into()))?;
            Ok(EXIT_PASS)
        }
    }
}

/// Parses the process arguments and runs; returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    match execute(cli, &mut std::io::stdout().lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}
