//! Command-line front end: evaluate single scenarios, linear sweeps,
//! grid-search optimization, and the self-check suites.
//!
//! Exit codes: 0 on success, 1 when verification fails, 2 for usage,
//! parse, or domain errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use bellsplit::report::{evaluate_scenario, ScenarioReport, CSV_HEADER, SWEEP_CSV_HEADER};
use bellsplit::sweep::{optimize, run_sweep, Objective, SweepSpec};
use bellsplit::verify::{all_passed, run_verify, VerifyOptions};
use bellsplit::{Error, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "bellsplit",
    version,
    about = "Two single photons on a polarization-dependent beam splitter: \
             Bell-state coefficients, coincidence statistics, and self checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one configuration and emit its CSV row.
    Run {
        /// Key-value configuration file; omitted means the built-in
        /// default (case 1, r^2 = 0.6, gamma 1).
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the CSV to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the ten-line output-state serialization.
        #[arg(long)]
        dump_state: bool,
    },
    /// Evaluate a linear grid over one parameter.
    Sweep {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Grid as "name:start:stop:steps", e.g. "eps:-0.3:0.3:13".
        #[arg(long)]
        sweep: String,
        /// Write the CSV to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive grid search; one --sweep axis per parameter.
    Optimize {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Repeatable axis as "name:start:stop:steps".
        #[arg(long = "sweep")]
        sweeps: Vec<String>,
        /// One of max_cross_side_rate, max_min_bell_coefficient,
        /// target_balance.
        #[arg(long)]
        objective: String,
    },
    /// Run the self-check suites and print one verdict line per suite.
    Verify {
        /// Seed for the randomized suites.
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Random draws per randomized suite.
        #[arg(long, default_value_t = 1000)]
        draws: usize,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<ScenarioConfig, Error> {
    match path {
        Some(p) => ScenarioConfig::load(p),
        None => Ok(ScenarioConfig::default()),
    }
}

fn emit_warnings(report: &ScenarioReport, context: Option<&str>) {
    for warning in &report.warnings {
        match context {
            Some(c) => eprintln!("warning: {c}: {warning}"),
            None => eprintln!("warning: {warning}"),
        }
    }
}

fn write_text(out: &Option<PathBuf>, text: &str) -> Result<bool, Error> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|source| Error::File {
                path: path.clone(),
                source,
            })?;
            Ok(true)
        }
        None => Ok(false),
    }
}

fn cmd_run(
    config: &Option<PathBuf>,
    out: &Option<PathBuf>,
    dump_state: bool,
) -> Result<(), Error> {
    let config = load_config(config)?;
    let report = evaluate_scenario(&config);
    emit_warnings(&report, None);
    let csv = format!("{CSV_HEADER}\n{}\n", report.csv_row());
    let written = write_text(out, &csv)?;
    if !written {
        print!("{csv}");
        if dump_state {
            println!();
        }
    }
    if dump_state {
        print!("{}", report.output.interfering_state().canonical_text());
    }
    Ok(())
}

fn cmd_sweep(
    config: &Option<PathBuf>,
    sweep: &str,
    out: &Option<PathBuf>,
) -> Result<(), Error> {
    let config = load_config(config)?;
    let spec = SweepSpec::from_str(sweep)?;
    let reports = run_sweep(&config, &spec)?;
    let mut csv = String::from(SWEEP_CSV_HEADER);
    csv.push('\n');
    for (report, value) in reports.iter().zip(spec.values()) {
        emit_warnings(report, Some(&format!("{} = {}", spec.parameter, value)));
        csv.push_str(&report.sweep_csv_row());
        csv.push('\n');
    }
    if !write_text(out, &csv)? {
        print!("{csv}");
    }
    Ok(())
}

fn cmd_optimize(
    config: &Option<PathBuf>,
    sweeps: &[String],
    objective: &str,
) -> Result<(), Error> {
    let config = load_config(config)?;
    let objective = Objective::from_str(objective)?;
    let axes = sweeps
        .iter()
        .map(|s| SweepSpec::from_str(s))
        .collect::<Result<Vec<_>, Error>>()?;
    let outcome = optimize(&config, &axes, objective)?;
    emit_warnings(&outcome.best_report, Some("best point"));
    println!("{outcome}");
    Ok(())
}

fn cmd_verify(seed: u64, draws: usize) -> ExitCode {
    let outcomes = run_verify(&VerifyOptions { seed, draws });
    for outcome in &outcomes {
        println!("{outcome}");
    }
    if all_passed(&outcomes) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run {
            config,
            out,
            dump_state,
        } => cmd_run(config, out, *dump_state),
        Command::Sweep { config, sweep, out } => cmd_sweep(config, sweep, out),
        Command::Optimize {
            config,
            sweeps,
            objective,
        } => cmd_optimize(config, sweeps, objective),
        Command::Verify { seed, draws } => return cmd_verify(*seed, *draws),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
