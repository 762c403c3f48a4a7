use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use axiswirl::euler::SnapshotFormat;
use axiswirl::scenario::{self, Mode, RunSummary, SummaryStatus};

#[derive(Parser)]
#[command(
    version,
    about = "On-axis dynamics of axisymmetric Euler flow with swirl"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Scenario file (TOML). Its `mode`, if present, must match the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides `output.dir` from the scenario.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Snapshot format for pde-sim.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, short, global = true)]
    verbose: bool,
    /// Worker threads for the parallel solvers.
    #[arg(long, global = true, env = "AXISWIRL_THREADS")]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Evaluate the unforced closed-form solution.
    ClosedForm,
    /// Integrate the forced axis system.
    Integrate,
    /// Run the axisymmetric solver and check the reduced equations along axis particles.
    PdeSim,
    /// Check the on-axis identities on the synthetic fields.
    CheckLemma,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Csv,
    Binary,
}

fn main() -> ExitCode {
    match run() {
        Ok(summary) => match summary.terminal_status {
            SummaryStatus::CompletedHorizon => ExitCode::SUCCESS,
            SummaryStatus::BlowUpDetected => ExitCode::from(2),
            SummaryStatus::StepFailure | SummaryStatus::Suspect => ExitCode::from(1),
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Status line and residual table on stdout. A closed pipe (`| head`) is not an error.
fn print_report(summary: &RunSummary) -> Result<()> {
    let mut text = format!(
        "status: {}\n",
        serde_json::to_string(&summary.terminal_status)?.trim_matches('"')
    );
    let times = [
        ("t_blow predicted", summary.t_blow_predicted),
        ("t_blow observed", summary.t_blow_observed),
        ("q < 0 first at", summary.t_hypothesis_violated),
    ];
    for (label, t) in times {
        if let Some(t) = t {
            text += &format!("{label:16}: {t}\n");
        }
    }
    if !summary.max_residuals.is_empty() {
        let width = summary
            .max_residuals
            .keys()
            .map(String::len)
            .max()
            .unwrap_or(0);
        text += &format!("{:width$}  value\n", "residual");
        for (k, v) in &summary.max_residuals {
            text += &format!("{k:width$}  {v:.3e}\n");
        }
    }
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn run() -> Result<RunSummary> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let mode = match cli.command {
        Command::ClosedForm => Mode::ClosedForm,
        Command::Integrate => Mode::Integrate,
        Command::PdeSim => Mode::PdeSim,
        Command::CheckLemma => Mode::CheckLemma,
    };
    let text = match &cli.config {
        Some(path) => {
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
        }
        None => String::new(),
    };
    let mut config = scenario::parse_config_for(&text, mode).context("loading scenario")?;
    if let Some(f) = cli.format {
        config.output.format = match f {
            Format::Csv => SnapshotFormat::Csv,
            Format::Binary => SnapshotFormat::Binary,
        };
    }
    let out = cli
        .out
        .or_else(|| config.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    if cli.verbose {
        eprintln!("{mode}: writing to {}", out.display());
    }

    let summary = scenario::run(&config, &out).with_context(|| format!("{mode} run failed"))?;

    print_report(&summary)?;
    if cli.verbose {
        for a in &summary.artifacts {
            eprintln!("wrote {}", out.join(a).display());
        }
    }
    Ok(summary)
}
