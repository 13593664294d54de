use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use photon_bell::execution::ExecutionMode;
use photon_bell::scenario_cli::{load_config, run_sweep, Overrides, Scenario};

/// Sweeps of the heralded Bell-pair protocol, written as CSV.
#[derive(Debug, Parser)]
#[command(name = "photon-bell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Interaction time sweep; the axis is Ω̄τ/2π.
    SweepTau(Common),
    /// Photon loss sweep at a fixed interaction time; the axis is γT.
    SweepLoss(Common),
    /// Cavity-to-cavity transfer against the number of fiber modes.
    FiberTransfer(Common),
    /// One interaction time, optionally with loss given by --gamma-t-max.
    SinglePoint(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration; flags take precedence.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    nbar: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta_over_omega0: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tau_start: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    tau_stop: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_t_max: Option<f64>,
    /// Output CSV path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Evaluate grid points one after another.
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (scenario, args) = match cli.command {
        Command::SweepTau(a) => (Scenario::SweepTau, a),
        Command::SweepLoss(a) => (Scenario::SweepLoss, a),
        Command::FiberTransfer(a) => (Scenario::FiberTransfer, a),
        Command::SinglePoint(a) => (Scenario::SinglePoint, a),
    };
    let overrides = Overrides {
        scenario: Some(scenario),
        nbar: args.nbar,
        delta_over_omega0: args.delta_over_omega0,
        tau_start: args.tau_start,
        tau_stop: args.tau_stop,
        steps: args.steps,
        gamma_t_max: args.gamma_t_max,
        out: args.out,
        execution: args.sequential.then_some(ExecutionMode::Sequential),
    };
    let result = load_config(args.config.as_deref(), &overrides).and_then(|cfg| {
        let rows = run_sweep(&cfg)?;
        Ok((cfg, rows))
    });
    match result {
        Ok((cfg, rows)) => {
            eprintln!(
                "{}: wrote {} rows to {}",
                cfg.scenario,
                rows.len(),
                cfg.output_path.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
