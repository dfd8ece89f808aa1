use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fracdyn_cli::commands;
use fracdyn_cli::config::{
    parse_orders3, parse_params, parse_state3, AnalyzeConfig, DesignConfig, ModelKind,
    SimulateConfig,
};
use fracdyn_cli::{exit_code, CliError};

/// Fractional-order dynamical systems toolkit: PECE trajectory simulation,
/// equilibrium/stability/chaos analysis, and state-feedback design for the
/// two-scroll benchmark system.
#[derive(Parser)]
#[command(name = "fracdyn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the system and write a trajectory CSV.
    Simulate(SimulateArgs),
    /// Report equilibria, eigenvalues, saddle indices, and chaos thresholds.
    Analyze(AnalyzeArgs),
    /// Build a gain certificate (and admissible single-gain interval) for a
    /// target equilibrium; optionally simulate the closed loop.
    Design(DesignArgs),
}

#[derive(Args)]
struct CommonModelArgs {
    /// System parameters `a,b,c,d,h`.
    #[arg(long, default_value = "3,2.7,4.7,2,9", value_name = "a,b,c,d,h")]
    params: String,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonModelArgs,
    /// Commensurate differentiation order (fraction like `9/10` or decimal
    /// like `0.9`). Mutually exclusive with --orders.
    #[arg(long, conflicts_with = "orders")]
    alpha: Option<String>,
    /// Per-state orders `q1,q2,q3` for incommensurate runs.
    #[arg(long, value_name = "q1,q2,q3")]
    orders: Option<String>,
    /// Initial condition `x,y,z`.
    #[arg(long, default_value = "5,-2,1", value_name = "x,y,z")]
    x0: String,
    /// Grid step size.
    #[arg(long, default_value_t = 0.005)]
    h: f64,
    /// Integration horizon.
    #[arg(long = "T", default_value_t = 50.0)]
    horizon: f64,
    /// Vector field to integrate.
    #[arg(long, value_enum, default_value_t = ModelKind::TwoScroll)]
    model: ModelKind,
    /// Output CSV path.
    #[arg(long, default_value = "trajectory.csv")]
    out: String,
    /// Also write a gnuplot script next to the CSV.
    #[arg(long)]
    emit_plot: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: CommonModelArgs,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct DesignArgs {
    #[command(flatten)]
    common: CommonModelArgs,
    /// Target equilibrium label (Q1..Q5).
    #[arg(long, default_value = "Q2")]
    target: String,
    /// Feedback gain on the first state.
    #[arg(long, default_value_t = 0.0)]
    k1: f64,
    /// Feedback gain on the second state (disables the 1-D sweep).
    #[arg(long, default_value_t = 0.0)]
    k2: f64,
    /// Feedback gain on the third state (disables the 1-D sweep).
    #[arg(long, default_value_t = 0.0)]
    k3: f64,
    /// Commensurate order the certificate verdict is evaluated at.
    #[arg(long, default_value = "0.90")]
    alpha: String,
    /// Lower end of the k1 sweep.
    #[arg(long, default_value_t = -50.0)]
    sweep_min: f64,
    /// Upper end of the k1 sweep.
    #[arg(long, default_value_t = 50.0)]
    sweep_max: f64,
    /// Grid resolution of the k1 sweep.
    #[arg(long, default_value_t = 1e-3)]
    resolution: f64,
    /// Also integrate the closed loop and write its trajectory CSV.
    #[arg(long)]
    simulate: bool,
    /// Initial condition of the closed-loop simulation.
    #[arg(long, default_value = "5,2,2", value_name = "x,y,z")]
    x0: String,
    /// Step size of the closed-loop simulation.
    #[arg(long, default_value_t = 0.005)]
    h: f64,
    /// Horizon of the closed-loop simulation.
    #[arg(long = "T", default_value_t = 20.0)]
    horizon: f64,
    /// Write the certificate JSON here instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// Output CSV path of the closed-loop simulation.
    #[arg(long, default_value = "controlled.csv")]
    traj_out: String,
}

fn resolve_orders(alpha: &Option<String>, orders: &Option<String>) -> Result<Vec<String>, CliError> {
    match (alpha, orders) {
        (_, Some(list)) => Ok(parse_orders3(list)?.iter().map(|o| o.to_string()).collect()),
        (Some(a), None) => {
            let o = fracdyn_cli::config::parse_order(a)?;
            Ok(vec![o.to_string(); 3])
        }
        (None, None) => Ok(vec!["9/10".to_string(); 3]),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => {
            let params = parse_params(&args.common.params)?;
            let x0 = parse_state3(&args.x0)?;
            let cfg = SimulateConfig {
                params: vec![params.a, params.b, params.c, params.d, params.h],
                orders: resolve_orders(&args.alpha, &args.orders)?,
                x0: x0.as_slice().to_vec(),
                step: args.h,
                horizon: args.horizon,
                model: args.model,
                out: args.out,
                emit_plot: args.emit_plot,
            };
            commands::run_simulate(&cfg)
        }
        Command::Analyze(args) => {
            let params = parse_params(&args.common.params)?;
            let cfg = AnalyzeConfig {
                params: vec![params.a, params.b, params.c, params.d, params.h],
                out: args.out,
            };
            commands::run_analyze(&cfg)
        }
        Command::Design(args) => {
            let params = parse_params(&args.common.params)?;
            let x0 = parse_state3(&args.x0)?;
            // Validate the order eagerly so a bad --alpha is a config error.
            fracdyn_cli::config::parse_order(&args.alpha)?;
            let cfg = DesignConfig {
                params: vec![params.a, params.b, params.c, params.d, params.h],
                target: args.target,
                gains: vec![args.k1, args.k2, args.k3],
                alpha: args.alpha,
                sweep_min: args.sweep_min,
                sweep_max: args.sweep_max,
                resolution: args.resolution,
                simulate: args.simulate,
                x0: x0.as_slice().to_vec(),
                step: args.h,
                horizon: args.horizon,
                out: args.out,
                traj_out: args.traj_out,
            };
            commands::run_design(&cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::from(exit_code::SUCCESS as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
