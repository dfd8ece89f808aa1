//! Command drivers shared by the binary and the integration tests.

use std::path::Path;

use fracdyn::analysis::two_scroll_equilibria;
use fracdyn::chaos::system_chaos_threshold;
use fracdyn::control::{
    admissible_gain_interval, design_report, FeedbackLaw, SweepOptions,
};
use fracdyn::{
    solve_controlled, solve_pece, Order, OrderVector, SolverConfig, State, SystemModel,
    SystemParams,
};

use crate::config::{
    AnalyzeConfig, DesignConfig, ModelKind, RunConfig, SimulateConfig,
};
use crate::output::{atomic_write, gnuplot_script, render_json, trajectory_csv};
use crate::report;
use crate::CliError;

fn orders_from_strings(strings: &[String]) -> Result<OrderVector, CliError> {
    let orders: Result<Vec<Order>, CliError> =
        strings.iter().map(|s| crate::config::parse_order(s)).collect();
    OrderVector::new(orders?).map_err(Into::into)
}

fn params_from_vec(params: &[f64]) -> Result<SystemParams, CliError> {
    if params.len() != 5 {
        return Err(CliError::Config("params must have 5 entries".into()));
    }
    SystemParams::new(params[0], params[1], params[2], params[3], params[4]).map_err(Into::into)
}

/// `simulate`: integrate and write the trajectory CSV (plus optional
/// gnuplot script).
pub fn run_simulate(cfg: &SimulateConfig) -> Result<(), CliError> {
    let params = params_from_vec(&cfg.params)?;
    let model = match cfg.model {
        ModelKind::TwoScroll => SystemModel::two_scroll(params),
        ModelKind::Zero => SystemModel::zero(3),
    };
    let x0 = State::new(cfg.x0.clone())?;
    let orders = orders_from_strings(&cfg.orders)?;
    let solver_cfg = SolverConfig::new(cfg.step, cfg.horizon, orders)?;
    let run_config = RunConfig::Simulate(cfg.clone());

    let traj = solve_pece(&model, &x0, &solver_cfg)?;
    let csv = trajectory_csv(&traj, &run_config);
    atomic_write(Path::new(&cfg.out), csv.as_bytes())?;
    if cfg.emit_plot {
        let plot_path = format!("{}.gnuplot", cfg.out);
        let png_name = format!("{}.png", cfg.out);
        atomic_write(Path::new(&plot_path), gnuplot_script(&cfg.out, &png_name).as_bytes())?;
    }
    Ok(())
}

/// `analyze`: equilibria, spectra, saddle indices, and chaos thresholds as a
/// JSON document on stdout or at `--out`.
pub fn run_analyze(cfg: &AnalyzeConfig) -> Result<(), CliError> {
    let params = params_from_vec(&cfg.params)?;
    let equilibria = two_scroll_equilibria(&params)?;
    let chaos = system_chaos_threshold(&equilibria.reports)?;
    let run_config = RunConfig::Analyze(cfg.clone());
    let document = report::analyze_report(&equilibria, &chaos, &run_config);
    emit_json(&document, cfg.out.as_deref())
}

/// `design`: gain certificate for the requested target (with the 1-D sweep
/// when `k2 = k3 = 0`), optionally followed by a closed-loop simulation.
///
/// Exit behavior: a diverging simulation surfaces as [`CliError::Diverged`];
/// an empty sweep as [`CliError::EmptyInterval`] *after* the certificate has
/// been written.
pub fn run_design(cfg: &DesignConfig) -> Result<(), CliError> {
    let params = params_from_vec(&cfg.params)?;
    if cfg.gains.len() != 3 {
        return Err(CliError::Config("gains must have 3 entries".into()));
    }
    let gains = [cfg.gains[0], cfg.gains[1], cfg.gains[2]];
    let alpha_order = crate::config::parse_order(&cfg.alpha)?;

    let equilibria = two_scroll_equilibria(&params)?;
    let target_label = cfg.target.to_uppercase();
    let target = equilibria
        .reports
        .iter()
        .find(|r| r.label.eq_ignore_ascii_case(&cfg.target))
        .ok_or_else(|| {
            CliError::Config(format!(
                "unknown target {:?}; real equilibria: {}",
                cfg.target,
                equilibria
                    .reports
                    .iter()
                    .map(|r| r.label.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        })?
        .point
        .clone();

    // The sweep is single-gain by construction; skip it when k2/k3 are used.
    let single_gain = gains[1] == 0.0 && gains[2] == 0.0;
    let sweep = if single_gain {
        let opts = SweepOptions {
            min: cfg.sweep_min,
            max: cfg.sweep_max,
            resolution: cfg.resolution,
            ..SweepOptions::default()
        };
        Some(admissible_gain_interval(&params, &target, &opts)?)
    } else {
        None
    };

    let mut cert = design_report(&params, &target, gains, Some(alpha_order.value()))?;
    if let Some(search) = &sweep {
        cert.admissible_interval = search.interval;
    }
    let diagnostics: Vec<String> = sweep.as_ref().map(|s| s.diagnostics.clone()).unwrap_or_default();
    let run_config = RunConfig::Design(cfg.clone());
    let document = report::design_report(&cert, &target_label, &diagnostics, &run_config);
    emit_json(&document, cfg.out.as_deref())?;

    if cfg.simulate {
        let model = SystemModel::two_scroll(params);
        let law = FeedbackLaw::new(gains, target, &model)?;
        let x0 = State::new(cfg.x0.clone())?;
        let orders = OrderVector::commensurate(alpha_order, 3)?;
        let solver_cfg = SolverConfig::new(cfg.step, cfg.horizon, orders)?;
        let traj = solve_controlled(&model, &law, &x0, &solver_cfg)?;
        let csv = trajectory_csv(&traj, &run_config);
        atomic_write(Path::new(&cfg.traj_out), csv.as_bytes())?;
    }

    if let Some(search) = &sweep {
        if search.interval.is_none() {
            return Err(CliError::EmptyInterval(search.diagnostics.join("; ")));
        }
    }
    Ok(())
}

fn emit_json(document: &serde_json::Value, out: Option<&str>) -> Result<(), CliError> {
    let rendered = render_json(document);
    match out {
        Some(path) => atomic_write(Path::new(path), rendered.as_bytes())?,
        None => print!("{rendered}"),
    }
    Ok(())
}
