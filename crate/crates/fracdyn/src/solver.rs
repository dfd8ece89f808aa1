//! PECE predictor–corrector integration of Caputo fractional initial value
//! problems on a uniform grid.
//!
//! For the system `D^{q_i} x_i = f_i(x)` with `0 < q_i <= 1` and initial
//! condition `x(0) = x0`, the scheme advances from `t_n` to `t_{n+1}` with
//! the fractional Adams–Bashforth predictor
//!
//! ```text
//! x_i^P(t_{n+1}) = x0_i + (1/Gamma(q_i)) * sum_{j=0}^{n} b_{j,n+1} f_i(x(t_j))
//! b_{j,n+1}      = (h^{q_i}/q_i) * ((n+1-j)^{q_i} - (n-j)^{q_i})
//! ```
//!
//! followed by one fractional Adams–Moulton correction
//!
//! ```text
//! x_i(t_{n+1}) = x0_i + (h^{q_i}/Gamma(q_i+2))
//!                * ( f_i(x^P(t_{n+1})) + sum_{j=0}^{n} a_{j,n+1} f_i(x(t_j)) )
//! a_{0,n+1}    = n^{q_i+1} - (n - q_i)(n+1)^{q_i}
//! a_{j,n+1}    = (n-j+2)^{q_i+1} + (n-j)^{q_i+1} - 2(n-j+1)^{q_i+1},  1 <= j <= n
//! ```
//!
//! The full history enters every step, so one solve costs `O(N^2)` vector
//! field evaluations of weighted sums. No short-memory truncation is applied:
//! the long-tail kernel is exactly what distinguishes fractional trajectories
//! from integer-order ones.

use crate::core::{OrderVector, State, SystemModel};
use crate::error::{Error, Result};

use crate::control::FeedbackLaw;

/// Any trajectory component beyond this magnitude aborts the solve with
/// [`Error::Diverged`] instead of propagating NaNs.
pub const BLOWUP_BOUND: f64 = 1e9;

/// Uniform-grid solver configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    step: f64,
    horizon: f64,
    orders: OrderVector,
}

impl SolverConfig {
    /// `step` and `horizon` must be positive and `horizon/step` must round
    /// to at least one step.
    pub fn new(step: f64, horizon: f64, orders: OrderVector) -> Result<Self> {
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::contract("step size must be positive"));
        }
        if !horizon.is_finite() || horizon <= 0.0 {
            return Err(Error::contract("horizon must be positive"));
        }
        let n = (horizon / step).round();
        if n < 1.0 {
            return Err(Error::contract("horizon shorter than one step"));
        }
        if n > 50_000_000.0 {
            return Err(Error::contract("grid would exceed 5e7 points"));
        }
        Ok(SolverConfig { step, horizon, orders })
    }

    /// Commensurate shorthand: each of the `dim` states uses `alpha`.
    pub fn commensurate(step: f64, horizon: f64, alpha: crate::core::Order, dim: usize) -> Result<Self> {
        SolverConfig::new(step, horizon, OrderVector::commensurate(alpha, dim)?)
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn orders(&self) -> &OrderVector {
        &self.orders
    }

    /// Number of steps `N = round(horizon/step)`; the grid has `N + 1` points.
    pub fn step_count(&self) -> usize {
        (self.horizon / self.step).round() as usize
    }
}

/// A uniform-grid solution, `states[k]` at `times[k] = k * h`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<State>,
    config: SolverConfig,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> &State {
        &self.states[0]
    }

    pub fn last(&self) -> &State {
        self.states.last().expect("trajectory has at least the initial point")
    }

    /// Largest absolute component over the whole trajectory.
    pub fn max_abs_component(&self) -> f64 {
        self.states
            .iter()
            .flat_map(|s| s.iter())
            .fold(0.0f64, |acc, c| acc.max(c.abs()))
    }

    /// States in the final quarter of the horizon (diagnostics for
    /// convergence/chaos classification).
    pub fn final_quarter(&self) -> &[State] {
        let start = (self.states.len() * 3) / 4;
        &self.states[start..]
    }

    /// Maximum distance from any final-quarter state to the final state.
    /// Small drift means the trajectory has settled.
    pub fn final_quarter_drift(&self) -> f64 {
        let last = self.last();
        self.final_quarter()
            .iter()
            .map(|s| s.distance(last))
            .fold(0.0, f64::max)
    }

    /// Maximum pairwise distance between final-quarter states. Large spread
    /// with bounded components is the signature of a non-converging orbit.
    pub fn final_quarter_spread(&self) -> f64 {
        let tail = self.final_quarter();
        let mut spread = 0.0f64;
        for (i, a) in tail.iter().enumerate() {
            for b in tail.iter().skip(i + 1) {
                spread = spread.max(a.distance(b));
            }
        }
        spread
    }
}

/// Integrates `D^{q_i} x_i = f_i(x)`, `x(0) = x0` over the configured grid.
pub fn solve_pece(model: &SystemModel, x0: &State, cfg: &SolverConfig) -> Result<Trajectory> {
    let n = model.dim();
    if x0.dim() != n {
        return Err(Error::contract(format!(
            "initial condition dimension {} does not match model dimension {}",
            x0.dim(),
            n
        )));
    }
    if cfg.orders.len() != n {
        return Err(Error::contract(format!(
            "order vector length {} does not match model dimension {}",
            cfg.orders.len(),
            n
        )));
    }

    let steps = cfg.step_count();
    let h = cfg.step;
    let q = cfg.orders.values();

    // Per-component constants.
    let mut inv_gamma_q = vec![0.0; n];
    let mut hq_over_q = vec![0.0; n];
    let mut hq_over_gamma_q2 = vec![0.0; n];
    for i in 0..n {
        let hq = h.powf(q[i]);
        inv_gamma_q[i] = 1.0 / libm::tgamma(q[i]);
        hq_over_q[i] = hq / q[i];
        hq_over_gamma_q2[i] = hq / libm::tgamma(q[i] + 2.0);
    }

    // Power tables: kq[i*(steps+2) + k] = k^{q_i}, kq1 likewise for q_i + 1.
    // The weights only ever need powers of integers up to steps + 1.
    let table_len = steps + 2;
    let mut kq = vec![0.0; n * table_len];
    let mut kq1 = vec![0.0; n * table_len];
    for i in 0..n {
        for k in 0..table_len {
            kq[i * table_len + k] = (k as f64).powf(q[i]);
            kq1[i * table_len + k] = (k as f64).powf(q[i] + 1.0);
        }
    }

    let mut states = vec![0.0; (steps + 1) * n];
    let mut fvals = vec![0.0; (steps + 1) * n];
    states[..n].copy_from_slice(x0.as_slice());
    {
        let (head, _) = fvals.split_at_mut(n);
        model.eval_into(x0.as_slice(), head);
    }

    let mut predictor = vec![0.0; n];
    let mut pred_sum = vec![0.0; n];
    let mut corr_sum = vec![0.0; n];
    let mut f_pred = vec![0.0; n];

    for step in 0..steps {
        pred_sum.fill(0.0);
        corr_sum.fill(0.0);

        // History sums. For j = 0 the Adams–Moulton weight has its own
        // closed form, handled after the loop.
        for j in 0..=step {
            let frow = &fvals[j * n..(j + 1) * n];
            let m = step - j;
            for i in 0..n {
                let t = &kq[i * table_len..(i + 1) * table_len];
                pred_sum[i] += (t[m + 1] - t[m]) * frow[i];
            }
            if j >= 1 {
                for i in 0..n {
                    let t1 = &kq1[i * table_len..(i + 1) * table_len];
                    corr_sum[i] += (t1[m + 2] + t1[m] - 2.0 * t1[m + 1]) * frow[i];
                }
            }
        }
        for i in 0..n {
            let a0 = kq1[i * table_len + step] - (step as f64 - q[i]) * kq[i * table_len + step + 1];
            corr_sum[i] += a0 * fvals[i];
            predictor[i] = x0[i] + inv_gamma_q[i] * hq_over_q[i] * pred_sum[i];
        }

        model.eval_into(&predictor, &mut f_pred);

        let row = (step + 1) * n;
        let mut ok = true;
        for i in 0..n {
            let v = x0[i] + hq_over_gamma_q2[i] * (f_pred[i] + corr_sum[i]);
            if !v.is_finite() || v.abs() > BLOWUP_BOUND {
                ok = false;
            }
            states[row + i] = v;
        }
        if !ok {
            return Err(Error::Diverged { last_valid: step, t: step as f64 * h });
        }
        model.eval_into(&states[row..row + n], &mut fvals[row..row + n]);
    }

    let times: Vec<f64> = (0..=steps).map(|k| k as f64 * h).collect();
    let out_states: Result<Vec<State>> = (0..=steps)
        .map(|k| State::new(states[k * n..(k + 1) * n].to_vec()))
        .collect();
    Ok(Trajectory { times, states: out_states?, config: cfg.clone() })
}

/// Integrates the closed-loop system `D^q x = f(x) + u(x)` with the state
/// feedback `u_i = -k_i (x_i - x*_i)`.
pub fn solve_controlled(
    model: &SystemModel,
    controller: &FeedbackLaw,
    x0: &State,
    cfg: &SolverConfig,
) -> Result<Trajectory> {
    let closed = controller.closed_loop(model)?;
    solve_pece(&closed, x0, cfg)
}
