//! Single-gain state-feedback design for the two-scroll system.
//!
//! The control law `u_i = -k_i (x_i - x*_i)` shifts the Jacobian at the
//! target equilibrium to `J - diag(k1, k2, k3)` without moving the
//! equilibrium itself. [`closed_loop_cubic`] expands the closed-loop
//! characteristic polynomial symbolically; [`admissible_gain_interval`]
//! sweeps `k1` (with `k2 = k3 = 0`) for the gains that keep the target
//! locally asymptotically stable at *every* commensurate order in `(0, 1)`,
//! which holds exactly when all three closed-loop eigenvalues satisfy
//! `|arg(lambda)| >= pi/2`, i.e. `Re(lambda) <= 0`.

use num_complex::Complex64;

use crate::core::{State, SystemModel, SystemParams};
use crate::error::{Error, Result};
use crate::stability::{
    cubic_discriminant, routh_hurwitz_fractional, CubicCoefficients, RhCase, StabilityVerdict,
};

/// Residual bound a feedback target must satisfy for the model it is
/// designed against.
pub const TARGET_RESIDUAL: f64 = 1e-6;

/// State feedback `u_i = -k_i (x_i - x*_i)` toward a target equilibrium.
#[derive(Clone, Debug)]
pub struct FeedbackLaw {
    gains: [f64; 3],
    target: State,
}

impl FeedbackLaw {
    /// Validates that `target` is an equilibrium of `model`
    /// (`||f(target)|| < 1e-6`).
    pub fn new(gains: [f64; 3], target: State, model: &SystemModel) -> Result<Self> {
        if model.dim() != 3 || target.dim() != 3 {
            return Err(Error::contract("state feedback is defined for 3-state models"));
        }
        if gains.iter().any(|k| !k.is_finite()) {
            return Err(Error::contract("feedback gains must be finite"));
        }
        let residual = model.residual(&target)?;
        if residual >= TARGET_RESIDUAL {
            return Err(Error::contract(format!(
                "target is not an equilibrium: ||f(target)|| = {residual}"
            )));
        }
        Ok(FeedbackLaw { gains, target })
    }

    pub fn gains(&self) -> [f64; 3] {
        self.gains
    }

    pub fn target(&self) -> &State {
        &self.target
    }

    /// The closed-loop model `f(x) + u(x)`, with the Jacobian shifted by
    /// `-diag(k)`.
    pub fn closed_loop(&self, model: &SystemModel) -> Result<SystemModel> {
        if model.dim() != 3 {
            return Err(Error::contract("state feedback is defined for 3-state models"));
        }
        let gains = self.gains;
        let target: [f64; 3] = [self.target[0], self.target[1], self.target[2]];
        let open = model.clone();
        let open_for_jac = model.clone();
        let field = move |x: &[f64], out: &mut [f64]| {
            open.eval_into(x, out);
            for i in 0..3 {
                out[i] += -gains[i] * (x[i] - target[i]);
            }
        };
        let jac = move |x: &[f64]| {
            let state = State::new(x.to_vec()).expect("closed-loop Jacobian at finite state");
            let mut j = open_for_jac
                .jacobian_at(&state)
                .expect("open-loop Jacobian evaluation");
            for i in 0..3 {
                j[(i, i)] -= gains[i];
            }
            j
        };
        Ok(SystemModel::new(3, field).with_jacobian(jac))
    }
}

/// Symbolic expansion of `det(lambda I - (J - diag(k)))` at the target
/// equilibrium `(x, y, z)` of the two-scroll system:
///
/// ```text
/// a1 = a + k1 + k2 - c + h + k3
/// a2 = d x (x-1) + (a+k1)(k2-c+h+k3) + (k2-c)(h+k3) + (1+b z) z - b d y^2
/// a3 = (a+k1)(d x (x-1) + (k2-c)(h+k3))
///      + (1+b z)(d y (x-1) + z (h+k3))
///      - b y (-d x z + d y (k2-c))
/// ```
pub fn closed_loop_cubic(
    p: &SystemParams,
    target: &State,
    gains: [f64; 3],
) -> Result<CubicCoefficients> {
    if target.dim() != 3 {
        return Err(Error::contract("target must be three-dimensional"));
    }
    let (x, y, z) = (target[0], target[1], target[2]);
    let [k1, k2, k3] = gains;
    let (a, b, c, d, h) = (p.a, p.b, p.c, p.d, p.h);

    let a1 = a + k1 + k2 - c + h + k3;
    let a2 = d * x * (x - 1.0)
        + (a + k1) * (k2 - c + h + k3)
        + (k2 - c) * (h + k3)
        + (1.0 + b * z) * z
        - b * d * y * y;
    let a3 = (a + k1) * (d * x * (x - 1.0) + (k2 - c) * (h + k3))
        + (1.0 + b * z) * (d * y * (x - 1.0) + z * (h + k3))
        - b * y * (-d * x * z + d * y * (k2 - c));
    CubicCoefficients::new(a1, a2, a3)
}

/// Options for the single-gain sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepOptions {
    pub min: f64,
    pub max: f64,
    /// Grid spacing of the initial scan.
    pub resolution: f64,
    /// Bisection width at which endpoint refinement stops.
    pub refine_tol: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { min: -50.0, max: 50.0, resolution: 1e-3, refine_tol: 1e-3 }
    }
}

/// A maximal interval of all-order stabilizing gains.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GainInterval {
    pub lower: f64,
    pub upper: f64,
    /// Set when the corresponding endpoint is the sweep boundary rather than
    /// a stability boundary.
    pub lower_clipped: bool,
    pub upper_clipped: bool,
}

impl GainInterval {
    pub fn contains(&self, k: f64) -> bool {
        k >= self.lower && k <= self.upper
    }
}

/// Result of [`admissible_gain_interval`].
#[derive(Clone, Debug)]
pub struct GainSearch {
    /// `None` when no swept gain stabilizes the target for all orders.
    pub interval: Option<GainInterval>,
    /// Human-readable evidence: the blocking condition at sampled gains for
    /// empty searches, the certifying case at the midpoint otherwise.
    pub diagnostics: Vec<String>,
}

/// True when every closed-loop eigenvalue satisfies `Re(lambda) <= 0`,
/// equivalently `|arg(lambda)| >= pi/2`: local asymptotic stability of the
/// target at every commensurate order in `(0, 1)`.
pub fn stabilizes_all_orders(p: &SystemParams, target: &State, k1: f64) -> Result<bool> {
    let cubic = closed_loop_cubic(p, target, [k1, 0.0, 0.0])?;
    Ok(max_real_part(&cubic)? <= 0.0)
}

fn max_real_part(cubic: &CubicCoefficients) -> Result<f64> {
    let roots = cubic.roots()?;
    Ok(roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Sweeps `k1` over `[opts.min, opts.max]` (with `k2 = k3 = 0`) and returns
/// the longest interval on which the closed loop is stable for all orders,
/// with endpoints refined by bisection. Endpoints coinciding with the sweep
/// boundary are flagged as clipped.
pub fn admissible_gain_interval(
    p: &SystemParams,
    target: &State,
    opts: &SweepOptions,
) -> Result<GainSearch> {
    if !opts.min.is_finite() || !opts.max.is_finite() || opts.min >= opts.max {
        return Err(Error::contract("sweep range must be a finite non-empty interval"));
    }
    if !opts.resolution.is_finite()
        || !opts.refine_tol.is_finite()
        || opts.resolution <= 0.0
        || opts.refine_tol <= 0.0
    {
        return Err(Error::contract("sweep resolution and tolerance must be positive"));
    }
    let n_steps = ((opts.max - opts.min) / opts.resolution).ceil() as usize;
    if n_steps > 5_000_000 {
        return Err(Error::contract("sweep grid would exceed 5e6 points"));
    }

    let grid_point = |i: usize| (opts.min + i as f64 * opts.resolution).min(opts.max);
    let mut stable_runs: Vec<(usize, usize)> = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..=n_steps {
        let stable = stabilizes_all_orders(p, target, grid_point(i))?;
        match (stable, run_start) {
            (true, None) => run_start = Some(i),
            (false, Some(s)) => {
                stable_runs.push((s, i - 1));
                run_start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = run_start {
        stable_runs.push((s, n_steps));
    }

    let Some(&(lo_idx, hi_idx)) = stable_runs
        .iter()
        .max_by(|a, b| (a.1 - a.0).cmp(&(b.1 - b.0)))
    else {
        let mut diagnostics = Vec::new();
        for i in [0, n_steps / 4, n_steps / 2, 3 * n_steps / 4, n_steps] {
            let k = grid_point(i);
            diagnostics.push(blocking_condition(p, target, k)?);
        }
        return Ok(GainSearch { interval: None, diagnostics });
    };

    // Bisection between the last unstable and first stable grid points.
    let lower = if lo_idx == 0 {
        opts.min
    } else {
        bisect_boundary(p, target, grid_point(lo_idx - 1), grid_point(lo_idx), opts.refine_tol)?
    };
    let upper = if hi_idx == n_steps {
        opts.max
    } else {
        bisect_boundary(p, target, grid_point(hi_idx + 1), grid_point(hi_idx), opts.refine_tol)?
    };

    let interval = GainInterval {
        lower,
        upper,
        lower_clipped: lo_idx == 0,
        upper_clipped: hi_idx == n_steps,
    };
    let mid = 0.5 * (lower + upper);
    let cubic = closed_loop_cubic(p, target, [mid, 0.0, 0.0])?;
    let verdict = routh_hurwitz_fractional(&cubic, 0.99)?;
    let case = match verdict.criterion {
        crate::stability::Criterion::RouthHurwitz { case, .. } => case,
        _ => RhCase::SectorFallback,
    };
    let diagnostics = vec![format!(
        "k1 = {mid:.4}: max Re(lambda) = {:.3e}, discriminant = {:.4e}, case {case}",
        max_real_part(&cubic)?,
        verdict.discriminant.unwrap_or(f64::NAN),
    )];
    Ok(GainSearch { interval: Some(interval), diagnostics })
}

fn bisect_boundary(
    p: &SystemParams,
    target: &State,
    mut unstable: f64,
    mut stable: f64,
    tol: f64,
) -> Result<f64> {
    debug_assert!(stabilizes_all_orders(p, target, stable)?);
    while (stable - unstable).abs() > tol {
        let mid = 0.5 * (stable + unstable);
        if stabilizes_all_orders(p, target, mid)? {
            stable = mid;
        } else {
            unstable = mid;
        }
    }
    Ok(stable)
}

fn blocking_condition(p: &SystemParams, target: &State, k1: f64) -> Result<String> {
    let cubic = closed_loop_cubic(p, target, [k1, 0.0, 0.0])?;
    let max_re = max_real_part(&cubic)?;
    let detail = if cubic.a1 <= 0.0 {
        format!("a1 = {:.4} <= 0", cubic.a1)
    } else if cubic.a3 <= 0.0 {
        format!("a3 = {:.4} <= 0", cubic.a3)
    } else {
        format!("an eigenvalue keeps Re(lambda) = {max_re:.4} > 0")
    };
    Ok(format!("k1 = {k1:.4}: not stabilizable for all orders ({detail})"))
}

/// Everything known about one gain choice at one target.
#[derive(Clone, Debug)]
pub struct GainCertificate {
    pub gains: [f64; 3],
    pub target: State,
    pub cubic: CubicCoefficients,
    pub discriminant: f64,
    /// Routh–Hurwitz verdict at `alpha` (or at `alpha = 1 - 0` semantics
    /// via the sector test when no order was supplied).
    pub verdict: StabilityVerdict,
    /// Order the verdict was evaluated at, when one was supplied.
    pub alpha: Option<f64>,
    /// All closed-loop eigenvalues satisfy `Re(lambda) <= 0`.
    pub stable_all_orders: bool,
    /// Closed-loop eigenvalues from the cubic.
    pub eigenvalues: [Complex64; 3],
    /// Set when the gains fail the all-order certificate; names the first
    /// violated condition.
    pub violated_condition: Option<String>,
    /// Populated only when a 1-D sweep was actually run.
    pub admissible_interval: Option<GainInterval>,
}

/// Builds a [`GainCertificate`] for `gains` at `target`. The admissible
/// interval is never fabricated here; run [`admissible_gain_interval`] and
/// attach its result to the certificate when the sweep is wanted.
pub fn design_report(
    p: &SystemParams,
    target: &State,
    gains: [f64; 3],
    alpha: Option<f64>,
) -> Result<GainCertificate> {
    let cubic = closed_loop_cubic(p, target, gains)?;
    let discriminant = cubic_discriminant(&cubic);
    let verdict = routh_hurwitz_fractional(&cubic, alpha.unwrap_or(1.0))?;
    let eigenvalues = cubic.roots()?;
    let max_re = eigenvalues.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max);
    let stable_all_orders = max_re <= 0.0;
    let violated_condition = if stable_all_orders {
        None
    } else if gains[1] == 0.0 && gains[2] == 0.0 {
        Some(blocking_condition(p, target, gains[0])?)
    } else {
        Some(format!("an eigenvalue keeps Re(lambda) = {max_re:.4} > 0"))
    };
    Ok(GainCertificate {
        gains,
        target: target.clone(),
        cubic,
        discriminant,
        verdict,
        alpha,
        stable_all_orders,
        eigenvalues,
        violated_condition,
        admissible_interval: None,
    })
}
