//! Equilibrium location, eigenvalue extraction, and saddle classification.
//!
//! The two-scroll system has five equilibria with closed forms built from
//!
//! ```text
//! Delta  = d^2 + 4 c h d
//! Lambda = (2 a b / h) (d + 2 c h + sqrt(Delta))
//! Gamma  = (2 a b / h) (d + 2 c h - sqrt(Delta))
//! ```
//!
//! The closed forms are used only as Newton seeds; every reported point is
//! refined against `f = 0` until its residual drops below `1e-9`. The
//! `x = (d - sqrt(Delta))/(2d)` branch is seeded with both the `Lambda` and
//! `Gamma` radicands in its y-component (the two readings disagree at the
//! formula level but land in the same Newton basin) and the report records
//! which seed the refined point actually matched.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::core::{State, SystemModel, SystemParams};
use crate::error::{Error, Result};
use crate::poly;

/// Residual bound every reported equilibrium satisfies after refinement.
pub const EQUILIBRIUM_RESIDUAL: f64 = 1e-9;

/// Relative tolerance for conjugate-pair detection in [`classify_saddle`].
pub const CONJUGACY_TOL: f64 = 1e-9;

/// Saddle classification of a three-dimensional equilibrium with eigenvalues
/// `a` (real) and `b ± jc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaddleIndex {
    /// No admissible real + conjugate-pair split, or signs do not match a
    /// saddle (`ab >= 0` or `c = 0`).
    NotSaddle,
    /// `a > 0`, `b < 0`: connects scrolls, does not anchor them.
    Index1,
    /// `a < 0`, `b > 0`: scrolls form only around these.
    Index2,
}

impl std::fmt::Display for SaddleIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SaddleIndex::NotSaddle => "not-saddle",
            SaddleIndex::Index1 => "index-1",
            SaddleIndex::Index2 => "index-2",
        };
        f.write_str(s)
    }
}

/// One refined equilibrium with its spectrum.
#[derive(Clone, Debug)]
pub struct EquilibriumReport {
    pub label: String,
    pub point: State,
    pub eigenvalues: Vec<Complex64>,
    pub saddle: SaddleIndex,
    /// `||f(point)||` after refinement.
    pub residual: f64,
}

/// A formal equilibrium that could not be reported (complex-valued closed
/// form or failed refinement).
#[derive(Clone, Debug)]
pub struct DegenerateEquilibrium {
    pub label: String,
    pub reason: String,
}

/// Output of [`two_scroll_equilibria`].
#[derive(Clone, Debug)]
pub struct EquilibriaReport {
    pub reports: Vec<EquilibriumReport>,
    pub degenerate: Vec<DegenerateEquilibrium>,
    /// Bookkeeping notes, e.g. which radicand seeded each refined point.
    pub notes: Vec<String>,
}

/// Newton iteration on `f(x) = 0` from `seed`, using the model Jacobian.
pub fn newton_refine(
    model: &SystemModel,
    seed: &State,
    tol: f64,
    max_iter: usize,
) -> Result<State> {
    let mut x: Vec<f64> = seed.as_slice().to_vec();
    let n = model.dim();
    if seed.dim() != n {
        return Err(Error::contract("seed dimension does not match model"));
    }
    for _ in 0..max_iter {
        let state = State::new(x.clone())?;
        let f = model.eval(&state)?;
        if f.norm() < tol {
            return Ok(state);
        }
        let j = model.jacobian_at(&state)?;
        let rhs = nalgebra::DVector::from_iterator(n, f.iter().map(|v| -v));
        let delta = j
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::numeric("singular Jacobian in Newton refinement"))?;
        for i in 0..n {
            x[i] += delta[i];
            if !x[i].is_finite() {
                return Err(Error::numeric("Newton iterate left the finite domain"));
            }
        }
    }
    Err(Error::numeric(format!(
        "Newton refinement did not reach residual {tol} in {max_iter} iterations"
    )))
}

/// All real equilibria of the two-scroll system, refined to residual below
/// [`EQUILIBRIUM_RESIDUAL`]. Complex-valued formal equilibria are reported
/// under `degenerate` rather than silently dropped.
pub fn two_scroll_equilibria(p: &SystemParams) -> Result<EquilibriaReport> {
    let model = SystemModel::two_scroll(*p);
    let mut reports = Vec::with_capacity(5);
    let mut degenerate = Vec::new();
    let mut notes = Vec::new();

    // The origin solves all three equations exactly.
    push_report(&model, "Q1", State::from_xyz(0.0, 0.0, 0.0), &mut reports)?;

    let delta = p.d * p.d + 4.0 * p.c * p.h * p.d;
    let sqrt_delta = delta.sqrt();
    let lambda = (2.0 * p.a * p.b / p.h) * (p.d + 2.0 * p.c * p.h + sqrt_delta);
    let gamma = (2.0 * p.a * p.b / p.h) * (p.d + 2.0 * p.c * p.h - sqrt_delta);
    let x_plus = (p.d + sqrt_delta) / (2.0 * p.d);
    let x_minus = (p.d - sqrt_delta) / (2.0 * p.d);

    // Q2/Q3 live on the x_plus branch and use the Lambda radicand.
    if 1.0 + lambda < 0.0 {
        degenerate.push(DegenerateEquilibrium {
            label: "Q2".into(),
            reason: format!("radicand 1 + Lambda = {} is negative", 1.0 + lambda),
        });
        degenerate.push(DegenerateEquilibrium {
            label: "Q3".into(),
            reason: format!("radicand 1 + Lambda = {} is negative", 1.0 + lambda),
        });
    } else {
        let root = (1.0 + lambda).sqrt();
        for (label, sign) in [("Q2", 1.0), ("Q3", -1.0)] {
            let w = -1.0 + sign * root;
            let seed = State::from_xyz(
                x_plus,
                (p.h / p.b) * w / (p.d + sqrt_delta),
                w / (2.0 * p.b),
            );
            refine_labeled(&model, label, &[("lambda", seed)], &mut reports, &mut degenerate, &mut notes)?;
        }
    }

    // Q4/Q5 live on the x_minus branch. The y-component is seeded with both
    // the Lambda and Gamma radicands; refinement decides.
    if 1.0 + gamma < 0.0 {
        degenerate.push(DegenerateEquilibrium {
            label: "Q4".into(),
            reason: format!("radicand 1 + Gamma = {} is negative", 1.0 + gamma),
        });
        degenerate.push(DegenerateEquilibrium {
            label: "Q5".into(),
            reason: format!("radicand 1 + Gamma = {} is negative", 1.0 + gamma),
        });
    } else {
        let root_g = (1.0 + gamma).sqrt();
        let root_l = (1.0 + lambda).max(0.0).sqrt();
        for (label, sign) in [("Q4", 1.0), ("Q5", -1.0)] {
            let wg = -1.0 + sign * root_g;
            let wl = -1.0 + sign * root_l;
            let gamma_seed = State::from_xyz(
                x_minus,
                (p.h / p.b) * wg / (p.d - sqrt_delta),
                wg / (2.0 * p.b),
            );
            let lambda_seed = State::from_xyz(
                x_minus,
                (p.h / p.b) * wl / (p.d - sqrt_delta),
                wg / (2.0 * p.b),
            );
            refine_labeled(
                &model,
                label,
                &[("gamma", gamma_seed), ("lambda", lambda_seed)],
                &mut reports,
                &mut degenerate,
                &mut notes,
            )?;
        }
    }

    Ok(EquilibriaReport { reports, degenerate, notes })
}

fn refine_labeled(
    model: &SystemModel,
    label: &str,
    seeds: &[(&str, State)],
    reports: &mut Vec<EquilibriumReport>,
    degenerate: &mut Vec<DegenerateEquilibrium>,
    notes: &mut Vec<String>,
) -> Result<()> {
    let mut refined: Option<(State, Vec<&str>)> = None;
    for (name, seed) in seeds {
        match newton_refine(model, seed, 1e-12, 100) {
            Ok(point) => match &mut refined {
                None => refined = Some((point, vec![name])),
                Some((existing, names)) => {
                    if existing.distance(&point) < 1e-6 {
                        names.push(name);
                    }
                }
            },
            Err(_) => continue,
        }
    }
    match refined {
        Some((point, names)) => {
            notes.push(format!("{label}: refined from {} seed(s)", names.join("+")));
            push_report(model, label, point, reports)
        }
        None => {
            degenerate.push(DegenerateEquilibrium {
                label: label.to_string(),
                reason: "Newton refinement failed from every closed-form seed".into(),
            });
            Ok(())
        }
    }
}

fn push_report(
    model: &SystemModel,
    label: &str,
    point: State,
    reports: &mut Vec<EquilibriumReport>,
) -> Result<()> {
    let residual = model.residual(&point)?;
    if residual >= EQUILIBRIUM_RESIDUAL {
        return Err(Error::numeric(format!(
            "{label} residual {residual} exceeds {EQUILIBRIUM_RESIDUAL}"
        )));
    }
    let eigenvalues = eigenvalues_at(model, &point)?;
    let saddle = classify_saddle(&eigenvalues);
    reports.push(EquilibriumReport { label: label.to_string(), point, eigenvalues, saddle, residual });
    Ok(())
}

/// Eigenvalues of the model Jacobian at `point`, residual-checked against
/// the characteristic polynomial: each returned `lambda` must satisfy
/// `|det(lambda I - J)| < 1e-8 * max(1, ||J||_F)^n`.
pub fn eigenvalues_at(model: &SystemModel, point: &State) -> Result<Vec<Complex64>> {
    let j = model.jacobian_at(point)?;
    let eigs = poly::complex_eigenvalues(&j)?;
    let n = j.nrows();
    let scale = j.norm().max(1.0).powi(n as i32);
    for lambda in &eigs {
        let shifted = DMatrix::from_fn(n, n, |r, c| {
            let diag = if r == c { *lambda } else { Complex64::new(0.0, 0.0) };
            diag - Complex64::new(j[(r, c)], 0.0)
        });
        let det = shifted.determinant();
        if det.norm() >= 1e-8 * scale {
            return Err(Error::numeric(format!(
                "eigenvalue {lambda} fails the characteristic residual: |det| = {}",
                det.norm()
            )));
        }
    }
    Ok(eigs)
}

/// Splits three eigenvalues into one real value `a` and a conjugate pair
/// `b ± jc` (relative tolerance [`CONJUGACY_TOL`]), then classifies:
/// index 2 for `a < 0 < b`, index 1 for `b < 0 < a`, not-saddle otherwise.
pub fn classify_saddle(eigs: &[Complex64]) -> SaddleIndex {
    if eigs.len() != 3 {
        return SaddleIndex::NotSaddle;
    }
    let scale = eigs.iter().map(|e| e.norm()).fold(1.0f64, f64::max);
    let tol = CONJUGACY_TOL * scale;

    for real_idx in 0..3 {
        let (i, j) = match real_idx {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let real = eigs[real_idx];
        let pair_ok = (eigs[i] - eigs[j].conj()).norm() <= tol;
        let real_ok = real.im.abs() <= tol;
        let c_nonzero = eigs[i].im.abs() > tol;
        if real_ok && pair_ok && c_nonzero {
            let a = real.re;
            let b = eigs[i].re;
            if a < 0.0 && b > 0.0 {
                return SaddleIndex::Index2;
            }
            if a > 0.0 && b < 0.0 {
                return SaddleIndex::Index1;
            }
            return SaddleIndex::NotSaddle;
        }
    }
    SaddleIndex::NotSaddle
}
