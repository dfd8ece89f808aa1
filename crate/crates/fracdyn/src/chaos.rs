//! Necessary-condition order threshold for a chaotic attractor.
//!
//! Scrolls form only around index-2 saddles, and a scroll survives only
//! while its anchoring saddle stays unstable. An unstable complex pair
//! `lambda = re ± j im` (re > 0) leaves the Matignon instability sector once
//! the commensurate order drops to
//!
//! ```text
//! alpha_min = (2/pi) * arctan(|im| / re)
//! ```
//!
//! so `alpha > alpha_min` at every scroll-anchoring saddle is necessary (not
//! sufficient) for the attractor to persist.

use num_complex::Complex64;

use crate::analysis::{EquilibriumReport, SaddleIndex};
use crate::error::{Error, Result};

/// Relative tolerance used when deciding whether an eigenvalue is real.
const REAL_TOL: f64 = 1e-9;

/// Per-equilibrium threshold entry.
#[derive(Clone, Debug)]
pub struct EquilibriumThreshold {
    pub label: String,
    /// Minimal commensurate order keeping this equilibrium unstable.
    pub alpha_min: f64,
    /// The eigenvalue attaining the threshold, when one exists.
    pub attaining: Option<Complex64>,
    /// Whether the equilibrium belongs to the scroll-anchoring set
    /// (index-2 saddles).
    pub anchors_scroll: bool,
}

/// Output of [`system_chaos_threshold`].
#[derive(Clone, Debug)]
pub struct ChaosThresholdReport {
    pub per_equilibrium: Vec<EquilibriumThreshold>,
    /// Maximum threshold over the scroll-anchoring set; 1 (vacuous) when the
    /// set is empty.
    pub system_threshold: f64,
    pub diagnostic: Option<String>,
}

fn threshold_with_witness(eigs: &[Complex64]) -> (f64, Option<Complex64>) {
    let scale = eigs.iter().map(|e| e.norm()).fold(1.0f64, f64::max);
    let tol = REAL_TOL * scale;

    // A real positive eigenvalue is outside every stability sector: the
    // equilibrium is unstable at any order and imposes no lower bound.
    if let Some(e) = eigs.iter().find(|e| e.re > tol && e.im.abs() <= tol) {
        return (0.0, Some(*e));
    }

    let mut best: Option<(f64, Complex64)> = None;
    for e in eigs.iter().filter(|e| e.re > tol && e.im.abs() > tol) {
        let alpha = (2.0 / std::f64::consts::PI) * (e.im.abs() / e.re).atan();
        if best.is_none_or(|(a, _)| alpha > a) {
            best = Some((alpha, *e));
        }
    }
    match best {
        Some((alpha, e)) => (alpha, Some(e)),
        // Every eigenvalue already satisfies |arg| > pi/2: the equilibrium
        // is stable at every order and the condition is vacuous.
        None => (1.0, None),
    }
}

/// Minimal order above which the spectrum still has an eigenvalue in the
/// instability sector. Returns 0 when a real positive eigenvalue exists and
/// 1 (vacuous) when the spectrum is stable at every order.
pub fn chaos_order_threshold(eigs: &[Complex64]) -> f64 {
    threshold_with_witness(eigs).0
}

/// System-level threshold: the maximum of [`chaos_order_threshold`] over the
/// index-2 saddles in `reports`. Keeping the order above this value keeps
/// every scroll-anchoring equilibrium unstable.
pub fn system_chaos_threshold(reports: &[EquilibriumReport]) -> Result<ChaosThresholdReport> {
    if reports.is_empty() {
        return Err(Error::contract("equilibrium report list must be non-empty"));
    }
    let mut per = Vec::with_capacity(reports.len());
    let mut system: Option<f64> = None;
    for r in reports {
        let (alpha_min, attaining) = threshold_with_witness(&r.eigenvalues);
        let anchors = r.saddle == SaddleIndex::Index2;
        if anchors {
            system = Some(system.map_or(alpha_min, |s: f64| s.max(alpha_min)));
        }
        per.push(EquilibriumThreshold {
            label: r.label.clone(),
            alpha_min,
            attaining,
            anchors_scroll: anchors,
        });
    }
    let (system_threshold, diagnostic) = match system {
        Some(s) => (s, None),
        None => (
            1.0,
            Some("no index-2 saddle present: the necessary condition is vacuous".to_string()),
        ),
    };
    Ok(ChaosThresholdReport { per_equilibrium: per, system_threshold, diagnostic })
}
