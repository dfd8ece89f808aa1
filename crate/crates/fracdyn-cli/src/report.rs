//! JSON report builders. Reports are assembled as `serde_json::Value`
//! objects (BTreeMap-backed, so keys serialize in sorted order) with every
//! number at full precision.

use fracdyn::analysis::EquilibriaReport;
use fracdyn::chaos::ChaosThresholdReport;
use fracdyn::control::GainCertificate;
use fracdyn::stability::Criterion;
use fracdyn::Complex64;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;

fn complex(value: &Complex64) -> Value {
    json!([value.re, value.im])
}

fn meta(config: &RunConfig) -> Value {
    serde_json::to_value(config).expect("config serializes")
}

/// The `analyze` document: equilibria, spectra, saddle indices, per-point
/// and system chaos thresholds, and any degenerate (non-real) equilibria.
pub fn analyze_report(
    equilibria: &EquilibriaReport,
    chaos: &ChaosThresholdReport,
    config: &RunConfig,
) -> Value {
    let mut points = Map::new();
    for r in &equilibria.reports {
        let threshold = chaos
            .per_equilibrium
            .iter()
            .find(|t| t.label == r.label);
        points.insert(
            r.label.clone(),
            json!({
                "point": r.point.as_slice(),
                "eigenvalues": r.eigenvalues.iter().map(complex).collect::<Vec<_>>(),
                "residual": r.residual,
                "saddle_index": r.saddle.to_string(),
                "chaos_order_threshold": threshold.map(|t| t.alpha_min),
                "attaining_eigenvalue": threshold
                    .and_then(|t| t.attaining.as_ref())
                    .map(complex),
                "anchors_scroll": threshold.map(|t| t.anchors_scroll),
            }),
        );
    }
    let degenerate: Vec<Value> = equilibria
        .degenerate
        .iter()
        .map(|d| json!({ "label": d.label, "reason": d.reason }))
        .collect();
    let anchors: Vec<&str> = chaos
        .per_equilibrium
        .iter()
        .filter(|t| t.anchors_scroll)
        .map(|t| t.label.as_str())
        .collect();
    json!({
        "equilibria": Value::Object(points),
        "degenerate": degenerate,
        "system_chaos_threshold": chaos.system_threshold,
        "scroll_anchors": anchors,
        "diagnostic": chaos.diagnostic,
        "meta": meta(config),
    })
}

/// The `design` document around a [`GainCertificate`].
pub fn design_report(
    cert: &GainCertificate,
    target_label: &str,
    sweep_diagnostics: &[String],
    config: &RunConfig,
) -> Value {
    let case = match cert.verdict.criterion {
        Criterion::RouthHurwitz { case, .. } => case.to_string(),
        _ => "none".to_string(),
    };
    json!({
        "gains": { "k1": cert.gains[0], "k2": cert.gains[1], "k3": cert.gains[2] },
        "target": { "label": target_label, "point": cert.target.as_slice() },
        "cubic": { "a1": cert.cubic.a1, "a2": cert.cubic.a2, "a3": cert.cubic.a3 },
        "discriminant": cert.discriminant,
        "eigenvalues": cert.eigenvalues.iter().map(complex).collect::<Vec<_>>(),
        "alpha": cert.alpha,
        "verdict": cert.verdict.verdict.to_string(),
        "routh_hurwitz_case": case,
        "min_arg": cert.verdict.min_arg,
        "witness": complex(&cert.verdict.witness),
        "stable_all_orders": cert.stable_all_orders,
        "violated_condition": cert.violated_condition,
        "admissible_interval": cert.admissible_interval.map(|i| json!({
            "lower": i.lower,
            "upper": i.upper,
            "lower_clipped": i.lower_clipped,
            "upper_clipped": i.upper_clipped,
        })),
        "sweep_diagnostics": sweep_diagnostics,
        "meta": meta(config),
    })
}
