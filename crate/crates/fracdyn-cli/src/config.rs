//! Flag-value parsers and the serializable run configuration.
//!
//! Orders are kept as reduced rational strings (`"9/10"`) so a config
//! survives a serialize/deserialize round trip without floating-point
//! drift. All parsers are total over arbitrary input: malformed text
//! produces an error, never a panic.

use fracdyn::{Order, State, SystemParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Parses `"a,b,c,d,h"` into validated system parameters.
pub fn parse_params(s: &str) -> Result<SystemParams, CliError> {
    let vals = parse_f64_list(s)?;
    if vals.len() != 5 {
        return Err(CliError::Config(format!(
            "--params expects 5 comma-separated values, got {}",
            vals.len()
        )));
    }
    SystemParams::new(vals[0], vals[1], vals[2], vals[3], vals[4]).map_err(Into::into)
}

/// Parses `"x,y,z"` (any dimension) into finite components.
pub fn parse_f64_list(s: &str) -> Result<Vec<f64>, CliError> {
    if s.trim().is_empty() {
        return Err(CliError::Config("empty numeric list".into()));
    }
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            let v: f64 = tok
                .parse()
                .map_err(|_| CliError::Config(format!("not a number: {tok:?}")))?;
            if !v.is_finite() {
                return Err(CliError::Config(format!("non-finite value: {tok:?}")));
            }
            Ok(v)
        })
        .collect()
}

/// Parses a three-component initial condition.
pub fn parse_state3(s: &str) -> Result<State, CliError> {
    let vals = parse_f64_list(s)?;
    if vals.len() != 3 {
        return Err(CliError::Config(format!(
            "expected 3 comma-separated components, got {}",
            vals.len()
        )));
    }
    State::new(vals).map_err(Into::into)
}

/// Parses one differentiation order: a fraction `"9/10"`, a decimal
/// `"0.9"`, or an integer `"1"`. The result lands in `(0, 1]` reduced to
/// lowest terms.
pub fn parse_order(s: &str) -> Result<Order, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(CliError::Config("empty order".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: u64 = num
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad order numerator: {num:?}")))?;
        let den: u64 = den
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("bad order denominator: {den:?}")))?;
        return Order::new(num, den).map_err(Into::into);
    }
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(CliError::Config(format!("bad order: {s:?}")));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(CliError::Config(format!("bad order: {s:?}")));
    }
    if frac_part.len() > 15 {
        return Err(CliError::Config(format!(
            "order {s:?} has more than 15 decimal digits"
        )));
    }
    let int_val: u64 = if int_part.is_empty() {
        0
    } else {
        int_part
            .parse()
            .map_err(|_| CliError::Config(format!("bad order: {s:?}")))?
    };
    let den = 10u64.pow(frac_part.len() as u32);
    let frac_val: u64 = if frac_part.is_empty() {
        0
    } else {
        frac_part
            .parse()
            .map_err(|_| CliError::Config(format!("bad order: {s:?}")))?
    };
    let num = int_val
        .checked_mul(den)
        .and_then(|v| v.checked_add(frac_val))
        .ok_or_else(|| CliError::Config(format!("order {s:?} out of range")))?;
    Order::new(num, den).map_err(Into::into)
}

/// Parses `"q1,q2,q3"` into exactly three orders.
pub fn parse_orders3(s: &str) -> Result<Vec<Order>, CliError> {
    let orders: Result<Vec<Order>, CliError> = s.split(',').map(parse_order).collect();
    let orders = orders?;
    if orders.len() != 3 {
        return Err(CliError::Config(format!(
            "--orders expects 3 comma-separated orders, got {}",
            orders.len()
        )));
    }
    Ok(orders)
}

/// Which vector field `simulate` integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// The two-scroll benchmark system.
    TwoScroll,
    /// The zero field `f = 0` (solver plumbing stub; every state is fixed).
    Zero,
}

/// Fully resolved run configuration, echoed under the `meta` key of every
/// output. Round-trips losslessly through JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum RunConfig {
    Simulate(SimulateConfig),
    Analyze(AnalyzeConfig),
    Design(DesignConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateConfig {
    pub params: Vec<f64>,
    /// Reduced rational orders, e.g. `["9/10", "9/10", "9/10"]`.
    pub orders: Vec<String>,
    pub x0: Vec<f64>,
    pub step: f64,
    pub horizon: f64,
    pub model: ModelKind,
    pub out: String,
    pub emit_plot: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeConfig {
    pub params: Vec<f64>,
    pub out: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignConfig {
    pub params: Vec<f64>,
    pub target: String,
    pub gains: Vec<f64>,
    pub alpha: String,
    pub sweep_min: f64,
    pub sweep_max: f64,
    pub resolution: f64,
    pub simulate: bool,
    pub x0: Vec<f64>,
    pub step: f64,
    pub horizon: f64,
    pub out: Option<String>,
    pub traj_out: String,
}

impl RunConfig {
    /// Canonical single-line JSON used in CSV header comments.
    pub fn to_json_line(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string(&value).expect("value renders")
    }
}
