//! Stability tests for fractional-order linearizations.
//!
//! Three criteria are provided:
//!
//! * [`matignon_commensurate`] — a commensurate-order linear system of order
//!   `alpha` is asymptotically stable iff every eigenvalue satisfies
//!   `|arg(lambda)| > alpha * pi/2`.
//! * [`incommensurate_stable`] — with rational orders `q_i = n_i/d_i` and
//!   `M = lcm(d_i)`, the system is asymptotically stable if every root of
//!   `det(diag(lambda^{M q_i}) - A) = 0` satisfies `|arg(lambda)| > pi/(2M)`.
//! * [`routh_hurwitz_fractional`] — coefficient conditions on the cubic
//!   `lambda^3 + a1 lambda^2 + a2 lambda + a3` organised by the sign of the
//!   discriminant `D`. The published case list overlaps and leaves gaps, so
//!   the sector test on the exact roots is always the authoritative verdict
//!   here; the matched case is reported as the explanation layer, and
//!   near-ties of the equality tests (`|D| <= 1e-9`, `|a1 a2 - a3| <= 1e-9`)
//!   fall through to the plain sector test.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix3};
use num_complex::Complex64;

use crate::core::OrderVector;
use crate::error::{Error, Result};
use crate::poly::{self, Poly};

/// Absolute tolerance of the equality tests in the Routh–Hurwitz cases.
pub const RH_EQUALITY_TOL: f64 = 1e-9;

/// Tolerance of the sector comparison `|arg(lambda)| vs alpha*pi/2`.
pub const SECTOR_TOL: f64 = 1e-12;

/// Monic cubic `lambda^3 + a1 lambda^2 + a2 lambda + a3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubicCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl CubicCoefficients {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Result<Self> {
        if ![a1, a2, a3].iter().all(|c| c.is_finite()) {
            return Err(Error::contract("cubic coefficients must be finite"));
        }
        Ok(CubicCoefficients { a1, a2, a3 })
    }

    /// Companion matrix whose eigenvalues are the cubic's roots.
    pub fn companion(&self) -> Matrix3<f64> {
        Matrix3::new(
            0.0, 0.0, -self.a3, //
            1.0, 0.0, -self.a2, //
            0.0, 1.0, -self.a1,
        )
    }

    /// The three roots, via the companion matrix.
    pub fn roots(&self) -> Result<[Complex64; 3]> {
        let m = DMatrix::from_fn(3, 3, |r, c| self.companion()[(r, c)]);
        let eigs = poly::complex_eigenvalues(&m)?;
        Ok([eigs[0], eigs[1], eigs[2]])
    }
}

/// Final stability classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    AsymptoticallyStable,
    /// Marginal: the minimal argument sits exactly on the sector boundary
    /// with simple critical eigenvalues.
    Stable,
    Unstable,
    /// The coefficient cases did not cover the input and no root information
    /// was available.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::AsymptoticallyStable => "asymptotically-stable",
            Verdict::Stable => "stable",
            Verdict::Unstable => "unstable",
            Verdict::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// Which test produced a verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Criterion {
    /// Sector test at commensurate order `alpha`.
    MatignonCommensurate { alpha: f64 },
    /// LCM transformation with `M = lcm(d_i)`.
    IncommensurateLcm { m: u64 },
    /// Routh–Hurwitz coefficient case, cross-checked on the exact roots.
    RouthHurwitz { case: RhCase, alpha: f64 },
}

/// The coefficient case that matched in [`routh_hurwitz_fractional`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhCase {
    /// `D > 0`: three distinct real roots; classical Hurwitz conditions
    /// `a1 > 0`, `a3 > 0`, `a1 a2 - a3 > 0` decide for every order.
    DiscriminantPositive,
    /// `D < 0`, `a1, a2, a3 >= 0`, `alpha < 2/3`: stable.
    LowOrderSector,
    /// `D < 0`, `a1 < 0`, `a2 < 0`, `alpha > 2/3`: every root lies inside
    /// the instability sector.
    HighOrderUnstable,
    /// `D < 0`, `a1 > 0`, `a2 > 0`, `a1 a2 = a3`: marginal pair on the
    /// imaginary axis; stable for every `alpha < 1`, not at `alpha = 1`.
    MarginalPair,
    /// `a3 <= 0` violates the necessary condition `a3 > 0`.
    NecessaryConditionViolated,
    /// No case matched (or a near-tie was routed here); the verdict comes
    /// from the sector test on the exact roots alone.
    SectorFallback,
}

impl std::fmt::Display for RhCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RhCase::DiscriminantPositive => "discriminant-positive-hurwitz",
            RhCase::LowOrderSector => "low-order-sector",
            RhCase::HighOrderUnstable => "high-order-unstable",
            RhCase::MarginalPair => "marginal-pair",
            RhCase::NecessaryConditionViolated => "necessary-condition-violated",
            RhCase::SectorFallback => "sector-fallback",
        };
        f.write_str(s)
    }
}

/// Verdict plus the witness that drove it.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    /// Minimal `|arg(lambda)|` over the relevant roots.
    pub min_arg: f64,
    /// A root attaining `min_arg`.
    pub witness: Complex64,
    pub criterion: Criterion,
    /// Discriminant value when the Routh–Hurwitz test ran.
    pub discriminant: Option<f64>,
}

fn min_arg_witness(eigs: &[Complex64]) -> (f64, Complex64) {
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for e in eigs {
        // arg(0) = atan2(0, 0) = 0: a zero eigenvalue sits in every
        // instability sector.
        let a = e.arg().abs();
        if a < best.0 {
            best = (a, *e);
        }
    }
    best
}

/// Sector comparison shared by every criterion: stable iff
/// `min |arg| > threshold` (strict within [`SECTOR_TOL`]).
fn sector_verdict(min_arg: f64, threshold: f64) -> Verdict {
    if min_arg > threshold + SECTOR_TOL {
        Verdict::AsymptoticallyStable
    } else if min_arg >= threshold - SECTOR_TOL {
        Verdict::Stable
    } else {
        Verdict::Unstable
    }
}

/// Matignon's criterion for `D^alpha x = A x` with `alpha` in `(0, 1]`.
///
/// Asymptotically stable iff `|arg(lambda)| > alpha*pi/2` for every
/// eigenvalue; stable (not asymptotically) when equality occurs only at
/// eigenvalues of geometric multiplicity one.
pub fn matignon_commensurate(a: &DMatrix<f64>, alpha: f64) -> Result<StabilityVerdict> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::contract("matrix must be square and non-empty"));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::contract(format!("alpha {alpha} outside (0, 1]")));
    }
    let eigs = poly::complex_eigenvalues(a)?;
    let threshold = alpha * PI / 2.0;
    let (min_arg, witness) = min_arg_witness(&eigs);
    let mut verdict = sector_verdict(min_arg, threshold);

    if verdict == Verdict::Stable {
        // Critical eigenvalues sit on the sector boundary; marginal
        // stability additionally needs geometric multiplicity one there.
        let n = a.nrows();
        for e in eigs.iter().filter(|e| (e.arg().abs() - threshold).abs() <= SECTOR_TOL) {
            let shifted =
                DMatrix::from_fn(n, n, |r, c| Complex64::new(a[(r, c)], 0.0))
                    - DMatrix::from_diagonal_element(n, n, *e);
            let svd = nalgebra::linalg::SVD::try_new(shifted, false, false, f64::EPSILON, 10_000)
                .ok_or_else(|| Error::numeric("SVD did not converge in multiplicity check"))?;
            let rank = svd.rank(1e-9 * a.norm().max(1.0));
            if n - rank != 1 {
                verdict = Verdict::Unstable;
                break;
            }
        }
    }

    Ok(StabilityVerdict {
        verdict,
        min_arg,
        witness,
        criterion: Criterion::MatignonCommensurate { alpha },
        discriminant: None,
    })
}

/// LCM criterion for incommensurate rational orders.
///
/// Builds `Delta(lambda) = det(diag(lambda^{M q_i}) - A)` by symbolic
/// expansion of the determinant (diagonal entries are the monomials
/// `lambda^{M q_i} - A_ii`), finds all roots, and requires
/// `|arg(lambda)| > pi/(2M)`.
pub fn incommensurate_stable(a: &DMatrix<f64>, q: &OrderVector) -> Result<StabilityVerdict> {
    let n = a.nrows();
    if a.ncols() != n || n == 0 {
        return Err(Error::contract("matrix must be square and non-empty"));
    }
    if q.len() != n {
        return Err(Error::contract(format!(
            "order vector length {} does not match matrix dimension {n}",
            q.len()
        )));
    }
    let m = q.lcm_denominator()?;
    let mut total_degree: u64 = 0;
    let mut powers = Vec::with_capacity(n);
    for o in q.orders() {
        let p = (m / o.denominator()) * o.numerator();
        powers.push(p as usize);
        total_degree += p;
    }
    if total_degree > 600 {
        return Err(Error::numeric(format!(
            "transformed polynomial degree {total_degree} is too large; \
             reduce the order denominators"
        )));
    }

    let mat: Vec<Vec<Poly>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    if r == c {
                        Poly::monomial_minus(powers[r], a[(r, c)])
                    } else {
                        Poly::constant(-a[(r, c)])
                    }
                })
                .collect()
        })
        .collect();
    let characteristic = poly::poly_det(&mat);
    let roots = characteristic.roots()?;
    if roots.is_empty() {
        return Err(Error::numeric("transformed characteristic polynomial is constant"));
    }
    let threshold = PI / (2.0 * m as f64);
    let (min_arg, witness) = min_arg_witness(&roots);
    // The LCM theorem is an if-statement: strict sector containment proves
    // asymptotic stability, anything else is reported unstable.
    let verdict = match sector_verdict(min_arg, threshold) {
        Verdict::AsymptoticallyStable => Verdict::AsymptoticallyStable,
        _ => Verdict::Unstable,
    };
    Ok(StabilityVerdict {
        verdict,
        min_arg,
        witness,
        criterion: Criterion::IncommensurateLcm { m },
        discriminant: None,
    })
}

/// Discriminant of `lambda^3 + a1 lambda^2 + a2 lambda + a3`:
///
/// ```text
/// D = 18 a1 a2 a3 + (a1 a2)^2 - 4 a3 a1^3 - 4 a2^3 - 27 a3^2
/// ```
///
/// `D > 0` iff the cubic has three distinct real roots, `D < 0` iff it has
/// one real root and a complex pair.
pub fn cubic_discriminant(c: &CubicCoefficients) -> f64 {
    let CubicCoefficients { a1, a2, a3 } = *c;
    18.0 * a1 * a2 * a3 + (a1 * a2) * (a1 * a2)
        - 4.0 * a3 * a1.powi(3)
        - 4.0 * a2.powi(3)
        - 27.0 * a3 * a3
}

/// Fractional Routh–Hurwitz conditions at commensurate order `alpha`.
///
/// The verdict is always taken from the sector test on the exact roots of
/// the cubic; the matched coefficient case is attached as the explanation.
pub fn routh_hurwitz_fractional(c: &CubicCoefficients, alpha: f64) -> Result<StabilityVerdict> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::contract(format!("alpha {alpha} outside (0, 1]")));
    }
    let d = cubic_discriminant(c);
    let roots = c.roots()?;
    let threshold = alpha * PI / 2.0;
    let (min_arg, witness) = min_arg_witness(&roots);
    // Roots of a cubic realized through its companion matrix always have
    // geometric multiplicity one, so the boundary case is plain `Stable`.
    let verdict = sector_verdict(min_arg, threshold);

    let hurwitz_margin = c.a1 * c.a2 - c.a3;
    let case = if d > RH_EQUALITY_TOL {
        RhCase::DiscriminantPositive
    } else if d < -RH_EQUALITY_TOL {
        if c.a1 > RH_EQUALITY_TOL
            && c.a2 > RH_EQUALITY_TOL
            && hurwitz_margin.abs() <= RH_EQUALITY_TOL
        {
            RhCase::MarginalPair
        } else if c.a1 >= -RH_EQUALITY_TOL
            && c.a2 >= -RH_EQUALITY_TOL
            && c.a3 >= -RH_EQUALITY_TOL
            && alpha < 2.0 / 3.0
        {
            RhCase::LowOrderSector
        } else if c.a1 < -RH_EQUALITY_TOL && c.a2 < -RH_EQUALITY_TOL && alpha > 2.0 / 3.0 {
            RhCase::HighOrderUnstable
        } else if c.a3 < -RH_EQUALITY_TOL {
            RhCase::NecessaryConditionViolated
        } else {
            RhCase::SectorFallback
        }
    } else {
        RhCase::SectorFallback
    };

    // Keep the label honest: if the matched case's own conclusion disagrees
    // with the root sector test (possible only in pathological overlaps),
    // report the fallback instead.
    let case_conclusion = match case {
        RhCase::DiscriminantPositive => {
            Some(c.a1 > 0.0 && c.a3 > 0.0 && hurwitz_margin > 0.0)
        }
        RhCase::LowOrderSector => Some(true),
        RhCase::MarginalPair => Some(alpha < 1.0),
        RhCase::HighOrderUnstable | RhCase::NecessaryConditionViolated => Some(false),
        RhCase::SectorFallback => None,
    };
    let case = match case_conclusion {
        Some(stable_claim)
            if stable_claim != matches!(verdict, Verdict::AsymptoticallyStable | Verdict::Stable) =>
        {
            RhCase::SectorFallback
        }
        _ => case,
    };

    Ok(StabilityVerdict {
        verdict,
        min_arg,
        witness,
        criterion: Criterion::RouthHurwitz { case, alpha },
        discriminant: Some(d),
    })
}
