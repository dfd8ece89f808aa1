//! Dense univariate polynomials over f64 and companion-matrix root finding.
//!
//! Only what the stability tests need: determinants of matrices whose
//! diagonal entries are monomials (for the incommensurate criterion) and
//! eigenvalue-based root extraction.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients in ascending degree order; the zero polynomial is `[]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: f64) -> Self {
        if c == 0.0 {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    /// `lambda^m - c`
    pub fn monomial_minus(m: usize, c: f64) -> Self {
        if m == 0 {
            return Poly::constant(1.0 - c);
        }
        let mut coeffs = vec![0.0; m + 1];
        coeffs[0] = -c;
        coeffs[m] = 1.0;
        Poly(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn trim(mut self) -> Self {
        while matches!(self.0.last(), Some(&c) if c == 0.0) {
            self.0.pop();
        }
        self
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![0.0; n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly(out).trim()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trim()
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c * s).collect()).trim()
    }

    /// All complex roots: companion matrix + Schur, with a Durand–Kerner
    /// fallback for the symmetric-spectrum polynomials (e.g. `q(lambda^2)`)
    /// on which the QR iteration can cycle.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let p = self.clone().trim();
        if p.0.len() <= 1 {
            return Ok(Vec::new());
        }
        let deg = p.degree();
        let lead = p.0[deg];
        if lead == 0.0 || !lead.is_finite() {
            return Err(Error::numeric("polynomial has no usable leading coefficient"));
        }
        let monic: Vec<f64> = p.0.iter().map(|c| c / lead).collect();
        let mut companion = DMatrix::<f64>::zeros(deg, deg);
        for i in 1..deg {
            companion[(i, i - 1)] = 1.0;
        }
        for i in 0..deg {
            companion[(i, deg - 1)] = -monic[i];
        }
        match complex_eigenvalues(&companion) {
            Ok(roots) => Ok(roots),
            Err(_) => durand_kerner(&monic),
        }
    }
}

/// Determinant of a square matrix of polynomials via Laplace expansion along
/// the first row. Intended for the small inner dimensions (n <= ~8) this
/// crate works with.
pub fn poly_det(mat: &[Vec<Poly>]) -> Poly {
    let n = mat.len();
    debug_assert!(mat.iter().all(|row| row.len() == n));
    if n == 0 {
        return Poly::constant(1.0);
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut det = Poly::zero();
    for (col, entry) in mat[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = mat[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let cofactor = entry.mul(&poly_det(&minor));
        let signed = if col % 2 == 0 { cofactor } else { cofactor.scale(-1.0) };
        det = det.add(&signed);
    }
    det
}

fn eval_monic(monic: &[f64], z: Complex64) -> Complex64 {
    // Horner on x^deg + c_{deg-1} x^{deg-1} + ... + c_0 (ascending storage).
    let mut acc = Complex64::new(1.0, 0.0);
    for c in monic[..monic.len() - 1].iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Weierstrass / Durand–Kerner simultaneous root iteration on a monic
/// polynomial. The spiral initialization is deliberately asymmetric so
/// spectra that are invariant under sign flips or rotations (the case that
/// defeats the plain QR iteration) still split cleanly.
fn durand_kerner(monic: &[f64]) -> Result<Vec<Complex64>> {
    let deg = monic.len() - 1;
    // Cauchy bound: every root has |z| <= 1 + max |c_i|.
    let radius = 1.0 + monic[..deg].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * (k as f64) / (deg as f64) + 0.7;
            let r = radius * (0.5 + 0.45 * (k as f64 + 1.0) / (deg as f64));
            Complex64::from_polar(r, angle)
        })
        .collect();

    // Multiple roots only converge linearly, so the loop may exhaust its
    // budget without the step criterion firing; the residual check below is
    // the actual acceptance gate.
    for _ in 0..2_000 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() < 1e-290 {
                denom = Complex64::new(1e-290, 0.0);
            }
            let step = eval_monic(monic, z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    let scale = z.iter().fold(1.0f64, |m, r| m.max(r.norm())).powi(deg as i32);
    for r in &z {
        if !r.re.is_finite() || !r.im.is_finite() {
            return Err(Error::numeric("root iteration produced non-finite values"));
        }
        if eval_monic(monic, *r).norm() > 1e-6 * scale {
            return Err(Error::numeric("root iteration did not converge"));
        }
    }
    Ok(z)
}

/// Complex eigenvalues of a real square matrix through its Schur form,
/// mapped to a numerical error on non-convergence.
pub fn complex_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    // A tight eps with a generous iteration cap: companion matrices of
    // higher-degree polynomials occasionally need far more QR sweeps than
    // their size suggests.
    let max_iter = 50_000.max(200 * n);
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), 1e-13, max_iter)
        .ok_or_else(|| Error::numeric("eigenvalue iteration did not converge"))?;
    let eigs = schur.complex_eigenvalues();
    let out: Vec<Complex64> = eigs.iter().copied().collect();
    if out.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
        return Err(Error::numeric("eigenvalue iteration produced non-finite values"));
    }
    Ok(out)
}
