//! Domain types shared by every other module: states, parameters,
//! differentiation orders, and the generic `SystemModel` wrapper around a
//! vector field with an (optional) analytic Jacobian.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix3};
use num_integer::Integer;

use crate::error::{Error, Result};

/// Step used by the central finite-difference Jacobian fallback.
pub const FD_JACOBIAN_STEP: f64 = 1e-6;

// ---------------------------------------------------------------------------
// State
// ---------------------------------------------------------------------------

/// A state vector with finite components.
#[derive(Clone, Debug, PartialEq)]
pub struct State(Vec<f64>);

impl State {
    /// Builds a state, rejecting NaN/Inf components and empty vectors.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::contract("state must have at least one component"));
        }
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::contract("state components must be finite"));
        }
        Ok(State(components))
    }

    /// Convenience constructor for three-dimensional states.
    ///
    /// Panics on non-finite input; use [`State::new`] for untrusted data.
    pub fn from_xyz(x: f64, y: f64, z: f64) -> Self {
        State::new(vec![x, y, z]).expect("from_xyz requires finite components")
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.0.iter()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Euclidean distance to another state of the same dimension.
    pub fn distance(&self, other: &State) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl std::ops::Index<usize> for State {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

// ---------------------------------------------------------------------------
// Differentiation orders
// ---------------------------------------------------------------------------

/// A rational differentiation order `q = num/den` with `0 < q <= 1`,
/// stored in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Order {
    num: u64,
    den: u64,
}

impl Order {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::contract("order numerator and denominator must be positive"));
        }
        if num > den {
            return Err(Error::contract(format!("order {num}/{den} exceeds 1")));
        }
        let g = num.gcd(&den);
        Ok(Order { num: num / g, den: den / g })
    }

    /// The classical integer order `q = 1`.
    pub fn one() -> Self {
        Order { num: 1, den: 1 }
    }

    /// Best rational approximation of `x` with denominator bounded by
    /// `max_den`, via continued fractions. `x` must land in `(0, 1]`.
    pub fn approx_f64(x: f64, max_den: u64) -> Result<Self> {
        if !x.is_finite() || x <= 0.0 || x > 1.0 {
            return Err(Error::contract(format!("order {x} outside (0, 1]")));
        }
        if max_den == 0 {
            return Err(Error::contract("max_den must be positive"));
        }
        // Continued-fraction convergents p/q of x.
        let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
        let mut frac = x;
        for _ in 0..64 {
            let a = frac.floor();
            if a > u64::MAX as f64 {
                break;
            }
            let a_int = a as u64;
            let p2 = match a_int.checked_mul(p1).and_then(|v| v.checked_add(p0)) {
                Some(v) => v,
                None => break,
            };
            let q2 = match a_int.checked_mul(q1).and_then(|v| v.checked_add(q0)) {
                Some(v) => v,
                None => break,
            };
            if q2 > max_den {
                break;
            }
            p0 = p1;
            q0 = q1;
            p1 = p2;
            q1 = q2;
            let rem = frac - a;
            if rem.abs() < 1e-15 {
                break;
            }
            frac = 1.0 / rem;
        }
        if q1 == 0 || p1 == 0 {
            return Err(Error::numeric(format!("no rational approximation of {x} found")));
        }
        Order::new(p1, q1)
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Per-state differentiation orders of a fractional system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderVector(Vec<Order>);

impl OrderVector {
    pub fn new(orders: Vec<Order>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::contract("order vector must be non-empty"));
        }
        Ok(OrderVector(orders))
    }

    /// All components share the single order `alpha`.
    pub fn commensurate(alpha: Order, dim: usize) -> Result<Self> {
        OrderVector::new(vec![alpha; dim])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn orders(&self) -> &[Order] {
        &self.0
    }

    /// True iff every component has the same order.
    pub fn is_commensurate(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn values(&self) -> Vec<f64> {
        self.0.iter().map(Order::value).collect()
    }

    /// Least common multiple of the reduced denominators, with overflow
    /// detection.
    pub fn lcm_denominator(&self) -> Result<u64> {
        let mut m: u64 = 1;
        for o in &self.0 {
            let g = m.gcd(&o.den);
            m = (m / g)
                .checked_mul(o.den)
                .ok_or_else(|| Error::numeric("LCM of order denominators overflows u64"))?;
        }
        Ok(m)
    }
}

// ---------------------------------------------------------------------------
// Two-scroll system parameters
// ---------------------------------------------------------------------------

/// Positive parameters `(a, b, c, d, h)` of the two-scroll system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub h: f64,
}

impl SystemParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64, h: f64) -> Result<Self> {
        let vals = [a, b, c, d, h];
        if vals.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::contract(
                "system parameters must be finite and strictly positive",
            ));
        }
        Ok(SystemParams { a, b, c, d, h })
    }
}

impl Default for SystemParams {
    /// The parameter set that generates the two-scroll chaotic attractor.
    fn default() -> Self {
        SystemParams { a: 3.0, b: 2.7, c: 4.7, d: 2.0, h: 9.0 }
    }
}

/// Right-hand side of the two-scroll system:
/// `(y - a x + b y z, c y - x z + z, d x y - h z)`.
pub fn two_scroll_field(s: &State, p: &SystemParams) -> Result<State> {
    if s.dim() != 3 {
        return Err(Error::contract(format!(
            "two-scroll field expects a 3-state, got dimension {}",
            s.dim()
        )));
    }
    let (x, y, z) = (s[0], s[1], s[2]);
    State::new(vec![
        y - p.a * x + p.b * y * z,
        p.c * y - x * z + z,
        p.d * x * y - p.h * z,
    ])
}

/// Analytic Jacobian of [`two_scroll_field`]:
///
/// ```text
/// | -a     1 + b z   b y   |
/// | -z     c         1 - x |
/// |  d y   d x       -h    |
/// ```
pub fn two_scroll_jacobian(s: &State, p: &SystemParams) -> Result<Matrix3<f64>> {
    if s.dim() != 3 {
        return Err(Error::contract(format!(
            "two-scroll Jacobian expects a 3-state, got dimension {}",
            s.dim()
        )));
    }
    let (x, y, z) = (s[0], s[1], s[2]);
    Ok(Matrix3::new(
        -p.a,
        1.0 + p.b * z,
        p.b * y,
        -z,
        p.c,
        1.0 - x,
        p.d * y,
        p.d * x,
        -p.h,
    ))
}

// ---------------------------------------------------------------------------
// Generic system model
// ---------------------------------------------------------------------------

type FieldFn = dyn Fn(&[f64], &mut [f64]) + Send + Sync;
type JacobianFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;

/// A vector field `f: R^n -> R^n` with an optional analytic Jacobian.
///
/// When no Jacobian is supplied, central finite differences with step
/// [`FD_JACOBIAN_STEP`] substitute. Models are immutable after construction
/// and cheap to clone (the closures are shared).
#[derive(Clone)]
pub struct SystemModel {
    dim: usize,
    field: Arc<FieldFn>,
    jacobian: Option<Arc<JacobianFn>>,
    params: Option<SystemParams>,
}

impl SystemModel {
    /// Wraps a vector field closure writing `f(x)` into `out`.
    pub fn new<F>(dim: usize, field: F) -> Self
    where
        F: Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
    {
        SystemModel { dim, field: Arc::new(field), jacobian: None, params: None }
    }

    /// Attaches an analytic Jacobian.
    pub fn with_jacobian<J>(mut self, jacobian: J) -> Self
    where
        J: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        self.jacobian = Some(Arc::new(jacobian));
        self
    }

    /// The two-scroll benchmark model with its analytic Jacobian.
    pub fn two_scroll(params: SystemParams) -> Self {
        let p = params;
        let field = move |x: &[f64], out: &mut [f64]| {
            out[0] = x[1] - p.a * x[0] + p.b * x[1] * x[2];
            out[1] = p.c * x[1] - x[0] * x[2] + x[2];
            out[2] = p.d * x[0] * x[1] - p.h * x[2];
        };
        let jac = move |x: &[f64]| {
            DMatrix::from_row_slice(
                3,
                3,
                &[
                    -p.a,
                    1.0 + p.b * x[2],
                    p.b * x[1],
                    -x[2],
                    p.c,
                    1.0 - x[0],
                    p.d * x[1],
                    p.d * x[0],
                    -p.h,
                ],
            )
        };
        let mut model = SystemModel::new(3, field).with_jacobian(jac);
        model.params = Some(params);
        model
    }

    /// The zero vector field `f = 0` in dimension `dim`; every state is an
    /// equilibrium. Useful as a stub when exercising solver plumbing.
    pub fn zero(dim: usize) -> Self {
        SystemModel::new(dim, |_x, out| out.fill(0.0))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn params(&self) -> Option<&SystemParams> {
        self.params.as_ref()
    }

    pub fn has_analytic_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    /// Evaluates the vector field at `s`.
    pub fn eval(&self, s: &State) -> Result<State> {
        if s.dim() != self.dim {
            return Err(Error::contract(format!(
                "state dimension {} does not match model dimension {}",
                s.dim(),
                self.dim
            )));
        }
        let mut out = vec![0.0; self.dim];
        (self.field)(s.as_slice(), &mut out);
        State::new(out)
    }

    /// `||f(s)||`, the equilibrium residual at `s`.
    pub fn residual(&self, s: &State) -> Result<f64> {
        Ok(self.eval(s)?.norm())
    }

    /// Hot-path evaluation without allocation or dimension checks.
    pub(crate) fn eval_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        (self.field)(x, out);
    }

    /// Jacobian at `s`: analytic when available, otherwise central finite
    /// differences with step [`FD_JACOBIAN_STEP`].
    pub fn jacobian_at(&self, s: &State) -> Result<DMatrix<f64>> {
        if s.dim() != self.dim {
            return Err(Error::contract(format!(
                "state dimension {} does not match model dimension {}",
                s.dim(),
                self.dim
            )));
        }
        if let Some(jac) = &self.jacobian {
            let j = jac(s.as_slice());
            if j.nrows() != self.dim || j.ncols() != self.dim {
                return Err(Error::contract(
                    "analytic Jacobian has inconsistent dimensions",
                ));
            }
            return Ok(j);
        }
        Ok(self.fd_jacobian(s.as_slice()))
    }

    fn fd_jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        let n = self.dim;
        let mut j = DMatrix::zeros(n, n);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        let mut fp = vec![0.0; n];
        let mut fm = vec![0.0; n];
        for col in 0..n {
            let h = FD_JACOBIAN_STEP;
            xp[col] = x[col] + h;
            xm[col] = x[col] - h;
            (self.field)(&xp, &mut fp);
            (self.field)(&xm, &mut fm);
            for row in 0..n {
                j[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
            }
            xp[col] = x[col];
            xm[col] = x[col];
        }
        j
    }
}

impl fmt::Debug for SystemModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SystemModel")
            .field("dim", &self.dim)
            .field("analytic_jacobian", &self.jacobian.is_some())
            .field("params", &self.params)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> SystemParams {
        SystemParams::default()
    }

    #[test]
    fn field_vanishes_at_origin() {
        let f = two_scroll_field(&State::from_xyz(0.0, 0.0, 0.0), &params()).unwrap();
        for c in f.iter() {
            assert!(c.abs() < 1e-12);
        }
    }

    #[test]
    fn field_at_unit_state() {
        // Hand evaluation: (1 - 3 + 2.7, 4.7 - 1 + 1, 2 - 9).
        let f = two_scroll_field(&State::from_xyz(1.0, 1.0, 1.0), &params()).unwrap();
        assert_relative_eq!(f[0], 0.7, epsilon = 1e-12);
        assert_relative_eq!(f[1], 4.7, epsilon = 1e-12);
        assert_relative_eq!(f[2], -7.0, epsilon = 1e-12);
    }

    #[test]
    fn field_near_zero_at_saddle_q2() {
        let q2 = State::from_xyz(5.1260, 2.0794, 2.3687);
        let f = two_scroll_field(&q2, &params()).unwrap();
        assert!(f.norm() < 1e-3, "residual {} at Q2", f.norm());
    }

    #[test]
    fn jacobian_at_origin_is_triangular() {
        let j = two_scroll_jacobian(&State::from_xyz(0.0, 0.0, 0.0), &params()).unwrap();
        let expected = Matrix3::new(-3.0, 1.0, 0.0, 0.0, 4.7, 1.0, 0.0, 0.0, -9.0);
        assert_eq!(j, expected);
    }

    #[test]
    fn jacobian_hand_evaluated() {
        let j = two_scroll_jacobian(&State::from_xyz(1.0, 0.0, 2.0), &params()).unwrap();
        let expected = Matrix3::new(-3.0, 6.4, 0.0, -2.0, 4.7, 0.0, 0.0, 2.0, -9.0);
        assert_relative_eq!(j, expected, epsilon = 1e-12);
    }

    #[test]
    fn model_jacobian_matches_finite_differences() {
        let model = SystemModel::two_scroll(params());
        let fd_model = SystemModel::new(3, {
            let p = params();
            move |x: &[f64], out: &mut [f64]| {
                out[0] = x[1] - p.a * x[0] + p.b * x[1] * x[2];
                out[1] = p.c * x[1] - x[0] * x[2] + x[2];
                out[2] = p.d * x[0] * x[1] - p.h * x[2];
            }
        });
        for s in [
            State::from_xyz(0.3, -1.2, 2.5),
            State::from_xyz(5.0, -2.0, 1.0),
            State::from_xyz(-4.1, 2.4, -2.2),
        ] {
            let ja = model.jacobian_at(&s).unwrap();
            let jf = fd_model.jacobian_at(&s).unwrap();
            for r in 0..3 {
                for c in 0..3 {
                    let scale = ja[(r, c)].abs().max(1.0);
                    assert!(
                        (ja[(r, c)] - jf[(r, c)]).abs() / scale < 1e-6,
                        "({r},{c}): analytic {} vs fd {}",
                        ja[(r, c)],
                        jf[(r, c)]
                    );
                }
            }
        }
    }

    #[test]
    fn dimension_mismatch_is_contract_violation() {
        let s2 = State::new(vec![1.0, 2.0]).unwrap();
        assert!(matches!(two_scroll_field(&s2, &params()), Err(Error::Contract(_))));
        let model = SystemModel::two_scroll(params());
        assert!(matches!(model.eval(&s2), Err(Error::Contract(_))));
    }

    #[test]
    fn state_rejects_non_finite() {
        assert!(State::new(vec![1.0, f64::NAN]).is_err());
        assert!(State::new(vec![f64::INFINITY]).is_err());
        assert!(State::new(vec![]).is_err());
    }

    #[test]
    fn params_must_be_positive() {
        assert!(SystemParams::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, -2.0, 1.0, 1.0, 1.0).is_err());
        assert!(SystemParams::new(1.0, 2.0, 1.0, 1.0, f64::NAN).is_err());
        assert!(SystemParams::new(3.0, 2.7, 4.7, 2.0, 9.0).is_ok());
    }

    #[test]
    fn orders_reduce_and_validate() {
        let o = Order::new(6, 8).unwrap();
        assert_eq!((o.numerator(), o.denominator()), (3, 4));
        assert!(Order::new(3, 2).is_err());
        assert!(Order::new(0, 2).is_err());
        assert_eq!(Order::new(10, 10).unwrap(), Order::one());
    }

    #[test]
    fn order_from_f64_finds_small_fractions() {
        assert_eq!(Order::approx_f64(0.9, 1000).unwrap(), Order::new(9, 10).unwrap());
        assert_eq!(Order::approx_f64(0.5, 1000).unwrap(), Order::new(1, 2).unwrap());
        assert_eq!(Order::approx_f64(1.0, 1000).unwrap(), Order::one());
        assert!(Order::approx_f64(1.2, 1000).is_err());
        assert!(Order::approx_f64(-0.1, 1000).is_err());
    }

    #[test]
    fn order_vector_commensurate_flag_and_lcm() {
        let q = OrderVector::new(vec![
            Order::new(1, 2).unwrap(),
            Order::new(2, 3).unwrap(),
            Order::new(3, 4).unwrap(),
        ])
        .unwrap();
        assert!(!q.is_commensurate());
        assert_eq!(q.lcm_denominator().unwrap(), 12);

        let c = OrderVector::commensurate(Order::new(9, 10).unwrap(), 3).unwrap();
        assert!(c.is_commensurate());
        assert_eq!(c.lcm_denominator().unwrap(), 10);
    }

    #[test]
    fn zero_model_evaluates_to_zero() {
        let model = SystemModel::zero(3);
        let f = model.eval(&State::from_xyz(5.0, -2.0, 1.0)).unwrap();
        assert_eq!(f.as_slice(), &[0.0, 0.0, 0.0]);
    }
}
