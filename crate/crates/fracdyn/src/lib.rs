//! Tools for Caputo fractional-order dynamical systems.
//!
//! The crate integrates commensurate and incommensurate fractional initial
//! value problems with the Adams–Bashforth–Moulton PECE scheme, locates and
//! classifies equilibria, applies the Matignon and fractional Routh–Hurwitz
//! stability tests, evaluates the necessary-condition order threshold for a
//! chaotic attractor, and designs single-gain state-feedback controllers
//! that stabilize unstable saddle equilibria.
//!
//! The bundled benchmark model is the three-state two-scroll system
//!
//! ```text
//! D^q1 x = y - a x + b y z
//! D^q2 y = c y - x z + z
//! D^q3 z = d x y - h z
//! ```
//!
//! with positive parameters `(a, b, c, d, h)`; the default parameter set
//! `(3, 2.7, 4.7, 2, 9)` produces a two-scroll chaotic attractor at
//! commensurate orders above roughly `0.827`.

pub mod analysis;
pub mod chaos;
pub mod control;
pub mod core;
mod error;
pub(crate) mod poly;
pub mod solver;
pub mod stability;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use crate::core::{Order, OrderVector, State, SystemModel, SystemParams};
pub use crate::solver::{solve_controlled, solve_pece, SolverConfig, Trajectory};
