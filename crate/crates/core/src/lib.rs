//! A desk-scale laboratory for twisted group algebras over `Z^m` and the
//! entropy behaviour of aperiodic toral automorphisms (quantized cat maps).
//!
//! The crate is organised in layers:
//!
//! * [`arith`] — exact big-integer, rational and real-quadratic-field
//!   arithmetic, integer matrices and their spectral data,
//! * [`bicharacter`] — the phase form `omega_theta(g,h) = exp(i pi theta sigma(g,h))`,
//!   admissible irrational angles for a given matrix, and decay tables for
//!   `|1 - omega(g, T^n h)|`,
//! * [`horizon`] — the injectivity horizon: a certified `n0` beyond which
//!   spaced orbit sums `sum_l T^{n(l-1)} y_l` from a finite window admit only
//!   the trivial vanishing combination, plus brute-force cross checks and the
//!   tuple-to-sum bijection,
//! * [`ncpoly`] — finite formal sums `sum c_g u_g` with the twisted product
//!   `u_g u_h = omega(g,h) u_{g+h}`, the matrix-unit embedding of a finite
//!   window, its compression partner, and the spaced tensor embedding,
//! * [`entropy`] — finite-dimensional entropy functionals and the
//!   multichannel lower-bound score, with convergence reports.
//!
//! Phases are computed exactly end to end; floating point enters only when a
//! residue is finally exponentiated, and every complex coefficient carries a
//! certified absolute error bound.

pub mod arith;
pub mod bicharacter;
pub mod entropy;
pub mod error;
pub mod horizon;
pub mod ncpoly;

pub use error::{Error, Result};

/// Default cap on enumerated tuples / multi-indices.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Default working precision for phase reductions, in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 128;
