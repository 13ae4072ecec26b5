//! Heat-bath algorithmic cooling toolkit.
//!
//! The crate is split along the physics:
//!
//! - [`cooling`]: exact classical engine on diagonal register states (refresh,
//!   permutation gates, partner-pairing sort rounds, asymptotic limits).
//! - [`spin`]: small-Hilbert-space simulator for the exchange, natural and
//!   register Hamiltonians, propagators and toggling-frame averages.
//! - [`pulse`]: strongly-modulating pulse search robust over an RF-amplitude
//!   distribution.
//! - [`experiment`]: six-step protocol runner, refresh-crosstalk error model and
//!   its least-squares fit.
//! - [`config`]: the shared TOML configuration tree.
//!
//! The cooling engine is generic over its scalar ([`Scalar`]), so the same code
//! runs in `f64`, `f32` or exact rational arithmetic. The spin simulator is
//! generic over any nalgebra real field ([`Real`]). Concrete aliases for the
//! common instantiations live at the crate root.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod cooling;
pub mod error;
pub mod experiment;
pub mod pulse;
pub mod scalar;
pub mod spin;

pub use error::{Error, Result};
pub use scalar::{Real, Scalar};

use num_rational::{BigRational, Ratio};

/// Diagonal register state in double precision.
pub type State = cooling::DiagonalState<f64>;
/// Diagonal register state in single precision.
pub type State32 = cooling::DiagonalState<f32>;
/// Diagonal register state in exact 64-bit rational arithmetic.
pub type RationalState = cooling::DiagonalState<Ratio<i64>>;
/// Diagonal register state in arbitrary-precision rational arithmetic.
pub type ExactState = cooling::DiagonalState<BigRational>;

pub type Polarization = cooling::Polarization<f64>;
pub type BathParameters = cooling::BathParameters<f64>;
pub type Trajectory = cooling::Trajectory<f64>;

pub type SpinSystem = spin::SpinSystem<f64>;
pub type Operator = spin::Operator<f64>;
pub type Unitary = spin::Unitary<f64>;
pub type ToggleSequence = spin::ToggleSequence<f64>;
