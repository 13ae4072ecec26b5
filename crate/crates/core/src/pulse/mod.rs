//! Strongly-modulating pulse design.
//!
//! A pulse is a list of piecewise-constant segments driving every register
//! spin collectively. Designs are scored over a weighted set of RF-amplitude
//! scale factors and searched with a seeded multi-start simplex.

mod distribution;
mod fidelity;
mod optimize;
mod segment;
mod simplex;

pub use distribution::{RfDistribution, RfPoint, DEFAULT_RF_SIGMA};
pub use fidelity::{gate_fidelity, pulse_propagator, state_fidelity, FidelityReport, PulseModel};
pub use optimize::{optimize_pulse, optimize_with, Objective, OptimizationConfig, OptimizedPulse};
pub use segment::{PulseRecord, PulseSegment, SegmentedPulse};
pub use simplex::{nelder_mead, SimplexOutcome};
