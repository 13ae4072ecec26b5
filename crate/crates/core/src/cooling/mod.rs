//! Exact classical engine for heat-bath algorithmic cooling on diagonal states.
//!
//! Qubits are numbered from 1. Qubit 1 is the most significant bit of a basis
//! index, and bit value 0 is the spin-up level, which is the more probable one
//! at positive polarization. Sorting a probability vector in descending order
//! therefore concentrates polarization on qubit 1.

mod permutation;
mod ppa;
mod state;

pub use permutation::Permutation;
pub use ppa::{
    asymptotic_polarization, regime_estimate, run_ppa, AsymptoticLimit, Trajectory,
    DEFAULT_MAX_ROUNDS, DEFAULT_TOLERANCE,
};
pub use state::{BathParameters, DiagonalState, Polarization};

use crate::error::{Error, Result};

/// Bit mask of a 1-based qubit in an `n`-qubit basis index.
pub(crate) fn qubit_mask(qubit: usize, n: usize) -> Result<usize> {
    if qubit == 0 || qubit > n {
        return Err(Error::QubitOutOfRange { index: qubit, n });
    }
    Ok(1 << (n - qubit))
}
