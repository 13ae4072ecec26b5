//! Small-Hilbert-space spin simulator.
//!
//! Hamiltonians are in kHz, times in ms, and propagators follow
//! `U = exp(-i 2π H t)`. Spins are numbered from 1; spin 1 is the leftmost
//! tensor factor, matching the qubit convention of [`crate::cooling`].

mod fidelity;
mod hamiltonian;
mod operator;
mod system;
mod toggle;
mod transfer;

pub use fidelity::state_correlation_fidelity;
pub use hamiltonian::{
    exchange_hamiltonian, natural_hamiltonian, register_hamiltonian, CouplingForm,
};
pub use operator::{evolve, pauli, Axis, Operator, Unitary};
pub use system::{Species, Spin, SpinSystem};
pub use toggle::{toggling_average, CollectivePulse, Rotation, ToggleSequence, ToggleStep};
pub use transfer::{peak_transfer_time, transfer_efficiency, TransferPeak};
