use crate::cooling::DiagonalState;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Mean over qubits of achieved / ideal polarization, skipping qubits whose
/// ideal polarization is zero or below `1e-9` of the largest one (rounding
/// residue of a qubit that should be unpolarized).
pub fn state_correlation_fidelity<T: Scalar>(
    achieved: &DiagonalState<T>,
    ideal: &DiagonalState<T>,
) -> Result<T> {
    if achieved.n() != ideal.n() {
        return Err(Error::SizeMismatch {
            expected: ideal.n(),
            got: achieved.n(),
        });
    }
    let ideal = ideal.polarizations();
    let largest = ideal
        .iter()
        .map(|i| i.abs())
        .fold(T::zero(), |a, b| if b > a { b } else { a });
    let floor = largest * T::lit(1e-9);
    let ratios: Vec<T> = achieved
        .polarizations()
        .into_iter()
        .zip(ideal)
        .filter(|(_, i)| !i.is_zero() && i.abs() > floor)
        .map(|(a, i)| a / i)
        .collect();
    if ratios.is_empty() {
        return Err(Error::AllIdealZero);
    }
    let count = T::from_usize(ratios.len()).expect("qubit count");
    Ok(ratios.into_iter().fold(T::zero(), |a, b| a + b) / count)
}
