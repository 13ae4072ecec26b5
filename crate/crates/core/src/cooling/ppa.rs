use super::{BathParameters, DiagonalState, Polarization};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default convergence tolerance on the L1 change of the register state per round.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ROUNDS: usize = 1_000_000;

/// Per-round qubit polarizations of a partner-pairing run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    /// `rounds[r][q]` is the polarization of qubit `q + 1` after round `r + 1`.
    pub rounds: Vec<Vec<T>>,
    pub converged: bool,
    /// Qubit-1 polarization after the last round.
    pub asymptote: T,
    /// L1 change of the state over the last round.
    pub last_change: T,
}

impl<T: Scalar> Trajectory<T> {
    pub fn target_series(&self) -> impl Iterator<Item = &T> + '_ {
        self.rounds.iter().map(|r| &r[0])
    }
}

/// Alternates refresh of `reset_qubit` and the partner-pairing sort, starting
/// from the maximally mixed register.
///
/// Convergence is declared when one round changes the whole probability vector
/// by less than `tol` in L1 norm. The qubit-1 polarization alone can stall for
/// a round while the rest of the register is still being re-cooled, so it is
/// not a usable stopping signal. A single qubit is replaced outright by its
/// first refresh, so it converges in one round. Hitting `max_rounds` returns
/// `converged = false`.
pub fn run_ppa<T: Scalar>(
    n: usize,
    bath: &BathParameters<T>,
    reset_qubit: usize,
    max_rounds: usize,
    tol: T,
) -> Result<Trajectory<T>> {
    if tol <= T::zero() {
        return Err(Error::InvalidConfig("tolerance must be positive".into()));
    }
    if max_rounds == 0 {
        return Err(Error::InvalidConfig("max_rounds must be at least 1".into()));
    }
    let mut state = DiagonalState::<T>::maximally_mixed(n)?;
    super::qubit_mask(reset_qubit, n)?;
    let mut rounds = Vec::new();
    let mut converged = false;
    let mut last_change = T::zero();
    for _ in 0..max_rounds {
        let (next, _) = state.refresh(reset_qubit, bath)?.ppa_sort();
        last_change = next.l1_distance(&state)?;
        rounds.push(next.polarizations());
        state = next;
        if n == 1 || last_change < tol {
            converged = true;
            break;
        }
    }
    Ok(Trajectory {
        asymptote: rounds.last().expect("at least one round")[0].clone(),
        rounds,
        converged,
        last_change,
    })
}

/// Limiting qubit-1 polarization of the partner-pairing algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticLimit<T> {
    /// Limit reached by iterating to convergence.
    pub limit: T,
    /// Closed-form regime estimate `min(2^(n-2) P', 1)`.
    pub regime_estimate: T,
    pub rounds: usize,
}

/// `min(2^(n-2) P', 1)`; for a single qubit there is nothing to compress and the
/// estimate is `P'`.
pub fn regime_estimate<T: Scalar>(n: usize, p_refresh: &T) -> T {
    if n < 2 {
        return p_refresh.clone();
    }
    let scale = T::from_u64(1u64 << (n - 2)).expect("small power of two");
    let est = scale * p_refresh.clone();
    if est > T::one() {
        T::one()
    } else {
        est
    }
}

/// Iterates [`run_ppa`] (reset on the last qubit) to the default tolerance.
pub fn asymptotic_polarization<T: Scalar>(n: usize, p_refresh: T) -> Result<AsymptoticLimit<T>> {
    asymptotic_polarization_with(n, p_refresh, DEFAULT_MAX_ROUNDS, T::lit(DEFAULT_TOLERANCE))
}

pub fn asymptotic_polarization_with<T: Scalar>(
    n: usize,
    p_refresh: T,
    max_rounds: usize,
    tol: T,
) -> Result<AsymptoticLimit<T>> {
    if p_refresh <= T::zero() {
        return Err(Error::PolarizationOutOfRange(p_refresh.to_f64_lossy()));
    }
    let bath = BathParameters::new(Polarization::new(p_refresh.clone())?, T::one())?;
    let traj = run_ppa(n, &bath, n, max_rounds, tol)?;
    if !traj.converged {
        return Err(Error::NonConvergence {
            rounds: traj.rounds.len(),
            last_change: traj.last_change.to_f64_lossy(),
        });
    }
    Ok(AsymptoticLimit {
        regime_estimate: regime_estimate(n, &p_refresh),
        rounds: traj.rounds.len(),
        limit: traj.asymptote,
    })
}
