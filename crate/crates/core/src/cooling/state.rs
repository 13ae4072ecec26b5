use std::fmt;

use super::{qubit_mask, Permutation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Spin polarization, `Prob(bit = 0) - Prob(bit = 1)`, always within `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct Polarization<T>(T);

impl<T: Scalar> Polarization<T> {
    pub fn new(value: T) -> Result<Self> {
        if value.abs() > T::one() {
            return Err(Error::PolarizationOutOfRange(value.to_f64_lossy()));
        }
        Ok(Self(value))
    }

    pub fn zero() -> Self {
        Self(T::zero())
    }

    pub fn value(&self) -> &T {
        &self.0
    }

    pub fn into_inner(self) -> T {
        self.0
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Polarization<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Spin-bath polarization `P_H` and refresh efficiency `eta`.
///
/// A refresh delivers `P' = eta * P_H` to the reset qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct BathParameters<T> {
    pub p_bath: Polarization<T>,
    eta: T,
}

impl<T: Scalar> BathParameters<T> {
    pub fn new(p_bath: Polarization<T>, eta: T) -> Result<Self> {
        if eta < T::zero() || eta > T::one() {
            return Err(Error::EfficiencyOutOfRange(eta.to_f64_lossy()));
        }
        Ok(Self { p_bath, eta })
    }

    /// Ideal transfer (`eta = 1`) of the given refresh polarization.
    pub fn ideal(p_refresh: T) -> Result<Self> {
        Self::new(Polarization::new(p_refresh)?, T::one())
    }

    pub fn eta(&self) -> &T {
        &self.eta
    }

    /// Polarization delivered by one refresh, `P' = eta * P_H`.
    pub fn refresh_polarization(&self) -> Polarization<T> {
        Polarization(self.eta.clone() * self.p_bath.0.clone())
    }
}

/// Probability vector over the `2^n` computational basis states of the register.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalState<T> {
    n: usize,
    probs: Vec<T>,
}

/// Absolute normalization tolerance: 1e-12, widened to the rounding floor of
/// low-precision scalars.
fn normalization_tol<T: Scalar>(len: usize) -> T {
    let mut eps = T::one();
    let half = T::one() / T::two();
    for _ in 0..52 {
        let next = eps.clone() * half.clone();
        if T::one() + next.clone() == T::one() {
            break;
        }
        eps = next;
    }
    let floor = eps * T::from_usize(4 * len.max(1)).unwrap_or_else(T::one);
    let base = T::lit(1e-12);
    if floor > base {
        floor
    } else {
        base
    }
}

impl<T: Scalar> DiagonalState<T> {
    /// Validates and wraps a probability vector.
    pub fn new(n: usize, probs: Vec<T>) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::InvalidState(format!(
                "qubit count {n} not in 1..=30"
            )));
        }
        if probs.len() != 1 << n {
            return Err(Error::SizeMismatch {
                expected: 1 << n,
                got: probs.len(),
            });
        }
        if let Some(bad) = probs.iter().find(|p| **p < T::zero() || **p > T::one()) {
            return Err(Error::InvalidState(format!(
                "probability {} outside [0, 1]",
                bad.to_f64_lossy()
            )));
        }
        let total = probs.iter().cloned().fold(T::zero(), |a, b| a + b);
        if (total.clone() - T::one()).abs() > normalization_tol(probs.len()) {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {}",
                total.to_f64_lossy()
            )));
        }
        Ok(Self { n, probs })
    }

    pub fn maximally_mixed(n: usize) -> Result<Self> {
        let len = 1usize
            .checked_shl(n as u32)
            .filter(|_| (1..=30).contains(&n))
            .ok_or_else(|| Error::InvalidState(format!("qubit count {n} not in 1..=30")))?;
        let p = T::one() / T::from_usize(len).expect("register size fits the scalar");
        Ok(Self {
            n,
            probs: vec![p; len],
        })
    }

    /// Product state with the given single-qubit polarizations.
    pub fn product(pols: &[Polarization<T>]) -> Result<Self> {
        let n = pols.len();
        let mut state = Self::maximally_mixed(n)?;
        let half = T::one() / T::two();
        for (b, p) in state.probs.iter_mut().enumerate() {
            let mut prob = T::one();
            for (i, pol) in pols.iter().enumerate() {
                let bit = (b >> (n - 1 - i)) & 1;
                let factor = if bit == 0 {
                    T::one() + pol.0.clone()
                } else {
                    T::one() - pol.0.clone()
                };
                prob = prob * factor * half.clone();
            }
            *p = prob;
        }
        Ok(state)
    }

    /// Product state from raw polarization values; rejects any `|p| > 1`.
    pub fn from_polarizations(pols: &[T]) -> Result<Self> {
        let pols = pols
            .iter()
            .cloned()
            .map(Polarization::new)
            .collect::<Result<Vec<_>>>()?;
        Self::product(&pols)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn total(&self) -> T {
        self.probs.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// Polarization of a 1-based qubit.
    pub fn polarization(&self, qubit: usize) -> Result<T> {
        let mask = qubit_mask(qubit, self.n)?;
        Ok(self
            .probs
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (b, p)| {
                if b & mask == 0 {
                    acc + p.clone()
                } else {
                    acc - p.clone()
                }
            }))
    }

    /// Polarizations of all qubits, qubit 1 first.
    pub fn polarizations(&self) -> Vec<T> {
        (1..=self.n)
            .map(|q| self.polarization(q).expect("index in range"))
            .collect()
    }

    /// Traces out `qubit` and replaces it by a fresh spin at `eta * P_H`,
    /// uncorrelated with the rest of the register.
    pub fn refresh(&self, qubit: usize, bath: &BathParameters<T>) -> Result<Self> {
        self.reset_qubit(qubit, &bath.refresh_polarization())
    }

    /// Trace-out/replace with an explicit delivered polarization.
    pub fn reset_qubit(&self, qubit: usize, fresh: &Polarization<T>) -> Result<Self> {
        let mask = qubit_mask(qubit, self.n)?;
        let up = (T::one() + fresh.0.clone()) / T::two();
        let down = (T::one() - fresh.0.clone()) / T::two();
        let probs = (0..self.len())
            .map(|b| {
                let marginal = self.probs[b & !mask].clone() + self.probs[b | mask].clone();
                if b & mask == 0 {
                    marginal * up.clone()
                } else {
                    marginal * down.clone()
                }
            })
            .collect();
        Ok(Self { n: self.n, probs })
    }

    /// Single-qubit depolarizing channel on the diagonal: the qubit keeps its
    /// bit with weight `retention` and is randomized otherwise. Its polarization
    /// is multiplied by `retention`; the other marginals are untouched.
    pub fn depolarize_qubit(&self, qubit: usize, retention: &T) -> Result<Self> {
        let mask = qubit_mask(qubit, self.n)?;
        let lost = (T::one() - retention.clone()) / T::two();
        let probs = (0..self.len())
            .map(|b| {
                let pair = self.probs[b & !mask].clone() + self.probs[b | mask].clone();
                retention.clone() * self.probs[b].clone() + lost.clone() * pair
            })
            .collect();
        Ok(Self { n: self.n, probs })
    }

    /// Applies a basis permutation: `probs'[perm(b)] = probs[b]`.
    pub fn apply(&self, perm: &Permutation) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                got: perm.len(),
            });
        }
        let mut probs = vec![T::zero(); self.len()];
        for (b, p) in self.probs.iter().enumerate() {
            probs[perm.image(b)] = p.clone();
        }
        Ok(Self { n: self.n, probs })
    }

    /// Partner-pairing compression: sorts the probabilities in descending
    /// order (ties kept in ascending index order) and returns the permutation
    /// that realizes the sort.
    pub fn ppa_sort(&self) -> (Self, Permutation) {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.probs[b]
                .partial_cmp(&self.probs[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let mut map = vec![0; self.len()];
        for (position, &old) in order.iter().enumerate() {
            map[old] = position;
        }
        let probs = order.iter().map(|&old| self.probs[old].clone()).collect();
        (
            Self { n: self.n, probs },
            Permutation::new(map).expect("sort order is a bijection"),
        )
    }

    pub fn l1_distance(&self, other: &Self) -> Result<T> {
        if other.len() != self.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(self
            .probs
            .iter()
            .zip(&other.probs)
            .fold(T::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs()))
    }

    /// Converts to another scalar through `f64`.
    pub fn to_f64(&self) -> DiagonalState<f64> {
        DiagonalState {
            n: self.n,
            probs: self.probs.iter().map(Scalar::to_f64_lossy).collect(),
        }
    }
}
