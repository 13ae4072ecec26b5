use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Species {
    #[serde(rename = "C")]
    Carbon,
    #[serde(rename = "H")]
    Proton,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Spin {
    pub label: String,
    pub species: Species,
}

/// Spins with rotating-frame chemical shifts and a dipolar coupling table, all in kHz.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem<T: Real> {
    spins: Vec<Spin>,
    shifts: Vec<T>,
    couplings: DMatrix<T>,
}

impl<T: Real> SpinSystem<T> {
    pub fn new(spins: Vec<Spin>, shifts: Vec<T>, couplings: DMatrix<T>) -> Result<Self> {
        let m = spins.len();
        if m == 0 || m > 10 {
            return Err(Error::InvalidSystem(format!("{m} spins, expected 1..=10")));
        }
        if shifts.len() != m {
            return Err(Error::InvalidSystem(format!(
                "{} shifts for {m} spins",
                shifts.len()
            )));
        }
        if couplings.nrows() != m || couplings.ncols() != m {
            return Err(Error::InvalidSystem(format!(
                "coupling table is {}x{}, expected {m}x{m}",
                couplings.nrows(),
                couplings.ncols()
            )));
        }
        for i in 0..m {
            if couplings[(i, i)] != T::zero() {
                return Err(Error::InvalidSystem(format!(
                    "nonzero self-coupling on spin {}",
                    i + 1
                )));
            }
            for j in 0..i {
                if couplings[(i, j)] != couplings[(j, i)] {
                    return Err(Error::InvalidSystem(format!(
                        "coupling table not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self {
            spins,
            shifts,
            couplings,
        })
    }

    /// Builds a system from `(label, species)` pairs with zero shifts and the
    /// listed couplings `(i, j, D_ij)` (1-based, kHz).
    pub fn from_couplings(
        spins: &[(&str, Species)],
        couplings: &[(usize, usize, T)],
    ) -> Result<Self> {
        let m = spins.len();
        let mut table = DMatrix::zeros(m, m);
        for &(i, j, d) in couplings {
            if i == 0 || i > m {
                return Err(Error::SpinOutOfRange { index: i, m });
            }
            if j == 0 || j > m {
                return Err(Error::SpinOutOfRange { index: j, m });
            }
            if i == j {
                return Err(Error::RepeatedIndex(i));
            }
            table[(i - 1, j - 1)] = d;
            table[(j - 1, i - 1)] = d;
        }
        Self::new(
            spins
                .iter()
                .map(|(label, species)| Spin {
                    label: label.to_string(),
                    species: *species,
                })
                .collect(),
            vec![T::zero(); m],
            table,
        )
    }

    pub fn with_shifts(mut self, shifts: Vec<T>) -> Result<Self> {
        if shifts.len() != self.spins.len() {
            return Err(Error::InvalidSystem(format!(
                "{} shifts for {} spins",
                shifts.len(),
                self.spins.len()
            )));
        }
        self.shifts = shifts;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn species(&self) -> Vec<Species> {
        self.spins.iter().map(|s| s.species).collect()
    }

    pub fn shifts(&self) -> &[T] {
        &self.shifts
    }

    pub fn couplings(&self) -> &DMatrix<T> {
        &self.couplings
    }

    /// Coupling between 1-based spins `i` and `j`.
    pub fn coupling(&self, i: usize, j: usize) -> T {
        self.couplings[(i - 1, j - 1)]
    }

    pub fn is_homonuclear(&self) -> bool {
        self.spins.windows(2).all(|w| w[0].species == w[1].species)
    }

    /// Position (1-based) of the spin with the given label.
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.spins
            .iter()
            .position(|s| s.label == label)
            .map(|i| i + 1)
    }

    /// The spins with the given labels, in that order, with their shifts and
    /// mutual couplings.
    pub fn subsystem(&self, labels: &[&str]) -> Result<Self> {
        let idx = labels
            .iter()
            .map(|l| {
                self.index_of(l)
                    .map(|i| i - 1)
                    .ok_or_else(|| Error::InvalidSystem(format!("no spin labelled {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        for (a, i) in idx.iter().enumerate() {
            if idx[..a].contains(i) {
                return Err(Error::RepeatedIndex(i + 1));
            }
        }
        let m = idx.len();
        let couplings = DMatrix::from_fn(m, m, |a, b| self.couplings[(idx[a], idx[b])]);
        Self::new(
            idx.iter().map(|&i| self.spins[i].clone()).collect(),
            idx.iter().map(|&i| self.shifts[i]).collect(),
            couplings,
        )
    }

    pub(crate) fn check_index(&self, index: usize) -> Result<()> {
        if index == 0 || index > self.len() {
            return Err(Error::SpinOutOfRange {
                index,
                m: self.len(),
            });
        }
        Ok(())
    }
}
