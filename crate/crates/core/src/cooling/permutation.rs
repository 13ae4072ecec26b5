use super::qubit_mask;
use crate::error::{Error, Result};

/// Bijection on the basis indices `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &m in &map {
            if m >= map.len() || seen[m] {
                return Err(Error::NotBijection(map.len()));
            }
            seen[m] = true;
        }
        Ok(Self { map })
    }

    pub fn identity(len: usize) -> Self {
        Self {
            map: (0..len).collect(),
        }
    }

    /// Exchanges the bit values of qubits `i` and `j` in every basis index.
    pub fn swap_gate(i: usize, j: usize, n: usize) -> Result<Self> {
        let (mi, mj) = (qubit_mask(i, n)?, qubit_mask(j, n)?);
        if i == j {
            return Err(Error::RepeatedIndex(i));
        }
        let map = (0..1usize << n)
            .map(|b| {
                let (bi, bj) = (b & mi != 0, b & mj != 0);
                if bi == bj {
                    b
                } else {
                    b ^ mi ^ mj
                }
            })
            .collect();
        Ok(Self { map })
    }

    /// Three-bit compression onto qubit `i`: exchanges the local patterns
    /// `(b_i, b_j, b_k) = 011` and `100`, fixing the other six.
    pub fn three_bit_compression(n: usize, (i, j, k): (usize, usize, usize)) -> Result<Self> {
        let (mi, mj, mk) = (qubit_mask(i, n)?, qubit_mask(j, n)?, qubit_mask(k, n)?);
        if i == j || i == k {
            return Err(Error::RepeatedIndex(i));
        }
        if j == k {
            return Err(Error::RepeatedIndex(j));
        }
        let all = mi | mj | mk;
        let map = (0..1usize << n)
            .map(|b| match b & all {
                p if p == mj | mk || p == mi => b ^ all,
                _ => b,
            })
            .collect();
        Ok(Self { map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, b: usize) -> usize {
        self.map[b]
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &m)| i == m)
    }

    pub fn inverse(&self) -> Self {
        let mut map = vec![0; self.len()];
        for (b, &m) in self.map.iter().enumerate() {
            map[m] = b;
        }
        Self { map }
    }

    /// `self` followed by `next`: `b -> next(self(b))`.
    pub fn then(&self, next: &Permutation) -> Result<Self> {
        if next.len() != self.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                got: next.len(),
            });
        }
        Ok(Self {
            map: self.map.iter().map(|&m| next.map[m]).collect(),
        })
    }
}
