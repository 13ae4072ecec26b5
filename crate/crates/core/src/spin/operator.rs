use std::ops::{Add, Neg, Sub};

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::cooling::Permutation;
use crate::error::{Error, Result};
use crate::scalar::Real;

type CMatrix<T> = DMatrix<Complex<T>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub(crate) fn matrix<T: Real>(self) -> CMatrix<T> {
        let (o, z) = (
            Complex::new(T::one(), T::zero()),
            Complex::new(T::zero(), T::zero()),
        );
        let i = Complex::new(T::zero(), T::one());
        match self {
            Axis::X => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
            Axis::Y => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
            Axis::Z => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        }
    }
}

/// Tolerance for Hermiticity checks, relative to the largest entry.
fn hermitian_tol<T: Real>(scale: T) -> T {
    T::default_epsilon() * T::lit(1e4) * (T::one() + scale)
}

fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(z.modulus()))
}

fn spin_count(dim: usize) -> Option<usize> {
    (dim.is_power_of_two() && dim >= 2).then(|| dim.trailing_zeros() as usize)
}

/// Hermitian operator on `m` spins (dimension `2^m`), entries in kHz.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator<T: Real>(CMatrix<T>);

impl<T: Real> Operator<T> {
    /// Wraps a matrix after checking it is square, of spin dimension, and Hermitian.
    pub fn from_matrix(m: CMatrix<T>) -> Result<Self> {
        if !m.is_square() || spin_count(m.nrows()).is_none() {
            return Err(Error::InvalidSystem(format!(
                "operator of shape {}x{} is not a spin operator",
                m.nrows(),
                m.ncols()
            )));
        }
        let dev = max_abs(&(&m - m.adjoint()));
        if dev > hermitian_tol(max_abs(&m)) {
            return Err(Error::NotHermitian(dev.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self(m))
    }

    /// Takes the Hermitian part without checking; for sums of Hermitian terms
    /// that only carry rounding noise.
    pub(crate) fn hermitian_part(m: CMatrix<T>) -> Self {
        let half = Complex::new(T::lit(0.5), T::zero());
        let adj = m.adjoint();
        Self((m + adj) * half)
    }

    pub fn zeros(m: usize) -> Self {
        let d = 1 << m;
        Self(DMatrix::zeros(d, d))
    }

    pub fn identity(m: usize) -> Self {
        let d = 1 << m;
        Self(DMatrix::identity(d, d))
    }

    pub fn from_diagonal(diag: &[T]) -> Result<Self> {
        let v =
            DVector::from_iterator(diag.len(), diag.iter().map(|&d| Complex::new(d, T::zero())));
        Self::from_matrix(DMatrix::from_diagonal(&v))
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn spins(&self) -> usize {
        spin_count(self.dim()).expect("validated at construction")
    }

    pub fn scale(&self, factor: T) -> Self {
        Self(&self.0 * Complex::new(factor, T::zero()))
    }

    /// Product of two Hermitian operators (not Hermitian in general).
    pub fn product(&self, other: &Self) -> CMatrix<T> {
        &self.0 * &other.0
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> CMatrix<T> {
        &self.0 * &other.0 - &other.0 * &self.0
    }

    pub fn commutes_with(&self, other: &Self, tol: T) -> bool {
        max_abs(&self.commutator(other)) <= tol
    }

    pub fn max_abs_entry(&self) -> T {
        max_abs(&self.0)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        max_abs(&(&self.0 - &other.0))
    }

    pub fn is_diagonal(&self, tol: T) -> bool {
        self.0
            .iter()
            .enumerate()
            .all(|(k, z)| k % (self.dim() + 1) == 0 || z.modulus() <= tol)
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        let mut ev: Vec<T> = self
            .0
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        ev
    }

    /// Spectral norm (largest eigenvalue magnitude).
    pub fn norm(&self) -> T {
        self.eigenvalues()
            .into_iter()
            .fold(T::zero(), |acc, e| acc.max(e.abs()))
    }

    /// Conjugation `U† H U`, the toggling-frame image of `H` under `U`.
    pub fn conjugate_by(&self, u: &Unitary<T>) -> Self {
        Self::hermitian_part(u.0.adjoint() * &self.0 * &u.0)
    }
}

impl<T: Real> Add for Operator<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl<T: Real> Sub for Operator<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl<T: Real> Neg for Operator<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

/// Unitary on `2^m` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary<T: Real>(CMatrix<T>);

impl<T: Real> Unitary<T> {
    /// Wraps a matrix after checking `U†U = 1` within `1e-10`-scale tolerance.
    pub fn from_matrix(m: CMatrix<T>) -> Result<Self> {
        if !m.is_square() || spin_count(m.nrows()).is_none() {
            return Err(Error::InvalidSystem(format!(
                "matrix of shape {}x{} is not a spin propagator",
                m.nrows(),
                m.ncols()
            )));
        }
        let u = Self(m);
        let dev = u.unitarity_error();
        if dev > T::default_epsilon().sqrt() * T::lit(1e-2) {
            return Err(Error::InvalidSystem(format!(
                "matrix is not unitary (deviation {:e})",
                dev.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(u)
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    /// Permutation matrix with `U|b> = |perm(b)>`.
    pub fn from_permutation(perm: &Permutation) -> Result<Self> {
        let d = perm.len();
        if spin_count(d).is_none() {
            return Err(Error::SizeMismatch {
                expected: d.next_power_of_two().max(2),
                got: d,
            });
        }
        let mut m = DMatrix::zeros(d, d);
        for b in 0..d {
            m[(perm.image(b), b)] = Complex::new(T::one(), T::zero());
        }
        Ok(Self(m))
    }

    /// Tensor product of single-spin 2x2 unitaries, spin 1 leftmost.
    pub(crate) fn kron_all(factors: &[CMatrix<T>]) -> Self {
        let mut acc = DMatrix::from_element(1, 1, Complex::new(T::one(), T::zero()));
        for f in factors {
            acc = acc.kronecker(f);
        }
        Self(acc)
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `self` applied after `first`: returns `self · first`.
    pub fn after(&self, first: &Self) -> Self {
        Self(&self.0 * &first.0)
    }

    pub fn unitarity_error(&self) -> T {
        let d = self.dim();
        max_abs(&(self.0.adjoint() * &self.0 - DMatrix::identity(d, d)))
    }

    /// `Tr(self† · other)`.
    pub fn trace_overlap(&self, other: &Self) -> Complex<T> {
        self.0
            .iter()
            .zip(other.0.iter())
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            })
    }

    /// Diagonal of `U diag(p) U†`: populations after evolving a diagonal state.
    pub fn evolve_populations(&self, probs: &[T]) -> Vec<T> {
        let d = self.dim();
        (0..d)
            .map(|r| {
                (0..d).fold(T::zero(), |acc, c| {
                    acc + self.0[(r, c)].norm_sqr() * probs[c]
                })
            })
            .collect()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        max_abs(&(&self.0 - &other.0))
    }
}

/// Single-spin Pauli operator on 1-based `spin` of an `m`-spin system.
pub fn pauli<T: Real>(spin: usize, axis: Axis, m: usize) -> Result<Operator<T>> {
    if spin == 0 || spin > m {
        return Err(Error::SpinOutOfRange { index: spin, m });
    }
    let eye = DMatrix::identity(2, 2);
    let factors: Vec<_> = (1..=m)
        .map(|k| {
            if k == spin {
                axis.matrix()
            } else {
                eye.clone()
            }
        })
        .collect();
    Ok(Operator(Unitary::kron_all(&factors).0))
}

/// `U = exp(-i 2π H t)` with `H` in kHz and `t` in ms, via eigendecomposition.
pub fn evolve<T: Real>(h: &Operator<T>, t: T) -> Unitary<T> {
    let eig = h.0.clone().symmetric_eigen();
    let two_pi = T::two_pi();
    let phases = DVector::from_iterator(
        h.dim(),
        eig.eigenvalues.iter().map(|&e| {
            let theta = -two_pi * e * t;
            Complex::new(theta.cos(), theta.sin())
        }),
    );
    let v = &eig.eigenvectors;
    Unitary(v * DMatrix::from_diagonal(&phases) * v.adjoint())
}
