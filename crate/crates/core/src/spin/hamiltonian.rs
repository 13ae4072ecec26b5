use super::operator::{pauli, Axis, Operator};
use super::system::{Species, SpinSystem};
use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Which secular dipolar form the register Hamiltonian uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingForm {
    /// `D (2 zz - xx - yy) / 4`, flip-flop terms kept (strong coupling).
    #[default]
    Strong,
    /// `D zz / 2` only (weak coupling).
    Weak,
}

fn bilinear<T: Real>(j: usize, k: usize, axis: Axis, m: usize) -> Result<Operator<T>> {
    let a = pauli::<T>(j, axis, m)?;
    let b = pauli::<T>(k, axis, m)?;
    Ok(Operator::hermitian_part(a.product(&b)))
}

fn heteronuclear_pairs<T: Real>(sys: &SpinSystem<T>) -> Result<Vec<(usize, usize, T)>> {
    let spins = sys.spins();
    let carbons = spins
        .iter()
        .filter(|s| s.species == Species::Carbon)
        .count();
    if carbons == 0 || carbons == spins.len() {
        return Err(Error::EmptyOperator(
            "system needs both C and H spins for heteronuclear couplings".into(),
        ));
    }
    let mut pairs = Vec::new();
    for (j, sj) in spins.iter().enumerate() {
        for (k, sk) in spins.iter().enumerate() {
            if sj.species == Species::Carbon && sk.species == Species::Proton {
                pairs.push((j + 1, k + 1, sys.coupling(j + 1, k + 1)));
            }
        }
    }
    Ok(pairs)
}

/// Isotropic C–H exchange, `Σ_{j∈C, k∈H} D_jk/3 · (zz + yy + xx)/2`.
pub fn exchange_hamiltonian<T: Real>(sys: &SpinSystem<T>) -> Result<Operator<T>> {
    let m = sys.len();
    let mut h = Operator::zeros(m);
    for (j, k, d) in heteronuclear_pairs(sys)? {
        if d == T::zero() {
            continue;
        }
        let heis =
            bilinear(j, k, Axis::Z, m)? + bilinear(j, k, Axis::Y, m)? + bilinear(j, k, Axis::X, m)?;
        h = h + heis.scale(d / T::lit(6.0));
    }
    Ok(h)
}

/// Natural heteronuclear dipolar coupling, `Σ_{j∈C, k∈H} D_jk zz / 2`.
pub fn natural_hamiltonian<T: Real>(sys: &SpinSystem<T>) -> Result<Operator<T>> {
    let m = sys.len();
    let mut h = Operator::zeros(m);
    for (j, k, d) in heteronuclear_pairs(sys)? {
        if d == T::zero() {
            continue;
        }
        h = h + bilinear(j, k, Axis::Z, m)?.scale(d / T::lit(2.0));
    }
    Ok(h)
}

/// Homonuclear rotating-frame register Hamiltonian:
/// `Σ ν_i z_i / 2 + Σ_{i<j} D_ij (2 z_i z_j − x_i x_j − y_i y_j) / 4`.
pub fn register_hamiltonian<T: Real>(
    sys: &SpinSystem<T>,
    form: CouplingForm,
) -> Result<Operator<T>> {
    if !sys.is_homonuclear() {
        return Err(Error::InvalidSystem(
            "register Hamiltonian needs a single species".into(),
        ));
    }
    let m = sys.len();
    let mut h = Operator::zeros(m);
    for (i, &nu) in sys.shifts().iter().enumerate() {
        if nu != T::zero() {
            h = h + pauli(i + 1, Axis::Z, m)?.scale(nu / T::lit(2.0));
        }
    }
    for i in 1..=m {
        for j in (i + 1)..=m {
            let d = sys.coupling(i, j);
            if d == T::zero() {
                continue;
            }
            let zz = bilinear(i, j, Axis::Z, m)?;
            let term = match form {
                CouplingForm::Strong => {
                    zz.scale(T::lit(2.0))
                        - bilinear(i, j, Axis::X, m)?
                        - bilinear(i, j, Axis::Y, m)?
                }
                CouplingForm::Weak => zz.scale(T::lit(2.0)),
            };
            h = h + term.scale(d / T::lit(4.0));
        }
    }
    Ok(h)
}
