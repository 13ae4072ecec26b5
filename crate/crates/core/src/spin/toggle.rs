use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::operator::{Axis, Operator, Unitary};
use super::system::Species;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Ideal (delta) rotation by `angle` radians about `axis`: `exp(-i angle σ_axis / 2)`
/// on every spin it addresses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rotation<T> {
    pub axis: Axis,
    pub angle: T,
}

impl<T: Real> Rotation<T> {
    pub fn new(axis: Axis, angle: T) -> Self {
        Self { axis, angle }
    }

    pub fn quarter(axis: Axis) -> Self {
        Self::new(axis, T::frac_pi_2())
    }

    pub fn minus_quarter(axis: Axis) -> Self {
        Self::new(axis, -T::frac_pi_2())
    }

    fn single_spin(&self) -> DMatrix<Complex<T>> {
        let half = self.angle / T::lit(2.0);
        let (c, s) = (half.cos(), half.sin());
        let eye: DMatrix<Complex<T>> = DMatrix::identity(2, 2);
        eye * Complex::new(c, T::zero()) - self.axis.matrix::<T>() * Complex::new(T::zero(), s)
    }
}

/// Pulse applied synchronously to both species; `None` leaves that species alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct CollectivePulse<T> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carbon: Option<Rotation<T>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub proton: Option<Rotation<T>>,
}

impl<T> Default for CollectivePulse<T> {
    fn default() -> Self {
        Self {
            carbon: None,
            proton: None,
        }
    }
}

impl<T: Real> CollectivePulse<T> {
    pub fn none() -> Self {
        Self {
            carbon: None,
            proton: None,
        }
    }

    pub fn both(r: Rotation<T>) -> Self {
        Self {
            carbon: Some(r),
            proton: Some(r),
        }
    }

    pub fn unitary(&self, species: &[Species]) -> Unitary<T> {
        let eye = DMatrix::identity(2, 2);
        let factors: Vec<_> = species
            .iter()
            .map(|s| {
                let r = match s {
                    Species::Carbon => self.carbon,
                    Species::Proton => self.proton,
                };
                r.map_or_else(|| eye.clone(), |r| r.single_spin())
            })
            .collect();
        Unitary::kron_all(&factors)
    }
}

/// A pulse followed by a free-evolution dwell of `dwell` ms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de>"))]
pub struct ToggleStep<T> {
    #[serde(default)]
    pub pulse: CollectivePulse<T>,
    pub dwell: T,
}

/// Multiple-pulse cycle of ideal rotations and dwells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToggleSequence<T> {
    steps: Vec<ToggleStep<T>>,
}

impl<T: Real> ToggleSequence<T> {
    pub fn new(steps: Vec<ToggleStep<T>>) -> Result<Self> {
        if let Some(bad) = steps.iter().find(|s| !(s.dwell > T::zero())) {
            return Err(Error::InvalidConfig(format!(
                "dwell {} is not positive",
                bad.dwell.to_f64().unwrap_or(f64::NAN)
            )));
        }
        Ok(Self { steps })
    }

    pub fn steps(&self) -> &[ToggleStep<T>] {
        &self.steps
    }

    pub fn cycle_time(&self) -> T {
        self.steps.iter().fold(T::zero(), |acc, s| acc + s.dwell)
    }

    /// Six equal dwells visiting the z, y, x, x, y, z toggling frames, with
    /// pulses `·, X, −Y, ·, Y, −X` on both species. Net rotation is identity
    /// and every axis gets a third of the cycle.
    pub fn balanced_xyz(cycle_time: T) -> Result<Self> {
        let dwell = cycle_time / T::lit(6.0);
        let pulses = [
            CollectivePulse::none(),
            CollectivePulse::both(Rotation::quarter(Axis::X)),
            CollectivePulse::both(Rotation::minus_quarter(Axis::Y)),
            CollectivePulse::none(),
            CollectivePulse::both(Rotation::quarter(Axis::Y)),
            CollectivePulse::both(Rotation::minus_quarter(Axis::X)),
        ];
        Self::new(
            pulses
                .into_iter()
                .map(|pulse| ToggleStep { pulse, dwell })
                .collect(),
        )
    }

    /// Four equal dwells separated by x quarter turns (frames z, y, −z, −y), a
    /// discrete stand-in for continuous x-axis spin-locking.
    pub fn spin_lock_x(cycle_time: T) -> Result<Self> {
        let dwell = cycle_time / T::lit(4.0);
        let x = CollectivePulse::both(Rotation::quarter(Axis::X));
        Self::new(vec![
            ToggleStep {
                pulse: CollectivePulse::none(),
                dwell,
            },
            ToggleStep { pulse: x, dwell },
            ToggleStep { pulse: x, dwell },
            ToggleStep { pulse: x, dwell },
        ])
    }

    /// Accumulated frame rotation before each dwell.
    pub fn frames(&self, species: &[Species]) -> Vec<Unitary<T>> {
        let mut acc = Unitary::identity(1 << species.len());
        self.steps
            .iter()
            .map(|s| {
                acc = s.pulse.unitary(species).after(&acc);
                acc.clone()
            })
            .collect()
    }

    /// Cycle rotation left over after the last dwell.
    pub fn net_rotation(&self, species: &[Species]) -> Unitary<T> {
        self.frames(species)
            .pop()
            .unwrap_or_else(|| Unitary::identity(1 << species.len()))
    }

    /// Accumulated rotation before the pulse of step `k` (identity for `k = 0`).
    pub fn frame_before(&self, k: usize, species: &[Species]) -> Unitary<T> {
        match k {
            0 => Unitary::identity(1 << species.len()),
            _ => self.frames(species).swap_remove((k - 1) % self.steps.len()),
        }
    }

    /// Rotates the sequence so that it starts at step `k`. For a cycle with
    /// identity net rotation the rotated cycle visits the same frames, seen
    /// from [`frame_before`](Self::frame_before)`(k)`, so its average is the
    /// original one expressed in that frame.
    pub fn rotated(&self, k: usize) -> Self {
        let mut steps = self.steps.clone();
        if !steps.is_empty() {
            steps.rotate_left(k % self.steps.len());
        }
        Self { steps }
    }
}

/// Zeroth-order average Hamiltonian `(1/T) Σ_k τ_k R_k† H R_k`, where `R_k` is
/// the accumulated ideal rotation before dwell `k`.
pub fn toggling_average<T: Real>(
    h: &Operator<T>,
    seq: &ToggleSequence<T>,
    species: &[Species],
) -> Result<Operator<T>> {
    if species.len() != h.spins() {
        return Err(Error::SizeMismatch {
            expected: h.spins(),
            got: species.len(),
        });
    }
    let total = seq.cycle_time();
    if seq.steps().is_empty() || !(total > T::zero()) {
        return Err(Error::ZeroCycleTime);
    }
    let avg = seq
        .frames(species)
        .iter()
        .zip(seq.steps())
        .fold(Operator::zeros(h.spins()), |acc, (frame, step)| {
            acc + h.conjugate_by(frame).scale(step.dwell / total)
        });
    Ok(Operator::hermitian_part(avg.matrix().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::pauli;

    const CC: [Species; 2] = [Species::Carbon, Species::Carbon];
    const CH: [Species; 2] = [Species::Carbon, Species::Proton];

    #[test]
    fn identity_pulses_return_h() {
        let h = pauli::<f64>(1, Axis::Z, 2).unwrap().scale(3.0);
        let seq = ToggleSequence::new(vec![
            ToggleStep {
                pulse: CollectivePulse::none(),
                dwell: 0.2,
            },
            ToggleStep {
                pulse: CollectivePulse::none(),
                dwell: 0.5,
            },
        ])
        .unwrap();
        let avg = toggling_average(&h, &seq, &CH).unwrap();
        assert!(avg.max_abs_diff(&h) < 1e-15);
    }

    #[test]
    fn balanced_xyz_visits_each_axis_equally() {
        let seq = ToggleSequence::<f64>::balanced_xyz(0.04).unwrap();
        let z = pauli::<f64>(1, Axis::Z, 1).unwrap();
        let seen: Vec<Axis> = seq
            .frames(&[Species::Carbon])
            .iter()
            .map(|f| {
                let img = z.conjugate_by(f);
                [Axis::X, Axis::Y, Axis::Z]
                    .into_iter()
                    .find(|&a| {
                        let p = pauli::<f64>(1, a, 1).unwrap();
                        img.max_abs_diff(&p) < 1e-12 || img.max_abs_diff(&-p) < 1e-12
                    })
                    .expect("frame maps z onto an axis")
            })
            .collect();
        assert_eq!(
            seen,
            vec![Axis::Z, Axis::Y, Axis::X, Axis::X, Axis::Y, Axis::Z]
        );
        let net = seq.net_rotation(&CC);
        assert!(net.max_abs_diff(&Unitary::identity(4)) < 1e-12);
    }

    #[test]
    fn empty_sequence_rejected() {
        let seq = ToggleSequence::<f64>::new(vec![]).unwrap();
        let h = Operator::zeros(1);
        assert!(matches!(
            toggling_average(&h, &seq, &[Species::Carbon]),
            Err(Error::ZeroCycleTime)
        ));
        assert!(ToggleSequence::new(vec![ToggleStep {
            pulse: CollectivePulse::<f64>::none(),
            dwell: 0.0
        }])
        .is_err());
    }

    #[test]
    fn species_layout_must_match() {
        let h = Operator::<f64>::zeros(2);
        let seq = ToggleSequence::balanced_xyz(1.0).unwrap();
        assert!(toggling_average(&h, &seq, &[Species::Carbon]).is_err());
    }
}
