use super::{RfDistribution, SegmentedPulse};
use crate::cooling::{DiagonalState, Permutation};
use crate::error::{Error, Result};
use crate::spin::{
    evolve, pauli, register_hamiltonian, Axis, CouplingForm, Operator, SpinSystem, Unitary,
};

/// Drift and collective control operators of a register, built once and
/// reused for every propagator.
#[derive(Debug, Clone)]
pub struct PulseModel {
    drift: Operator<f64>,
    sum_x: Operator<f64>,
    sum_y: Operator<f64>,
    sum_z: Operator<f64>,
}

impl PulseModel {
    pub fn new(sys: &SpinSystem<f64>) -> Result<Self> {
        Self::with_form(sys, CouplingForm::Strong)
    }

    pub fn with_form(sys: &SpinSystem<f64>, form: CouplingForm) -> Result<Self> {
        let drift = register_hamiltonian(sys, form)?;
        let m = sys.len();
        let collective = |axis| -> Result<Operator<f64>> {
            (1..=m).try_fold(Operator::zeros(m), |acc, i| {
                Ok(acc + pauli(i, axis, m)?.scale(0.5))
            })
        };
        Ok(Self {
            drift,
            sum_x: collective(Axis::X)?,
            sum_y: collective(Axis::Y)?,
            sum_z: collective(Axis::Z)?,
        })
    }

    pub fn drift(&self) -> &Operator<f64> {
        &self.drift
    }

    pub fn dim(&self) -> usize {
        self.drift.dim()
    }

    /// Piecewise-constant propagator at the given RF scale, segments applied in order.
    pub fn propagator(&self, pulse: &SegmentedPulse, rf_scale: f64) -> Unitary<f64> {
        pulse
            .segments()
            .iter()
            .fold(Unitary::identity(self.dim()), |acc, s| {
                let nu = rf_scale * s.amplitude_khz;
                let h = self.drift.clone()
                    + self.sum_x.scale(nu * s.phase_rad.cos())
                    + self.sum_y.scale(nu * s.phase_rad.sin())
                    - self.sum_z.scale(s.offset_khz);
                evolve(&h, s.duration_ms).after(&acc)
            })
    }

    pub fn gate_fidelity(
        &self,
        pulse: &SegmentedPulse,
        target: &Unitary<f64>,
        dist: &RfDistribution,
    ) -> Result<FidelityReport> {
        if target.dim() != self.dim() {
            return Err(Error::SizeMismatch {
                expected: self.dim(),
                got: target.dim(),
            });
        }
        let d2 = (self.dim() * self.dim()) as f64;
        Ok(FidelityReport::collect(dist, |scale| {
            let u = self.propagator(pulse, scale);
            (target.trace_overlap(&u).norm_sqr() / d2).clamp(0.0, 1.0)
        }))
    }

    pub fn state_fidelity(
        &self,
        pulse: &SegmentedPulse,
        inputs: &[DiagonalState<f64>],
        target: &Permutation,
        dist: &RfDistribution,
    ) -> Result<FidelityReport> {
        if inputs.is_empty() {
            return Err(Error::InvalidState("no input states".into()));
        }
        if target.len() != self.dim() {
            return Err(Error::SizeMismatch {
                expected: self.dim(),
                got: target.len(),
            });
        }
        let targets = inputs
            .iter()
            .map(|s| {
                if s.len() != self.dim() {
                    return Err(Error::SizeMismatch {
                        expected: self.dim(),
                        got: s.len(),
                    });
                }
                s.apply(target)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FidelityReport::collect(dist, |scale| {
            let u = self.propagator(pulse, scale);
            let total: f64 = inputs
                .iter()
                .zip(&targets)
                .map(|(input, want)| {
                    population_overlap(&u.evolve_populations(input.probs()), want.probs())
                })
                .sum();
            total / inputs.len() as f64
        }))
    }
}

/// Classical fidelity `(Σ_b sqrt(p_b q_b))^2` of two population vectors.
fn population_overlap(p: &[f64], q: &[f64]) -> f64 {
    let bc: f64 = p
        .iter()
        .zip(q)
        .map(|(a, b)| (a.max(0.0) * b.max(0.0)).sqrt())
        .sum();
    (bc * bc).clamp(0.0, 1.0)
}

/// Weighted mean and worst case of a fidelity over the RF distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityReport {
    pub mean: f64,
    pub worst: f64,
}

impl FidelityReport {
    fn collect(dist: &RfDistribution, f: impl Fn(f64) -> f64) -> Self {
        dist.points().iter().fold(
            Self {
                mean: 0.0,
                worst: 1.0,
            },
            |acc, p| {
                let v = f(p.scale);
                Self {
                    mean: acc.mean + p.weight * v,
                    worst: acc.worst.min(v),
                }
            },
        )
    }
}

/// `Π_seg exp(-i 2π H_seg t_seg)` with
/// `H_seg = H_reg + s·a·Σ(cos φ x_i + sin φ y_i)/2 − offset·Σ z_i/2`.
pub fn pulse_propagator(
    sys: &SpinSystem<f64>,
    pulse: &SegmentedPulse,
    rf_scale: f64,
) -> Result<Unitary<f64>> {
    Ok(PulseModel::new(sys)?.propagator(pulse, rf_scale))
}

/// Ensemble-averaged `|Tr(target† U)|² / 4^m`.
pub fn gate_fidelity(
    sys: &SpinSystem<f64>,
    pulse: &SegmentedPulse,
    target: &Unitary<f64>,
    dist: &RfDistribution,
) -> Result<FidelityReport> {
    PulseModel::new(sys)?.gate_fidelity(pulse, target, dist)
}

/// Population overlap between the evolved diagonals and the permuted inputs,
/// averaged over inputs and the RF distribution.
pub fn state_fidelity(
    sys: &SpinSystem<f64>,
    pulse: &SegmentedPulse,
    inputs: &[DiagonalState<f64>],
    target: &Permutation,
    dist: &RfDistribution,
) -> Result<FidelityReport> {
    PulseModel::new(sys)?.state_fidelity(pulse, inputs, target, dist)
}
