use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fidelity::{FidelityReport, PulseModel};
use super::simplex::nelder_mead;
use super::{PulseSegment, RfDistribution, SegmentedPulse};
use crate::cooling::{DiagonalState, Permutation};
use crate::error::{Error, Result};
use crate::spin::{CouplingForm, SpinSystem, Unitary};

/// Search settings. Penalty weights are tuning knobs, not physical constants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizationConfig {
    pub segments: usize,
    /// Dipolar form of the register drift.
    pub coupling_form: CouplingForm,
    /// Weight of the quadratic hinge below the mean-amplitude floor.
    pub amplitude_floor_weight: f64,
    /// Mean-amplitude floor in kHz; `None` uses the spectral norm of the
    /// register Hamiltonian.
    pub amplitude_floor_khz: Option<f64>,
    /// Weight (per ms) of the linear penalty on duration beyond `max_duration_ms`.
    pub duration_weight: f64,
    pub max_duration_ms: f64,
    pub max_amplitude_khz: f64,
    /// Total objective evaluations, split evenly over the restarts.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Mean fidelity below which the result is flagged best-effort.
    pub fidelity_floor: f64,
}

impl Default for OptimizationConfig {
    fn default() -> Self {
        Self {
            segments: 8,
            coupling_form: CouplingForm::Strong,
            amplitude_floor_weight: 1.0,
            amplitude_floor_khz: None,
            duration_weight: 1.0,
            max_duration_ms: 1.3,
            max_amplitude_khz: 50.0,
            budget: 200_000,
            restarts: 8,
            seed: 0,
            tolerance: 1e-12,
            fidelity_floor: 0.99,
        }
    }
}

impl OptimizationConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.into()));
        if self.budget == 0 {
            return bad("budget must be positive");
        }
        if self.segments == 0 {
            return bad("need at least one segment");
        }
        if self.restarts == 0 {
            return bad("need at least one restart");
        }
        if !(self.max_duration_ms > 0.0) || !(self.max_amplitude_khz > 0.0) {
            return bad("duration and amplitude limits must be positive");
        }
        if self.amplitude_floor_weight < 0.0 || self.duration_weight < 0.0 {
            return bad("penalty weights must be nonnegative");
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance must be positive");
        }
        Ok(())
    }
}

/// What the pulse should achieve.
#[derive(Debug, Clone)]
pub enum Objective {
    /// Full unitary design, scored by ensemble entanglement fidelity.
    Gate(Unitary<f64>),
    /// State-specific design: map each input diagonal to its permuted image.
    States {
        inputs: Vec<DiagonalState<f64>>,
        target: Permutation,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizedPulse {
    pub pulse: SegmentedPulse,
    pub fidelity: FidelityReport,
    /// Penalized objective `1 − F + penalties` of the returned pulse.
    pub objective: f64,
    /// Penalized objective at the supplied starting pulse, if any.
    pub start_objective: Option<f64>,
    pub evaluations: usize,
    /// `false` when the budget ran out below the fidelity floor.
    pub reached_floor: bool,
}

const PARAMS_PER_SEGMENT: usize = 4;
const MIN_DURATION_MS: f64 = 1e-6;

fn decode(x: &[f64]) -> SegmentedPulse {
    let segments = x
        .chunks(PARAMS_PER_SEGMENT)
        .map(|c| PulseSegment {
            amplitude_khz: c[0].abs(),
            phase_rad: c[1],
            offset_khz: c[2],
            duration_ms: c[3].abs().max(MIN_DURATION_MS),
        })
        .collect();
    SegmentedPulse::new(segments).expect("decoded segments are valid")
}

fn encode(pulse: &SegmentedPulse) -> Vec<f64> {
    pulse
        .segments()
        .iter()
        .flat_map(|s| [s.amplitude_khz, s.phase_rad, s.offset_khz, s.duration_ms])
        .collect()
}

struct Problem<'a> {
    model: PulseModel,
    objective: &'a Objective,
    dist: &'a RfDistribution,
    cfg: &'a OptimizationConfig,
    floor: f64,
}

impl Problem<'_> {
    fn fidelity(&self, pulse: &SegmentedPulse) -> FidelityReport {
        match self.objective {
            Objective::Gate(u) => self.model.gate_fidelity(pulse, u, self.dist),
            Objective::States { inputs, target } => {
                self.model.state_fidelity(pulse, inputs, target, self.dist)
            }
        }
        .expect("dimensions checked before the search")
    }

    fn penalty(&self, pulse: &SegmentedPulse) -> f64 {
        let cfg = self.cfg;
        let mut p = 0.0;
        if self.floor > 0.0 {
            let short = ((self.floor - pulse.mean_amplitude()) / self.floor).max(0.0);
            p += cfg.amplitude_floor_weight * short * short;
        }
        p += cfg.duration_weight * (pulse.total_duration() - cfg.max_duration_ms).max(0.0);
        for s in pulse.segments() {
            let over = ((s.amplitude_khz - cfg.max_amplitude_khz) / cfg.max_amplitude_khz).max(0.0);
            p += over * over;
        }
        p
    }

    fn value(&self, pulse: &SegmentedPulse) -> f64 {
        1.0 - self.fidelity(pulse).mean + self.penalty(pulse)
    }

    fn random_start(&self, rng: &mut ChaCha8Rng, shift_scale: f64) -> Vec<f64> {
        let n = self.cfg.segments;
        let amp_scale = if self.floor > 0.0 { self.floor } else { 5.0 };
        let total = self.cfg.max_duration_ms * rng.gen_range(0.3..0.9);
        (0..n)
            .flat_map(|_| {
                [
                    rng.gen_range(amp_scale..3.0 * amp_scale)
                        .min(self.cfg.max_amplitude_khz),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                    rng.gen_range(-shift_scale..shift_scale),
                    total / n as f64 * rng.gen_range(0.5..1.5),
                ]
            })
            .collect()
    }

    fn steps(&self, x: &[f64]) -> Vec<f64> {
        let amp_scale = if self.floor > 0.0 { self.floor } else { 5.0 };
        x.chunks(PARAMS_PER_SEGMENT)
            .flat_map(|c| [0.3 * amp_scale, 0.6, 0.5, 0.2 * c[3].abs().max(0.01)])
            .collect()
    }
}

/// Designs a pulse implementing a basis permutation as a full unitary.
pub fn optimize_pulse(
    sys: &SpinSystem<f64>,
    target: &Permutation,
    cfg: &OptimizationConfig,
    dist: &RfDistribution,
) -> Result<OptimizedPulse> {
    let u = Unitary::from_permutation(target)?;
    optimize_with(sys, &Objective::Gate(u), cfg, dist, None)
}

/// Multi-start simplex search. Restart 0 begins at `start` when given; the
/// others begin at seeded random pulses. Restarts run in parallel and the
/// lowest objective wins (ties go to the lower restart index), so the result
/// depends only on the inputs and `cfg.seed`.
pub fn optimize_with(
    sys: &SpinSystem<f64>,
    objective: &Objective,
    cfg: &OptimizationConfig,
    dist: &RfDistribution,
    start: Option<&SegmentedPulse>,
) -> Result<OptimizedPulse> {
    cfg.validate()?;
    let model = PulseModel::with_form(sys, cfg.coupling_form)?;
    let dim = model.dim();
    match objective {
        Objective::Gate(u) if u.dim() != dim => {
            return Err(Error::SizeMismatch {
                expected: dim,
                got: u.dim(),
            })
        }
        Objective::States { inputs, target } => {
            if inputs.is_empty() {
                return Err(Error::InvalidState("no input states".into()));
            }
            if let Some(bad) = inputs
                .iter()
                .map(|s| s.len())
                .chain([target.len()])
                .find(|&l| l != dim)
            {
                return Err(Error::SizeMismatch {
                    expected: dim,
                    got: bad,
                });
            }
        }
        _ => {}
    }
    let floor = match cfg.amplitude_floor_khz {
        Some(f) => f,
        None => model.drift().norm(),
    };
    let shift_scale = sys
        .shifts()
        .iter()
        .fold(1.0f64, |m, s| m.max(s.abs() + 1.0));
    let problem = Problem {
        model,
        objective,
        dist,
        cfg,
        floor,
    };

    let mut master = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<Vec<f64>> = (0..cfg.restarts)
        .map(|_| problem.random_start(&mut master, shift_scale))
        .collect();
    if let Some(p) = start {
        starts[0] = encode(p);
    }
    let per_restart = (cfg.budget / cfg.restarts).max(1);

    let outcomes: Vec<_> = starts
        .par_iter()
        .map(|x0| {
            let steps = problem.steps(x0);
            nelder_mead(
                |x| problem.value(&decode(x)),
                x0,
                &steps,
                per_restart,
                cfg.tolerance,
            )
        })
        .collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    let start_objective = start.map(|_| outcomes[0].start_value);
    let best = outcomes
        .into_iter()
        .reduce(|a, b| if b.value < a.value { b } else { a })
        .expect("at least one restart");
    let pulse = decode(&best.x);
    let fidelity = problem.fidelity(&pulse);
    Ok(OptimizedPulse {
        reached_floor: fidelity.mean >= cfg.fidelity_floor,
        objective: best.value,
        start_objective,
        evaluations,
        fidelity,
        pulse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{evolve, pauli, Axis, Species};

    #[test]
    fn config_validation() {
        let mut cfg = OptimizationConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.budget = 0;
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn encode_decode_roundtrip() {
        let p = SegmentedPulse::new(vec![
            PulseSegment::new(0.1, 3.0, 0.5, -1.0).unwrap(),
            PulseSegment::new(0.2, 7.0, 2.5, 0.25).unwrap(),
        ])
        .unwrap();
        assert_eq!(decode(&encode(&p)), p);
    }

    #[test]
    fn single_spin_quarter_turn() {
        let sys = SpinSystem::from_couplings(&[("C", Species::Carbon)], &[]).unwrap();
        let target = evolve(&pauli(1, Axis::X, 1).unwrap().scale(0.5), 0.25);
        let cfg = OptimizationConfig {
            segments: 1,
            budget: 4000,
            restarts: 4,
            seed: 7,
            ..Default::default()
        };
        let out = optimize_with(
            &sys,
            &Objective::Gate(target),
            &cfg,
            &RfDistribution::nominal(),
            None,
        )
        .unwrap();
        assert!(out.fidelity.mean > 0.9999, "{:?}", out.fidelity);
        assert!(out.reached_floor);
    }

    #[test]
    fn rejects_mismatched_target() {
        let sys = SpinSystem::from_couplings(&[("C", Species::Carbon)], &[]).unwrap();
        let cfg = OptimizationConfig::default();
        let perm = Permutation::swap_gate(1, 2, 2).unwrap();
        assert!(optimize_pulse(&sys, &perm, &cfg, &RfDistribution::nominal()).is_err());
    }
}
