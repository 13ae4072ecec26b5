use serde::{Deserialize, Serialize};

use super::ProtocolSchedule;
use crate::cooling::{BathParameters, DiagonalState, Polarization};
use crate::spin::state_correlation_fidelity;
use crate::{Error, Result};

/// Aggregate error model.
///
/// The `k`-th refresh (1-based) delivers `P' * max(0, 1 - c (k-1)^2)` to the
/// reset qubit and multiplies the polarization of every other register qubit
/// by `register_retention`. After each gate every qubit polarization is
/// multiplied by `gate_efficiency`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct ErrorModel {
    refresh_decay: f64,
    gate_efficiency: f64,
    register_retention: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    #[serde(default)]
    refresh_decay: f64,
    #[serde(default = "one")]
    gate_efficiency: f64,
    #[serde(default = "one")]
    register_retention: f64,
}

fn one() -> f64 {
    1.0
}

impl TryFrom<RawModel> for ErrorModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        Self::new(
            raw.refresh_decay,
            raw.gate_efficiency,
            raw.register_retention,
        )
    }
}

impl From<ErrorModel> for RawModel {
    fn from(m: ErrorModel) -> Self {
        RawModel {
            refresh_decay: m.refresh_decay,
            gate_efficiency: m.gate_efficiency,
            register_retention: m.register_retention,
        }
    }
}

impl Default for ErrorModel {
    fn default() -> Self {
        Self::ideal()
    }
}

impl ErrorModel {
    pub fn new(refresh_decay: f64, gate_efficiency: f64, register_retention: f64) -> Result<Self> {
        if !(refresh_decay.is_finite() && refresh_decay >= 0.0) {
            return Err(Error::InvalidErrorModel(format!(
                "refresh_decay {refresh_decay} must be finite and >= 0"
            )));
        }
        for (name, v) in [
            ("gate_efficiency", gate_efficiency),
            ("register_retention", register_retention),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidErrorModel(format!(
                    "{name} {v} outside [0, 1]"
                )));
            }
        }
        Ok(Self {
            refresh_decay,
            gate_efficiency,
            register_retention,
        })
    }

    pub fn ideal() -> Self {
        Self {
            refresh_decay: 0.0,
            gate_efficiency: 1.0,
            register_retention: 1.0,
        }
    }

    pub fn refresh_decay(&self) -> f64 {
        self.refresh_decay
    }

    pub fn gate_efficiency(&self) -> f64 {
        self.gate_efficiency
    }

    pub fn register_retention(&self) -> f64 {
        self.register_retention
    }

    /// Fraction of `P'` delivered by the `k`-th refresh.
    pub fn refresh_delivery(&self, k: usize) -> f64 {
        let m = k.saturating_sub(1) as f64;
        (1.0 - self.refresh_decay * m * m).max(0.0)
    }
}

/// Register polarizations after one step, in units of `P'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    /// 1-based step index.
    pub step: usize,
    pub label: String,
    pub polarizations: Vec<f64>,
    pub uncertainty: f64,
}

/// Runs the schedule from the maximally mixed register.
pub fn run_protocol(
    schedule: &ProtocolSchedule,
    bath: &BathParameters<f64>,
    err: &ErrorModel,
) -> Result<Vec<StepReport>> {
    let p_prime = *bath.refresh_polarization().value();
    if p_prime == 0.0 {
        return Err(Error::InvalidErrorModel(
            "refresh polarization is zero; reports are in units of P'".into(),
        ));
    }
    simulate(schedule, bath, err)?
        .iter()
        .enumerate()
        .map(|(i, state)| {
            let polarizations: Vec<f64> =
                state.polarizations().iter().map(|p| p / p_prime).collect();
            if polarizations.iter().any(|p| !p.is_finite()) {
                return Err(Error::InvalidState("non-finite polarization".into()));
            }
            Ok(StepReport {
                step: i + 1,
                label: schedule.describe(i),
                polarizations,
                uncertainty: 0.0,
            })
        })
        .collect()
}

/// Register state after every step, starting from the maximally mixed register.
pub fn simulate(
    schedule: &ProtocolSchedule,
    bath: &BathParameters<f64>,
    err: &ErrorModel,
) -> Result<Vec<DiagonalState<f64>>> {
    let p_prime = *bath.refresh_polarization().value();
    let n = schedule.n();
    let mut state = DiagonalState::<f64>::maximally_mixed(n)?;
    let mut refreshes = 0;
    let mut states = Vec::with_capacity(schedule.len());
    for (i, step) in schedule.steps().iter().enumerate() {
        if let super::Step::Refresh(target) = step {
            refreshes += 1;
            if err.register_retention < 1.0 {
                for q in (1..=n).filter(|q| q != target) {
                    state = state.depolarize_qubit(q, &err.register_retention)?;
                }
            }
            let fresh = Polarization::new(p_prime * err.refresh_delivery(refreshes))?;
            state = state.reset_qubit(*target, &fresh)?;
        } else {
            let perm = schedule.gate(i).expect("gate steps carry a permutation");
            state = state.apply(perm)?;
            if err.gate_efficiency < 1.0 {
                for q in 1..=n {
                    state = state.depolarize_qubit(q, &err.gate_efficiency)?;
                }
            }
        }
        states.push(state.clone());
    }
    Ok(states)
}

/// State-correlation fidelity of the gate at `step` (1-based): the register
/// after that step against the ideal gate applied to the register before it.
pub fn gate_state_fidelity(
    schedule: &ProtocolSchedule,
    bath: &BathParameters<f64>,
    err: &ErrorModel,
    step: usize,
) -> Result<f64> {
    if step == 0 || step > schedule.len() {
        return Err(Error::InvalidConfig(format!(
            "step {step} not in a schedule of {}",
            schedule.len()
        )));
    }
    let perm = schedule
        .gate(step - 1)
        .ok_or_else(|| Error::InvalidConfig(format!("step {step} is not a gate")))?;
    let states = simulate(schedule, bath, err)?;
    let before = match step {
        1 => DiagonalState::maximally_mixed(schedule.n())?,
        _ => states[step - 2].clone(),
    };
    state_correlation_fidelity(&states[step - 1], &before.apply(perm)?)
}
