//! Shared TOML configuration tree.
//!
//! Every section has defaults, so a file only needs the keys it changes. The
//! reference file for the malonic-acid register is embedded as
//! [`REFERENCE_TOML`].

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cooling::{BathParameters, Polarization};
use crate::experiment::{ErrorModel, ProtocolSchedule, Step};
use crate::pulse::{OptimizationConfig, RfDistribution, DEFAULT_RF_SIGMA};
use crate::spin::{Spin, SpinSystem, ToggleSequence, ToggleStep};
use crate::{Error, Result};

pub const REFERENCE_TOML: &str = include_str!("../configs/malonic_acid.toml");

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub bath: BathConfig,
    pub constants: Constants,
    pub system: SystemConfig,
    pub transfer: TransferConfig,
    pub toggle: ToggleConfig,
    pub pulse: PulseConfig,
    pub experiment: ExperimentConfig,
}

impl Config {
    pub fn reference() -> Self {
        toml::from_str(REFERENCE_TOML).expect("reference config parses")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Canonical serialization, stable for equal configs.
    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BathConfig {
    /// Thermal proton polarization `P_H`.
    pub p_bath: f64,
    /// Refresh efficiency, `P' = eta * P_H`.
    pub eta: f64,
}

impl Default for BathConfig {
    fn default() -> Self {
        Self {
            p_bath: 2.4e-5,
            eta: 1.0,
        }
    }
}

impl BathConfig {
    pub fn parameters(&self) -> Result<BathParameters<f64>> {
        BathParameters::new(Polarization::new(self.p_bath)?, self.eta)
    }
}

/// Relaxation times carried for timing sanity checks only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constants {
    pub t1_proton_s: f64,
    pub t2_proton_us: f64,
    pub t2_star_carbon_ms: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            t1_proton_s: 50.0,
            t2_proton_us: 100.0,
            t2_star_carbon_ms: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Set when the numbers are placeholders rather than measured values.
    #[serde(default)]
    pub illustrative: bool,
    pub spins: Vec<Spin>,
    pub shifts_khz: Vec<f64>,
    pub couplings_khz: Vec<Vec<f64>>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        let mut table: toml::Table =
            toml::from_str(REFERENCE_TOML).expect("reference config parses");
        table
            .remove("system")
            .expect("reference config has a system table")
            .try_into()
            .expect("reference system is valid")
    }
}

impl SystemConfig {
    pub fn build(&self) -> Result<SpinSystem<f64>> {
        let m = self.spins.len();
        if self.couplings_khz.len() != m || self.couplings_khz.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidSystem(format!(
                "coupling table must be {m}x{m}"
            )));
        }
        let table = DMatrix::from_fn(m, m, |i, j| self.couplings_khz[i][j]);
        SpinSystem::new(self.spins.clone(), self.shifts_khz.clone(), table)
    }

    pub fn subsystem(&self, labels: &[String]) -> Result<SpinSystem<f64>> {
        let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
        self.build()?.subsystem(&labels)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransferConfig {
    /// Spins kept in the transfer simulation; the rest are dropped.
    pub spins: Vec<String>,
    pub source: String,
    pub target: String,
    pub t_max_ms: f64,
    pub samples: usize,
}

impl Default for TransferConfig {
    fn default() -> Self {
        Self {
            spins: vec!["Cm".into(), "Hm1".into()],
            source: "Hm1".into(),
            target: "Cm".into(),
            t_max_ms: 0.1,
            samples: 401,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    BalancedXyz,
    SpinLockX,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToggleConfig {
    pub sequence: SequenceKind,
    pub cycle_ms: f64,
    /// Used when `sequence = "custom"`.
    pub steps: Vec<ToggleStep<f64>>,
}

impl Default for ToggleConfig {
    fn default() -> Self {
        Self {
            sequence: SequenceKind::BalancedXyz,
            cycle_ms: 0.06,
            steps: Vec::new(),
        }
    }
}

impl ToggleConfig {
    pub fn build(&self) -> Result<ToggleSequence<f64>> {
        match self.sequence {
            SequenceKind::BalancedXyz => ToggleSequence::balanced_xyz(self.cycle_ms),
            SequenceKind::SpinLockX => ToggleSequence::spin_lock_x(self.cycle_ms),
            SequenceKind::Custom => ToggleSequence::new(self.steps.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PulseConfig {
    /// Homonuclear register the pulse acts on, in qubit order.
    pub register: Vec<String>,
    /// Target gate as a protocol gate step on the register qubits.
    pub target: Step,
    pub rf_points: usize,
    pub rf_sigma: f64,
    pub optimizer: OptimizationConfig,
}

impl Default for PulseConfig {
    fn default() -> Self {
        Self {
            register: vec!["C1".into(), "C2".into()],
            target: Step::Swap(1, 2),
            rf_points: 5,
            rf_sigma: DEFAULT_RF_SIGMA,
            optimizer: OptimizationConfig::default(),
        }
    }
}

impl PulseConfig {
    pub fn distribution(&self) -> Result<RfDistribution> {
        RfDistribution::gaussian(self.rf_points, self.rf_sigma)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schedule: ProtocolSchedule,
    pub error_model: ErrorModel,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schedule: ProtocolSchedule::six_step(),
            error_model: ErrorModel::ideal(),
        }
    }
}
