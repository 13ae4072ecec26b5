use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::model::{gate_state_fidelity, simulate};
use super::{ErrorModel, ProtocolSchedule};
use crate::cooling::BathParameters;
use crate::{Error, Result};

/// What an observation measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Polarization of a 1-based qubit, in units of `P'`.
    Polarization(usize),
    /// State-correlation fidelity of the gate applied at the step.
    GateFidelity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    /// 1-based step index.
    pub step: usize,
    pub quantity: Quantity,
    pub value: f64,
    #[serde(default)]
    pub uncertainty: f64,
}

impl Observation {
    pub fn polarization(step: usize, qubit: usize, value: f64, uncertainty: f64) -> Self {
        Self {
            step,
            quantity: Quantity::Polarization(qubit),
            value,
            uncertainty,
        }
    }

    pub fn gate_fidelity(step: usize, value: f64, uncertainty: f64) -> Self {
        Self {
            step,
            quantity: Quantity::GateFidelity,
            value,
            uncertainty,
        }
    }
}

/// Measured values: the three register polarizations after step 5, the cooled
/// qubit after the compression and the state-correlation fidelity of the
/// compression gate.
pub fn reference_observations() -> Vec<Observation> {
    vec![
        Observation::polarization(5, 1, 0.88, 0.03),
        Observation::polarization(5, 2, 0.83, 0.03),
        Observation::polarization(5, 3, 0.76, 0.03),
        Observation::polarization(6, 1, 1.22, 0.03),
        Observation::gate_fidelity(6, 0.96, 0.03),
    ]
}

/// Error-model parameters varied by the fit. Parameters left out stay ideal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeParameters {
    /// Refresh decay, gate efficiency and register retention.
    #[default]
    All,
    /// Refresh decay and register retention, ideal gates.
    DecayAndRetention,
    /// Refresh decay and gate efficiency, no crosstalk at refresh.
    DecayAndGate,
}

impl FreeParameters {
    // slots into (c, g, r)
    fn slots(self) -> &'static [usize] {
        match self {
            FreeParameters::All => &[0, 1, 2],
            FreeParameters::DecayAndRetention => &[0, 2],
            FreeParameters::DecayAndGate => &[0, 1],
        }
    }

    fn model(self, theta: &[f64]) -> Result<ErrorModel> {
        let mut p = [0.0, 1.0, 1.0];
        for (&slot, &v) in self.slots().iter().zip(theta) {
            p[slot] = v;
        }
        ErrorModel::new(p[0], p[1], p[2])
    }

    fn start(self) -> Vec<f64> {
        self.slots()
            .iter()
            .map(|&s| if s == 0 { 0.0 } else { 1.0 })
            .collect()
    }

    fn upper(self) -> Vec<f64> {
        self.slots()
            .iter()
            .map(|&s| if s == 0 { f64::INFINITY } else { 1.0 })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorFit {
    pub model: ErrorModel,
    pub free: FreeParameters,
    /// Root-mean-square of the unweighted residuals.
    pub residual_rms: f64,
    /// Sum of squared residuals over uncertainties, when every observation
    /// carries a positive uncertainty.
    pub chi_squared: Option<f64>,
    pub iterations: usize,
}

/// Weighted least-squares fit of all three parameters.
pub fn fit_error_model(
    observed: &[Observation],
    schedule: &ProtocolSchedule,
    bath: &BathParameters<f64>,
) -> Result<ErrorFit> {
    fit_error_model_with(observed, schedule, bath, FreeParameters::default())
}

fn validate(
    observed: &[Observation],
    schedule: &ProtocolSchedule,
    free: FreeParameters,
) -> Result<()> {
    let k = free.slots().len();
    if observed.len() < k {
        return Err(Error::DegenerateData(format!(
            "{} observations for {k} parameters",
            observed.len()
        )));
    }
    for o in observed {
        if o.step == 0 || o.step > schedule.len() {
            return Err(Error::DegenerateData(format!(
                "step {} not in schedule",
                o.step
            )));
        }
        match o.quantity {
            Quantity::Polarization(q) if q == 0 || q > schedule.n() => {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    n: schedule.n(),
                })
            }
            Quantity::GateFidelity if schedule.steps()[o.step - 1].is_refresh() => {
                return Err(Error::DegenerateData(format!(
                    "gate fidelity observed at refresh step {}",
                    o.step
                )))
            }
            _ => {}
        }
        if !o.value.is_finite() || !(o.uncertainty >= 0.0) || !o.uncertainty.is_finite() {
            return Err(Error::DegenerateData(format!(
                "non-finite or negative value at step {}",
                o.step
            )));
        }
    }
    if observed.iter().all(|o| o.value == 0.0) {
        return Err(Error::DegenerateData("all observed values are zero".into()));
    }
    Ok(())
}

/// Model prediction for every observation, in observation order.
pub fn predict(
    observed: &[Observation],
    schedule: &ProtocolSchedule,
    bath: &BathParameters<f64>,
    model: &ErrorModel,
) -> Result<Vec<f64>> {
    let p_prime = *bath.refresh_polarization().value();
    if p_prime == 0.0 {
        return Err(Error::InvalidErrorModel(
            "refresh polarization is zero; polarizations are in units of P'".into(),
        ));
    }
    let states = simulate(schedule, bath, model)?;
    observed
        .iter()
        .map(|o| match o.quantity {
            Quantity::Polarization(q) => Ok(states[o.step - 1].polarization(q)? / p_prime),
            Quantity::GateFidelity => gate_state_fidelity(schedule, bath, model, o.step),
        })
        .collect()
}

/// Box-constrained Levenberg-Marquardt on the residuals. Residuals are divided
/// by their uncertainties when every observation has a positive one.
pub fn fit_error_model_with(
    observed: &[Observation],
    schedule: &ProtocolSchedule,
    bath: &BathParameters<f64>,
    free: FreeParameters,
) -> Result<ErrorFit> {
    validate(observed, schedule, free)?;
    let weighted = observed.iter().all(|o| o.uncertainty > 0.0);
    let sigma: Vec<f64> = observed
        .iter()
        .map(|o| if weighted { o.uncertainty } else { 1.0 })
        .collect();
    let residuals = |theta: &[f64]| -> Result<DVector<f64>> {
        let pred = predict(observed, schedule, bath, &free.model(theta)?)?;
        Ok(DVector::from_iterator(
            observed.len(),
            pred.iter()
                .zip(observed)
                .zip(&sigma)
                .map(|((p, o), s)| (p - o.value) / s),
        ))
    };
    let upper = free.upper();
    let k = upper.len();
    let project = |t: &[f64]| -> Vec<f64> {
        t.iter()
            .zip(&upper)
            .map(|(v, u)| v.clamp(0.0, *u))
            .collect()
    };

    let mut theta = free.start();
    let mut r = residuals(&theta)?;
    let mut c = r.norm_squared();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    const H: f64 = 1e-7;
    while iterations < 500 && c > 1e-30 {
        iterations += 1;
        let mut jac = DMatrix::zeros(r.len(), k);
        for p in 0..k {
            let mut fwd = theta.clone();
            let mut back = theta.clone();
            fwd[p] = (theta[p] + H).min(upper[p]);
            back[p] = (theta[p] - H).max(0.0);
            let diff = (residuals(&fwd)? - residuals(&back)?) / (fwd[p] - back[p]);
            jac.set_column(p, &diff);
        }
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;
        let mut improved = false;
        for _ in 0..60 {
            let mut a = jtj.clone();
            for d in 0..k {
                a[(d, d)] = jtj[(d, d)] * (1.0 + lambda) + 1e-300;
            }
            let Some(step) = a.lu().solve(&(-&jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let trial = project(
                &theta
                    .iter()
                    .zip(step.iter())
                    .map(|(t, s)| t + s)
                    .collect::<Vec<_>>(),
            );
            if trial == theta {
                break;
            }
            let rt = residuals(&trial)?;
            let ct = rt.norm_squared();
            if ct < c {
                theta = trial;
                r = rt;
                c = ct;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    let model = free.model(&theta)?;
    let raw = predict(observed, schedule, bath, &model)?;
    let sq: f64 = raw
        .iter()
        .zip(observed)
        .map(|(p, o)| (p - o.value).powi(2))
        .sum();
    Ok(ErrorFit {
        model,
        free,
        residual_rms: (sq / observed.len() as f64).sqrt(),
        chi_squared: weighted.then_some(c),
        iterations,
    })
}
