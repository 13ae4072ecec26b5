use serde::{Deserialize, Serialize};

use super::StepReport;
use crate::{Error, Result};

/// Ideal cooled-qubit polarization after the compression, in units of `P'`.
pub const IDEAL_FINAL: f64 = 1.5;

/// Thermal proton-to-carbon polarization ratio.
pub const PROTON_TO_CARBON: f64 = 3.98;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolFidelity {
    /// Final qubit-1 polarization over [`IDEAL_FINAL`].
    pub fidelity: f64,
    /// `1 - F^(1/steps)`.
    pub per_step_error: f64,
    /// Final qubit-1 polarization over the mean of the previous step, minus one.
    pub boost: f64,
    pub steps: usize,
}

pub fn protocol_fidelity(reports: &[StepReport]) -> Result<ProtocolFidelity> {
    let last = reports
        .last()
        .ok_or_else(|| Error::DegenerateData("no step reports".into()))?;
    let last_p = *last
        .polarizations
        .first()
        .ok_or_else(|| Error::DegenerateData("empty final report".into()))?;
    let steps = reports.len();
    let fidelity = last_p / IDEAL_FINAL;
    let per_step_error = 1.0 - fidelity.max(0.0).powf(1.0 / steps as f64);
    let boost = match reports
        .len()
        .checked_sub(2)
        .map(|i| &reports[i].polarizations)
    {
        Some(prev) if !prev.is_empty() => {
            let mean = prev.iter().sum::<f64>() / prev.len() as f64;
            last_p / mean - 1.0
        }
        _ => f64::NAN,
    };
    Ok(ProtocolFidelity {
        fidelity,
        per_step_error,
        boost,
        steps,
    })
}

/// Converts a measured `P'/P_C` into the refresh efficiency `P'/P_H`.
pub fn calibrate_refresh(p_prime_over_pc: f64) -> Result<f64> {
    if !(p_prime_over_pc > 0.0) || !p_prime_over_pc.is_finite() {
        return Err(Error::NonPositiveRatio(p_prime_over_pc));
    }
    Ok(p_prime_over_pc / PROTON_TO_CARBON)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(step: usize, pols: Vec<f64>) -> StepReport {
        StepReport {
            step,
            label: String::new(),
            polarizations: pols,
            uncertainty: 0.0,
        }
    }

    #[test]
    fn final_value_sets_fidelity() {
        let reports: Vec<_> = (1..=5)
            .map(|s| report(s, vec![0.82, 0.82, 0.82]))
            .chain([report(6, vec![1.22, 0.5, 0.5])])
            .collect();
        let f = protocol_fidelity(&reports).unwrap();
        assert!((f.fidelity - 0.8133).abs() < 1e-3);
        assert!((f.boost - (1.22 / 0.82 - 1.0)).abs() < 1e-12);
        let expected = 1.0 - (1.22_f64 / 1.5).powf(1.0 / 6.0);
        assert!((f.per_step_error - expected).abs() < 1e-12);
        assert!((f.per_step_error - 0.034).abs() < 0.005);
    }

    #[test]
    fn ideal_has_no_error() {
        let f = protocol_fidelity(&[report(1, vec![1.0]), report(2, vec![1.5])]).unwrap();
        assert_eq!(f.fidelity, 1.0);
        assert_eq!(f.per_step_error, 0.0);
        assert!(protocol_fidelity(&[]).is_err());
    }

    #[test]
    fn calibration() {
        assert!((calibrate_refresh(3.3034).unwrap() - 0.83).abs() < 1e-4);
        assert_eq!(calibrate_refresh(3.98).unwrap(), 1.0);
        assert!(calibrate_refresh(0.0).is_err());
        assert!(calibrate_refresh(-1.0).is_err());
        assert!(calibrate_refresh(f64::NAN).is_err());
    }
}
