use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One piecewise-constant stretch of RF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSegment {
    pub duration_ms: f64,
    pub amplitude_khz: f64,
    pub phase_rad: f64,
    pub offset_khz: f64,
}

impl PulseSegment {
    pub fn new(
        duration_ms: f64,
        amplitude_khz: f64,
        phase_rad: f64,
        offset_khz: f64,
    ) -> Result<Self> {
        let seg = Self {
            duration_ms,
            amplitude_khz,
            phase_rad,
            offset_khz,
        };
        seg.validate()?;
        Ok(seg)
    }

    fn validate(&self) -> Result<()> {
        if !(self.duration_ms > 0.0) || !self.duration_ms.is_finite() {
            return Err(Error::InvalidPulse(format!(
                "segment duration {} ms is not positive",
                self.duration_ms
            )));
        }
        if !(self.amplitude_khz >= 0.0) || !self.amplitude_khz.is_finite() {
            return Err(Error::InvalidPulse(format!(
                "segment amplitude {} kHz is negative",
                self.amplitude_khz
            )));
        }
        if !self.phase_rad.is_finite() || !self.offset_khz.is_finite() {
            return Err(Error::InvalidPulse("non-finite phase or offset".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentedPulse {
    segments: Vec<PulseSegment>,
}

impl SegmentedPulse {
    pub fn new(segments: Vec<PulseSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidPulse("pulse has no segments".into()));
        }
        for s in &segments {
            s.validate()?;
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[PulseSegment] {
        &self.segments
    }

    pub fn total_duration(&self) -> f64 {
        self.segments.iter().map(|s| s.duration_ms).sum()
    }

    /// Duration-weighted mean RF amplitude in kHz.
    pub fn mean_amplitude(&self) -> f64 {
        let t = self.total_duration();
        self.segments
            .iter()
            .map(|s| s.amplitude_khz * s.duration_ms)
            .sum::<f64>()
            / t
    }

    pub fn max_amplitude(&self) -> f64 {
        self.segments
            .iter()
            .fold(0.0, |m, s| m.max(s.amplitude_khz))
    }
}

/// Pulse file contents: segment table plus provenance metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseRecord {
    pub target: String,
    pub mean_fidelity: f64,
    pub worst_fidelity: f64,
    pub distribution: Vec<(f64, f64)>,
    pub seed: u64,
    pub segments: Vec<PulseSegment>,
}
