use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative standard deviation of the RF amplitude over the sample.
pub const DEFAULT_RF_SIGMA: f64 = 0.062;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfPoint {
    pub scale: f64,
    pub weight: f64,
}

/// Weighted RF-amplitude scale factors; weights sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RfDistribution {
    points: Vec<RfPoint>,
}

impl RfDistribution {
    pub fn new(points: Vec<RfPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDistribution("no points".into()));
        }
        if points
            .iter()
            .any(|p| !(p.weight >= 0.0) || !p.scale.is_finite())
        {
            return Err(Error::InvalidDistribution(
                "negative weight or bad scale".into(),
            ));
        }
        let total: f64 = points.iter().map(|p| p.weight).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {total}"
            )));
        }
        Ok(Self { points })
    }

    /// A perfectly homogeneous RF field.
    pub fn nominal() -> Self {
        Self {
            points: vec![RfPoint {
                scale: 1.0,
                weight: 1.0,
            }],
        }
    }

    /// `n`-point Gauss–Hermite quadrature of a normal distribution of RF scale
    /// with mean 1 and standard deviation `sigma` (Golub–Welsch).
    pub fn gaussian(n: usize, sigma: f64) -> Result<Self> {
        if n == 0 || !(sigma >= 0.0) {
            return Err(Error::InvalidDistribution(format!(
                "gaussian quadrature needs n >= 1 and sigma >= 0 (got {n}, {sigma})"
            )));
        }
        // Jacobi matrix of the probabilists' Hermite polynomials: off-diagonal sqrt(k)
        let jacobi = DMatrix::from_fn(n, n, |i, j| {
            if i + 1 == j || j + 1 == i {
                (i.max(j) as f64).sqrt()
            } else {
                0.0
            }
        });
        let eig = SymmetricEigen::new(jacobi);
        let mut points: Vec<RfPoint> = (0..n)
            .map(|k| {
                let v0 = eig.eigenvectors[(0, k)];
                RfPoint {
                    scale: 1.0 + sigma * eig.eigenvalues[k],
                    weight: v0 * v0,
                }
            })
            .collect();
        points.sort_by(|a, b| a.scale.total_cmp(&b.scale));
        let total: f64 = points.iter().map(|p| p.weight).sum();
        for p in &mut points {
            p.weight /= total;
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[RfPoint] {
        &self.points
    }

    pub fn as_pairs(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.scale, p.weight)).collect()
    }
}

impl Default for RfDistribution {
    fn default() -> Self {
        Self::gaussian(5, DEFAULT_RF_SIGMA).expect("valid default quadrature")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_hermite_nodes_and_weights() {
        // tabulated probabilists' Gauss–Hermite rule, n = 5
        let d = RfDistribution::gaussian(5, 1.0).unwrap();
        let nodes = [-2.856_970_013_872_806, -1.355_626_179_974_266, 0.0];
        let weights = [
            0.011_257_411_327_720_69,
            0.222_075_922_005_612_6,
            8.0 / 15.0,
        ];
        for k in 0..3 {
            assert!((d.points()[k].scale - 1.0 - nodes[k]).abs() < 1e-12);
            assert!((d.points()[4 - k].scale - 1.0 + nodes[k]).abs() < 1e-12);
            assert!((d.points()[k].weight - weights[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn default_matches_sigma() {
        let d = RfDistribution::default();
        assert_eq!(d.points().len(), 5);
        let mean: f64 = d.points().iter().map(|p| p.weight * p.scale).sum();
        let var: f64 = d
            .points()
            .iter()
            .map(|p| p.weight * (p.scale - mean).powi(2))
            .sum();
        assert!((mean - 1.0).abs() < 1e-14);
        assert!((var.sqrt() - DEFAULT_RF_SIGMA).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_weights() {
        let p = |scale, weight| RfPoint { scale, weight };
        assert!(RfDistribution::new(vec![p(1.0, 0.5)]).is_err());
        assert!(RfDistribution::new(vec![p(1.0, 1.5), p(0.9, -0.5)]).is_err());
        assert!(RfDistribution::new(vec![]).is_err());
        assert!(RfDistribution::new(vec![p(1.0, 0.25), p(0.9, 0.75)]).is_ok());
    }
}
