//! Parzen-window baseline with a product Gaussian kernel.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::moments::check_points;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bandwidth {
    /// `h_j = σ_j (4 / ((n + 2) N))^{1/(n+4)}` per dimension.
    Silverman,
    Fixed(f64),
}

#[derive(Debug, Clone)]
pub struct KdeModel {
    points: Vec<Vec<f64>>,
    bandwidth: Vec<f64>,
}

impl KdeModel {
    pub fn dim(&self) -> usize {
        self.bandwidth.len()
    }

    pub fn bandwidth(&self) -> &[f64] {
        &self.bandwidth
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }
}

pub fn kde_fit(data: &[Vec<f64>], rule: Bandwidth) -> Result<KdeModel> {
    let n = check_points(data)?;
    let bandwidth = match rule {
        Bandwidth::Fixed(h) => {
            if !(h > 0.0 && h.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "bandwidth must be positive, got {h}"
                )));
            }
            vec![h; n]
        }
        Bandwidth::Silverman => {
            let len = data.len();
            if len < 2 {
                return Err(Error::TooFewPoints {
                    needed: 2,
                    got: len,
                });
            }
            let factor = (4.0 / ((n as f64 + 2.0) * len as f64)).powf(1.0 / (n as f64 + 4.0));
            (0..n)
                .map(|j| {
                    // Sample standard deviation.
                    let mean = data.iter().map(|x| x[j]).sum::<f64>() / len as f64;
                    let var = data.iter().map(|x| (x[j] - mean).powi(2)).sum::<f64>()
                        / (len as f64 - 1.0);
                    let sd = var.sqrt();
                    if sd <= 0.0 {
                        return Err(Error::InvalidArgument(format!(
                            "dimension {j} has zero variance"
                        )));
                    }
                    Ok(sd * factor)
                })
                .collect::<Result<_>>()?
        }
    };
    Ok(KdeModel {
        points: data.to_vec(),
        bandwidth,
    })
}

/// `(1/N) Σ_i Π_j φ((x_j − p_ij)/h_j) / h_j`.
pub fn kde_score(model: &KdeModel, x: &[f64]) -> Result<f64> {
    if x.len() != model.dim() {
        return Err(Error::DimensionMismatch {
            expected: model.dim(),
            got: x.len(),
        });
    }
    let norm: f64 = model
        .bandwidth
        .iter()
        .map(|h| h * (2.0 * PI).sqrt())
        .product();
    let total: f64 = model
        .points
        .iter()
        .map(|p| {
            let q: f64 = p
                .iter()
                .zip(x)
                .zip(&model.bandwidth)
                .map(|((pj, xj), h)| ((xj - pj) / h).powi(2))
                .sum();
            (-0.5 * q).exp()
        })
        .sum();
    Ok(total / (norm * model.points.len() as f64))
}
