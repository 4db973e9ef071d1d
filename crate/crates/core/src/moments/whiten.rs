//! PCA whitening: `x ↦ Λ^{-1/2} Uᵀ (x − mean)` with `U Λ Uᵀ` the population
//! covariance of the training data.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Relative eigenvalue floor below which the covariance is treated as singular.
pub const SINGULAR_RATIO: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Whitener {
    mean: Vec<f64>,
    /// Row-major `n × n`.
    transform: Vec<Vec<f64>>,
    inverse: Vec<Vec<f64>>,
}

impl Whitener {
    pub fn fit(data: &[Vec<f64>]) -> Result<Self> {
        let n = super::check_points(data)?;
        if data.len() < n + 1 {
            return Err(Error::TooFewPoints {
                needed: n + 1,
                got: data.len(),
            });
        }
        let count = data.len() as f64;
        let mut mean = vec![0.0; n];
        for x in data {
            for (m, v) in mean.iter_mut().zip(x) {
                *m += v;
            }
        }
        mean.iter_mut().for_each(|m| *m /= count);

        let mut cov = DMatrix::<f64>::zeros(n, n);
        for x in data {
            let d = DVector::from_iterator(n, x.iter().zip(&mean).map(|(v, m)| v - m));
            cov.ger(1.0 / count, &d, &d, 1.0);
        }
        let eig = SymmetricEigen::new(cov);

        // Largest variance first, eigenvector signs fixed so the largest
        // component is positive.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let max_ev = eig.eigenvalues[order[0]];
        let mut transform = vec![vec![0.0; n]; n];
        let mut inverse = vec![vec![0.0; n]; n];
        for (row, &k) in order.iter().enumerate() {
            let lambda = eig.eigenvalues[k];
            let mut u: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
            if !(lambda > SINGULAR_RATIO * max_ev) || !lambda.is_finite() {
                return Err(Error::SingularCovariance {
                    direction: u,
                    eigenvalue: lambda,
                    max_eigenvalue: max_ev,
                });
            }
            let pivot = u
                .iter()
                .copied()
                .max_by(|a, b| a.abs().total_cmp(&b.abs()))
                .unwrap_or(1.0);
            if pivot < 0.0 {
                u.iter_mut().for_each(|v| *v = -*v);
            }
            let s = lambda.sqrt();
            for j in 0..n {
                transform[row][j] = u[j] / s;
                inverse[j][row] = u[j] * s;
            }
        }
        Ok(Whitener {
            mean,
            transform,
            inverse,
        })
    }

    /// Rebuilds a whitener from a stored mean and transform.
    pub fn from_parts(mean: Vec<f64>, transform: Vec<Vec<f64>>) -> Result<Self> {
        let n = mean.len();
        if transform.len() != n || transform.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument("transform must be n × n".into()));
        }
        let t = DMatrix::from_fn(n, n, |i, j| transform[i][j]);
        let inv = t
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("transform is not invertible".into()))?;
        let inverse = (0..n)
            .map(|i| (0..n).map(|j| inv[(i, j)]).collect())
            .collect();
        Ok(Whitener {
            mean,
            transform,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn transform(&self) -> &[Vec<f64>] {
        &self.transform
    }

    pub fn whiten(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        let centered: Vec<f64> = x.iter().zip(&self.mean).map(|(v, m)| v - m).collect();
        Ok(self
            .transform
            .iter()
            .map(|row| row.iter().zip(&centered).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn unwhiten(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self
            .inverse
            .iter()
            .zip(&self.mean)
            .map(|(row, m)| m + row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .collect())
    }

    pub fn whiten_all(&self, data: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        data.iter().map(|x| self.whiten(x)).collect()
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn correlated(count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count)
            .map(|_| {
                let a: f64 = rng.random_range(-1.0..1.0);
                let b: f64 = rng.random_range(-1.0..1.0);
                let c: f64 = rng.random_range(-1.0..1.0);
                vec![3.0 + 2.0 * a, -1.0 + a + 0.3 * b, 10.0 * c - b]
            })
            .collect()
    }

    #[test]
    fn whitened_data_is_standardized() {
        let data = correlated(500, 1);
        let w = Whitener::fit(&data).unwrap();
        let white = w.whiten_all(&data).unwrap();
        let n = 3;
        let count = white.len() as f64;
        for j in 0..n {
            let mean: f64 = white.iter().map(|x| x[j]).sum::<f64>() / count;
            assert!(mean.abs() < 1e-10, "mean[{j}] = {mean}");
            for k in 0..n {
                let c: f64 = white.iter().map(|x| x[j] * x[k]).sum::<f64>() / count;
                let expect = if j == k { 1.0 } else { 0.0 };
                assert!((c - expect).abs() < 1e-8, "cov[{j},{k}] = {c}");
            }
        }
    }

    #[test]
    fn identity_covariance_gives_identity_transform() {
        let data = vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ];
        let w = Whitener::fit(&data).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((w.transform()[i][j].abs() - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn one_dimensional_hand_case() {
        let w = Whitener::fit(&[vec![0.0], vec![2.0]]).unwrap();
        assert_eq!(w.mean(), &[1.0]);
        assert!((w.transform()[0][0] - 1.0).abs() < 1e-15);
        assert!((w.whiten(&[0.0]).unwrap()[0] + 1.0).abs() < 1e-15);
        assert!((w.whiten(&[2.0]).unwrap()[0] - 1.0).abs() < 1e-15);
        assert!((w.whiten(&[3.0]).unwrap()[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn duplicated_coordinate_is_singular() {
        let data: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64, i as f64]).collect();
        match Whitener::fit(&data) {
            Err(Error::SingularCovariance { direction, .. }) => {
                // Degenerate direction is (1, -1)/√2 up to sign.
                assert!((direction[0] + direction[1]).abs() < 1e-8);
            }
            other => panic!("expected singular covariance, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_and_mean() {
        let data = correlated(100, 7);
        let w = Whitener::fit(&data).unwrap();
        let zero = w.whiten(w.mean()).unwrap();
        assert!(zero.iter().all(|v| v.abs() < 1e-12));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-20.0..20.0)).collect();
            let back = w.unwhiten(&w.whiten(&x).unwrap()).unwrap();
            for (a, b) in x.iter().zip(&back) {
                assert!((a - b).abs() < 1e-10);
            }
        }
        assert!(w.whiten(&[1.0]).is_err());
    }

    #[test]
    fn rebuild_from_parts() {
        let data = correlated(60, 9);
        let w = Whitener::fit(&data).unwrap();
        let r = Whitener::from_parts(w.mean().to_vec(), w.transform().to_vec()).unwrap();
        let x = [0.3, -2.0, 4.0];
        let a = r.unwhiten(&r.whiten(&x).unwrap()).unwrap();
        for (u, v) in a.iter().zip(&x) {
            assert!((u - v).abs() < 1e-10);
        }
    }
}
