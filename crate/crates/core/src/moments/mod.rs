//! Truncated moment sequences, the Riesz functional and data whitening.

mod polynomial;
mod whiten;

pub use polynomial::Polynomial;
pub use whiten::{Whitener, SINGULAR_RATIO};

use crate::error::{Error, Result};
use crate::multiindex::{MonomialBasis, MultiIndex};

/// Values `y_α` for every `|α| ≤ max_degree`, stored in basis order.
///
/// Used both for the known moments `γ` of the training data and for the moment
/// vectors recovered from a relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    basis: MonomialBasis,
    values: Vec<f64>,
}

impl MomentSequence {
    pub fn from_values(n: usize, max_degree: usize, values: Vec<f64>) -> Result<Self> {
        let basis = MonomialBasis::new(n, max_degree)?;
        if values.len() != basis.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} moment values, got {}",
                basis.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(MomentSequence { basis, values })
    }

    /// Builds a sequence from `(α, value)` pairs, which must cover exactly the
    /// multi-indices of degree at most `max_degree`.
    pub fn from_pairs<I>(n: usize, max_degree: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let basis = MonomialBasis::new(n, max_degree)?;
        let mut values = vec![f64::NAN; basis.len()];
        for (alpha, v) in pairs {
            let i = basis
                .position(&alpha)
                .ok_or_else(|| Error::MissingMoment(alpha.to_string()))?;
            values[i] = v;
        }
        if let Some(i) = values.iter().position(|v| v.is_nan()) {
            return Err(Error::MissingMoment(basis.get(i).to_string()));
        }
        MomentSequence::from_values(n, max_degree, values)
    }

    /// Moments of the point mass at `x`.
    pub fn dirac(x: &[f64], max_degree: usize) -> Result<Self> {
        let basis = MonomialBasis::new(x.len(), max_degree)?;
        let values = basis.evaluate(x);
        Ok(MomentSequence { basis, values })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn max_degree(&self) -> usize {
        self.basis.max_degree()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, alpha: &MultiIndex) -> Option<f64> {
        self.basis.position(alpha).map(|i| self.values[i])
    }

    pub fn mass(&self) -> f64 {
        self.values[0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.basis.entries().iter().zip(self.values.iter().copied())
    }

    /// The same sequence cut to degree at most `d`.
    pub fn truncate(&self, d: usize) -> Result<MomentSequence> {
        let d = d.min(self.max_degree());
        let len = self.basis.prefix_len(d);
        MomentSequence::from_values(self.dim(), d, self.values[..len].to_vec())
    }

    /// Moments of the same measure seen from `c`: `E[(x − c)^α]`.
    pub fn translate(&self, c: &[f64]) -> Result<MomentSequence> {
        if c.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: c.len(),
            });
        }
        let entries = self.basis.entries();
        let values = entries
            .iter()
            .map(|alpha| {
                let a = alpha.exponents();
                entries
                    .iter()
                    .zip(&self.values)
                    .filter(|(beta, _)| beta.exponents().iter().zip(a).all(|(b, a)| b <= a))
                    .map(|(beta, v)| {
                        let w: f64 = a
                            .iter()
                            .zip(beta.exponents())
                            .zip(c)
                            .map(|((&aj, &bj), &cj)| {
                                binomial(aj, bj) * (-cj).powi((aj - bj) as i32)
                            })
                            .product();
                        w * v
                    })
                    .sum()
            })
            .collect();
        MomentSequence::from_values(self.dim(), self.max_degree(), values)
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Checks that `data` is non-empty, rectangular and finite; returns the
/// dimension.
pub(crate) fn check_points(data: &[Vec<f64>]) -> Result<usize> {
    let first = data.first().ok_or(Error::EmptyData)?;
    let n = first.len();
    if n == 0 {
        return Err(Error::InvalidArgument(
            "points must have dimension ≥ 1".into(),
        ));
    }
    for (row, x) in data.iter().enumerate() {
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x.len(),
            });
        }
        if let Some(col) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row, col });
        }
    }
    Ok(n)
}

/// Empirical moments `γ_α = (1/N) Σ_i x_i^α` for every `|α| ≤ k`.
pub fn estimate_moments(data: &[Vec<f64>], k: usize) -> Result<MomentSequence> {
    let n = check_points(data)?;
    let basis = MonomialBasis::new(n, k)?;
    let mut sums = vec![0.0; basis.len()];
    // Each monomial past the constant is a lower monomial times one variable.
    let parents: Vec<(usize, usize)> = basis
        .entries()
        .iter()
        .skip(1)
        .map(|alpha| {
            let j = alpha.exponents().iter().position(|&e| e > 0).unwrap();
            let mut lower = alpha.exponents().to_vec();
            lower[j] -= 1;
            (basis.position(&MultiIndex::new(lower)).unwrap(), j)
        })
        .collect();
    let mut nu = vec![0.0; basis.len()];
    for x in data {
        nu[0] = 1.0;
        for (i, &(p, j)) in parents.iter().enumerate() {
            nu[i + 1] = nu[p] * x[j];
        }
        for (s, v) in sums.iter_mut().zip(&nu) {
            *s += v;
        }
    }
    let count = data.len() as f64;
    let mut values: Vec<f64> = sums.into_iter().map(|s| s / count).collect();
    values[0] = 1.0;
    MomentSequence::from_values(n, k, values)
}

/// The Riesz functional `L_y(p) = Σ_α p_α y_α`.
pub fn riesz(p: &Polynomial, y: &MomentSequence) -> Result<f64> {
    if p.dim() != y.dim() {
        return Err(Error::DimensionMismatch {
            expected: y.dim(),
            got: p.dim(),
        });
    }
    p.terms().try_fold(0.0, |acc, (alpha, c)| {
        y.get(alpha)
            .map(|v| acc + c * v)
            .ok_or_else(|| Error::MissingMoment(alpha.to_string()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mi(e: &[u32]) -> MultiIndex {
        MultiIndex::new(e.to_vec())
    }

    #[test]
    fn estimate_examples() {
        let data = vec![vec![1.0], vec![2.0], vec![3.0]];
        let g = estimate_moments(&data, 2).unwrap();
        assert_eq!(g.mass(), 1.0);
        assert!((g.get(&mi(&[1])).unwrap() - 2.0).abs() < 1e-15);
        assert!((g.get(&mi(&[2])).unwrap() - 14.0 / 3.0).abs() < 1e-14);

        let data = vec![vec![1.0, 2.0], vec![3.0, 4.0]];
        let g = estimate_moments(&data, 2).unwrap();
        assert!((g.get(&mi(&[1, 1])).unwrap() - 7.0).abs() < 1e-14);
    }

    #[test]
    fn translate_matches_shifted_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let data: Vec<Vec<f64>> = (0..40)
            .map(|_| vec![rng.random_range(-2.0..2.0), rng.random_range(0.0..3.0)])
            .collect();
        let c = [0.7, -1.3];
        let moved: Vec<Vec<f64>> = data
            .iter()
            .map(|x| vec![x[0] - c[0], x[1] - c[1]])
            .collect();
        let direct = estimate_moments(&moved, 5).unwrap();
        let shifted = estimate_moments(&data, 5).unwrap().translate(&c).unwrap();
        for ((a, u), v) in direct.iter().zip(shifted.values()) {
            assert!((u - v).abs() <= 1e-11 * (1.0 + u.abs()), "{a}: {u} vs {v}");
        }
        assert!(shifted.translate(&[1.0]).is_err());
    }

    #[test]
    fn estimate_errors() {
        assert_eq!(estimate_moments(&[], 2).unwrap_err(), Error::EmptyData);
        assert!(matches!(
            estimate_moments(&[vec![1.0], vec![f64::NAN]], 2),
            Err(Error::NonFinite { row: 1, col: 0 })
        ));
        assert!(estimate_moments(&[vec![1.0], vec![1.0, 2.0]], 2).is_err());
    }

    #[test]
    fn estimate_matches_direct_power_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let data: Vec<Vec<f64>> = (0..40)
            .map(|_| (0..3).map(|_| rng.random_range(-2.0..2.0)).collect())
            .collect();
        let g = estimate_moments(&data, 4).unwrap();
        for (alpha, v) in g.iter() {
            let direct: f64 = data.iter().map(|x| alpha.eval(x)).sum::<f64>() / data.len() as f64;
            assert!((v - direct).abs() < 1e-12, "{alpha:?}");
        }
    }

    #[test]
    fn riesz_examples() {
        let y = MomentSequence::from_values(2, 2, vec![1.0, 3.0, 0.0, 5.0, 1.0, 0.0]).unwrap();
        let p = Polynomial::from_terms(2, [(mi(&[0, 0]), 1.0), (mi(&[1, 0]), 2.0)]).unwrap();
        assert_eq!(riesz(&p, &y).unwrap(), 7.0);
        assert_eq!(riesz(&Polynomial::zero(2), &y).unwrap(), 0.0);
        let p = Polynomial::from_terms(2, [(mi(&[2, 0]), 1.0), (mi(&[1, 1]), -2.0)]).unwrap();
        assert_eq!(riesz(&p, &y).unwrap(), 3.0);

        let high = Polynomial::from_terms(2, [(mi(&[3, 0]), 1.0)]).unwrap();
        assert!(matches!(riesz(&high, &y), Err(Error::MissingMoment(_))));
    }

    #[test]
    fn whitened_moments_are_standard() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let data: Vec<Vec<f64>> = (0..300)
            .map(|_| {
                let a: f64 = rng.random_range(0.0..1.0);
                let b: f64 = rng.random_range(0.0..1.0);
                vec![5.0 * a + b, 2.0 - b]
            })
            .collect();
        let w = Whitener::fit(&data).unwrap();
        let g = estimate_moments(&w.whiten_all(&data).unwrap(), 4).unwrap();
        for j in 0..2 {
            assert!(g.get(&MultiIndex::unit(2, j)).unwrap().abs() < 1e-10);
            let mut e = vec![0; 2];
            e[j] = 2;
            assert!((g.get(&mi(&e)).unwrap() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn truncation_matches_lower_estimate() {
        let data: Vec<Vec<f64>> = (0..20)
            .map(|i| vec![i as f64 * 0.1, (i % 3) as f64])
            .collect();
        let g5 = estimate_moments(&data, 5).unwrap();
        let g4 = estimate_moments(&data, 4).unwrap();
        assert_eq!(g5.truncate(4).unwrap().values(), g4.values());
    }

    #[test]
    fn from_pairs_requires_every_index() {
        let pairs = vec![(mi(&[0]), 1.0), (mi(&[1]), 0.0)];
        assert!(MomentSequence::from_pairs(1, 2, pairs.clone()).is_err());
        let mut full = pairs;
        full.push((mi(&[2]), 1.0));
        let g = MomentSequence::from_pairs(1, 2, full).unwrap();
        assert_eq!(g.values(), &[1.0, 0.0, 1.0]);
    }

    proptest! {
        #[test]
        fn riesz_is_linear(
            c in prop::collection::vec(-3.0f64..3.0, 6),
            d in prop::collection::vec(-3.0f64..3.0, 6),
            y in prop::collection::vec(-3.0f64..3.0, 6),
            z in prop::collection::vec(-3.0f64..3.0, 6),
            s in -2.0f64..2.0,
        ) {
            let basis = MonomialBasis::new(2, 2).unwrap();
            let poly = |coef: &[f64]| {
                Polynomial::from_terms(2, basis.entries().iter().cloned().zip(coef.iter().copied())).unwrap()
            };
            let (p, q) = (poly(&c), poly(&d));
            let ys = MomentSequence::from_values(2, 2, y.clone()).unwrap();
            let zs = MomentSequence::from_values(2, 2, z.clone()).unwrap();
            let lhs = riesz(&p.plus(&q.scale(s)), &ys).unwrap();
            let rhs = riesz(&p, &ys).unwrap() + s * riesz(&q, &ys).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9);
            let yz: Vec<f64> = y.iter().zip(&z).map(|(a, b)| a + s * b).collect();
            let yzs = MomentSequence::from_values(2, 2, yz).unwrap();
            let lhs = riesz(&p, &yzs).unwrap();
            let rhs = riesz(&p, &ys).unwrap() + s * riesz(&p, &zs).unwrap();
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }
    }
}
