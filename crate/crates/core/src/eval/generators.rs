//! Seeded synthetic benchmark distributions and off-manifold outliers.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Draws used both for the outlier bounding box and as the nearest-inlier
/// reference.
const REFERENCE_DRAWS: usize = 10_000;
const BOX_INFLATION: f64 = 1.2;
const MAX_ATTEMPTS: usize = 1_000_000;

/// Independent RNG streams derived from one user seed.
pub(crate) const STREAM_TRAIN: u64 = 0;
pub(crate) const STREAM_TEST: u64 = 1;
pub(crate) const STREAM_OUTLIER: u64 = 2;
const STREAM_REFERENCE: u64 = 3;

pub(crate) fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Distribution {
    /// `0.5·N(0, 1) + 0.5·N(5, 0.1²)` on the line.
    Bimodal,
    /// The planar "P" curve.
    Pshape,
    /// Noisy Swiss roll in three dimensions.
    Swissroll,
}

impl Distribution {
    pub const ALL: [Distribution; 3] = [
        Distribution::Bimodal,
        Distribution::Pshape,
        Distribution::Swissroll,
    ];

    pub fn dim(self) -> usize {
        match self {
            Distribution::Bimodal => 1,
            Distribution::Pshape => 2,
            Distribution::Swissroll => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Distribution::Bimodal => "bimodal",
            Distribution::Pshape => "pshape",
            Distribution::Swissroll => "swissroll",
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Distribution::ALL
            .into_iter()
            .find(|d| d.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown distribution '{s}'")))
    }
}

/// Normalized sinc `sin(πu)/(πu)`.
pub fn sinc(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        (PI * u).sin() / (PI * u)
    }
}

/// Noise-free P-shape point at parameter `t`.
pub fn pshape_point(t: f64, eta1: f64, eta2: f64) -> [f64; 2] {
    [2.0 * (1.5 * t).cos() + eta1, 4.0 * sinc(0.9 * t) + eta2]
}

pub fn swissroll_point(y1: f64, y2: f64, eta: [f64; 3]) -> [f64; 3] {
    [y1 * y1.cos() + eta[0], y1 * y1.sin() + eta[1], y2 + eta[2]]
}

fn bimodal_with(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let wide = Normal::new(0.0, 1.0).unwrap();
    let narrow = Normal::new(5.0, 0.1).unwrap();
    (0..n)
        .map(|_| {
            let x = if rng.random_bool(0.5) {
                wide.sample(rng)
            } else {
                narrow.sample(rng)
            };
            vec![x]
        })
        .collect()
}

fn pshape_with(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let t = rng.random_range(PI / 4.0..=PI);
            let e1 = rng.random_range(-0.05..=0.05);
            let e2 = rng.random_range(0.0..=0.02);
            pshape_point(t, e1, e2).to_vec()
        })
        .collect()
}

fn swissroll_with(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let noise = [
        Normal::new(0.0, 0.8).unwrap(),
        Normal::new(0.0, 0.3).unwrap(),
        Normal::new(0.0, 0.25).unwrap(),
    ];
    (0..n)
        .map(|_| {
            let y1 = rng.random_range(1.5 * PI..=4.5 * PI);
            let y2 = rng.random_range(1.0..=2.0);
            let eta = [
                noise[0].sample(rng),
                noise[1].sample(rng),
                noise[2].sample(rng),
            ];
            swissroll_point(y1, y2, eta).to_vec()
        })
        .collect()
}

fn draw(dist: Distribution, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    match dist {
        Distribution::Bimodal => bimodal_with(n, rng),
        Distribution::Pshape => pshape_with(n, rng),
        Distribution::Swissroll => swissroll_with(n, rng),
    }
}

pub fn gen_bimodal(n: usize, seed: u64) -> Vec<Vec<f64>> {
    gen_inliers(Distribution::Bimodal, n, seed)
}

pub fn gen_pshape(n: usize, seed: u64) -> Vec<Vec<f64>> {
    gen_inliers(Distribution::Pshape, n, seed)
}

pub fn gen_swissroll(n: usize, seed: u64) -> Vec<Vec<f64>> {
    gen_inliers(Distribution::Swissroll, n, seed)
}

/// `n` inlier draws. The output for `n` is a prefix of the output for any
/// larger count under the same seed.
pub fn gen_inliers(dist: Distribution, n: usize, seed: u64) -> Vec<Vec<f64>> {
    draw(dist, n, &mut stream(seed, STREAM_TRAIN))
}

/// Minimum distance from an outlier to the nearest reference inlier: three
/// times the relevant noise standard deviation.
pub fn outlier_guard(dist: Distribution) -> f64 {
    match dist {
        // Narrow mode σ = 0.1.
        Distribution::Bimodal => 0.3,
        // η₁ ~ U[−0.05, 0.05] has σ = 0.1/√12.
        Distribution::Pshape => 3.0 * 0.1 / 12f64.sqrt(),
        // Largest noise component, σ = 0.8.
        Distribution::Swissroll => 2.4,
    }
}

/// Uniform draws from the inflated bounding box of a dense inlier sample,
/// keeping only points farther than [`outlier_guard`] from every reference
/// inlier.
pub fn gen_outliers(dist: Distribution, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    let reference = draw(dist, REFERENCE_DRAWS, &mut stream(seed, STREAM_REFERENCE));
    let dim = dist.dim();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for x in &reference {
        for j in 0..dim {
            lo[j] = lo[j].min(x[j]);
            hi[j] = hi[j].max(x[j]);
        }
    }
    for j in 0..dim {
        let (c, half) = ((lo[j] + hi[j]) / 2.0, (hi[j] - lo[j]) / 2.0 * BOX_INFLATION);
        lo[j] = c - half;
        hi[j] = c + half;
    }
    let guard2 = outlier_guard(dist).powi(2);
    let mut rng = stream(seed, STREAM_OUTLIER);
    let mut out = Vec::with_capacity(n);
    for _ in 0..MAX_ATTEMPTS {
        if out.len() == n {
            return Ok(out);
        }
        let x: Vec<f64> = (0..dim).map(|j| rng.random_range(lo[j]..=hi[j])).collect();
        let far = reference.iter().all(|r| {
            r.iter()
                .zip(&x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                > guard2
        });
        if far {
            out.push(x);
        }
    }
    if out.len() == n {
        return Ok(out);
    }
    Err(Error::InvalidArgument(format!(
        "outlier rejection sampling for {dist} produced only {} of {n} points",
        out.len()
    )))
}

/// Test inliers. They come from their own stream and never overlap the
/// training draws.
pub fn gen_test_inliers(dist: Distribution, n: usize, seed: u64) -> Vec<Vec<f64>> {
    draw(dist, n, &mut stream(seed, STREAM_TEST))
}
