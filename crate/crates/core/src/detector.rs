//! Anomaly detector: fit moments on normal data, then score a query by the
//! largest probability the fitted moments allow in a small neighborhood of it.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{estimate_moments, MomentSequence, Polynomial, Whitener};
use crate::relaxation::{upper_bound_with, BoundOptions, RankCertificate, SemialgebraicSet};
use crate::sdp::SolveStatus;

pub const DEFAULT_RADIUS: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// `r² − ‖u − x̃‖² ≥ 0`.
    #[default]
    Ball,
    /// `r ± (u_j − x̃_j) ≥ 0` for every coordinate.
    Box,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Ball => "ball",
            Shape::Box => "box",
        })
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ball" => Ok(Shape::Ball),
            "box" => Ok(Shape::Box),
            other => Err(Error::InvalidArgument(format!("unknown shape '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Neighborhood {
    pub shape: Shape,
    pub radius: f64,
}

impl Default for Neighborhood {
    fn default() -> Self {
        Neighborhood {
            shape: Shape::Ball,
            radius: DEFAULT_RADIUS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub degree: usize,
    pub whiten: bool,
    pub neighborhood: Neighborhood,
}

impl FitOptions {
    /// Degree `k`, whitening on, default ball.
    pub fn new(degree: usize) -> Self {
        FitOptions {
            degree,
            whiten: true,
            neighborhood: Neighborhood::default(),
        }
    }

    pub fn whiten(mut self, on: bool) -> Self {
        self.whiten = on;
        self
    }

    pub fn radius(mut self, r: f64) -> Self {
        self.neighborhood.radius = r;
        self
    }

    pub fn shape(mut self, shape: Shape) -> Self {
        self.neighborhood.shape = shape;
        self
    }
}

/// A fitted detector. Immutable once built and safe to share across threads.
#[derive(Debug, Clone)]
pub struct DetectorModel {
    n: usize,
    degree: usize,
    whitener: Option<Whitener>,
    gamma: MomentSequence,
    neighborhood: Neighborhood,
}

impl DetectorModel {
    /// Rebuilds a model from stored parts.
    pub fn from_parts(
        gamma: MomentSequence,
        whitener: Option<Whitener>,
        neighborhood: Neighborhood,
    ) -> Result<Self> {
        let degree = gamma.max_degree();
        if degree < 2 {
            return Err(Error::InvalidArgument(format!(
                "degree must be ≥ 2, got {degree}"
            )));
        }
        if (gamma.mass() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "moment sequence must have unit mass, got {}",
                gamma.mass()
            )));
        }
        check_radius(neighborhood.radius)?;
        if let Some(w) = &whitener {
            if w.dim() != gamma.dim() {
                return Err(Error::DimensionMismatch {
                    expected: gamma.dim(),
                    got: w.dim(),
                });
            }
        }
        Ok(DetectorModel {
            n: gamma.dim(),
            degree,
            whitener,
            gamma,
            neighborhood,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `⌈k/2⌉`.
    pub fn relaxation_order(&self) -> usize {
        self.degree.div_ceil(2)
    }

    pub fn whitener(&self) -> Option<&Whitener> {
        self.whitener.as_ref()
    }

    /// Moments in the coordinates the neighborhoods are built in.
    pub fn gamma(&self) -> &MomentSequence {
        &self.gamma
    }

    pub fn neighborhood(&self) -> Neighborhood {
        self.neighborhood
    }

    /// Same moments, different neighborhood.
    pub fn with_neighborhood(&self, neighborhood: Neighborhood) -> Result<Self> {
        check_radius(neighborhood.radius)?;
        Ok(DetectorModel {
            neighborhood,
            ..self.clone()
        })
    }

    /// Same data, moments truncated to a lower degree.
    pub fn truncated(&self, degree: usize) -> Result<Self> {
        DetectorModel::from_parts(
            self.gamma.truncate(degree)?,
            self.whitener.clone(),
            self.neighborhood,
        )
    }

    fn to_model_coords(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(match &self.whitener {
            Some(w) => w.whiten(x)?,
            None => x.to_vec(),
        })
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "radius must be finite and ≥ 0, got {r}"
        )));
    }
    Ok(())
}

/// Fits the whitener (when enabled) and the moments up to degree `k`.
pub fn fit(data: &[Vec<f64>], opts: FitOptions) -> Result<DetectorModel> {
    if opts.degree < 2 {
        return Err(Error::InvalidArgument(format!(
            "degree must be ≥ 2, got {}",
            opts.degree
        )));
    }
    let (whitener, gamma) = if opts.whiten {
        let w = Whitener::fit(data)?;
        let white = w.whiten_all(data)?;
        (Some(w), estimate_moments(&white, opts.degree)?)
    } else {
        (None, estimate_moments(data, opts.degree)?)
    };
    DetectorModel::from_parts(gamma, whitener, opts.neighborhood)
}

/// Neighborhood of `x` in model coordinates.
pub fn neighborhood(model: &DetectorModel, x: &[f64]) -> Result<SemialgebraicSet> {
    let c = model.to_model_coords(x)?;
    neighborhood_at(model.n, &c, model.neighborhood)
}

fn neighborhood_at(n: usize, c: &[f64], nb: Neighborhood) -> Result<SemialgebraicSet> {
    let r = nb.radius;
    let shifted = |j: usize| Polynomial::var(n, j).minus(&Polynomial::constant(n, c[j]));
    match nb.shape {
        Shape::Ball => {
            let mut g = Polynomial::constant(n, r * r);
            for j in 0..n {
                let d = shifted(j);
                g = g.minus(&d.times(&d));
            }
            SemialgebraicSet::single(g)
        }
        Shape::Box => {
            let mut cons = Vec::with_capacity(2 * n);
            for j in 0..n {
                let d = shifted(j);
                let rr = Polynomial::constant(n, r);
                cons.push(rr.plus(&d));
                cons.push(rr.minus(&d));
            }
            SemialgebraicSet::new(n, cons)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Score {
    pub rho: f64,
    pub status: SolveStatus,
    pub certificate: Option<RankCertificate>,
}

impl Score {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// `rho`, or 0 for a failed solve so that failures rank as most anomalous.
    pub fn rho_or_zero(&self) -> f64 {
        if self.is_optimal() {
            self.rho
        } else {
            0.0
        }
    }
}

/// The upper bound on the probability of the neighborhood of `x`.
pub fn score(model: &DetectorModel, x: &[f64]) -> Result<Score> {
    score_with(model, x, BoundOptions::default())
}

pub fn score_with(model: &DetectorModel, x: &[f64], opts: BoundOptions<'_>) -> Result<Score> {
    // The bound is translation invariant; centering the query keeps the
    // nearly atomic part of the solution at moderate magnitudes.
    let c = model.to_model_coords(x)?;
    let gamma = model.gamma.translate(&c)?;
    let set = neighborhood_at(model.n, &vec![0.0; model.n], model.neighborhood)?;
    let res = upper_bound_with(&gamma, &set, model.relaxation_order(), opts)?;
    if !res.is_optimal() {
        log::warn!("solver returned {} for query {x:?}", res.status);
    }
    Ok(Score {
        rho: res.rho,
        status: res.status,
        certificate: res.rank_certificate,
    })
}

/// Scores many points in parallel. Per-point solver failures show up in the
/// returned statuses; only malformed input is an error.
pub fn score_batch(model: &DetectorModel, points: &[Vec<f64>]) -> Result<Vec<Score>> {
    score_batch_with(model, points, BoundOptions::default())
}

pub fn score_batch_with(
    model: &DetectorModel,
    points: &[Vec<f64>],
    opts: BoundOptions<'_>,
) -> Result<Vec<Score>> {
    points
        .par_iter()
        .map(|x| score_with(model, x, opts))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Normal,
    Anomalous,
}

/// Anomalous iff `rho < τ`.
pub fn classify(model: &DetectorModel, x: &[f64], threshold: f64) -> Result<Verdict> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::InvalidArgument(format!(
            "threshold must lie in [0, 1], got {threshold}"
        )));
    }
    verdict(&score(model, x)?, threshold)
}

/// Applies the threshold to an existing score; refuses failed solves.
pub fn verdict(score: &Score, threshold: f64) -> Result<Verdict> {
    if !score.is_optimal() {
        return Err(Error::NotOptimal(score.status.to_string()));
    }
    Ok(if score.rho < threshold {
        Verdict::Anomalous
    } else {
        Verdict::Normal
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;

    fn model_1d(r: f64, shape: Shape) -> DetectorModel {
        let data: Vec<Vec<f64>> = (0..20).map(|i| vec![i as f64 / 10.0]).collect();
        fit(
            &data,
            FitOptions::new(2).whiten(false).radius(r).shape(shape),
        )
        .unwrap()
    }

    #[test]
    fn ball_neighborhood_polynomial() {
        let m = model_1d(0.1, Shape::Ball);
        let s = neighborhood(&m, &[2.0]).unwrap();
        let g = &s.constraints()[0];
        // 0.01 − (u − 2)² = −3.99 + 4u − u²
        assert!((g.coefficient(&MultiIndex::new(vec![0])) + 3.99).abs() < 1e-12);
        assert!((g.coefficient(&MultiIndex::new(vec![1])) - 4.0).abs() < 1e-12);
        assert!((g.coefficient(&MultiIndex::new(vec![2])) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_radius_ball_is_the_point() {
        let m = model_1d(0.0, Shape::Ball);
        let s = neighborhood(&m, &[0.5]).unwrap();
        assert!(s.contains(&[0.5]));
        assert!(!s.contains(&[0.5001]));
    }

    #[test]
    fn box_has_two_constraints_per_axis() {
        let data: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64).sin(), (i as f64 * 0.7).cos()])
            .collect();
        let m = fit(&data, FitOptions::new(2).shape(Shape::Box)).unwrap();
        assert_eq!(
            neighborhood(&m, &[0.0, 0.0]).unwrap().constraints().len(),
            4
        );
    }

    #[test]
    fn verdict_boundary_is_strict() {
        let s = |rho| Score {
            rho,
            status: SolveStatus::Optimal,
            certificate: None,
        };
        assert_eq!(verdict(&s(0.9), 0.1).unwrap(), Verdict::Normal);
        assert_eq!(verdict(&s(0.05), 0.1).unwrap(), Verdict::Anomalous);
        assert_eq!(verdict(&s(0.1), 0.1).unwrap(), Verdict::Normal);
        let failed = Score {
            rho: f64::NAN,
            status: SolveStatus::MaxIterations,
            certificate: None,
        };
        assert!(matches!(verdict(&failed, 0.1), Err(Error::NotOptimal(_))));
        assert_eq!(failed.rho_or_zero(), 0.0);
    }

    #[test]
    fn shape_text_round_trip() {
        for s in [Shape::Ball, Shape::Box] {
            assert_eq!(s.to_string().parse::<Shape>().unwrap(), s);
        }
        assert!("sphere".parse::<Shape>().is_err());
    }

    #[test]
    fn rejects_bad_settings() {
        let data = vec![vec![0.0], vec![1.0], vec![2.0]];
        assert!(fit(&data, FitOptions::new(1)).is_err());
        assert!(fit(&data, FitOptions::new(2).radius(-1.0)).is_err());
        let m = model_1d(0.1, Shape::Ball);
        assert!(matches!(
            score(&m, &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(classify(&m, &[0.0], 1.5).is_err());
    }
}
