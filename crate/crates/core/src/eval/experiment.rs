//! Train on inliers, score a fixed labeled test set, report AUC per method.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{gen_inliers, gen_outliers, gen_test_inliers, Distribution};
use super::{auc, roc, LabeledScores, RocPoint};
use crate::detector::{fit, score_batch, FitOptions, Neighborhood};
use crate::error::{Error, Result};
use crate::kde::{kde_fit, kde_score, Bandwidth};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "degree")]
pub enum Method {
    /// Moment upper bound with moments up to this degree.
    Moments(usize),
    /// Gaussian-kernel density with Silverman bandwidths.
    Parzen,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Moments(_) => f.write_str("moments"),
            Method::Parzen => f.write_str("parzen"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub distribution: Distribution,
    pub n_train: usize,
    pub n_test_inliers: usize,
    pub n_test_outliers: usize,
    pub methods: Vec<Method>,
    pub neighborhood: Neighborhood,
    pub whiten: bool,
    pub seed: u64,
}

impl ExperimentSpec {
    /// Defaults: ball of radius 0.001, whitening on.
    pub fn new(
        distribution: Distribution,
        n_train: usize,
        n_test_inliers: usize,
        n_test_outliers: usize,
        seed: u64,
    ) -> Self {
        ExperimentSpec {
            distribution,
            n_train,
            n_test_inliers,
            n_test_outliers,
            methods: Vec::new(),
            neighborhood: Neighborhood::default(),
            whiten: true,
            seed,
        }
    }

    pub fn with_methods(mut self, methods: impl IntoIterator<Item = Method>) -> Self {
        self.methods = methods.into_iter().collect();
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_train == 0 || self.n_test_inliers == 0 || self.n_test_outliers == 0 {
            return Err(Error::InvalidArgument(
                "experiment counts must be positive".into(),
            ));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidArgument("experiment lists no methods".into()));
        }
        Ok(())
    }
}

/// One line of the AUC table.
#[derive(Debug, Clone, PartialEq)]
pub struct AucRow {
    pub n_train: usize,
    pub method: Method,
    pub auc: f64,
    /// Test points whose solve did not reach optimality (scored as 0).
    pub failures: usize,
    pub roc: Vec<RocPoint>,
    pub scores: Vec<f64>,
}

impl AucRow {
    /// `N,method,degree,auc,failures` line (no newline). The degree column is
    /// empty for Parzen.
    pub fn csv_line(&self) -> String {
        let degree = match self.method {
            Method::Moments(k) => k.to_string(),
            Method::Parzen => String::new(),
        };
        format!(
            "{},{},{},{},{}",
            self.n_train, self.method, degree, self.auc, self.failures
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub rows: Vec<AucRow>,
    /// Test points, inliers first, and their labels.
    pub test_points: Vec<Vec<f64>>,
    pub labels: Vec<bool>,
}

pub const AUC_CSV_HEADER: &str = "N,method,degree,auc,failures";

/// Runs every method of `spec` on one seeded train/test split.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let dist = spec.distribution;
    let train = gen_inliers(dist, spec.n_train, spec.seed);
    let mut test = gen_test_inliers(dist, spec.n_test_inliers, spec.seed);
    test.extend(gen_outliers(dist, spec.n_test_outliers, spec.seed)?);
    let mut labels = vec![true; spec.n_test_inliers];
    labels.extend(vec![false; spec.n_test_outliers]);

    let mut rows = Vec::with_capacity(spec.methods.len());
    for &method in &spec.methods {
        let (scores, failures) = match method {
            Method::Moments(k) => {
                let opts = FitOptions {
                    degree: k,
                    whiten: spec.whiten,
                    neighborhood: spec.neighborhood,
                };
                let model = fit(&train, opts)?;
                let scored = score_batch(&model, &test)?;
                let failures = scored.iter().filter(|s| !s.is_optimal()).count();
                if failures > 0 {
                    log::warn!(
                        "{dist} N={} k={k}: {failures} solves failed, scored as 0",
                        spec.n_train
                    );
                }
                (
                    scored.iter().map(|s| s.rho_or_zero()).collect::<Vec<_>>(),
                    failures,
                )
            }
            Method::Parzen => {
                let model = kde_fit(&train, Bandwidth::Silverman)?;
                let s = test
                    .par_iter()
                    .map(|x| kde_score(&model, x))
                    .collect::<Result<Vec<_>>>()?;
                (s, 0)
            }
        };
        let ls = LabeledScores::new(scores.clone(), labels.clone())?;
        rows.push(AucRow {
            n_train: spec.n_train,
            method,
            auc: auc(&ls)?,
            failures,
            roc: roc(&ls)?,
            scores,
        });
    }
    Ok(ExperimentResult {
        rows,
        test_points: test,
        labels,
    })
}
