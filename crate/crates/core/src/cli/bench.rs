//! TOML benchmark configs: one `[[experiment]]` table per reproduced result.
//!
//! ```toml
//! [[experiment]]
//! distribution = "pshape"
//! n_train = [100, 150, 300]
//! n_test_inliers = 300
//! n_test_outliers = 50
//! degrees = [2, 3, 4, 5]
//! parzen = true
//! seed = 1
//! ```

use std::fmt::Write as _;

use serde::Deserialize;

use crate::detector::{Neighborhood, Shape, DEFAULT_RADIUS};
use crate::error::{Error, Result};
use crate::eval::{run_experiment, Distribution, ExperimentSpec, Method, AUC_CSV_HEADER};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    #[serde(default)]
    pub experiment: Vec<BenchExperiment>,
}

fn default_radius() -> f64 {
    DEFAULT_RADIUS
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchExperiment {
    pub distribution: Distribution,
    pub n_train: Vec<usize>,
    pub n_test_inliers: usize,
    pub n_test_outliers: usize,
    #[serde(default)]
    pub degrees: Vec<usize>,
    #[serde(default)]
    pub parzen: bool,
    #[serde(default = "default_radius")]
    pub radius: f64,
    #[serde(default)]
    pub shape: Shape,
    #[serde(default = "default_true")]
    pub whiten: bool,
    pub seed: u64,
}

/// Rendered AUC table.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub csv: String,
    pub rows: usize,
    /// Rows in which no test point solved.
    pub failed_rows: usize,
}

impl BenchConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: BenchConfig =
            toml::from_str(text).map_err(|e| Error::Parse(format!("bench config: {e}")))?;
        if cfg.experiment.is_empty() {
            return Err(Error::InvalidArgument(
                "bench config lists no experiments".into(),
            ));
        }
        Ok(cfg)
    }

    /// Runs every experiment; a failing experiment is reported in the table
    /// and the run moves on.
    pub fn run(&self) -> Result<BenchTable> {
        let mut csv = format!("{AUC_CSV_HEADER}\n");
        let (mut rows, mut failed_rows) = (0, 0);
        for exp in &self.experiment {
            let mut methods: Vec<Method> =
                exp.degrees.iter().map(|&k| Method::Moments(k)).collect();
            if exp.parzen {
                methods.push(Method::Parzen);
            }
            if methods.is_empty() {
                return Err(Error::InvalidArgument(format!(
                    "{} experiment lists no degrees and no parzen baseline",
                    exp.distribution
                )));
            }
            let test_size = exp.n_test_inliers + exp.n_test_outliers;
            for &n in &exp.n_train {
                let mut spec = ExperimentSpec::new(
                    exp.distribution,
                    n,
                    exp.n_test_inliers,
                    exp.n_test_outliers,
                    exp.seed,
                )
                .with_methods(methods.iter().copied());
                spec.neighborhood = Neighborhood {
                    shape: exp.shape,
                    radius: exp.radius,
                };
                spec.whiten = exp.whiten;
                match run_experiment(&spec) {
                    Ok(res) => {
                        for row in &res.rows {
                            let _ = writeln!(csv, "{}", row.csv_line());
                            rows += 1;
                            if row.failures == test_size {
                                failed_rows += 1;
                            }
                        }
                    }
                    Err(e) => {
                        log::warn!("{} N={n}: {e}", exp.distribution);
                        for m in &methods {
                            let degree = match m {
                                Method::Moments(k) => k.to_string(),
                                Method::Parzen => String::new(),
                            };
                            let _ = writeln!(csv, "{n},{m},{degree},NaN,{test_size}");
                            rows += 1;
                            failed_rows += 1;
                        }
                    }
                }
            }
        }
        Ok(BenchTable {
            csv,
            rows,
            failed_rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_stanzas_with_defaults() {
        let cfg = BenchConfig::from_toml(
            r#"
            [[experiment]]
            distribution = "pshape"
            n_train = [100, 150, 300]
            n_test_inliers = 300
            n_test_outliers = 50
            degrees = [2, 3, 4, 5]
            parzen = true
            seed = 1

            [[experiment]]
            distribution = "bimodal"
            n_train = [50]
            n_test_inliers = 10
            n_test_outliers = 5
            degrees = [2]
            shape = "box"
            radius = 0.01
            whiten = false
            seed = 2
            "#,
        )
        .unwrap();
        assert_eq!(cfg.experiment.len(), 2);
        let e = &cfg.experiment[0];
        assert_eq!(e.radius, DEFAULT_RADIUS);
        assert_eq!(e.shape, Shape::Ball);
        assert!(e.whiten);
        assert_eq!(cfg.experiment[1].shape, Shape::Box);
    }

    #[test]
    fn empty_and_malformed_configs() {
        assert!(matches!(
            BenchConfig::from_toml(""),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            BenchConfig::from_toml("[[experiment]]\ndistribution = \"torus\"\n"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn small_run_has_one_row_per_method_and_n() {
        let cfg = BenchConfig::from_toml(
            r#"
            [[experiment]]
            distribution = "bimodal"
            n_train = [40, 60]
            n_test_inliers = 20
            n_test_outliers = 5
            degrees = [2, 4]
            parzen = true
            seed = 3
            "#,
        )
        .unwrap();
        let t = cfg.run().unwrap();
        assert_eq!(t.rows, 6);
        let lines: Vec<&str> = t.csv.lines().collect();
        assert_eq!(lines[0], "N,method,degree,auc,failures");
        assert!(lines[1].starts_with("40,moments,2,"));
        assert!(lines[3].starts_with("40,parzen,,"));
        assert_eq!(cfg.run().unwrap(), t);
    }
}
