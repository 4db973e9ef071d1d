//! ROC/AUC, synthetic benchmark data and the experiment runner.

mod experiment;
mod generators;

pub use experiment::{
    run_experiment, AucRow, ExperimentResult, ExperimentSpec, Method, AUC_CSV_HEADER,
};
pub use generators::{
    gen_bimodal, gen_inliers, gen_outliers, gen_pshape, gen_swissroll, gen_test_inliers,
    outlier_guard, pshape_point, sinc, swissroll_point, Distribution,
};

use std::fmt::Write;

use crate::error::{Error, Result};

/// Scores with binary labels (`true` = inlier).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledScores {
    pub scores: Vec<f64>,
    pub labels: Vec<bool>,
    /// Higher score means more normal.
    pub higher_is_normal: bool,
}

impl LabeledScores {
    pub fn new(scores: Vec<f64>, labels: Vec<bool>) -> Result<Self> {
        if scores.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: scores.len(),
                got: labels.len(),
            });
        }
        if let Some(i) = scores.iter().position(|s| s.is_nan()) {
            return Err(Error::NonFinite { row: i, col: 0 });
        }
        Ok(LabeledScores {
            scores,
            labels,
            higher_is_normal: true,
        })
    }

    /// Flips the orientation flag.
    pub fn reversed(mut self) -> Self {
        self.higher_is_normal = !self.higher_is_normal;
        self
    }

    fn oriented(&self) -> Vec<f64> {
        if self.higher_is_normal {
            self.scores.clone()
        } else {
            self.scores.iter().map(|s| -s).collect()
        }
    }

    fn class_counts(&self) -> Result<(usize, usize)> {
        let pos = self.labels.iter().filter(|&&l| l).count();
        let neg = self.labels.len() - pos;
        if pos == 0 || neg == 0 {
            return Err(Error::SingleClass {
                positives: pos,
                negatives: neg,
            });
        }
        Ok((pos, neg))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RocPoint {
    /// Points with oriented score `≥ threshold` are called normal.
    pub threshold: f64,
    pub fpr: f64,
    pub tpr: f64,
}

/// ROC over every distinct score threshold, from `(0, 0)` to `(1, 1)`.
pub fn roc(ls: &LabeledScores) -> Result<Vec<RocPoint>> {
    let (pos, neg) = ls.class_counts()?;
    let s = ls.oriented();
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let mut out = vec![RocPoint {
        threshold: f64::INFINITY,
        fpr: 0.0,
        tpr: 0.0,
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut i = 0;
    while i < order.len() {
        let th = s[order[i]];
        while i < order.len() && s[order[i]] == th {
            if ls.labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        out.push(RocPoint {
            threshold: if ls.higher_is_normal { th } else { -th },
            fpr: fp as f64 / neg as f64,
            tpr: tp as f64 / pos as f64,
        });
    }
    Ok(out)
}

/// Probability that a random inlier outscores a random outlier, ties ½.
pub fn auc(ls: &LabeledScores) -> Result<f64> {
    let (pos, neg) = ls.class_counts()?;
    let s = ls.oriented();
    // Mann–Whitney U from mid-ranks.
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && s[order[j]] == s[order[i]] {
            j += 1;
        }
        let mid = (i + j + 1) as f64 / 2.0;
        rank_sum += order[i..j].iter().filter(|&&k| ls.labels[k]).count() as f64 * mid;
        i = j;
    }
    let u = rank_sum - (pos * (pos + 1)) as f64 / 2.0;
    Ok(u / (pos as f64 * neg as f64))
}

/// `threshold,fpr,tpr` CSV.
pub fn roc_csv(points: &[RocPoint]) -> String {
    let mut out = String::from("threshold,fpr,tpr\n");
    for p in points {
        let _ = writeln!(out, "{},{},{}", p.threshold, p.fpr, p.tpr);
    }
    out
}
