//! On-disk formats: labeled CSV data, JSON models, score CSVs.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detector::{DetectorModel, Neighborhood};
use crate::error::{Error, Result};
use crate::moments::{MomentSequence, Whitener};
use crate::multiindex::MultiIndex;
use crate::sdp::SolveStatus;

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Points plus optional `label` column (1 inlier, 0 outlier).
#[derive(Debug, Clone, PartialEq)]
pub struct DataFile {
    pub points: Vec<Vec<f64>>,
    pub labels: Option<Vec<bool>>,
}

impl DataFile {
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::EmptyData)?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        let has_label = cols.last() == Some(&"label");
        let n = cols.len() - usize::from(has_label);
        for (j, c) in cols[..n].iter().enumerate() {
            if *c != format!("x{}", j + 1) {
                return Err(Error::Parse(format!(
                    "header column {} should be x{}, found '{c}'",
                    j + 1,
                    j + 1
                )));
            }
        }
        if n == 0 {
            return Err(Error::Parse("header has no coordinate columns".into()));
        }
        let mut points = Vec::new();
        let mut labels = Vec::new();
        for (ln, line) in lines {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != cols.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected {} fields, found {}",
                    ln + 1,
                    cols.len(),
                    fields.len()
                )));
            }
            let x = fields[..n]
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::Parse(format!("line {}: bad number '{f}'", ln + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            points.push(x);
            if has_label {
                labels.push(match fields[n] {
                    "1" => true,
                    "0" => false,
                    other => {
                        return Err(Error::Parse(format!(
                            "line {}: label must be 0 or 1, got '{other}'",
                            ln + 1
                        )))
                    }
                });
            }
        }
        if points.is_empty() {
            return Err(Error::EmptyData);
        }
        Ok(DataFile {
            points,
            labels: has_label.then_some(labels),
        })
    }

    pub fn to_csv(&self) -> String {
        let n = self.dim();
        let mut out: Vec<String> = (1..=n).map(|j| format!("x{j}")).collect();
        if self.labels.is_some() {
            out.push("label".into());
        }
        let mut s = out.join(",");
        s.push('\n');
        for (i, x) in self.points.iter().enumerate() {
            let row: Vec<String> = x.iter().map(|v| v.to_string()).collect();
            s.push_str(&row.join(","));
            if let Some(l) = &self.labels {
                s.push_str(if l[i] { ",1" } else { ",0" });
            }
            s.push('\n');
        }
        s
    }

    pub fn read(path: &Path) -> Result<Self> {
        DataFile::parse(&read_text(path)?)
    }
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhiteningFile {
    pub mean: Vec<f64>,
    /// Row-major `n × n`; whitened = transform · (x − mean).
    pub transform: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(rename = "N_train")]
    pub n_train: usize,
    pub seed: Option<u64>,
    /// Seconds since the Unix epoch.
    pub created_at: Option<u64>,
}

/// JSON model: everything needed to score, keyed by exponent strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub n: usize,
    pub degree: usize,
    pub whitening: Option<WhiteningFile>,
    pub moments: Vec<(String, f64)>,
    pub neighborhood: Neighborhood,
    pub provenance: Provenance,
}

impl ModelFile {
    pub fn from_model(model: &DetectorModel, provenance: Provenance) -> Self {
        ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            n: model.dim(),
            degree: model.degree(),
            whitening: model.whitener().map(|w| WhiteningFile {
                mean: w.mean().to_vec(),
                transform: w.transform().to_vec(),
            }),
            moments: model
                .gamma()
                .iter()
                .map(|(a, v)| (a.to_string(), v))
                .collect(),
            neighborhood: model.neighborhood(),
            provenance,
        }
    }

    pub fn to_model(&self) -> Result<DetectorModel> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported model format version {}",
                self.format_version
            )));
        }
        let pairs = self
            .moments
            .iter()
            .map(|(k, v)| {
                let a: MultiIndex = k.parse()?;
                if a.dim() != self.n {
                    return Err(Error::Parse(format!(
                        "moment key '{k}' has wrong dimension"
                    )));
                }
                Ok((a, *v))
            })
            .collect::<Result<Vec<_>>>()?;
        let expected = crate::multiindex::basis_size(self.n, self.degree)?;
        if pairs.len() != expected {
            return Err(Error::Parse(format!(
                "model lists {} moments, degree {} in {} variables needs {expected}",
                pairs.len(),
                self.degree,
                self.n
            )));
        }
        let gamma = MomentSequence::from_pairs(self.n, self.degree, pairs)?;
        let whitener = self
            .whitening
            .as_ref()
            .map(|w| Whitener::from_parts(w.mean.clone(), w.transform.clone()))
            .transpose()?;
        DetectorModel::from_parts(gamma, whitener, self.neighborhood)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("model file: {e}")))
    }
}

/// One row of a scores CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreRow {
    pub index: usize,
    pub rho: f64,
    pub status: SolveStatus,
}

pub fn scores_csv(rows: &[ScoreRow]) -> String {
    let mut s = String::from("index,rho,status\n");
    for r in rows {
        let _ = writeln!(s, "{},{},{}", r.index, r.rho, r.status);
    }
    s
}

pub fn parse_scores(text: &str) -> Result<Vec<ScoreRow>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    if lines.next().map(str::trim) != Some("index,rho,status") {
        return Err(Error::Parse(
            "scores file must start with 'index,rho,status'".into(),
        ));
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::Parse(format!("scores row {}: '{line}'", i + 1));
            if f.len() != 3 {
                return Err(bad());
            }
            Ok(ScoreRow {
                index: f[0].parse().map_err(|_| bad())?,
                rho: f[1].parse().map_err(|_| bad())?,
                status: SolveStatus::parse(f[2]).ok_or_else(bad)?,
            })
        })
        .collect()
}
