//! Symbolic index structure of moment and localizing matrices.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::moments::{MomentSequence, Polynomial};
use crate::multiindex::{MonomialBasis, MultiIndex};

/// `M_i(y)`: entry `(j, k)` is `y_{α_j + α_k}` over the degree-`i` basis.
#[derive(Debug, Clone)]
pub struct MomentMatrixLayout {
    order: usize,
    basis: MonomialBasis,
    entry_index: Vec<Vec<MultiIndex>>,
}

impl MomentMatrixLayout {
    pub fn new(n: usize, order: usize) -> Result<Self> {
        let basis = MonomialBasis::new(n, order)?;
        let entry_index = basis
            .entries()
            .iter()
            .map(|a| basis.entries().iter().map(|b| a.add_unchecked(b)).collect())
            .collect();
        Ok(MomentMatrixLayout {
            order,
            basis,
            entry_index,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn entry(&self, row: usize, col: usize) -> &MultiIndex {
        &self.entry_index[row][col]
    }

    pub fn evaluate(&self, y: &MomentSequence) -> Result<DMatrix<f64>> {
        let s = self.size();
        let mut m = DMatrix::zeros(s, s);
        for r in 0..s {
            for c in 0..s {
                let alpha = &self.entry_index[r][c];
                m[(r, c)] = y
                    .get(alpha)
                    .ok_or_else(|| Error::MissingMoment(alpha.to_string()))?;
            }
        }
        Ok(m)
    }
}

pub fn moment_matrix_layout(n: usize, order: usize) -> Result<MomentMatrixLayout> {
    MomentMatrixLayout::new(n, order)
}

/// `⌈deg(g)/2⌉`.
pub fn half_degree(g: &Polynomial) -> usize {
    g.degree().div_ceil(2)
}

/// `M_d(g y)`: entry `(j, k)` is the linear form `Σ_β g_β y_{β + α_j + α_k}`
/// with `d = i − ⌈deg(g)/2⌉`.
#[derive(Debug, Clone)]
pub struct LocalizingLayout {
    g: Polynomial,
    order: usize,
    basis: MonomialBasis,
    entries: Vec<Vec<Vec<(MultiIndex, f64)>>>,
}

impl LocalizingLayout {
    pub fn new(g: &Polynomial, relaxation_order: usize) -> Result<Self> {
        let v = half_degree(g);
        if relaxation_order < v {
            return Err(Error::OrderTooSmall {
                order: relaxation_order,
                degree: g.degree(),
            });
        }
        let order = relaxation_order - v;
        let basis = MonomialBasis::new(g.dim(), order)?;
        let entries = basis
            .entries()
            .iter()
            .map(|a| {
                basis
                    .entries()
                    .iter()
                    .map(|b| {
                        let ab = a.add_unchecked(b);
                        g.terms()
                            .map(|(beta, c)| (beta.add_unchecked(&ab), c))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(LocalizingLayout {
            g: g.clone(),
            order,
            basis,
            entries,
        })
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.g
    }

    /// The matrix order `d`, not the relaxation order.
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &[(MultiIndex, f64)] {
        &self.entries[row][col]
    }

    pub fn max_index_degree(&self) -> usize {
        2 * self.order + self.g.degree()
    }

    pub fn evaluate(&self, y: &MomentSequence) -> Result<DMatrix<f64>> {
        let s = self.size();
        let mut m = DMatrix::zeros(s, s);
        for r in 0..s {
            for c in 0..s {
                let mut v = 0.0;
                for (alpha, coef) in &self.entries[r][c] {
                    v += coef
                        * y.get(alpha)
                            .ok_or_else(|| Error::MissingMoment(alpha.to_string()))?;
                }
                m[(r, c)] = v;
            }
        }
        Ok(m)
    }
}

pub fn localizing_layout(g: &Polynomial, relaxation_order: usize) -> Result<LocalizingLayout> {
    LocalizingLayout::new(g, relaxation_order)
}
