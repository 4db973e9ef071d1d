//! Multi-indices and the graded-lexicographic monomial basis.
//!
//! A [`MultiIndex`] `α = (α₁, …, αₙ)` names the monomial `x₁^α₁ ⋯ xₙ^αₙ`.
//! [`MonomialBasis`] lists every multi-index of total degree at most `d`,
//! ordered first by degree and then lexicographically with `x₁` heaviest:
//!
//! ```text
//! n = 2, d = 2:  1, x1, x2, x1², x1·x2, x2²
//! ```
//!
//! Every moment and localizing matrix in the crate is indexed through this
//! ordering.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exponent vector of a monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// `e_j`, the exponent of the single variable `x_j` (zero-based).
    pub fn unit(n: usize, j: usize) -> Self {
        let mut e = vec![0; n];
        e[j] = 1;
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total degree `|α|`.
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise sum, `x^α · x^β = x^(α+β)`.
    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self.add_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Evaluates `x^α`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .product()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Text form: comma-separated exponents, `"2,1"` for `x₁²x₂`.
impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let exps = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad multi-index '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?;
        if exps.is_empty() {
            return Err(Error::Parse("empty multi-index".into()));
        }
        Ok(MultiIndex(exps))
    }
}

/// `s(d) = C(n+d, n)`, the number of monomials of degree at most `d` in `n`
/// variables.
pub fn basis_size(n: usize, d: usize) -> Result<usize> {
    let k = n.min(d) as u128;
    let top = (n + d) as u128;
    let mut acc: u128 = 1;
    for j in 1..=k {
        // acc * (top - k + j) / j stays integral at every step.
        acc = acc
            .checked_mul(top - k + j)
            .ok_or(Error::BasisOverflow(n + d, n))?
            / j;
    }
    usize::try_from(acc).map_err(|_| Error::BasisOverflow(n + d, n))
}

/// Ordered list of all multi-indices with `|α| ≤ d`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialBasis {
    n: usize,
    max_degree: usize,
    entries: Vec<MultiIndex>,
    positions: HashMap<MultiIndex, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "dimension must be at least 1".into(),
            ));
        }
        let size = basis_size(n, d)?;
        let mut entries = Vec::with_capacity(size);
        let mut current = vec![0u32; n];
        for degree in 0..=d {
            push_degree(&mut entries, &mut current, 0, degree as u32);
        }
        debug_assert_eq!(entries.len(), size);
        let positions = entries
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        Ok(MonomialBasis {
            n,
            max_degree: d,
            entries,
            positions,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[MultiIndex] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &MultiIndex {
        &self.entries[i]
    }

    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.positions.get(alpha).copied()
    }

    /// `ν(x)`, the basis evaluated at a point.
    pub fn evaluate(&self, x: &[f64]) -> Vec<f64> {
        self.entries.iter().map(|a| a.eval(x)).collect()
    }

    /// Number of entries of degree at most `d` (a prefix of the basis).
    pub fn prefix_len(&self, d: usize) -> usize {
        self.entries.partition_point(|a| a.degree() <= d)
    }
}

/// Appends all exponent tails for positions `pos..n` summing to `remaining`,
/// in descending lexicographic order.
fn push_degree(out: &mut Vec<MultiIndex>, current: &mut [u32], pos: usize, remaining: u32) {
    let n = current.len();
    if pos == n - 1 {
        current[pos] = remaining;
        out.push(MultiIndex(current.to_vec()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        push_degree(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// Convenience wrapper matching the free-function form of the basis API.
pub fn enumerate_basis(n: usize, d: usize) -> Result<MonomialBasis> {
    MonomialBasis::new(n, d)
}
