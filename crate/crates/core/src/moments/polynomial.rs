use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

/// Sparse real polynomial `Σ_α p_α x^α` in `n` variables. Zero coefficients
/// are never stored.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<MultiIndex, f64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut p = Polynomial::zero(n);
        p.add_term(MultiIndex::zero(n), c);
        p
    }

    /// The coordinate polynomial `x_j` (zero-based).
    pub fn var(n: usize, j: usize) -> Self {
        let mut p = Polynomial::zero(n);
        p.add_term(MultiIndex::unit(n, j), 1.0);
        p
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, f64)>,
    {
        let mut p = Polynomial::zero(n);
        for (alpha, c) in terms {
            if alpha.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: alpha.dim(),
                });
            }
            p.add_term(alpha, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, alpha: MultiIndex, c: f64) {
        debug_assert_eq!(alpha.dim(), self.n);
        let entry = self.terms.entry(alpha).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.retain(|_, v| *v != 0.0);
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(MultiIndex::degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, alpha: &MultiIndex) -> f64 {
        self.terms.get(alpha).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, f64)> {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|(a, c)| c * a.eval(x)).sum()
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (a, c) in self.terms() {
            out.add_term(a.clone(), c * s);
        }
        out
    }

    pub fn plus(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (a, c) in other.terms() {
            out.add_term(a.clone(), c);
        }
        out
    }

    pub fn minus(&self, other: &Polynomial) -> Polynomial {
        self.plus(&other.scale(-1.0))
    }

    pub fn times(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                out.add_term(a.add_unchecked(b), ca * cb);
            }
        }
        out
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (a, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·x^({a})")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_terms_are_dropped() {
        let mut p = Polynomial::var(2, 0);
        p.add_term(MultiIndex::unit(2, 0), -1.0);
        assert!(p.is_zero());
        assert_eq!(p.degree(), 0);
    }

    #[test]
    fn product_and_eval() {
        // (1 + x)(1 - y) at (2, 3) = 3 * -2
        let one = Polynomial::constant(2, 1.0);
        let p = one.plus(&Polynomial::var(2, 0));
        let q = one.minus(&Polynomial::var(2, 1));
        let pq = p.times(&q);
        assert_eq!(pq.degree(), 2);
        assert_eq!(pq.num_terms(), 4);
        assert!((pq.eval(&[2.0, 3.0]) + 6.0).abs() < 1e-14);
    }
}
