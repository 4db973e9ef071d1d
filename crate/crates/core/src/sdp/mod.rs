//! Block-diagonal semidefinite programs in affine-matrix (LMI) form:
//!
//! ```text
//! maximize / minimize   cᵀw + c₀
//! subject to            F_b(w) = F_b0 + Σ_j w_j F_bj ⪰ 0   for every block b
//!                       E w = e
//! ```
//!
//! `w` are free scalar variables. The conjugate problem has one PSD matrix
//! per block; [`ConicSolution`] reports both objective values.

mod dump;
mod ipm;
mod linalg;

pub use ipm::InteriorPointSolver;
pub use linalg::{numerical_rank, numerical_rank_floor, psd_min_eigenvalue, symmetric_eigenvalues};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Contribution `value · w_var` (or `value` alone when `var` is `None`) to the
/// symmetric entries `(row, col)` and `(col, row)` of a block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockEntry {
    pub row: usize,
    pub col: usize,
    pub var: Option<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearEquality {
    pub coeffs: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicProgram {
    sense: Sense,
    num_vars: usize,
    objective: Vec<f64>,
    objective_constant: f64,
    block_sizes: Vec<usize>,
    block_entries: Vec<Vec<BlockEntry>>,
    equalities: Vec<LinearEquality>,
}

impl ConicProgram {
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        ConicProgram {
            sense,
            num_vars,
            objective: vec![0.0; num_vars],
            objective_constant: 0.0,
            block_sizes: Vec::new(),
            block_entries: Vec::new(),
            equalities: Vec::new(),
        }
    }

    /// Adds a PSD block of the given size and returns its index.
    pub fn add_block(&mut self, size: usize) -> usize {
        self.block_sizes.push(size);
        self.block_entries.push(Vec::new());
        self.block_sizes.len() - 1
    }

    /// Adds `value · w_var` (or a constant) at `(row, col)` and its mirror.
    pub fn add_entry(
        &mut self,
        block: usize,
        row: usize,
        col: usize,
        var: Option<usize>,
        value: f64,
    ) {
        let (row, col) = if row <= col { (row, col) } else { (col, row) };
        self.block_entries[block].push(BlockEntry {
            row,
            col,
            var,
            value,
        });
    }

    pub fn set_objective(&mut self, var: usize, coef: f64) {
        self.objective[var] = coef;
    }

    pub fn set_objective_constant(&mut self, c: f64) {
        self.objective_constant = c;
    }

    /// Adds `⟨c, F_b(w)⟩` to the objective, for objectives stated over block
    /// entries rather than over the free variables.
    pub fn add_objective_block_term(&mut self, block: usize, c: &DMatrix<f64>) {
        for e in &self.block_entries[block] {
            let weight = if e.row == e.col {
                c[(e.row, e.col)]
            } else {
                c[(e.row, e.col)] + c[(e.col, e.row)]
            };
            match e.var {
                Some(j) => self.objective[j] += weight * e.value,
                None => self.objective_constant += weight * e.value,
            }
        }
    }

    pub fn add_equality(&mut self, coeffs: Vec<(usize, f64)>, rhs: f64) {
        self.equalities.push(LinearEquality { coeffs, rhs });
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn objective_constant(&self) -> f64 {
        self.objective_constant
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn block_entries(&self, block: usize) -> &[BlockEntry] {
        &self.block_entries[block]
    }

    pub fn equalities(&self) -> &[LinearEquality] {
        &self.equalities
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_sizes.is_empty() {
            return Err(Error::InvalidProgram("program has no PSD block".into()));
        }
        if let Some(b) = self.block_sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidProgram(format!("block {b} has size 0")));
        }
        for (b, entries) in self.block_entries.iter().enumerate() {
            let s = self.block_sizes[b];
            for e in entries {
                if e.col >= s {
                    return Err(Error::InvalidProgram(format!(
                        "entry ({}, {}) outside block {b} of size {s}",
                        e.row, e.col
                    )));
                }
                if matches!(e.var, Some(j) if j >= self.num_vars) {
                    return Err(Error::InvalidProgram(format!(
                        "block {b} references undeclared variable {:?}",
                        e.var
                    )));
                }
                if !e.value.is_finite() {
                    return Err(Error::InvalidProgram("non-finite block coefficient".into()));
                }
            }
        }
        for (i, eq) in self.equalities.iter().enumerate() {
            if eq.coeffs.iter().any(|&(j, _)| j >= self.num_vars) {
                return Err(Error::InvalidProgram(format!(
                    "equality {i} references an undeclared variable"
                )));
            }
            if !eq.rhs.is_finite() || eq.coeffs.iter().any(|(_, v)| !v.is_finite()) {
                return Err(Error::InvalidProgram(format!("equality {i} is not finite")));
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProgram("non-finite objective".into()));
        }
        Ok(())
    }

    /// Dense `F_b(w)`.
    pub fn block_value(&self, block: usize, w: &[f64]) -> DMatrix<f64> {
        let s = self.block_sizes[block];
        let mut m = DMatrix::zeros(s, s);
        for e in &self.block_entries[block] {
            let v = match e.var {
                Some(j) => e.value * w[j],
                None => e.value,
            };
            m[(e.row, e.col)] += v;
            if e.row != e.col {
                m[(e.col, e.row)] += v;
            }
        }
        m
    }

    /// Dense coefficient matrix `F_bj` (`var = None` gives `F_b0`).
    pub fn block_coefficient(&self, block: usize, var: Option<usize>) -> DMatrix<f64> {
        let s = self.block_sizes[block];
        let mut m = DMatrix::zeros(s, s);
        for e in self.block_entries[block].iter().filter(|e| e.var == var) {
            m[(e.row, e.col)] += e.value;
            if e.row != e.col {
                m[(e.col, e.row)] += e.value;
            }
        }
        m
    }

    pub fn objective_value(&self, w: &[f64]) -> f64 {
        self.objective_constant
            + self
                .objective
                .iter()
                .zip(w)
                .map(|(c, v)| c * v)
                .sum::<f64>()
    }

    /// `max_i |(E w − e)_i|`.
    pub fn equality_residual(&self, w: &[f64]) -> f64 {
        self.equalities
            .iter()
            .map(|eq| (eq.coeffs.iter().map(|&(j, c)| c * w[j]).sum::<f64>() - eq.rhs).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_rhs(&self) -> f64 {
        self.equalities
            .iter()
            .map(|e| e.rhs.abs())
            .fold(0.0, f64::max)
    }

    pub fn to_triplets(&self) -> String {
        dump::write_program(self)
    }

    pub fn from_triplets(text: &str) -> Result<Self> {
        dump::read_program(text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    MaxIterations,
    NumericalFailure,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
            SolveStatus::MaxIterations => "max_iterations",
            SolveStatus::NumericalFailure => "numerical_failure",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "optimal" => SolveStatus::Optimal,
            "infeasible" => SolveStatus::Infeasible,
            "unbounded" => SolveStatus::Unbounded,
            "max_iterations" => SolveStatus::MaxIterations,
            "numerical_failure" => SolveStatus::NumericalFailure,
            _ => return None,
        })
    }
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of a solve. Objective values are in the program's own sense:
/// `dual_objective` is the value `cᵀw + c₀` attained at `free_values`, and
/// `primal_objective` is the value of the conjugate problem, an upper bound for
/// maximization (lower bound for minimization) at optimality.
#[derive(Debug, Clone)]
pub struct ConicSolution {
    pub status: SolveStatus,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `F_b(w)` at the returned point.
    pub block_values: Vec<DMatrix<f64>>,
    pub free_values: Vec<f64>,
    pub iterations: usize,
}

impl ConicSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    pub fn objective(&self) -> f64 {
        self.dual_objective
    }

    pub(crate) fn failed(program: &ConicProgram, status: SolveStatus, iterations: usize) -> Self {
        ConicSolution {
            status,
            primal_objective: f64::NAN,
            dual_objective: f64::NAN,
            block_values: program
                .block_sizes()
                .iter()
                .map(|&s| DMatrix::zeros(s, s))
                .collect(),
            free_values: vec![0.0; program.num_vars()],
            iterations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub gap: f64,
    pub feasibility: f64,
    pub max_iterations: usize,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        gap: 1e-8,
        feasibility: 1e-8,
        max_iterations: 200,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances::DEFAULT
    }
}

/// Anything that can solve a [`ConicProgram`]; the relaxation code only talks
/// to this trait.
pub trait ConicSolver: Send + Sync {
    fn solve(&self, program: &ConicProgram) -> ConicSolution;
}

/// Solves with the built-in interior-point method.
pub fn solve(program: &ConicProgram, tol: Tolerances) -> ConicSolution {
    InteriorPointSolver::new(tol).solve(program)
}
