//! Moment relaxations for the largest probability a set can carry given a
//! truncated moment sequence.
//!
//! For known moments `γ_α, α ∈ Γ` and `S = {x : f_j(x) ≥ 0}`, the order-`i`
//! relaxation is
//!
//! ```text
//! ρ_i = sup y₀
//!       s.t. y_α + z_α = γ_α            α ∈ Γ
//!            M_i(y) ⪰ 0,  M_i(z) ⪰ 0
//!            M_{i−v_j}(f_j y) ⪰ 0        v_j = ⌈deg f_j / 2⌉
//! ```
//!
//! `y` carries the mass placed on `S`, `z` the rest. `ρ_i` decreases to the
//! exact bound as `i` grows.
//!
//! When `Γ = {|α| ≤ d}` with `d < 2i`, the moments of `z` above degree `d`
//! occur only in `M_i(z)`. Eliminating them leaves the closed condition
//! `M_{⌊d/2⌋}(z) ⪰ 0` on the known range (a sum of squares of degree `≤ d`
//! has its Gram matrix on the degree-`⌊d/2⌋` basis), so that is what gets
//! assembled. Keeping them as free variables makes the supremum unattained
//! and the interior-point iterates diverge.

mod layout;

pub use layout::{
    half_degree, localizing_layout, moment_matrix_layout, LocalizingLayout, MomentMatrixLayout,
};

use crate::error::{Error, Result};
use crate::moments::{MomentSequence, Polynomial};
use crate::multiindex::MonomialBasis;
use crate::sdp::{
    numerical_rank_floor, ConicProgram, ConicSolver, InteriorPointSolver, Sense, SolveStatus,
};

/// Relative tolerance of the numerical-rank test.
pub const RANK_TOL: f64 = 1e-6;

/// `{x ∈ ℝⁿ : f_j(x) ≥ 0 for all j}`.
#[derive(Debug, Clone)]
pub struct SemialgebraicSet {
    n: usize,
    constraints: Vec<Polynomial>,
}

impl SemialgebraicSet {
    pub fn new(n: usize, constraints: Vec<Polynomial>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::InvalidArgument(
                "a set needs at least one constraint".into(),
            ));
        }
        for f in &constraints {
            if f.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: f.dim(),
                });
            }
            if f.is_zero() {
                return Err(Error::InvalidArgument("zero constraint polynomial".into()));
            }
        }
        Ok(SemialgebraicSet { n, constraints })
    }

    pub fn single(g: Polynomial) -> Result<Self> {
        SemialgebraicSet::new(g.dim(), vec![g])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn constraints(&self) -> &[Polynomial] {
        &self.constraints
    }

    /// `max_j ⌈deg f_j / 2⌉`.
    pub fn max_half_degree(&self) -> usize {
        self.constraints.iter().map(half_degree).max().unwrap_or(0)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.constraints.iter().all(|f| f.eval(x) >= 0.0)
    }
}

/// The assembled program together with the variable layout needed to read
/// `y` and `z` back.
#[derive(Debug, Clone)]
pub struct UpperBoundProgram {
    pub program: ConicProgram,
    order: usize,
    max_half_degree: usize,
    known_degree: usize,
    full_basis: MonomialBasis,
    /// Variables of `z`: a prefix of `full_basis`.
    z_basis: MonomialBasis,
    z_order: usize,
}

impl UpperBoundProgram {
    pub fn order(&self) -> usize {
        self.order
    }

    fn y_var(&self, pos: usize) -> usize {
        pos
    }

    /// Number of equality rows `y_α + z_α = γ_α`.
    pub fn num_moment_equalities(&self) -> usize {
        self.program.equalities().len()
    }

    /// Order of the `z` moment block, `⌊min(d, 2i) / 2⌋`.
    pub fn z_order(&self) -> usize {
        self.z_order
    }

    fn recover(&self, w: &[f64]) -> (MomentSequence, MomentSequence) {
        let s = self.full_basis.len();
        let sz = self.z_basis.len();
        let n = self.full_basis.dim();
        let read = |basis: &MonomialBasis, vals: &[f64]| {
            let d = basis.max_degree();
            MomentSequence::from_values(n, d, vals.to_vec()).unwrap_or_else(|_| {
                MomentSequence::from_values(n, d, vec![0.0; vals.len()]).unwrap()
            })
        };
        (
            read(&self.full_basis, &w[..s]),
            read(&self.z_basis, &w[s..s + sz]),
        )
    }
}

fn add_moment_block(
    p: &mut ConicProgram,
    layout: &MomentMatrixLayout,
    full: &MonomialBasis,
    offset: usize,
) {
    let blk = p.add_block(layout.size());
    for r in 0..layout.size() {
        for c in r..layout.size() {
            let pos = full.position(layout.entry(r, c)).unwrap();
            p.add_entry(blk, r, c, Some(offset + pos), 1.0);
        }
    }
}

/// Builds the order-`i` upper-bound program.
///
/// Variables are `y_α` for every `|α| ≤ 2i` then `z_α` for `|α| ≤ min(d, 2i)`;
/// blocks are `M_i(y)`, `M_{⌊min(d, 2i)/2⌋}(z)` and one localizing block per
/// constraint; the objective maximizes `y₀`. Known moments above degree `2i`
/// do not enter.
pub fn assemble_upper_bound(
    gamma: &MomentSequence,
    set: &SemialgebraicSet,
    order: usize,
) -> Result<UpperBoundProgram> {
    if gamma.is_empty() {
        return Err(Error::InvalidArgument("empty moment sequence".into()));
    }
    if gamma.dim() != set.dim() {
        return Err(Error::DimensionMismatch {
            expected: gamma.dim(),
            got: set.dim(),
        });
    }
    let v = set.max_half_degree();
    if order < v {
        let degree = set
            .constraints()
            .iter()
            .map(Polynomial::degree)
            .max()
            .unwrap_or(0);
        return Err(Error::OrderTooSmall { order, degree });
    }
    let n = gamma.dim();
    let full = MonomialBasis::new(n, 2 * order)?;
    let s = full.len();
    let z_degree = gamma.max_degree().min(2 * order);
    let z_basis = MonomialBasis::new(n, z_degree)?;
    let z_order = z_degree / 2;
    let mut p = ConicProgram::new(s + z_basis.len(), Sense::Maximize);

    add_moment_block(&mut p, &MomentMatrixLayout::new(n, order)?, &full, 0);
    add_moment_block(&mut p, &MomentMatrixLayout::new(n, z_order)?, &full, s);
    for f in set.constraints() {
        let loc = LocalizingLayout::new(f, order)?;
        let blk = p.add_block(loc.size());
        for r in 0..loc.size() {
            for c in r..loc.size() {
                for (alpha, coef) in loc.entry(r, c) {
                    let pos = full.position(alpha).unwrap();
                    p.add_entry(blk, r, c, Some(pos), *coef);
                }
            }
        }
    }

    for (alpha, value) in gamma.iter() {
        if let Some(pos) = full.position(alpha) {
            let scale = value.abs().max(1.0);
            p.add_equality(
                vec![(pos, 1.0 / scale), (s + pos, 1.0 / scale)],
                value / scale,
            );
        }
    }
    p.set_objective(0, 1.0);

    Ok(UpperBoundProgram {
        program: p,
        order,
        max_half_degree: v,
        known_degree: gamma.max_degree(),
        full_basis: full,
        z_basis,
        z_order,
    })
}

/// Adds `|y_α| ≤ bound` for every moment of `y` not fixed by the equalities.
fn add_guards(ub: &mut UpperBoundProgram, bound: f64) {
    let s = ub.full_basis.len();
    let first_free = ub.full_basis.prefix_len(ub.known_degree);
    for pos in first_free..s {
        let var = ub.y_var(pos);
        let lo = ub.program.add_block(1);
        ub.program.add_entry(lo, 0, 0, None, bound);
        ub.program.add_entry(lo, 0, 0, Some(var), 1.0);
        let hi = ub.program.add_block(1);
        ub.program.add_entry(hi, 0, 0, None, bound);
        ub.program.add_entry(hi, 0, 0, Some(var), -1.0);
    }
}

/// Ranks behind the finite-convergence test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank_y: usize,
    pub rank_y_lower: usize,
    pub rank_z: usize,
    pub rank_z_lower: usize,
    pub optimal: bool,
}

#[derive(Debug, Clone)]
pub struct BoundResult {
    pub rho: f64,
    pub order: usize,
    pub status: SolveStatus,
    /// Recovered `y` over degree `≤ 2i`.
    pub y: MomentSequence,
    /// Recovered `z` over the known range, degree `≤ min(d, 2i)`.
    pub z: MomentSequence,
    pub rank_certificate: Option<RankCertificate>,
    /// The solve needed box guards on the free moments.
    pub guarded: bool,
    pub iterations: usize,
    /// `⌈deg f / 2⌉` maximized over the constraints that produced `y`.
    pub max_half_degree: usize,
}

impl BoundResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Solver and diagnostics used by the bound routines.
#[derive(Clone, Copy)]
pub struct BoundOptions<'a> {
    pub solver: &'a dyn ConicSolver,
    pub certify: bool,
}

static DEFAULT_SOLVER: InteriorPointSolver = InteriorPointSolver::DEFAULT;

impl Default for BoundOptions<'_> {
    fn default() -> Self {
        BoundOptions {
            solver: &DEFAULT_SOLVER,
            certify: false,
        }
    }
}

/// `ρ_i` for the given moments and set, with the default solver.
pub fn upper_bound(
    gamma: &MomentSequence,
    set: &SemialgebraicSet,
    order: usize,
) -> Result<BoundResult> {
    upper_bound_with(gamma, set, order, BoundOptions::default())
}

pub fn upper_bound_with(
    gamma: &MomentSequence,
    set: &SemialgebraicSet,
    order: usize,
    opts: BoundOptions<'_>,
) -> Result<BoundResult> {
    let mut ub = assemble_upper_bound(gamma, set, order)?;
    let mut sol = opts.solver.solve(&ub.program);
    let mut guarded = false;
    // Free moments of y above the known degree can leave the optimal face
    // unbounded when S is, which shows up as a ray or a stalled iteration.
    let has_free = ub.known_degree < 2 * order;
    let retry = match sol.status {
        SolveStatus::Unbounded => true,
        SolveStatus::MaxIterations | SolveStatus::NumericalFailure => has_free,
        _ => false,
    };
    if retry {
        add_guards(&mut ub, 10f64.powi(2 * order as i32));
        sol = opts.solver.solve(&ub.program);
        guarded = true;
    }
    let (y, z) = ub.recover(&sol.free_values);
    let mut result = BoundResult {
        rho: if sol.is_optimal() { y.mass() } else { f64::NAN },
        order,
        status: sol.status,
        y,
        z,
        rank_certificate: None,
        guarded,
        iterations: sol.iterations,
        max_half_degree: ub.max_half_degree,
    };
    if opts.certify && result.is_optimal() && order >= 1 {
        result.rank_certificate = Some(rank_certificate(&result, ub.max_half_degree)?);
    }
    Ok(result)
}

/// Lower bound on the mass of `{g ≥ 0}` from the upper bound on
/// `{−g ≥ 0}`: `γ₀ − ρ`, clamped to `[0, γ₀]`.
pub fn lower_bound(
    gamma: &MomentSequence,
    set: &SemialgebraicSet,
    order: usize,
) -> Result<BoundResult> {
    lower_bound_with(gamma, set, order, BoundOptions::default())
}

pub fn lower_bound_with(
    gamma: &MomentSequence,
    set: &SemialgebraicSet,
    order: usize,
    opts: BoundOptions<'_>,
) -> Result<BoundResult> {
    let [g] = set.constraints() else {
        return Err(Error::Unsupported(
            "lower bounds need a set defined by exactly one constraint".into(),
        ));
    };
    let complement = SemialgebraicSet::single(g.scale(-1.0))?;
    let mut res = upper_bound_with(gamma, &complement, order, opts)?;
    let mass = gamma.mass();
    res.rho = (mass - res.rho).clamp(0.0, mass.max(0.0));
    Ok(res)
}

/// Rank of `M_d(y)` measured against the total mass `reference`.
fn moment_rank(y: &MomentSequence, order: usize, reference: f64) -> Result<usize> {
    let m = MomentMatrixLayout::new(y.dim(), order)?.evaluate(y)?;
    numerical_rank_floor(&m, RANK_TOL, reference)
}

fn rank_certificate(result: &BoundResult, v: usize) -> Result<RankCertificate> {
    let i = result.order;
    if i < v || i == 0 {
        return Err(Error::InvalidArgument(format!(
            "rank test needs i ≥ max(v, 1); got i = {i}, v = {v}"
        )));
    }
    let reference = (result.y.mass() + result.z.mass()).abs();
    let rank_y = moment_rank(&result.y, i, reference)?;
    let rank_y_lower = moment_rank(&result.y, i - v, reference)?;
    let zo = result.z.max_degree() / 2;
    let rank_z = moment_rank(&result.z, zo, reference)?;
    let rank_z_lower = moment_rank(&result.z, zo.saturating_sub(1), reference)?;
    Ok(RankCertificate {
        rank_y,
        rank_y_lower,
        rank_z,
        rank_z_lower,
        optimal: rank_y == rank_y_lower && rank_z == rank_z_lower,
    })
}

/// Finite-convergence test: `rank M_i(y) = rank M_{i−v}(y)` and
/// `rank M_j(z) = rank M_{j−1}(z)` with `j` the order of the `z` block.
pub fn rank_optimality(result: &BoundResult, v: usize) -> Result<bool> {
    if !result.is_optimal() {
        return Err(Error::NotOptimal(result.status.to_string()));
    }
    Ok(rank_certificate(result, v)?.optimal)
}
