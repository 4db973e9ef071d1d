//! Infeasible-start primal-dual path-following method with Nesterov–Todd
//! scaling and Mehrotra predictor-corrector steps.
//!
//! Equalities `E w = e` are eliminated first (`w = w₀ + N t`), leaving the
//! standard pair
//!
//! ```text
//! (P)  min ⟨C, X⟩  s.t.  ⟨A_k, X⟩ = b_k,  X ⪰ 0
//! (D)  max bᵀt     s.t.  S = C − Σ_k t_k A_k ⪰ 0
//! ```
//!
//! where (D) is the user's program. Everything is dense; blocks are expected
//! to stay below a few hundred rows.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use super::{ConicProgram, ConicSolution, ConicSolver, Sense, SolveStatus, Tolerances};

/// Relaxed thresholds accepted as optimal when the iteration stalls before
/// reaching the requested tolerances.
const STALL_GAP: f64 = 1e-6;
const STALL_FEAS: f64 = 1e-7;
/// Ratio under which an iterate is taken as an infeasibility certificate.
const CERT_TOL: f64 = 1e-8;
const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default)]
pub struct InteriorPointSolver {
    tol: Tolerances,
}

impl InteriorPointSolver {
    pub const DEFAULT: InteriorPointSolver = InteriorPointSolver {
        tol: Tolerances::DEFAULT,
    };

    pub fn new(tol: Tolerances) -> Self {
        InteriorPointSolver { tol }
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }
}

impl ConicSolver for InteriorPointSolver {
    fn solve(&self, program: &ConicProgram) -> ConicSolution {
        if let Err(e) = program.validate() {
            log::warn!("rejecting program: {e}");
            return ConicSolution::failed(program, SolveStatus::NumericalFailure, 0);
        }
        let reduced = match Reduction::new(program) {
            Some(r) => r,
            None => return ConicSolution::failed(program, SolveStatus::Infeasible, 0),
        };
        let std = StandardForm::build(program, &reduced);
        if std.free_improving_direction {
            return ConicSolution::failed(program, SolveStatus::Unbounded, 0);
        }
        let outcome = run(&std, self.tol);
        finish(program, &reduced, &std, outcome)
    }
}

/// `w = particular + null_basis · t`.
struct Reduction {
    particular: DVector<f64>,
    null_basis: DMatrix<f64>,
}

impl Reduction {
    /// Gaussian elimination with complete pivoting on the scaled equality rows.
    /// Returns `None` when the equalities are inconsistent.
    fn new(p: &ConicProgram) -> Option<Self> {
        let m = p.num_vars();
        let rows = p.equalities().len();
        if rows == 0 {
            return Some(Reduction {
                particular: DVector::zeros(m),
                null_basis: DMatrix::identity(m, m),
            });
        }
        let mut e = DMatrix::<f64>::zeros(rows, m);
        let mut rhs = DVector::<f64>::zeros(rows);
        for (i, eq) in p.equalities().iter().enumerate() {
            for &(j, c) in &eq.coeffs {
                e[(i, j)] += c;
            }
            let scale = e.row(i).amax().max(eq.rhs.abs()).max(f64::MIN_POSITIVE);
            for j in 0..m {
                e[(i, j)] /= scale;
            }
            rhs[i] = eq.rhs / scale;
        }
        let big = e.amax();
        let mut col_perm: Vec<usize> = (0..m).collect();
        let mut rank = 0;
        while rank < rows.min(m) {
            let mut best = (0.0, rank, rank);
            for i in rank..rows {
                for j in rank..m {
                    let v = e[(i, col_perm[j])].abs();
                    if v > best.0 {
                        best = (v, i, j);
                    }
                }
            }
            if best.0 <= PIVOT_TOL * big.max(1.0) {
                break;
            }
            e.swap_rows(rank, best.1);
            rhs.swap_rows(rank, best.1);
            col_perm.swap(rank, best.2);
            let pc = col_perm[rank];
            let piv = e[(rank, pc)];
            for j in 0..m {
                e[(rank, j)] /= piv;
            }
            rhs[rank] /= piv;
            for i in 0..rows {
                if i != rank {
                    let f = e[(i, pc)];
                    if f != 0.0 {
                        for j in 0..m {
                            e[(i, j)] -= f * e[(rank, j)];
                        }
                        rhs[i] -= f * rhs[rank];
                    }
                }
            }
            rank += 1;
        }
        let rhs_scale = 1.0 + rhs.amax();
        if (rank..rows).any(|i| rhs[i].abs() > 1e-9 * rhs_scale) {
            return None;
        }
        let free = &col_perm[rank..];
        let mut particular = DVector::zeros(m);
        for r in 0..rank {
            particular[col_perm[r]] = rhs[r];
        }
        let mut null_basis = DMatrix::zeros(m, free.len());
        for (k, &f) in free.iter().enumerate() {
            null_basis[(f, k)] = 1.0;
            for r in 0..rank {
                null_basis[(col_perm[r], k)] = -e[(r, f)];
            }
        }
        Some(Reduction {
            particular,
            null_basis,
        })
    }
}

/// Scaled standard-form data. `a[b]` holds `vec(A_bk)` as column `k`.
struct StandardForm {
    sizes: Vec<usize>,
    c: Vec<DMatrix<f64>>,
    a: Vec<DMatrix<f64>>,
    b: DVector<f64>,
    /// Reduced variable `k` of the user problem equals `col_scale[k] · t_k`.
    col_scale: Vec<f64>,
    /// Indices into the reduced variables that are kept (nonzero columns).
    kept: Vec<usize>,
    reduced_len: usize,
    free_improving_direction: bool,
    c_scale: f64,
    b_scale: f64,
    /// Objective constant in maximize form.
    constant: f64,
}

impl StandardForm {
    fn build(p: &ConicProgram, red: &Reduction) -> Self {
        let sign = match p.sense() {
            Sense::Maximize => 1.0,
            Sense::Minimize => -1.0,
        };
        let n_red = red.null_basis.ncols();
        let cvec = DVector::from_column_slice(p.objective());
        let b_full = red.null_basis.tr_mul(&cvec) * sign;
        let constant = sign * (p.objective_constant() + cvec.dot(&red.particular));

        let nb = p.block_sizes().len();
        let mut c = Vec::with_capacity(nb);
        let mut a_full = Vec::with_capacity(nb);
        for blk in 0..nb {
            let s = p.block_sizes()[blk];
            let mut c_b = DMatrix::<f64>::zeros(s, s);
            // Coefficient of each original variable in this block, vectorized.
            let mut vars: Vec<usize> = p.block_entries(blk).iter().filter_map(|e| e.var).collect();
            vars.sort_unstable();
            vars.dedup();
            let mut fvec = DMatrix::<f64>::zeros(s * s, vars.len());
            for e in p.block_entries(blk) {
                match e.var {
                    None => {
                        c_b[(e.row, e.col)] += e.value;
                        if e.row != e.col {
                            c_b[(e.col, e.row)] += e.value;
                        }
                    }
                    Some(j) => {
                        let k = vars.binary_search(&j).unwrap();
                        fvec[(e.row + e.col * s, k)] += e.value;
                        if e.row != e.col {
                            fvec[(e.col + e.row * s, k)] += e.value;
                        }
                    }
                }
            }
            let mut wp = DVector::zeros(vars.len());
            let mut nsub = DMatrix::zeros(vars.len(), n_red);
            for (k, &j) in vars.iter().enumerate() {
                wp[k] = red.particular[j];
                nsub.set_row(k, &red.null_basis.row(j));
            }
            let cshift = &fvec * wp;
            for (dst, src) in c_b.as_mut_slice().iter_mut().zip(cshift.iter()) {
                *dst += src;
            }
            c.push(c_b);
            a_full.push(-(&fvec * nsub));
        }

        let mut norms = vec![0.0f64; n_red];
        for a_b in &a_full {
            for (k, nk) in norms.iter_mut().enumerate() {
                *nk += a_b.column(k).norm_squared();
            }
        }
        let mut kept = Vec::new();
        let mut free_improving_direction = false;
        for k in 0..n_red {
            if norms[k].sqrt() > 1e-14 {
                kept.push(k);
            } else if b_full[k].abs() > 1e-14 {
                free_improving_direction = true;
            }
        }
        let col_scale: Vec<f64> = kept.iter().map(|&k| norms[k].sqrt()).collect();
        let mut a = Vec::with_capacity(nb);
        for a_b in &a_full {
            let mut sub = DMatrix::zeros(a_b.nrows(), kept.len());
            for (i, &k) in kept.iter().enumerate() {
                sub.set_column(i, &(a_b.column(k) / col_scale[i]));
            }
            a.push(sub);
        }
        let mut b = DVector::from_iterator(
            kept.len(),
            kept.iter().zip(&col_scale).map(|(&k, s)| b_full[k] / s),
        );
        let c_norm = c.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt();
        let c_scale = c_norm.max(1.0);
        let b_scale = b.norm().max(1.0);
        for m in &mut c {
            *m /= c_scale;
        }
        b /= b_scale;
        StandardForm {
            sizes: p.block_sizes().to_vec(),
            c,
            a,
            b,
            col_scale,
            kept,
            reduced_len: n_red,
            free_improving_direction,
            c_scale,
            b_scale,
            constant,
        }
    }

    fn m(&self) -> usize {
        self.b.len()
    }

    fn total_dim(&self) -> f64 {
        self.sizes.iter().sum::<usize>() as f64
    }

    /// `A(X)`.
    fn apply(&self, x: &[DMatrix<f64>]) -> DVector<f64> {
        let mut out = DVector::zeros(self.m());
        for (a_b, x_b) in self.a.iter().zip(x) {
            out += a_b.tr_mul(&DVector::from_column_slice(x_b.as_slice()));
        }
        out
    }

    /// `A*(t)` per block.
    fn adjoint(&self, t: &DVector<f64>) -> Vec<DMatrix<f64>> {
        self.a
            .iter()
            .zip(&self.sizes)
            .map(|(a_b, &s)| {
                let v = a_b * t;
                DMatrix::from_column_slice(s, s, v.as_slice())
            })
            .collect()
    }
}

fn inner(a: &[DMatrix<f64>], b: &[DMatrix<f64>]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.dot(y)).sum()
}

fn frob(a: &[DMatrix<f64>]) -> f64 {
    a.iter().map(|m| m.norm_squared()).sum::<f64>().sqrt()
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}

/// Per-block NT scaling: `W = G Gᵀ`, `Gᵀ S G = G⁻¹ X G⁻ᵀ = diag(λ)`.
struct Scaling {
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
    w: DMatrix<f64>,
    lambda: DVector<f64>,
}

fn nt_scaling(x: &DMatrix<f64>, s: &DMatrix<f64>) -> Option<Scaling> {
    let lx = Cholesky::new(x.clone())?.unpack();
    let ls = Cholesky::new(s.clone())?.unpack();
    let k = ls.tr_mul(&lx);
    let svd = k.svd(true, true);
    let v = svd.v_t?.transpose();
    let lambda = svd.singular_values;
    if lambda.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
        return None;
    }
    let n = x.nrows();
    let mut g = &lx * &v;
    for j in 0..n {
        let f = 1.0 / lambda[j].sqrt();
        g.column_mut(j).scale_mut(f);
    }
    let lx_inv = lx.solve_lower_triangular(&DMatrix::identity(n, n))?;
    let mut g_inv = v.transpose() * lx_inv;
    for i in 0..n {
        let f = lambda[i].sqrt();
        g_inv.row_mut(i).scale_mut(f);
    }
    let w = &g * g.transpose();
    Some(Scaling {
        g,
        g_inv,
        w,
        lambda,
    })
}

/// Largest `α` with `x + α·dx ⪰ 0` (may be infinite).
fn max_step(x: &DMatrix<f64>, dx: &DMatrix<f64>) -> Option<f64> {
    let l = Cholesky::new(x.clone())?.unpack();
    let n = x.nrows();
    let li = l.solve_lower_triangular(&DMatrix::identity(n, n))?;
    let mut m = &li * dx * li.transpose();
    symmetrize(&mut m);
    let ev = m.symmetric_eigenvalues();
    let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
    Some(if lo < 0.0 { -1.0 / lo } else { f64::INFINITY })
}

struct Outcome {
    status: SolveStatus,
    x: Vec<DMatrix<f64>>,
    t: DVector<f64>,
    pobj: f64,
    dobj: f64,
    iterations: usize,
}

/// Search direction `(ΔX, Δt, ΔS)`.
type Direction = (Vec<DMatrix<f64>>, DVector<f64>, Vec<DMatrix<f64>>);

#[derive(Clone)]
struct Iterate {
    x: Vec<DMatrix<f64>>,
    s: Vec<DMatrix<f64>>,
    t: DVector<f64>,
}

struct Measures {
    pobj: f64,
    dobj: f64,
    gap: f64,
    pinf: f64,
    dinf: f64,
    mu: f64,
    rp: DVector<f64>,
    rd: Vec<DMatrix<f64>>,
}

fn measure(std: &StandardForm, it: &Iterate) -> Measures {
    let ax = std.apply(&it.x);
    let rp = &std.b - ax;
    let at = std.adjoint(&it.t);
    let rd: Vec<DMatrix<f64>> = std
        .c
        .iter()
        .zip(&at)
        .zip(&it.s)
        .map(|((c, a), s)| c - a - s)
        .collect();
    let pobj = inner(&std.c, &it.x);
    let dobj = std.b.dot(&it.t);
    let c_norm = frob(&std.c);
    // The gap is judged in the user's units; the scaled objectives can be
    // orders of magnitude smaller than the values they stand for.
    let os = std.c_scale * std.b_scale;
    let user = |v: f64| (os * v + std.constant).abs();
    Measures {
        pobj,
        dobj,
        gap: os * (pobj - dobj).abs() / (1.0 + user(pobj) + user(dobj)),
        pinf: rp.norm() / (1.0 + std.b.norm()),
        dinf: frob(&rd) / (1.0 + c_norm),
        mu: inner(&it.x, &it.s) / std.total_dim(),
        rp,
        rd,
    }
}

fn solve_schur(
    m: &DMatrix<f64>,
    rhs: &DVector<f64>,
    chol: &Option<Cholesky<f64, Dyn>>,
) -> Option<DVector<f64>> {
    if let Some(ch) = chol {
        return Some(ch.solve(rhs));
    }
    m.clone().lu().solve(rhs)
}

fn run(std: &StandardForm, tol: Tolerances) -> Outcome {
    let m = std.m();
    let nblocks = std.sizes.len();

    let mut it = Iterate {
        x: Vec::with_capacity(nblocks),
        s: Vec::with_capacity(nblocks),
        t: DVector::zeros(m),
    };
    for (blk, &s) in std.sizes.iter().enumerate() {
        let sf = s as f64;
        let mut a_max: f64 = 0.0;
        let mut ratio: f64 = 0.0;
        for k in 0..m {
            let nk = std.a[blk].column(k).norm();
            a_max = a_max.max(nk);
            ratio = ratio.max((1.0 + std.b[k].abs()) / (1.0 + nk));
        }
        let xi = 10f64.max(sf.sqrt()).max(sf * ratio);
        let eta = 10f64.max(sf.sqrt()).max(a_max.max(std.c[blk].norm()));
        it.x.push(DMatrix::identity(s, s) * xi);
        it.s.push(DMatrix::identity(s, s) * eta);
    }

    let mut best: Option<(f64, Iterate, usize)> = None;
    let mut step_frac = 0.9;
    let mut status = SolveStatus::MaxIterations;
    let mut iterations = 0;

    for iter in 0..=tol.max_iterations {
        iterations = iter;
        let ms = measure(std, &it);
        let merit = (ms.gap / STALL_GAP)
            .max(ms.pinf / STALL_FEAS)
            .max(ms.dinf / STALL_FEAS);
        if best.as_ref().is_none_or(|(b, _, _)| merit < *b) {
            best = Some((merit, it.clone(), iter));
        }
        if ms.gap < tol.gap && ms.pinf < tol.feasibility && ms.dinf < tol.feasibility {
            return Outcome {
                status: SolveStatus::Optimal,
                pobj: ms.pobj,
                dobj: ms.dobj,
                x: it.x,
                t: it.t,
                iterations: iter,
            };
        }
        if iter >= 3 {
            // Primal ray: ⟨C, X⟩ → −∞ with A(X) bounded certifies (D) empty.
            let ax = std.apply(&it.x).norm();
            if ms.pobj < 0.0 && ax / -ms.pobj < CERT_TOL {
                status = SolveStatus::Infeasible;
                break;
            }
            // Dual ray: bᵀt → +∞ with A*(t) + S bounded means (D) unbounded.
            let ats: f64 = std
                .adjoint(&it.t)
                .iter()
                .zip(&it.s)
                .map(|(a, s)| (a + s).norm_squared())
                .sum::<f64>()
                .sqrt();
            if ms.dobj > 0.0 && ats / ms.dobj < CERT_TOL {
                status = SolveStatus::Unbounded;
                break;
            }
        }
        if iter == tol.max_iterations {
            break;
        }

        let mut scalings = Vec::with_capacity(nblocks);
        for (x, s) in it.x.iter().zip(&it.s) {
            match nt_scaling(x, s) {
                Some(sc) => scalings.push(sc),
                None => break,
            }
        }
        if scalings.len() != nblocks {
            status = SolveStatus::NumericalFailure;
            log::debug!(
                "iteration {iter}: scaling; gap {:.2e} pinf {:.2e} dinf {:.2e}",
                ms.gap,
                ms.pinf,
                ms.dinf
            );
            break;
        }

        // Schur complement M_kl = Σ_b ⟨A_bk, W_b A_bl W_b⟩.
        let mut schur = DMatrix::<f64>::zeros(m, m);
        for (blk, sc) in scalings.iter().enumerate() {
            let s = std.sizes[blk];
            let mut waw = DMatrix::<f64>::zeros(s * s, m);
            for k in 0..m {
                let ak = DMatrix::from_column_slice(s, s, std.a[blk].column(k).as_slice());
                let prod = &sc.w * ak * &sc.w;
                waw.column_mut(k).copy_from_slice(prod.as_slice());
            }
            schur += std.a[blk].tr_mul(&waw);
        }
        symmetrize(&mut schur);
        let chol = Cholesky::new(schur.clone()).or_else(|| {
            let reg = 1e-14 * schur.diagonal().amax().max(1e-300);
            let mut r = schur.clone();
            for i in 0..m {
                r[(i, i)] += reg;
            }
            Cholesky::new(r)
        });

        let wrw: Vec<DMatrix<f64>> = scalings
            .iter()
            .zip(&ms.rd)
            .map(|(sc, rd)| &sc.w * rd * &sc.w)
            .collect();

        let direction = |rc: &[DMatrix<f64>]| -> Option<Direction> {
            let diff: Vec<DMatrix<f64>> = rc.iter().zip(&wrw).map(|(r, w)| r - w).collect();
            let rhs = &ms.rp - std.apply(&diff);
            let dt = solve_schur(&schur, &rhs, &chol)?;
            let adt = std.adjoint(&dt);
            let ds: Vec<DMatrix<f64>> = ms.rd.iter().zip(&adt).map(|(r, a)| r - a).collect();
            let dx: Vec<DMatrix<f64>> = rc
                .iter()
                .zip(&scalings)
                .zip(&ds)
                .map(|((r, sc), d)| {
                    let mut v = r - &sc.w * d * &sc.w;
                    symmetrize(&mut v);
                    v
                })
                .collect();
            if dt.iter().any(|v| !v.is_finite()) {
                return None;
            }
            Some((dx, dt, ds))
        };
        let steps = |dx: &[DMatrix<f64>], ds: &[DMatrix<f64>]| -> Option<(f64, f64)> {
            let mut ap = f64::INFINITY;
            let mut ad = f64::INFINITY;
            for blk in 0..nblocks {
                ap = ap.min(max_step(&it.x[blk], &dx[blk])?);
                ad = ad.min(max_step(&it.s[blk], &ds[blk])?);
            }
            Some((ap, ad))
        };

        // Predictor.
        let rc_aff: Vec<DMatrix<f64>> = it.x.iter().map(|x| -x).collect();
        let Some((dx_a, _dt_a, ds_a)) = direction(&rc_aff) else {
            status = SolveStatus::NumericalFailure;
            log::debug!(
                "iteration {iter}: predictor direction; gap {:.2e} pinf {:.2e} dinf {:.2e}",
                ms.gap,
                ms.pinf,
                ms.dinf
            );
            break;
        };
        let Some((ap_max, ad_max)) = steps(&dx_a, &ds_a) else {
            status = SolveStatus::NumericalFailure;
            log::debug!(
                "iteration {iter}: predictor step; gap {:.2e} pinf {:.2e} dinf {:.2e}",
                ms.gap,
                ms.pinf,
                ms.dinf
            );
            break;
        };
        let ap = (step_frac * ap_max).min(1.0);
        let ad = (step_frac * ad_max).min(1.0);
        let mut mu_aff = 0.0;
        for blk in 0..nblocks {
            let xa = &it.x[blk] + &dx_a[blk] * ap;
            let sa = &it.s[blk] + &ds_a[blk] * ad;
            mu_aff += xa.dot(&sa);
        }
        mu_aff /= std.total_dim();
        let sigma = (mu_aff / ms.mu).clamp(0.0, 1.0).powi(3);

        // Corrector, in the scaled space where X and S are both diag(λ).
        let rc: Vec<DMatrix<f64>> = scalings
            .iter()
            .zip(dx_a.iter().zip(&ds_a))
            .map(|(sc, (dx, ds))| {
                let n = sc.lambda.len();
                let dxt = &sc.g_inv * dx * sc.g_inv.transpose();
                let dst = sc.g.transpose() * ds * &sc.g;
                let cross = &dxt * &dst + &dst * &dxt;
                let h = DMatrix::from_fn(n, n, |i, j| {
                    let mut v = -cross[(i, j)];
                    if i == j {
                        v += 2.0 * sigma * ms.mu - 2.0 * sc.lambda[i] * sc.lambda[i];
                    }
                    v / (sc.lambda[i] + sc.lambda[j])
                });
                &sc.g * h * sc.g.transpose()
            })
            .collect();
        let Some((dx, dt, ds)) = direction(&rc) else {
            status = SolveStatus::NumericalFailure;
            log::debug!(
                "iteration {iter}: corrector direction; gap {:.2e} pinf {:.2e} dinf {:.2e}",
                ms.gap,
                ms.pinf,
                ms.dinf
            );
            break;
        };
        let Some((ap_max, ad_max)) = steps(&dx, &ds) else {
            status = SolveStatus::NumericalFailure;
            log::debug!(
                "iteration {iter}: corrector step; gap {:.2e} pinf {:.2e} dinf {:.2e}",
                ms.gap,
                ms.pinf,
                ms.dinf
            );
            break;
        };
        let ap = (step_frac * ap_max).min(1.0);
        let ad = (step_frac * ad_max).min(1.0);
        if ap < 1e-12 && ad < 1e-12 {
            status = SolveStatus::NumericalFailure;
            log::debug!(
                "iteration {iter}: step length collapsed; gap {:.2e} pinf {:.2e} dinf {:.2e}",
                ms.gap,
                ms.pinf,
                ms.dinf
            );
            break;
        }
        for blk in 0..nblocks {
            it.x[blk] += &dx[blk] * ap;
            it.s[blk] += &ds[blk] * ad;
            symmetrize(&mut it.x[blk]);
            symmetrize(&mut it.s[blk]);
        }
        it.t += &dt * ad;
        step_frac = 0.9 + 0.09 * ap.min(ad);
    }

    if matches!(
        status,
        SolveStatus::MaxIterations | SolveStatus::NumericalFailure
    ) {
        if let Some((merit, b, at)) = best {
            if merit <= 1.0 {
                let ms = measure(std, &b);
                return Outcome {
                    status: SolveStatus::Optimal,
                    pobj: ms.pobj,
                    dobj: ms.dobj,
                    x: b.x,
                    t: b.t,
                    iterations: at,
                };
            }
        }
    }
    let ms = measure(std, &it);
    Outcome {
        status,
        pobj: ms.pobj,
        dobj: ms.dobj,
        x: it.x,
        t: it.t,
        iterations,
    }
}

fn finish(p: &ConicProgram, red: &Reduction, std: &StandardForm, out: Outcome) -> ConicSolution {
    let _ = &out.x;
    let mut t_red = DVector::zeros(std.reduced_len);
    for (i, &k) in std.kept.iter().enumerate() {
        t_red[k] = std.c_scale * out.t[i] / std.col_scale[i];
    }
    let w = &red.particular + &red.null_basis * t_red;
    let w: Vec<f64> = w.iter().copied().collect();
    let sign = match p.sense() {
        Sense::Maximize => 1.0,
        Sense::Minimize => -1.0,
    };
    let scale = std.c_scale * std.b_scale;
    let pobj = sign * (out.pobj * scale + std.constant);
    let dobj = p.objective_value(&w);
    let _ = out.dobj;
    ConicSolution {
        status: out.status,
        primal_objective: pobj,
        dual_objective: dobj,
        block_values: (0..p.block_sizes().len())
            .map(|b| p.block_value(b, &w))
            .collect(),
        free_values: w,
        iterations: out.iterations,
    }
}
