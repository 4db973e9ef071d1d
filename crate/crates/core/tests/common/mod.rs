//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

/// Raw moments `E[X^p]`, `p = 0..=degree`, of `N(mu, sigma²)`.
pub fn normal_moments(mu: f64, sigma: f64, degree: usize) -> Vec<f64> {
    // E[(mu + sigma Z)^p] via the binomial expansion and E[Z^{2q}] = (2q-1)!!.
    let z = |q: usize| -> f64 {
        if q % 2 == 1 {
            0.0
        } else {
            (1..q).step_by(2).map(|v| v as f64).product()
        }
    };
    (0..=degree)
        .map(|p| {
            (0..=p)
                .map(|j| binom(p, j) * mu.powi((p - j) as i32) * sigma.powi(j as i32) * z(j))
                .sum()
        })
        .collect()
}

pub fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Moments of a Gaussian mixture `Σ w_c N(mu_c, sigma_c²)`.
pub fn mixture_moments(components: &[(f64, f64, f64)], degree: usize) -> Vec<f64> {
    let mut out = vec![0.0; degree + 1];
    for &(w, mu, sigma) in components {
        for (o, m) in out.iter_mut().zip(normal_moments(mu, sigma, degree)) {
            *o += w * m;
        }
    }
    out
}

/// Largest mass a nonnegative measure on a uniform grid of `points` nodes
/// over `[-half_width, half_width]` can put on `{x : in_set(x)}` while
/// matching `moments[p] = Σ_j w_j x_j^p`. Returns `None` if no grid measure
/// matches.
pub fn grid_lp_bound(
    moments: &[f64],
    in_set: impl Fn(f64) -> bool,
    half_width: f64,
    points: usize,
) -> Option<f64> {
    let m = moments.len();
    let xs: Vec<f64> = (0..points)
        .map(|j| -half_width + 2.0 * half_width * j as f64 / (points - 1) as f64)
        .collect();
    // Rows in the rescaled variable t = x / half_width keep entries in [-1, 1].
    let mut a = vec![vec![0.0; points]; m];
    let mut b = vec![0.0; m];
    for p in 0..m {
        let s = half_width.powi(p as i32);
        for (j, x) in xs.iter().enumerate() {
            a[p][j] = (x / half_width).powi(p as i32);
        }
        b[p] = moments[p] / s;
    }
    let cost: Vec<f64> = xs
        .iter()
        .map(|&x| if in_set(x) { 1.0 } else { 0.0 })
        .collect();
    Simplex::new(a, b).maximize(&cost)
}

/// Dense two-phase tableau simplex for `max cᵀw, A w = b, w ≥ 0`.
struct Simplex {
    rows: usize,
    cols: usize,
    /// `rows × (cols + rows + 1)`: structural, artificial, rhs.
    t: Vec<Vec<f64>>,
    basis: Vec<usize>,
}

const EPS: f64 = 1e-11;

impl Simplex {
    fn new(a: Vec<Vec<f64>>, b: Vec<f64>) -> Self {
        let rows = a.len();
        let cols = a[0].len();
        let width = cols + rows + 1;
        let mut t = vec![vec![0.0; width]; rows];
        for i in 0..rows {
            let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..cols {
                t[i][j] = sign * a[i][j];
            }
            t[i][cols + i] = 1.0;
            t[i][width - 1] = sign * b[i];
        }
        Simplex {
            rows,
            cols,
            t,
            basis: (cols..cols + rows).collect(),
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c];
        for v in self.t[r].iter_mut() {
            *v /= p;
        }
        let prow = self.t[r].clone();
        for i in 0..self.rows {
            if i != r {
                let f = self.t[i][c];
                if f != 0.0 {
                    for (v, pv) in self.t[i].iter_mut().zip(&prow) {
                        *v -= f * pv;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · w` over the columns in `allowed`.
    fn optimize(&mut self, cost: &[f64], allowed: usize) -> Option<()> {
        let rhs = self.t[0].len() - 1;
        for _ in 0..100_000 {
            // Reduced costs d_j = c_j − c_Bᵀ B⁻¹ a_j; enter the largest positive.
            let mut best = (EPS, None);
            for j in 0..allowed {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j];
                for i in 0..self.rows {
                    d -= cost[self.basis[i]] * self.t[i][j];
                }
                if d > best.0 {
                    best = (d, Some(j));
                }
            }
            let Some(c) = best.1 else { return Some(()) };
            let mut leave: Option<(f64, usize)> = None;
            for i in 0..self.rows {
                let v = self.t[i][c];
                if v > EPS {
                    let ratio = self.t[i][rhs] / v;
                    if leave.is_none_or(|(r, _)| ratio < r) {
                        leave = Some((ratio, i));
                    }
                }
            }
            let (_, r) = leave?;
            self.pivot(r, c);
        }
        None
    }

    fn maximize(mut self, cost: &[f64]) -> Option<f64> {
        let total = self.cols + self.rows;
        let mut phase1 = vec![0.0; total];
        for v in phase1.iter_mut().skip(self.cols) {
            *v = -1.0;
        }
        self.optimize(&phase1, total)?;
        let rhs = total;
        let infeas: f64 = (0..self.rows)
            .filter(|&i| self.basis[i] >= self.cols)
            .map(|i| self.t[i][rhs])
            .sum();
        if infeas > 1e-9 {
            return None;
        }
        // Drive remaining (zero-level) artificials out of the basis.
        for i in 0..self.rows {
            if self.basis[i] >= self.cols {
                if let Some(j) = (0..self.cols).find(|&j| self.t[i][j].abs() > 1e-9) {
                    self.pivot(i, j);
                }
            }
        }
        let mut c2 = cost.to_vec();
        c2.extend(std::iter::repeat_n(0.0, self.rows));
        self.optimize(&c2, self.cols)?;
        Some(
            (0..self.rows)
                .map(|i| c2[self.basis[i]] * self.t[i][rhs])
                .sum(),
        )
    }
}
