use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const ASYMMETRY_TOL: f64 = 1e-12;

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("matrix is not square".into()));
    }
    let n = m.nrows();
    let scale = m.amax().max(1.0);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if worst > ASYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric(worst));
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    check_symmetric(m)?;
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

pub fn psd_min_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    Ok(symmetric_eigenvalues(m)?.first().copied().unwrap_or(0.0))
}

/// Number of eigenvalues above `rel_tol · max |λ|`.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> Result<usize> {
    let ev = symmetric_eigenvalues(m)?;
    let top = ev.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if top == 0.0 {
        return Ok(0);
    }
    Ok(ev.iter().filter(|&&v| v > rel_tol * top).count())
}

/// Rank with eigenvalues compared against `rel_tol · max(λ_max, floor)`,
/// so a matrix that is tiny next to `floor` counts as rank 0.
pub fn numerical_rank_floor(m: &DMatrix<f64>, rel_tol: f64, floor: f64) -> Result<usize> {
    let ev = symmetric_eigenvalues(m)?;
    let top = ev.iter().fold(floor.abs(), |a, v| a.max(v.abs()));
    if top == 0.0 {
        return Ok(0);
    }
    Ok(ev.iter().filter(|&&v| v > rel_tol * top).count())
}
