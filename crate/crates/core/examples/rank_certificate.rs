//! The flat-rank test that certifies a relaxation as exact.
use moment_sentinel::moments::{estimate_moments, MomentSequence, Polynomial};
use moment_sentinel::relaxation::{
    rank_optimality, upper_bound_with, BoundOptions, SemialgebraicSet,
};

fn disc(c: [f64; 2], r: f64) -> moment_sentinel::Result<SemialgebraicSet> {
    let mut g = Polynomial::constant(2, r * r);
    for (j, cj) in c.into_iter().enumerate() {
        let d = Polynomial::var(2, j).minus(&Polynomial::constant(2, cj));
        g = g.minus(&d.times(&d));
    }
    SemialgebraicSet::single(g)
}

fn main() -> moment_sentinel::Result<()> {
    let opts = BoundOptions {
        certify: true,
        ..BoundOptions::default()
    };

    let atom = MomentSequence::dirac(&[0.3, -0.2], 4)?;
    let res = upper_bound_with(&atom, &disc([0.3, -0.2], 0.1)?, 2, opts)?;
    println!(
        "point mass: rho = {:.6}, certificate {:?}, exact: {}",
        res.rho,
        res.rank_certificate,
        rank_optimality(&res, 1)?
    );

    let data: Vec<Vec<f64>> = (0..100)
        .map(|i| {
            let t = i as f64 * 0.37;
            vec![t.sin(), (1.3 * t).cos()]
        })
        .collect();
    let spread = estimate_moments(&data, 4)?;
    let res = upper_bound_with(&spread, &disc([0.0, 0.0], 0.5)?, 2, opts)?;
    println!(
        "spread sample: rho = {:.6}, certificate {:?}, exact: {}",
        res.rho,
        res.rank_certificate,
        rank_optimality(&res, 1)?
    );
    Ok(())
}
