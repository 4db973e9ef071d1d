//! Worst-case tail probability from mean and variance, and how extra
//! moments tighten it.
use moment_sentinel::moments::{MomentSequence, Polynomial};
use moment_sentinel::relaxation::{lower_bound, upper_bound, SemialgebraicSet};

fn main() -> moment_sentinel::Result<()> {
    let tail = |a: f64| -> moment_sentinel::Result<SemialgebraicSet> {
        // {x : x − a ≥ 0}
        SemialgebraicSet::single(Polynomial::var(1, 0).minus(&Polynomial::constant(1, a)))
    };

    // Mean 0, variance 1: the one-sided Chebyshev bound 1/(1 + a²).
    let mv = MomentSequence::from_values(1, 2, vec![1.0, 0.0, 1.0])?;
    for a in [1.0, 2.0, 3.0] {
        let res = upper_bound(&mv, &tail(a)?, 1)?;
        println!(
            "P(X ≥ {a}) ≤ {:.6}   (closed form {:.6})",
            res.rho,
            1.0 / (1.0 + a * a)
        );
    }

    // Adding the standard normal's third and fourth moments.
    let normal = MomentSequence::from_values(1, 4, vec![1.0, 0.0, 1.0, 0.0, 3.0])?;
    let res = upper_bound(&normal, &tail(2.0)?, 2)?;
    println!("with E[X³] = 0, E[X⁴] = 3: P(X ≥ 2) ≤ {:.6}", res.rho);

    // A mass lower bound for a centered interval.
    let interval = SemialgebraicSet::single(
        Polynomial::constant(1, 4.0).minus(&Polynomial::var(1, 0).times(&Polynomial::var(1, 0))),
    )?;
    let low = lower_bound(&normal, &interval, 2)?;
    println!("P(|X| ≤ 2) ≥ {:.6}", low.rho);
    Ok(())
}
