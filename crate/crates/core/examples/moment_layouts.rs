//! Moment and localizing matrices of a small empirical sample.
use moment_sentinel::moments::{estimate_moments, Polynomial};
use moment_sentinel::multiindex::MonomialBasis;
use moment_sentinel::relaxation::{localizing_layout, moment_matrix_layout};

fn main() -> moment_sentinel::Result<()> {
    let basis = MonomialBasis::new(2, 2)?;
    let names: Vec<String> = basis.entries().iter().map(|a| a.to_string()).collect();
    println!("degree-2 basis in two variables: {}", names.join(" "));

    let layout = moment_matrix_layout(2, 2)?;
    println!("M_2(y) subscripts:");
    for r in 0..layout.size() {
        let row: Vec<String> = (0..layout.size())
            .map(|c| format!("{:>4}", layout.entry(r, c).to_string()))
            .collect();
        println!("  {}", row.join(""));
    }

    let data = vec![
        vec![0.2, 0.1],
        vec![-0.4, 0.9],
        vec![1.1, -0.3],
        vec![0.5, 0.5],
    ];
    let y = estimate_moments(&data, 4)?;
    println!("M_2(γ) for four points:\n{:.4}", layout.evaluate(&y)?);

    // Unit disc constraint 1 − x₁² − x₂²; relaxation order 2 gives a 3x3 block.
    let x1 = Polynomial::var(2, 0);
    let x2 = Polynomial::var(2, 1);
    let g = Polynomial::constant(2, 1.0)
        .minus(&x1.times(&x1))
        .minus(&x2.times(&x2));
    let loc = localizing_layout(&g, 2)?;
    println!("M_1(g γ), order {}:\n{:.4}", loc.order(), loc.evaluate(&y)?);
    Ok(())
}
