//! Fit a degree-4 moment detector on the P-shaped curve and score a few
//! points on and off it.
use moment_sentinel::detector::{classify, fit, score, FitOptions};
use moment_sentinel::eval::{gen_pshape, pshape_point};

fn main() -> moment_sentinel::Result<()> {
    let train = gen_pshape(300, 1);
    let model = fit(&train, FitOptions::new(4))?;
    println!(
        "{} moments, relaxation order {}, ball radius {}",
        model.gamma().len(),
        model.relaxation_order(),
        model.neighborhood().radius
    );

    let on_curve = pshape_point(2.0, 0.0, 0.01);
    let queries = [
        ("on the curve", on_curve.to_vec()),
        ("inside the loop", vec![0.0, 2.0]),
        ("far away", vec![4.0, -2.0]),
    ];
    let tau = 1e-3;
    for (label, x) in &queries {
        let s = score(&model, x)?;
        println!(
            "{label:>16} {x:.3?}: rho = {:.3e} ({}) -> {:?}",
            s.rho,
            s.status,
            classify(&model, x, tau)?
        );
    }
    Ok(())
}
