//! Persist a fitted detector as JSON and score with the reloaded copy.
use moment_sentinel::cli::{ModelFile, Provenance};
use moment_sentinel::detector::{fit, score, FitOptions};
use moment_sentinel::eval::gen_swissroll;

fn main() -> moment_sentinel::Result<()> {
    let train = gen_swissroll(300, 2);
    let model = fit(&train, FitOptions::new(2))?;
    let file = ModelFile::from_model(
        &model,
        Provenance {
            n_train: train.len(),
            seed: Some(2),
            created_at: None,
        },
    );
    let json = file.to_json();
    println!("{json}");

    let reloaded = ModelFile::from_json(&json)?.to_model()?;
    let x = [0.0, 10.0, 1.5];
    println!(
        "rho in memory {:.6e}, reloaded {:.6e}",
        score(&model, &x)?.rho,
        score(&reloaded, &x)?.rho
    );
    Ok(())
}
