//! AUC against moment degree for the three synthetic distributions, as a
//! CSV table. Pass `--quick` for a smaller run.
use moment_sentinel::eval::{run_experiment, Distribution, ExperimentSpec, Method, AUC_CSV_HEADER};

fn main() -> moment_sentinel::Result<()> {
    let quick = std::env::args().any(|a| a == "--quick");
    let (n_train, n_in) = if quick { (100, 60) } else { (300, 300) };
    println!("distribution,{AUC_CSV_HEADER}");
    for (dist, degrees, n_in) in [
        (Distribution::Bimodal, vec![2, 4, 6], n_in),
        (Distribution::Pshape, vec![2, 3, 4, 5], n_in),
        (Distribution::Swissroll, vec![2, 4], n_in.min(100)),
    ] {
        let spec = ExperimentSpec::new(dist, n_train, n_in, 50, 1).with_methods(
            degrees
                .into_iter()
                .map(Method::Moments)
                .chain([Method::Parzen]),
        );
        for row in run_experiment(&spec)?.rows {
            println!("{},{}", dist.as_str(), row.csv_line());
        }
    }
    Ok(())
}
