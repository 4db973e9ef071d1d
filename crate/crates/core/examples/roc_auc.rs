//! ROC curve and AUC from labeled scores.
use moment_sentinel::eval::{auc, roc, roc_csv, LabeledScores};

fn main() -> moment_sentinel::Result<()> {
    let scores = vec![0.92, 0.81, 0.35, 0.77, 0.40, 0.30, 0.05];
    let labels = vec![true, true, true, true, false, false, false];
    let ls = LabeledScores::new(scores, labels)?;
    println!("AUC {:.4}", auc(&ls)?);
    print!("{}", roc_csv(&roc(&ls)?));
    println!("reversed orientation AUC {:.4}", auc(&ls.reversed())?);
    Ok(())
}
