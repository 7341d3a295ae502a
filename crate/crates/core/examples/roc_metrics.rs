//! Operating point, balanced accuracy and ROC/AUC for a handful of scores.

use policy_forest::metrics::{balanced_accuracy, confusion_at_threshold, roc_and_auc, select_operating_point};

fn main() -> policy_forest::Result<()> {
    let scores = [0.1, 0.35, 0.4, 0.4, 0.62, 0.7, 0.8, 0.9];
    let labels = [false, false, true, false, true, false, true, true];

    let op = select_operating_point(&scores, &labels)?;
    let confusion = confusion_at_threshold(&scores, &labels, op.threshold)?;
    println!("threshold {:.3}: {:?}", op.threshold, confusion);
    println!("balanced accuracy {:.3}", balanced_accuracy(&confusion)?);

    let (curve, auc) = roc_and_auc(&scores, &labels)?;
    println!("AUC {auc:.4}");
    curve.write_csv(std::io::stdout())?;
    Ok(())
}
