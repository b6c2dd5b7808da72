//! 5x2 cross-validation comparison of two classifiers: the paired t-test
//! on the first fold and the combined F-test over all ten folds.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::classifiers::ClassifierSpec;
use super::metrics::evaluate;
use super::stats::{f_upper_p, t_two_sided_p};
use crate::data::Dataset;
use crate::error::{Error, Result};

/// Outcome of the 5x2 cross-validation tests.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CvTestResult {
    /// AUC of classifier A per replication and fold.
    pub auc_a: [[f64; 2]; 5],
    /// AUC of classifier B per replication and fold.
    pub auc_b: [[f64; 2]; 5],
    /// AUC differences `A - B` per replication and fold.
    pub diffs: [[f64; 2]; 5],
    /// Paired t statistic (first fold over the pooled fold variance),
    /// 5 degrees of freedom.
    pub t_stat: f64,
    pub t_p: f64,
    /// Combined F statistic, (10, 5) degrees of freedom.
    pub f_stat: f64,
    pub f_p: f64,
    /// Rows assigned to the first half of each replication, for replay.
    pub fold_assignments: Vec<Vec<usize>>,
}

/// Splits the dataset into stratified halves five times (seeded), trains
/// both classifiers on each half and evaluates on the other, then runs
/// the paired t-test and the combined F-test on the AUC differences.
///
/// Degenerate variance is defined away: when every fold variance is
/// zero, the p-values are 1 if all differences vanish and 0 otherwise.
pub fn five_by_two_cv(
    dataset: &Dataset,
    clf_a: &ClassifierSpec,
    clf_b: &ClassifierSpec,
    seed: u64,
) -> Result<CvTestResult> {
    let n_classes = dataset.n_classes();
    if n_classes < 2 {
        return Err(Error::InvalidConfig(
            "cross-validation needs at least two classes".into(),
        ));
    }
    for class in 0..n_classes {
        if dataset.class_count(class) < 2 {
            return Err(Error::InvalidConfig(format!(
                "class {class} needs at least two points for stratified halves"
            )));
        }
    }

    let mut auc_a = [[0.0; 2]; 5];
    let mut auc_b = [[0.0; 2]; 5];
    let mut fold_assignments = Vec::with_capacity(5);
    for rep in 0..5 {
        let mut rng = ChaCha8Rng::seed_from_u64(crate::derive_seed(seed, rep as u64));
        let mut first_half: Vec<usize> = Vec::new();
        let mut second_half: Vec<usize> = Vec::new();
        for class in 0..n_classes {
            let mut rows: Vec<usize> = (0..dataset.len())
                .filter(|&i| dataset.labels[i] == class)
                .collect();
            rows.shuffle(&mut rng);
            let half = rows.len() / 2;
            second_half.extend(rows.drain(..half));
            first_half.extend(rows);
        }
        first_half.sort_unstable();
        second_half.sort_unstable();
        fold_assignments.push(first_half.clone());

        for (fold, (train_rows, test_rows)) in [
            (&first_half, &second_half),
            (&second_half, &first_half),
        ]
        .into_iter()
        .enumerate()
        {
            let train = dataset.subset(train_rows);
            let test = dataset.subset(test_rows);
            let fold_seed = crate::derive_seed(seed, (rep * 2 + fold + 100) as u64);
            for (spec, out) in [(clf_a, &mut auc_a), (clf_b, &mut auc_b)] {
                let fitted = spec.fit(&train, fold_seed)?;
                let preds = fitted.predict_all(&test.points);
                out[rep][fold] = evaluate(&preds, &test.labels, n_classes)?.auc;
            }
        }
    }

    let mut diffs = [[0.0; 2]; 5];
    for i in 0..5 {
        for j in 0..2 {
            diffs[i][j] = auc_a[i][j] - auc_b[i][j];
        }
    }
    let (t_stat, t_p, f_stat, f_p) = five_by_two_statistics(&diffs);
    Ok(CvTestResult {
        auc_a,
        auc_b,
        diffs,
        t_stat,
        t_p,
        f_stat,
        f_p,
        fold_assignments,
    })
}

/// The 5x2 test statistics from the per-fold differences: per
/// replication the variance is `(d1 - mean)^2 + (d2 - mean)^2`; the
/// t statistic divides the very first difference by the pooled variance,
/// the F statistic pools the squares of all ten differences.
pub fn five_by_two_statistics(diffs: &[[f64; 2]; 5]) -> (f64, f64, f64, f64) {
    let mut sum_var = 0.0;
    let mut sum_sq = 0.0;
    let mut all_zero = true;
    for row in diffs {
        let mean = (row[0] + row[1]) / 2.0;
        sum_var += (row[0] - mean).powi(2) + (row[1] - mean).powi(2);
        sum_sq += row[0] * row[0] + row[1] * row[1];
        if row[0] != 0.0 || row[1] != 0.0 {
            all_zero = false;
        }
    }
    if sum_var == 0.0 {
        let p = if all_zero { 1.0 } else { 0.0 };
        let stat = if all_zero { 0.0 } else { f64::INFINITY };
        return (stat, p, stat, p);
    }
    let t = diffs[0][0] / (sum_var / 5.0).sqrt();
    let f = sum_sq / (2.0 * sum_var);
    (t, t_two_sided_p(t, 5.0), f, f_upper_p(f, 10.0, 5.0))
}
