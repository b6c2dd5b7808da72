//! Evaluation: metrics, statistical tests, Monte Carlo campaigns, pilot
//! tuning and PCA.

mod classifiers;
mod cv;
mod metrics;
mod pca;
mod sim;
pub mod stats;

pub use classifiers::{ClassifierKind, ClassifierSpec, Fitted};
pub use cv::{five_by_two_cv, five_by_two_statistics, CvTestResult};
pub use metrics::{auc_from_scores, evaluate, mean_se, Metrics};
pub use pca::{pca_reduce, Pca};
pub use sim::{
    plot_series, run_nested_simulation, run_overlap_simulation, run_simulation, tune, PlotSeries,
    SimRow, SimSetting, SimSpec, SimTable, TuneResult,
};

/// Support shift that produces overlap ratio `zeta` between the unit
/// cube and its translate in dimension `d`:
/// `nu = 1 - (2 zeta / (1 + zeta))^(1/d)`.
pub fn overlap_shift(zeta: f64, d: usize) -> f64 {
    debug_assert!((0.0..=1.0).contains(&zeta));
    1.0 - (2.0 * zeta / (1.0 + zeta)).powf(1.0 / d as f64)
}

/// Overlap ratio of the unit cube and its translate by `nu`: the forward
/// expression that [`overlap_shift`] inverts.
pub fn overlap_ratio(nu: f64, d: usize) -> f64 {
    debug_assert!((0.0..=1.0).contains(&nu));
    let core = (1.0 - nu).powi(d as i32);
    core / (2.0 - core)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlap_endpoints() {
        for d in 1..=6 {
            assert_eq!(overlap_shift(1.0, d), 0.0);
            assert_eq!(overlap_shift(0.0, d), 1.0);
        }
    }

    #[test]
    fn overlap_reference_value_and_roundtrip() {
        // Independent inversion of the forward expression by bisection.
        let zeta = 0.5;
        let d = 2;
        let mut lo = 0.0;
        let mut hi = 1.0;
        for _ in 0..200 {
            let mid = (lo + hi) / 2.0;
            if overlap_ratio(mid, d) > zeta {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let nu = overlap_shift(zeta, d);
        assert!((nu - lo).abs() < 1e-12);
        assert!((nu - 0.18350).abs() < 1e-5);
        for d in 1..=5 {
            for &z in &[0.1, 0.3, 0.5, 0.9] {
                let nu = overlap_shift(z, d);
                assert!((overlap_ratio(nu, d) - z).abs() < 1e-12);
            }
        }
    }
}
