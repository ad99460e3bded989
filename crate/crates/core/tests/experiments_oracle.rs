//! Quadrature oracle for the noisy-input experiment on the linear function:
//! the expected TPR drop is computable by integrating the normal kernel
//! over the band complement, box by box.

mod common;

use posdom::domain::{Interval, OutputModel, TargetRange};
use posdom::experiments::{self, ExperimentConfig};
use posdom::grid::DEFAULT_GRID_CAP;
use posdom::model::{benchmark_function, benchmark_variables};
use posdom::pipeline::carve_problem;

#[test]
fn linear_noisy_input_drop_matches_quadrature() {
    let sigma = 0.1;
    let delta = 0.2;
    let folds = 5;
    let test_size = 10_000;

    let variables = benchmark_variables();
    let target = TargetRange::from_interval(Interval::closed(0.0, 1.0).unwrap());
    let model = benchmark_function("linear").unwrap();
    let functions: Vec<(String, &dyn OutputModel)> =
        vec![("linear".into(), &model as &dyn OutputModel)];
    let config = ExperimentConfig {
        variables: variables.clone(),
        target: target.clone(),
        deltas: vec![delta],
        sigmas: vec![0.0, sigma],
        folds,
        test_size,
        master_seed: 42,
        grid_cap: DEFAULT_GRID_CAP,
    };

    let results = experiments::run_noisy_inputs(&functions, &config).unwrap();
    let noiseless = results.iter().find(|c| c.sigma == 0.0).unwrap();
    let noisy = results.iter().find(|c| c.sigma == sigma).unwrap();
    let empirical_drop = noisy.tpr_diff.expect("defined TPRs");
    assert_eq!(noiseless.tpr_diff, Some(0.0));

    // Oracle: expected TPR with and without input noise, from the domain's
    // geometry alone.
    let outcome = carve_problem(&variables, &target, &model, delta, DEFAULT_GRID_CAP).unwrap();
    let expected_clean = common::linear_band_fraction(&outcome.apd, 0.0, 1.0);
    let expected_noisy = common::linear_noisy_band_fraction(&outcome.apd, 0.0, 1.0, sigma);
    let expected_drop = expected_clean - expected_noisy;
    assert!(
        expected_drop > 0.0,
        "noise must cost something: {expected_drop}"
    );

    // Three standard errors on the empirical drop, treating the two rates
    // as independent binomials (conservative: they are positively
    // correlated through the shared test points).
    let accepted: u64 = noisy.reports.iter().map(|(_, r)| r.tp + r.fp).sum();
    let clean_tpr = noiseless.mean_tpr.unwrap();
    let noisy_tpr = noisy.mean_tpr.unwrap();
    let se = (common::binomial_se(clean_tpr, accepted).powi(2)
        + common::binomial_se(noisy_tpr, accepted).powi(2))
    .sqrt();
    assert!(
        (empirical_drop - expected_drop).abs() <= 3.0 * se + 1e-9,
        "drop {empirical_drop} vs quadrature {expected_drop} (3σ = {})",
        3.0 * se
    );
}
