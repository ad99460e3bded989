//! Sensitivity experiments: granularity sweep, noisy-output labeling, and
//! noisy-input evaluation over a set of benchmark functions, with CSV
//! emitters for the per-cell and aggregated results.
//!
//! Every cell is reproducible from the master seed alone. Test-set inputs
//! for fold `k` come from the stream `derive(master, "test", k)` — shared by
//! every cell so that a σ = 0 noisy run equals the noiseless run exactly.
//! Noise streams are keyed by the full cell context (experiment, function,
//! δ, σ, and fold where applicable).

use std::io::Write;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::domain::{OutputModel, TargetRange, VariableSpec};
use crate::error::{Error, Result};
use crate::eval::{self, EvalReport, TestSet};
use crate::pipeline::carve_problem;
use crate::rng::{derive_seed, CounterRng, SeedPart};

/// Default granularity sweep values.
pub const DEFAULT_DELTAS: [f64; 6] = [0.05, 0.1, 0.2, 0.275, 0.4, 0.7];

/// Default noise levels (standard deviations).
pub const DEFAULT_SIGMAS: [f64; 4] = [0.0, 0.05, 0.1, 0.2];

/// Default number of seeded test sets per cell.
pub const DEFAULT_FOLDS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Granularity,
    NoisyOutput,
    NoisyInput,
}

impl ExperimentKind {
    pub fn id(self) -> &'static str {
        match self {
            ExperimentKind::Granularity => "granularity",
            ExperimentKind::NoisyOutput => "noisy-output",
            ExperimentKind::NoisyInput => "noisy-input",
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "granularity" => Ok(ExperimentKind::Granularity),
            "noisy-output" => Ok(ExperimentKind::NoisyOutput),
            "noisy-input" => Ok(ExperimentKind::NoisyInput),
            other => Err(Error::Validation(format!(
                "unknown experiment `{other}` (expected granularity, noisy-output, or noisy-input)"
            ))),
        }
    }
}

/// A model plus additive seeded gaussian noise on its output.
///
/// The noise is drawn from the model's own seeded stream in call order, so
/// a fixed seed and call sequence give identical outputs; concurrent calls
/// would not, which is why this model declares itself serial-only.
pub struct NoisyOutputModel<'a> {
    base: &'a dyn OutputModel,
    sigma: f64,
    rng: Mutex<CounterRng>,
}

impl<'a> NoisyOutputModel<'a> {
    pub fn new(base: &'a dyn OutputModel, sigma: f64, seed: u64) -> Result<Self> {
        if sigma.is_nan() || sigma < 0.0 {
            return Err(Error::Validation(format!(
                "noise standard deviation must be nonnegative, got {sigma}"
            )));
        }
        Ok(NoisyOutputModel {
            base,
            sigma,
            rng: Mutex::new(CounterRng::new(seed)),
        })
    }
}

impl OutputModel for NoisyOutputModel<'_> {
    fn arity(&self) -> usize {
        self.base.arity()
    }

    fn evaluate(&self, point: &[f64]) -> Result<f64> {
        let y = self.base.evaluate(point)?;
        let z = self.rng.lock().expect("lock poisoned").next_normal();
        Ok(y + self.sigma * z)
    }

    fn concurrent_safe(&self) -> bool {
        false
    }
}

/// One experiment cell: a function at one granularity and noise level,
/// evaluated on every fold.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub function: String,
    pub delta: f64,
    pub sigma: f64,
    pub experiment: ExperimentKind,
    /// (fold seed, report) pairs in fold order.
    pub reports: Vec<(u64, EvalReport)>,
    /// Mean over the folds with a defined TPR.
    pub mean_tpr: Option<f64>,
    pub undefined_folds: usize,
    pub mean_accuracy: f64,
    /// Noiseless mean TPR minus noisy mean TPR (noisy-input cells only).
    pub tpr_diff: Option<f64>,
}

impl ExperimentResult {
    fn collect(
        function: &str,
        delta: f64,
        sigma: f64,
        experiment: ExperimentKind,
        reports: Vec<(u64, EvalReport)>,
        tpr_diff: Option<f64>,
    ) -> ExperimentResult {
        let bare: Vec<EvalReport> = reports.iter().map(|(_, r)| *r).collect();
        let (mean_tpr, undefined_folds) = eval::mean_tpr(&bare);
        let mean_accuracy = bare.iter().map(|r| r.accuracy).sum::<f64>() / bare.len().max(1) as f64;
        ExperimentResult {
            function: function.to_string(),
            delta,
            sigma,
            experiment,
            reports,
            mean_tpr,
            undefined_folds,
            mean_accuracy,
            tpr_diff,
        }
    }
}

/// Shared experiment setup.
pub struct ExperimentConfig {
    pub variables: Vec<VariableSpec>,
    pub target: TargetRange,
    pub deltas: Vec<f64>,
    pub sigmas: Vec<f64>,
    pub folds: usize,
    pub test_size: usize,
    pub master_seed: u64,
    pub grid_cap: u64,
}

impl ExperimentConfig {
    fn fold_seed(&self, fold: usize) -> u64 {
        derive_seed(
            self.master_seed,
            &[SeedPart::Str("test"), SeedPart::U64(fold as u64)],
        )
    }

    fn validate(&self) -> Result<()> {
        if self.deltas.iter().any(|&d| !d.is_finite() || d <= 0.0) {
            return Err(Error::Validation(
                "sweep granularities must be positive".into(),
            ));
        }
        if self.sigmas.iter().any(|&s| !s.is_finite() || s < 0.0) {
            return Err(Error::Validation("noise levels must be nonnegative".into()));
        }
        if self.folds == 0 {
            return Err(Error::Validation(
                "experiments need at least one fold".into(),
            ));
        }
        Ok(())
    }

    /// The per-fold test sets for one function: identical input points for
    /// every function and cell, outputs from the given (noiseless) model.
    fn test_sets(&self, model: &dyn OutputModel) -> Result<Vec<TestSet>> {
        (0..self.folds)
            .map(|fold| {
                eval::generate_test_set(
                    &self.variables,
                    self.test_size,
                    model,
                    self.fold_seed(fold),
                )
            })
            .collect()
    }
}

/// Carves each function at each granularity and evaluates on the seeded
/// test sets (no noise anywhere).
pub fn run_granularity_sweep(
    functions: &[(String, &dyn OutputModel)],
    cfg: &ExperimentConfig,
) -> Result<Vec<ExperimentResult>> {
    cfg.validate()?;
    let mut results = Vec::new();
    for (name, model) in functions {
        let tests = cfg.test_sets(*model)?;
        let cells: Vec<ExperimentResult> = cfg
            .deltas
            .par_iter()
            .map(|&delta| -> Result<ExperimentResult> {
                let outcome =
                    carve_problem(&cfg.variables, &cfg.target, *model, delta, cfg.grid_cap)?;
                let reports: Vec<(u64, EvalReport)> = tests
                    .iter()
                    .map(|t| (t.seed(), eval::evaluate(&outcome.apd, t, &cfg.target)))
                    .collect();
                Ok(ExperimentResult::collect(
                    name,
                    delta,
                    0.0,
                    ExperimentKind::Granularity,
                    reports,
                    None,
                ))
            })
            .collect::<Result<_>>()?;
        results.extend(cells);
    }
    Ok(results)
}

/// Labels the training grid with noise added to the function output, then
/// evaluates the carved domain against the noiseless outputs.
///
/// Each fold carries its own noise realization: fold `k` of a cell labels
/// the grid with the stream keyed by (master, experiment, function, δ, σ,
/// k) and is evaluated on test set `k`, so the cell mean averages over
/// independent noisy carves.
pub fn run_noisy_output(
    functions: &[(String, &dyn OutputModel)],
    cfg: &ExperimentConfig,
) -> Result<Vec<ExperimentResult>> {
    cfg.validate()?;
    let mut results = Vec::new();
    for (name, model) in functions {
        let tests = cfg.test_sets(*model)?;
        let mut cells: Vec<(f64, f64)> = Vec::new();
        for &delta in &cfg.deltas {
            for &sigma in &cfg.sigmas {
                cells.push((delta, sigma));
            }
        }
        let cell_results: Vec<ExperimentResult> = cells
            .par_iter()
            .map(|&(delta, sigma)| -> Result<ExperimentResult> {
                let mut reports = Vec::with_capacity(cfg.folds);
                for (fold, test) in tests.iter().enumerate() {
                    let noise_seed = derive_seed(
                        cfg.master_seed,
                        &[
                            SeedPart::Str("noisy-output"),
                            SeedPart::Str(name),
                            SeedPart::F64(delta),
                            SeedPart::F64(sigma),
                            SeedPart::U64(fold as u64),
                        ],
                    );
                    let noisy = NoisyOutputModel::new(*model, sigma, noise_seed)?;
                    let outcome =
                        carve_problem(&cfg.variables, &cfg.target, &noisy, delta, cfg.grid_cap)?;
                    // Ground truth on the test side is the noiseless function.
                    reports.push((test.seed(), eval::evaluate(&outcome.apd, test, &cfg.target)));
                }
                Ok(ExperimentResult::collect(
                    name,
                    delta,
                    sigma,
                    ExperimentKind::NoisyOutput,
                    reports,
                    None,
                ))
            })
            .collect::<Result<_>>()?;
        results.extend(cell_results);
    }
    Ok(results)
}

/// Evaluates the noiseless carve against test points whose outputs were
/// computed at gaussian-perturbed inputs; the table pairs the intended
/// (noiseless) inputs with those outputs. Each cell also records the drop
/// from the noiseless TPR.
pub fn run_noisy_inputs(
    functions: &[(String, &dyn OutputModel)],
    cfg: &ExperimentConfig,
) -> Result<Vec<ExperimentResult>> {
    cfg.validate()?;
    let m = cfg.variables.len();
    let mut results = Vec::new();
    for (name, model) in functions {
        let tests = cfg.test_sets(*model)?;
        let cell_results: Vec<ExperimentResult> = cfg
            .deltas
            .par_iter()
            .map(|&delta| -> Result<Vec<ExperimentResult>> {
                // The grid and domain are unaffected by input noise.
                let outcome =
                    carve_problem(&cfg.variables, &cfg.target, *model, delta, cfg.grid_cap)?;
                let baseline: Vec<EvalReport> = tests
                    .iter()
                    .map(|t| eval::evaluate(&outcome.apd, t, &cfg.target))
                    .collect();
                let (baseline_tpr, _) = eval::mean_tpr(&baseline);

                let mut per_sigma = Vec::with_capacity(cfg.sigmas.len());
                for &sigma in &cfg.sigmas {
                    let mut reports = Vec::with_capacity(cfg.folds);
                    for (fold, test) in tests.iter().enumerate() {
                        let noise_seed = derive_seed(
                            cfg.master_seed,
                            &[
                                SeedPart::Str("noisy-input"),
                                SeedPart::Str(name),
                                SeedPart::F64(delta),
                                SeedPart::F64(sigma),
                                SeedPart::U64(fold as u64),
                            ],
                        );
                        let mut rng = CounterRng::new(noise_seed);
                        let mut noisy_point = vec![0.0f64; m];
                        let mut outputs = Vec::with_capacity(test.len());
                        for i in 0..test.len() {
                            let p = test.point(i);
                            for d in 0..m {
                                noisy_point[d] = p[d] + sigma * rng.next_normal();
                            }
                            outputs.push(model.evaluate(&noisy_point)?);
                        }
                        let noisy_test =
                            TestSet::new(m, test_points_of(test), outputs, test.seed());
                        reports.push((
                            test.seed(),
                            eval::evaluate(&outcome.apd, &noisy_test, &cfg.target),
                        ));
                    }
                    let bare: Vec<EvalReport> = reports.iter().map(|(_, r)| *r).collect();
                    let (noisy_tpr, _) = eval::mean_tpr(&bare);
                    let tpr_diff = match (baseline_tpr, noisy_tpr) {
                        (Some(a), Some(b)) => Some(a - b),
                        _ => None,
                    };
                    per_sigma.push(ExperimentResult::collect(
                        name,
                        delta,
                        sigma,
                        ExperimentKind::NoisyInput,
                        reports,
                        tpr_diff,
                    ));
                }
                Ok(per_sigma)
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        results.extend(cell_results);
    }
    Ok(results)
}

fn test_points_of(test: &TestSet) -> Vec<f64> {
    let mut points = Vec::with_capacity(test.len() * test.dims());
    for i in 0..test.len() {
        points.extend_from_slice(test.point(i));
    }
    points
}

/// One row per (cell, fold).
pub fn write_cells_csv<W: Write>(results: &[ExperimentResult], mut out: W) -> Result<()> {
    writeln!(
        out,
        "function,delta,sigma,experiment,seed,tp,fp,fn,tn,tpr,accuracy"
    )?;
    for cell in results {
        for (seed, r) in &cell.reports {
            let tpr = r.tpr.map(|v| v.to_string()).unwrap_or_default();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                cell.function,
                cell.delta,
                cell.sigma,
                cell.experiment.id(),
                seed,
                r.tp,
                r.fp,
                r.fn_,
                r.tn,
                tpr,
                r.accuracy
            )?;
        }
    }
    Ok(())
}

/// One row per cell with the fold means; `tpr_diff` is empty except for
/// noisy-input cells, `undefined_folds` flags folds without a defined TPR.
pub fn write_aggregate_csv<W: Write>(results: &[ExperimentResult], mut out: W) -> Result<()> {
    writeln!(
        out,
        "function,delta,sigma,experiment,mean_tpr,mean_accuracy,tpr_diff,undefined_folds"
    )?;
    for cell in results {
        let mean_tpr = cell.mean_tpr.map(|v| v.to_string()).unwrap_or_default();
        let tpr_diff = cell.tpr_diff.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            cell.function,
            cell.delta,
            cell.sigma,
            cell.experiment.id(),
            mean_tpr,
            cell.mean_accuracy,
            tpr_diff,
            cell.undefined_folds
        )?;
    }
    Ok(())
}
