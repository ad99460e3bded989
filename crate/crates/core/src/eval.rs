//! Contingency-table evaluation of an approximate positive domain on a test
//! set, seeded test-set generation, and granularity selection.
//!
//! The table follows the INPUT × OUTPUT layout: a test point counts as
//! input-Inside when the domain contains it and output-Inside when its
//! observed output lands in the target range. The true positive rate is
//! TP / (TP + FP) — the fraction of accepted inputs whose outputs actually
//! land in the target — and is undefined when no input is accepted.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{ApproxPositiveDomain, OutputModel, TargetRange, VariableSpec};
use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    /// `None` when tp + fp = 0; never silently 0.
    pub tpr: Option<f64>,
    pub accuracy: f64,
}

impl EvalReport {
    pub fn from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> EvalReport {
        let total = tp + fp + fn_ + tn;
        let tpr = if tp + fp > 0 {
            Some(tp as f64 / (tp + fp) as f64)
        } else {
            None
        };
        let accuracy = if total > 0 {
            (tp + tn) as f64 / total as f64
        } else {
            0.0
        };
        EvalReport {
            tp,
            fp,
            fn_,
            tn,
            tpr,
            accuracy,
        }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "                    OUTPUT")?;
        writeln!(f, "                 Inside   Outside")?;
        writeln!(f, "INPUT  Inside  {:>8}  {:>8}", self.tp, self.fp)?;
        writeln!(f, "      Outside  {:>8}  {:>8}", self.fn_, self.tn)?;
        match self.tpr {
            Some(tpr) => writeln!(f, "TPR: {tpr}")?,
            None => writeln!(f, "TPR: undefined (no test point falls inside the domain)")?,
        }
        write!(f, "accuracy: {}", self.accuracy)
    }
}

/// A test set: points drawn uniformly from the initial ranges and the
/// observed output at each point.
#[derive(Debug, Clone, PartialEq)]
pub struct TestSet {
    dims: usize,
    points: Vec<f64>,
    outputs: Vec<f64>,
    seed: u64,
}

impl TestSet {
    pub fn new(dims: usize, points: Vec<f64>, outputs: Vec<f64>, seed: u64) -> TestSet {
        assert_eq!(points.len(), outputs.len() * dims);
        TestSet {
            dims,
            points,
            outputs,
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn point(&self, index: usize) -> &[f64] {
        &self.points[index * self.dims..(index + 1) * self.dims]
    }

    pub fn output(&self, index: usize) -> f64 {
        self.outputs[index]
    }
}

/// Draws `n` i.i.d. points uniformly from the variables' initial ranges
/// using the seeded counter stream, and records the model output at each.
pub fn generate_test_set(
    variables: &[VariableSpec],
    n: usize,
    model: &dyn OutputModel,
    seed: u64,
) -> Result<TestSet> {
    let points = sample_uniform_points(variables, n, seed)?;
    let m = variables.len();
    let outputs: Vec<f64> = if model.concurrent_safe() {
        points
            .par_chunks(m)
            .map(|p| model.evaluate(p))
            .collect::<Result<_>>()?
    } else {
        points
            .chunks(m)
            .map(|p| model.evaluate(p))
            .collect::<Result<_>>()?
    };
    Ok(TestSet {
        dims: m,
        points,
        outputs,
        seed,
    })
}

/// The input half of [`generate_test_set`]: coordinate `d` of point `i` is
/// drawn from stream position `i*m + d`, so the sample is independent of
/// evaluation order and thread count.
pub fn sample_uniform_points(variables: &[VariableSpec], n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::Validation("test set size must be at least 1".into()));
    }
    let m = variables.len();
    let mut points = Vec::with_capacity(n * m);
    for i in 0..n {
        for (d, v) in variables.iter().enumerate() {
            let u = rng::unit_at(seed, (i * m + d) as u64);
            points.push(v.lo + u * (v.hi - v.lo));
        }
    }
    Ok(points)
}

/// Fills the contingency table for `apd` against the test set's recorded
/// outputs.
pub fn evaluate(apd: &ApproxPositiveDomain, test: &TestSet, target: &TargetRange) -> EvalReport {
    let m = test.dims();
    let (tp, fp, fn_, tn) = test
        .points
        .par_chunks(m)
        .zip(test.outputs.par_iter())
        .map(|(point, &y)| {
            let input_in = apd.contains(point);
            let output_in = y.is_finite() && target.contains(y);
            match (input_in, output_in) {
                (true, true) => (1u64, 0u64, 0u64, 0u64),
                (true, false) => (0, 1, 0, 0),
                (false, true) => (0, 0, 1, 0),
                (false, false) => (0, 0, 0, 1),
            }
        })
        .reduce(
            || (0, 0, 0, 0),
            |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2, a.3 + b.3),
        );
    EvalReport::from_counts(tp, fp, fn_, tn)
}

/// Mean of the defined TPRs across reports, plus how many were undefined.
pub fn mean_tpr(reports: &[EvalReport]) -> (Option<f64>, usize) {
    let defined: Vec<f64> = reports.iter().filter_map(|r| r.tpr).collect();
    let undefined = reports.len() - defined.len();
    if defined.is_empty() {
        (None, undefined)
    } else {
        (
            Some(defined.iter().sum::<f64>() / defined.len() as f64),
            undefined,
        )
    }
}

/// Picks the largest granularity whose mean TPR over the seeded test sets
/// reaches `tpr_threshold`.
///
/// `candidates` must be sorted in descending order. Each candidate runs the
/// full carve pipeline once and is evaluated against every seed; candidates
/// whose TPR is undefined on every seed never qualify.
#[allow(clippy::too_many_arguments)]
pub fn select_granularity(
    variables: &[VariableSpec],
    target: &TargetRange,
    model: &dyn OutputModel,
    candidates: &[f64],
    tpr_threshold: f64,
    seeds: &[u64],
    test_size: usize,
    grid_cap: u64,
) -> Result<f64> {
    if candidates.is_empty() {
        return Err(Error::Validation("no granularity candidates given".into()));
    }
    if candidates.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Validation(
            "granularity candidates must be sorted in descending order".into(),
        ));
    }
    if seeds.is_empty() {
        return Err(Error::Validation(
            "granularity selection needs at least one seed".into(),
        ));
    }
    let tests: Vec<TestSet> = seeds
        .iter()
        .map(|&s| generate_test_set(variables, test_size, model, s))
        .collect::<Result<_>>()?;
    let mut summary = String::new();
    for &delta in candidates {
        let outcome = crate::pipeline::carve_problem(variables, target, model, delta, grid_cap)?;
        let reports: Vec<EvalReport> = tests
            .iter()
            .map(|t| evaluate(&outcome.apd, t, target))
            .collect();
        let (mean, undefined) = mean_tpr(&reports);
        if !summary.is_empty() {
            summary.push_str("; ");
        }
        match mean {
            Some(value) => {
                let mark = if undefined > 0 {
                    format!(" ({undefined} undefined folds)")
                } else {
                    String::new()
                };
                summary.push_str(&format!("δ={delta}: mean TPR {value}{mark}"));
                if value >= tpr_threshold {
                    return Ok(delta);
                }
            }
            None => summary.push_str(&format!("δ={delta}: TPR undefined on every fold")),
        }
    }
    Err(Error::NoQualifyingGranularity {
        threshold: tpr_threshold,
        details: summary,
    })
}
