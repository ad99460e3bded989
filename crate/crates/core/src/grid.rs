//! Synthetic training grid: per-axis value sets, their cartesian product,
//! and the labeled dataset.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{Label, OutputModel, TargetRange, VariableSpec};
use crate::error::{Error, Result};

/// Default cap on the number of grid points.
pub const DEFAULT_GRID_CAP: u64 = 50_000_000;

/// A grid request: variables plus the granularity δ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    variables: Vec<VariableSpec>,
    granularity: f64,
}

impl GridSpec {
    pub fn new(variables: Vec<VariableSpec>, granularity: f64) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::Validation("grid needs at least one variable".into()));
        }
        if !granularity.is_finite() || granularity <= 0.0 {
            return Err(Error::Validation(format!(
                "granularity must be a positive finite number, got {granularity}"
            )));
        }
        Ok(GridSpec {
            variables,
            granularity,
        })
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.variables
    }

    pub fn granularity(&self) -> f64 {
        self.granularity
    }

    pub fn dims(&self) -> usize {
        self.variables.len()
    }
}

/// The synthetic value set for one axis over `[lo, hi]`: both endpoints
/// plus the interior points `lo + n·δ`.
///
/// Interior values are computed by multiplication, not repeated addition,
/// so they do not accumulate rounding error, and are then snapped to the
/// nearest 12-significant-digit decimal when that lies within
/// `τ = δ·1e-9`. Grids over decimal ranges therefore land on exact decimal
/// coordinates (`-1 + 6·0.2` is `0.2`, not `0.20000000000000018`), which
/// keeps model outputs on grid points from drifting across target bounds
/// by float fuzz. An interior value within `τ` of `hi` is merged with
/// `hi`, which therefore appears exactly once.
pub fn axis_values_over(lo: f64, hi: f64, delta: f64) -> Vec<f64> {
    assert!(
        delta.is_finite() && delta > 0.0,
        "granularity must be positive and finite, got {delta}"
    );
    if lo == hi {
        return vec![lo];
    }
    let tau = delta * 1e-9;
    let mut values = vec![lo];
    let mut n = 1u64;
    loop {
        let x = snap_to_decimal(lo + n as f64 * delta, tau);
        if x >= hi - tau {
            break;
        }
        values.push(x);
        n += 1;
    }
    values.push(hi);
    values
}

/// `x` rounded to 12 significant decimal digits.
pub(crate) fn round_to_decimal(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float")
}

fn snap_to_decimal(x: f64, tau: f64) -> f64 {
    let snapped = round_to_decimal(x);
    if (snapped - x).abs() <= tau {
        snapped
    } else {
        x
    }
}

/// [`axis_values_over`] for a variable's initial range.
pub fn axis_values(variable: &VariableSpec, delta: f64) -> Vec<f64> {
    axis_values_over(variable.lo, variable.hi, delta)
}

/// Builds the full grid as a flat row-major point list (`dims` coordinates
/// per point; the last axis varies fastest).
pub fn build_grid(spec: &GridSpec, cap: u64) -> Result<Vec<f64>> {
    let axes: Vec<Vec<f64>> = spec
        .variables
        .iter()
        .map(|v| axis_values(v, spec.granularity))
        .collect();
    let mut total: u128 = 1;
    for axis in &axes {
        total = total
            .checked_mul(axis.len() as u128)
            .ok_or(Error::GridTooLarge {
                points: u128::MAX,
                cap,
            })?;
    }
    if total > cap as u128 {
        return Err(Error::GridTooLarge { points: total, cap });
    }
    let n = total as usize;
    let m = axes.len();
    let mut points = Vec::with_capacity(n * m);
    let mut odometer = vec![0usize; m];
    for _ in 0..n {
        for (d, &i) in odometer.iter().enumerate() {
            points.push(axes[d][i]);
        }
        for d in (0..m).rev() {
            odometer[d] += 1;
            if odometer[d] < axes[d].len() {
                break;
            }
            odometer[d] = 0;
        }
    }
    Ok(points)
}

/// The labeled synthetic training set: grid points, the model output at
/// each point, and the Inside/Outside label against the target range.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    spec: GridSpec,
    points: Vec<f64>,
    outputs: Vec<f64>,
    labels: Vec<Label>,
}

impl LabeledDataset {
    /// Builds the grid for `spec` and labels it with `model` against
    /// `target`. Labeling runs in parallel over points when the model is
    /// safe for concurrent evaluation; the result does not depend on the
    /// execution order either way.
    pub fn build(
        spec: GridSpec,
        model: &dyn OutputModel,
        target: &TargetRange,
        cap: u64,
    ) -> Result<Self> {
        let points = build_grid(&spec, cap)?;
        label_points(spec, points, model, target)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.spec.dims()
    }

    pub fn point(&self, index: usize) -> &[f64] {
        let m = self.dims();
        &self.points[index * m..(index + 1) * m]
    }

    pub fn output(&self, index: usize) -> f64 {
        self.outputs[index]
    }

    pub fn label(&self, index: usize) -> Label {
        self.labels[index]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn inside_count(&self) -> usize {
        self.labels.iter().filter(|l| **l == Label::Inside).count()
    }

    /// One row per point: the coordinates, the model output, the label.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for v in self.spec.variables() {
            write!(out, "{},", v.name)?;
        }
        writeln!(out, "y,label")?;
        for i in 0..self.len() {
            for x in self.point(i) {
                write!(out, "{x},")?;
            }
            writeln!(out, "{},{}", self.output(i), self.label(i))?;
        }
        Ok(())
    }
}

/// Labels an already-built point list. The label is Inside exactly when the
/// model output is finite and inside the target range.
pub fn label_points(
    spec: GridSpec,
    points: Vec<f64>,
    model: &dyn OutputModel,
    target: &TargetRange,
) -> Result<LabeledDataset> {
    let m = spec.dims();
    if model.arity() != m {
        return Err(Error::ArityMismatch {
            expected: model.arity(),
            got: m,
        });
    }
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
    let labels = outputs.iter().map(|&y| label_output(y, target)).collect();
    Ok(LabeledDataset {
        spec,
        points,
        outputs,
        labels,
    })
}

/// The labeling rule: non-finite outputs are Outside.
pub fn label_output(y: f64, target: &TargetRange) -> Label {
    if y.is_finite() && target.contains(y) {
        Label::Inside
    } else {
        Label::Outside
    }
}
