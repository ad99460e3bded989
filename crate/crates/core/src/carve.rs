//! Turns a trained tree into the approximate positive domain and refines it
//! by the inner-grid containment test.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::domain::{
    ApproxPositiveDomain, BoxRegion, Interval, Label, OutputModel, TargetRange, VariableSpec,
};
use crate::error::Result;
use crate::grid::{axis_values_over, label_output};
use crate::tree::TreeNode;

// Per-dimension bounds accumulated along a root-to-leaf path.
#[derive(Clone, Copy)]
struct Bound {
    lo: f64,
    lo_closed: bool,
    hi: f64,
    hi_closed: bool,
}

/// Walks every root-to-leaf path and collects one box per Inside leaf.
///
/// A left branch at `(feature, t)` intersects that dimension with
/// `(-inf, t]`, a right branch with `(t, +inf)`, and the result is
/// intersected with the closed initial range, so upper bounds coming from
/// splits are closed and lower bounds coming from splits are open — the
/// exact mirror of the `<=` routing rule. Boxes appear in depth-first
/// (left-to-right) order.
pub fn extract_boxes(
    tree: &TreeNode,
    variables: &[VariableSpec],
    target: &TargetRange,
    granularity: f64,
) -> ApproxPositiveDomain {
    let mut bounds: Vec<Bound> = variables
        .iter()
        .map(|v| Bound {
            lo: v.lo,
            lo_closed: true,
            hi: v.hi,
            hi_closed: true,
        })
        .collect();
    let mut boxes = Vec::new();
    walk(tree, &mut bounds, &mut boxes);
    ApproxPositiveDomain {
        variables: variables.to_vec(),
        target: target.clone(),
        granularity,
        refined: false,
        boxes,
    }
}

fn walk(node: &TreeNode, bounds: &mut [Bound], boxes: &mut Vec<BoxRegion>) {
    match node {
        TreeNode::Leaf {
            label: Label::Outside,
            ..
        } => {}
        TreeNode::Leaf {
            label: Label::Inside,
            ..
        } => {
            let intervals = bounds
                .iter()
                .map(|b| {
                    Interval::new(b.lo, b.hi, b.lo_closed, b.hi_closed)
                        .expect("split thresholds lie strictly inside the parent box")
                })
                .collect();
            boxes.push(BoxRegion::new(intervals));
        }
        TreeNode::Internal {
            feature_index,
            threshold,
            left,
            right,
        } => {
            let f = *feature_index;
            let saved = bounds[f];
            bounds[f] = Bound {
                hi: *threshold,
                hi_closed: true,
                ..saved
            };
            walk(left, bounds, boxes);
            bounds[f] = Bound {
                lo: *threshold,
                lo_closed: false,
                ..saved
            };
            walk(right, bounds, boxes);
            bounds[f] = saved;
        }
    }
}

/// Keeps only the boxes whose inner grid maps entirely inside the target.
///
/// For each box, a grid of granularity `inner_delta` is laid over the box's
/// closure; inner points that do not satisfy the box's open bounds are
/// skipped. The model (not the tree) is evaluated at every remaining point,
/// and the box survives only if every output lands in the target. A
/// surviving box can still contain off-grid points that map outside the
/// target when `inner_delta` is not small enough.
pub fn refine(
    apd: &ApproxPositiveDomain,
    model: &dyn OutputModel,
    target: &TargetRange,
    inner_delta: f64,
) -> Result<ApproxPositiveDomain> {
    if !inner_delta.is_finite() || inner_delta <= 0.0 {
        return Err(crate::error::Error::Validation(format!(
            "inner granularity must be positive and finite, got {inner_delta}"
        )));
    }
    let check = |b: &BoxRegion| box_fully_inside(b, model, target, inner_delta);
    let keep: Vec<bool> = if model.concurrent_safe() {
        apd.boxes.par_iter().map(check).collect::<Result<_>>()?
    } else {
        apd.boxes.iter().map(check).collect::<Result<_>>()?
    };
    let boxes = apd
        .boxes
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(b, _)| b.clone())
        .collect();
    Ok(ApproxPositiveDomain {
        variables: apd.variables.clone(),
        target: apd.target.clone(),
        granularity: apd.granularity,
        refined: true,
        boxes,
    })
}

fn box_fully_inside(
    region: &BoxRegion,
    model: &dyn OutputModel,
    target: &TargetRange,
    inner_delta: f64,
) -> Result<bool> {
    let axes: Vec<Vec<f64>> = region
        .intervals
        .iter()
        .map(|iv| axis_values_over(iv.lo(), iv.hi(), inner_delta))
        .collect();
    let m = axes.len();
    let mut odometer = vec![0usize; m];
    let mut point = vec![0.0f64; m];
    loop {
        for d in 0..m {
            point[d] = axes[d][odometer[d]];
        }
        // Points on an open face belong to a neighboring box, not this one.
        if region.contains(&point) {
            let y = model.evaluate(&point)?;
            if label_output(y, target) == Label::Outside {
                return Ok(false);
            }
        }
        let mut d = m;
        loop {
            if d == 0 {
                return Ok(true);
            }
            d -= 1;
            odometer[d] += 1;
            if odometer[d] < axes[d].len() {
                break;
            }
            odometer[d] = 0;
        }
    }
}

/// Human-readable report: one line per box, per-dimension intervals in
/// bracket notation.
pub fn box_report(apd: &ApproxPositiveDomain) -> String {
    let mut out = String::new();
    for region in &apd.boxes {
        let mut first = true;
        for (variable, interval) in apd.variables.iter().zip(&region.intervals) {
            if !first {
                out.push_str(", ");
            }
            write!(out, "{} ∈ {}", variable.name, interval).expect("write to string");
            first = false;
        }
        out.push('\n');
    }
    out
}
