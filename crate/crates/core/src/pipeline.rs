//! The end-to-end carve pipeline: grid → label → train → extract.

use crate::domain::{ApproxPositiveDomain, OutputModel, TargetRange, VariableSpec};
use crate::error::Result;
use crate::grid::{GridSpec, LabeledDataset};
use crate::tree::{self, TreeNode};

pub struct CarveOutcome {
    pub dataset: LabeledDataset,
    pub tree: TreeNode,
    pub apd: ApproxPositiveDomain,
}

/// Builds the labeled grid at granularity `delta`, trains the tree, and
/// extracts the approximate positive domain.
pub fn carve_problem(
    variables: &[VariableSpec],
    target: &TargetRange,
    model: &dyn OutputModel,
    delta: f64,
    grid_cap: u64,
) -> Result<CarveOutcome> {
    let spec = GridSpec::new(variables.to_vec(), delta)?;
    let dataset = LabeledDataset::build(spec, model, target, grid_cap)?;
    let tree = tree::train(&dataset)?;
    let apd = crate::carve::extract_boxes(&tree, variables, target, delta);
    Ok(CarveOutcome { dataset, tree, apd })
}
