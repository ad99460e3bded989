//! Approximates the *positive domain* of a real-valued function or trained
//! regression model: the subset of the input space whose outputs land in a
//! given target range.
//!
//! The pipeline labels a synthetic grid over the initial variable ranges,
//! trains a fully grown decision-tree classifier on it, and reads the
//! union of axis-aligned boxes off the Inside-labeled leaves. The result
//! can be evaluated on seeded uniform test sets (contingency table, true
//! positive rate, accuracy), refined by an inner-grid containment test, and
//! stress-tested under output and input noise.
//!
//! ```
//! use posdom::domain::{Interval, TargetRange, VariableSpec};
//! use posdom::model::Expression;
//!
//! let variables = vec![
//!     VariableSpec::new("x1", -1.0, 1.0).unwrap(),
//!     VariableSpec::new("x2", -1.0, 1.0).unwrap(),
//! ];
//! let target = TargetRange::from_interval(Interval::closed(0.0, 1.0).unwrap());
//! let model = Expression::parse("x1 + x2", &variables).unwrap();
//!
//! let outcome = posdom::pipeline::carve_problem(
//!     &variables, &target, &model, 0.2, posdom::grid::DEFAULT_GRID_CAP,
//! ).unwrap();
//! assert!(outcome.apd.contains(&[0.3, 0.3]));
//! assert!(!outcome.apd.contains(&[-0.9, -0.9]));
//! ```

pub mod carve;
pub mod config;
pub mod domain;
mod error;
pub mod eval;
pub mod experiments;
pub mod grid;
pub mod model;
pub mod pipeline;
pub mod rng;
pub mod tree;

pub use error::{Error, Result};
