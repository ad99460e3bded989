//! Concrete output-model providers: a parsed arithmetic expression language
//! and an adapter for models hosted in an external process.

mod benchmarks;
mod expr;
mod external;

pub use benchmarks::{
    benchmark_function, benchmark_functions, benchmark_variables, BENCHMARK_SOURCES,
};
pub use expr::{Ast, BinOp, Expression, UnaryFn};
pub use external::{ExternalModel, DEFAULT_CALL_TIMEOUT};
