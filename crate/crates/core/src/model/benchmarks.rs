//! The four two-variable benchmark functions used by the sensitivity
//! experiments, as parsed expressions over `x1`, `x2` in `[-1, 1]`.

use crate::domain::VariableSpec;
use crate::error::Result;
use crate::model::Expression;

pub const BENCHMARK_SOURCES: [(&str, &str); 4] = [
    ("linear", "x1 + x2"),
    ("sum_of_squares", "x1^2 + x2^2"),
    ("sin_plus_cos", "sin(x1) + cos(x2)"),
    ("log_abs_sum", "log(abs(x1) + abs(x2))"),
];

/// The benchmark variable ranges: `x1`, `x2`, both `[-1, 1]`.
pub fn benchmark_variables() -> Vec<VariableSpec> {
    vec![
        VariableSpec::new("x1", -1.0, 1.0).expect("static range"),
        VariableSpec::new("x2", -1.0, 1.0).expect("static range"),
    ]
}

/// All four benchmark functions, keyed by a CSV-friendly id.
pub fn benchmark_functions() -> Vec<(String, Expression)> {
    let variables = benchmark_variables();
    BENCHMARK_SOURCES
        .iter()
        .map(|(id, src)| {
            let expr = Expression::parse(src, &variables).expect("static source");
            (id.to_string(), expr)
        })
        .collect()
}

/// One benchmark function by id.
pub fn benchmark_function(id: &str) -> Result<Expression> {
    let variables = benchmark_variables();
    let src = BENCHMARK_SOURCES
        .iter()
        .find(|(name, _)| *name == id)
        .map(|(_, src)| *src)
        .ok_or_else(|| {
            crate::error::Error::Validation(format!("unknown benchmark function `{id}`"))
        })?;
    Expression::parse(src, &variables)
}
