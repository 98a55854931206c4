//! `list-seeds` and `check-expr`.

use std::fmt::Write as _;

use qes_core::expr::{Expression, ParameterBindings};
use qes_core::seeds::{catalog, SeedCatalogEntry};
use qes_core::susy::validate_seed;

use crate::config::{ReportFormat, CUSTOM_INTERVAL};
use crate::{fmt_float, CliError};

fn defaults(entry: &SeedCatalogEntry, sep: &str) -> String {
    entry
        .default_params
        .iter()
        .map(|(k, v)| format!("{k}={}", fmt_float(*v)))
        .collect::<Vec<_>>()
        .join(sep)
}

fn constraints(entry: &SeedCatalogEntry) -> Vec<&'static str> {
    entry.constraints.iter().map(|c| c.label).collect()
}

pub fn list_seeds(format: ReportFormat) -> String {
    let mut out = String::new();
    for e in catalog() {
        let (a, b) = e.default_interval;
        match format {
            ReportFormat::Text => {
                writeln!(out, "{}  W+ = {}  ({})", e.name, e.wplus_text, constraints(e).join(", ")).unwrap();
                writeln!(
                    out,
                    "    defaults: {}; interval: [{a}, {b}]; points: {}",
                    defaults(e, ", "),
                    e.default_points
                )
                .unwrap();
                writeln!(out, "    epsilon = {}; {}", e.epsilon_text, e.description).unwrap();
            }
            ReportFormat::Records => {
                writeln!(
                    out,
                    "name={} wplus={} params={} constraints={} defaults={} interval={},{} points={} epsilon={}",
                    e.name,
                    e.wplus_text.replace(' ', ""),
                    e.param_names.join(","),
                    constraints(e).join(","),
                    defaults(e, ";"),
                    fmt_float(a),
                    fmt_float(b),
                    e.default_points,
                    e.epsilon_text.replace(' ', ""),
                )
                .unwrap();
            }
        }
    }
    out
}

/// Outcome of `check-expr`: the printed diagnostics and whether the seed is admissible.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprDiagnostics {
    pub text: String,
    pub admissible: bool,
}

/// Parses `text`, lists its parameters and, when all are bound, runs seed validation on
/// `interval`. Parse errors and unbound parameters are input errors.
pub fn check_expr(
    text: &str,
    params: &ParameterBindings,
    interval: Option<(f64, f64)>,
) -> Result<ExprDiagnostics, CliError> {
    let expr: Expression = text.parse()?;
    let interval = interval.unwrap_or(CUSTOM_INTERVAL);
    let names: Vec<String> = expr.parameters().into_iter().collect();
    let mut out = String::new();
    writeln!(out, "expression: {expr}").unwrap();
    let listed = if names.is_empty() { "none".to_string() } else { names.join(", ") };
    writeln!(out, "parameters: {listed}").unwrap();
    let derivative = expr.differentiate();
    writeln!(out, "derivative: {derivative}").unwrap();
    writeln!(out, "interval:   [{}, {}]", interval.0, interval.1).unwrap();

    let admissible = match validate_seed(&expr, params, interval) {
        Ok(seed) => {
            writeln!(out, "zero:       x0 = {}", seed.x0()).unwrap();
            writeln!(out, "slope:      s0 = {}", seed.s0()).unwrap();
            writeln!(out, "epsilon:    {}", seed.epsilon()).unwrap();
            writeln!(out, "admissible: yes").unwrap();
            true
        }
        Err(qes_core::susy::SusyError::Expr(e)) => return Err(CliError::Expr(e)),
        Err(e) => {
            writeln!(out, "admissible: no ({})", describe(&e)).unwrap();
            false
        }
    };
    Ok(ExprDiagnostics { text: out, admissible })
}

fn describe(e: &qes_core::susy::SusyError) -> String {
    use qes_core::susy::SusyError::*;
    match e {
        NoZero { .. } => format!("no sign change: {e}"),
        MultipleZeros { .. } => format!("MultipleZeros: {e}"),
        NonPositiveSlope { .. } => format!("NonPositiveSlope: {e}"),
        SignCondition { .. } => format!("SignCondition: {e}"),
        other => other.to_string(),
    }
}
