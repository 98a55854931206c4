//! Built-in seed families with their closed-form potentials, wavefunctions and level
//! spacings, used as oracles for the generic construction.

use std::fmt;

use thiserror::Error;

use crate::expr::{ExprError, Expression, ParameterBindings};
use crate::numeric::Grid;
use crate::susy::{validate_seed, Branch, SeedFunction, SusyError, SusyModel, WavefunctionTable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeedError {
    #[error("unknown seed `{0}` (known: razavy, hyperbolic-ratio, sextic, algebraic-sqrt)")]
    UnknownSeed(String),
    #[error("seed `{seed}` has no parameter `{name}`")]
    UnknownParameter { seed: &'static str, name: String },
    #[error("seed `{seed}` requires {predicate}")]
    ConstraintViolation {
        seed: &'static str,
        predicate: &'static str,
    },
    #[error("seed `{seed}` has no closed form for {kind}")]
    MissingClosedForm { seed: &'static str, kind: ClosedForm },
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Susy(#[from] SusyError),
}

pub type Result<T> = std::result::Result<T, SeedError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosedForm {
    Potential,
    Psi0,
    Psi1,
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClosedForm::Potential => "V",
            ClosedForm::Psi0 => "psi0",
            ClosedForm::Psi1 => "psi1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalizability {
    BothStates,
    GroundOnly,
}

impl fmt::Display for Normalizability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalizability::BothStates => "both-states",
            Normalizability::GroundOnly => "ground-only",
        })
    }
}

/// A parameter inequality `expr > 0`, reported by its label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraint {
    pub label: &'static str,
    pub positive: &'static str,
}

impl Constraint {
    pub fn holds(&self, params: &ParameterBindings) -> Result<bool> {
        let e = parse_static(self.positive);
        Ok(e.evaluate(0.0, params)? > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedCatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub wplus_text: &'static str,
    pub param_names: &'static [&'static str],
    pub constraints: &'static [Constraint],
    pub potential_text: Option<&'static str>,
    pub psi0_text: Option<&'static str>,
    pub psi1_text: Option<&'static str>,
    pub epsilon_text: &'static str,
    /// `expr > 0` means the excited state is square integrable; `None` means always.
    pub excited_normalizable: Option<Constraint>,
    pub default_interval: (f64, f64),
    /// Grid size at which the default verification meets its tolerances.
    pub default_points: usize,
    pub default_params: &'static [(&'static str, f64)],
}

fn parse_static(text: &str) -> Expression {
    text.parse()
        .unwrap_or_else(|e| panic!("catalog expression `{text}` does not parse: {e}"))
}

impl SeedCatalogEntry {
    pub fn wplus(&self) -> Expression {
        parse_static(self.wplus_text)
    }

    pub fn epsilon_formula(&self) -> Expression {
        parse_static(self.epsilon_text)
    }

    pub fn defaults(&self) -> ParameterBindings {
        self.default_params.iter().copied().collect()
    }

    pub fn closed_form(&self, kind: ClosedForm) -> Option<Expression> {
        let text = match kind {
            ClosedForm::Potential => self.potential_text,
            ClosedForm::Psi0 => self.psi0_text,
            ClosedForm::Psi1 => self.psi1_text,
        };
        text.map(parse_static)
    }

    /// Defaults overridden by `params`; names outside the family are rejected.
    pub fn resolve_params(&self, params: &ParameterBindings) -> Result<ParameterBindings> {
        if let Some((name, _)) = params.iter().find(|(n, _)| !self.param_names.contains(n)) {
            return Err(SeedError::UnknownParameter {
                seed: self.name,
                name: name.to_string(),
            });
        }
        Ok(self.defaults().merged(params))
    }

    pub fn check_constraints(&self, params: &ParameterBindings) -> Result<()> {
        for c in self.constraints {
            if !c.holds(params)? {
                return Err(SeedError::ConstraintViolation {
                    seed: self.name,
                    predicate: c.label,
                });
            }
        }
        Ok(())
    }
}

const RAZAVY: SeedCatalogEntry = SeedCatalogEntry {
    name: "razavy",
    description: "shifted sinh; asymmetric Razavy-type double well",
    wplus_text: "A*(sinh(alpha*x) - sinh(alpha*x0))",
    param_names: &["A", "alpha", "x0"],
    constraints: &[
        Constraint { label: "A>0", positive: "A" },
        Constraint { label: "alpha>0", positive: "alpha" },
    ],
    potential_text: Some(
        "0.5*(0.25*A^2*(sinh(alpha*x) - sinh(alpha*x0))^2 - A*alpha*cosh(alpha*x) \
         + 0.5*A*alpha*cosh(alpha*x0) + alpha^2/4)",
    ),
    psi0_text: Some(
        "cosh(alpha/2*(x + x0))*exp(-A/(2*alpha)*cosh(alpha*x) + A/2*sinh(alpha*x0)*x)",
    ),
    psi1_text: Some(
        "sinh(alpha/2*(x - x0))*exp(-A/(2*alpha)*cosh(alpha*x) + A/2*sinh(alpha*x0)*x)",
    ),
    epsilon_text: "0.5*alpha*A*cosh(alpha*x0)",
    excited_normalizable: None,
    default_interval: (-8.0, 8.0),
    default_points: 4001,
    default_params: &[("A", 1.0), ("alpha", 2.0), ("x0", 0.3)],
};

const HYPERBOLIC_RATIO: SeedCatalogEntry = SeedCatalogEntry {
    name: "hyperbolic-ratio",
    description: "sinh over b + c cosh; reduces to razavy as c -> 0",
    wplus_text: "A*sinh(alpha*x)/(b + c*cosh(alpha*x))",
    param_names: &["A", "alpha", "b", "c"],
    constraints: &[
        Constraint { label: "A>0", positive: "A" },
        Constraint { label: "alpha>0", positive: "alpha" },
        Constraint { label: "c>0", positive: "c" },
        Constraint { label: "b+c>0", positive: "b + c" },
    ],
    potential_text: Some(
        "1/(8*c^2)*((b^2 - c^2)*(A + alpha*c)*(A + 3*alpha*c)/(b + c*cosh(alpha*x))^2 \
         - 2*b*(A + alpha*c)^2/(b + c*cosh(alpha*x)) \
         + alpha^2*b*c^3/(b + c)^2/cosh(alpha*x/2)^2 \
         + (alpha*c^2 + A*(b + c))^2/(b + c)^2)",
    ),
    psi0_text: Some(
        "cosh(alpha*x/2)^(b/(b + c))*(b + c*cosh(alpha*x))^(-1/2 - A/(2*alpha*c))",
    ),
    psi1_text: Some(
        "sinh(alpha*x)*cosh(alpha*x/2)^(-b/(b + c))*(b + c*cosh(alpha*x))^(-1/2 - A/(2*alpha*c))",
    ),
    epsilon_text: "alpha*A/(2*(b + c))",
    excited_normalizable: Some(Constraint {
        label: "c/(b+c)<A/(alpha*c)",
        positive: "A/(alpha*c) - c/(b + c)",
    }),
    default_interval: (-40.0, 40.0),
    default_points: 4001,
    default_params: &[("A", 2.0), ("alpha", 1.0), ("b", 1.0), ("c", 1.0)],
};

const SEXTIC: SeedCatalogEntry = SeedCatalogEntry {
    name: "sextic",
    description: "odd cubic; sextic potential with b-independent levels",
    wplus_text: "a*x + b*x^3",
    param_names: &["a", "b"],
    constraints: &[
        Constraint { label: "a>0", positive: "a" },
        Constraint { label: "b>0", positive: "b" },
    ],
    potential_text: Some(
        "(a^2 - 12*b)*x^2/8 + a*b*x^4/4 + b^2*x^6/8 + 3*a*b/(8*(a + b*x^2)^2) \
         + 3*b/(8*(a + b*x^2)) - a/4",
    ),
    psi0_text: Some("(a + b*x^2)^(3/4)*exp(-x^2*(2*a + b*x^2)/8)"),
    psi1_text: Some("x*(a + b*x^2)^(1/4)*exp(-x^2*(2*a + b*x^2)/8)"),
    epsilon_text: "a/2",
    excited_normalizable: None,
    default_interval: (-8.0, 8.0),
    default_points: 4001,
    default_params: &[("a", 2.0), ("b", 1.0)],
};

const ALGEBRAIC_SQRT: SeedCatalogEntry = SeedCatalogEntry {
    name: "algebraic-sqrt",
    description: "saturating x/sqrt(b^2+x^2); finite-depth well",
    wplus_text: "A*x/sqrt(b^2 + x^2)",
    param_names: &["A", "b"],
    constraints: &[
        Constraint { label: "A>0", positive: "A" },
        Constraint { label: "b>0", positive: "b" },
    ],
    potential_text: Some(
        "(1 - A^2*b^2)/(8*(b^2 + x^2)) - A*b^2/(2*(b^2 + x^2)^(3/2)) \
         - 5*b^2/(8*(b^2 + x^2)^2) + (1 + A*b)^2/(8*b^2)",
    ),
    psi0_text: Some("(1 + b/sqrt(b^2 + x^2))^(1/2)*exp(-sqrt(b^2 + x^2)*(1 + A*b)/(2*b))"),
    psi1_text: Some(
        "x/sqrt(b^2 + x^2)*(1 + b/sqrt(b^2 + x^2))^(-1/2)*exp(-sqrt(b^2 + x^2)*(-1 + A*b)/(2*b))",
    ),
    epsilon_text: "A/(2*b)",
    excited_normalizable: Some(Constraint {
        label: "A*b>1",
        positive: "A*b - 1",
    }),
    default_interval: (-60.0, 60.0),
    default_points: 8001,
    default_params: &[("A", 3.0), ("b", 1.0)],
};

static CATALOG: [SeedCatalogEntry; 4] = [RAZAVY, HYPERBOLIC_RATIO, SEXTIC, ALGEBRAIC_SQRT];

pub fn catalog() -> &'static [SeedCatalogEntry] {
    &CATALOG
}

pub fn lookup(name: &str) -> Result<&'static SeedCatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| SeedError::UnknownSeed(name.to_string()))
}

/// A validated catalog seed with its resolved parameters.
#[derive(Debug, Clone)]
pub struct SeedInstance {
    pub entry: &'static SeedCatalogEntry,
    pub params: ParameterBindings,
    pub seed: SeedFunction,
}

impl SeedInstance {
    pub fn model(&self) -> SusyModel {
        SusyModel::new(self.seed.clone())
    }

    pub fn closed_form(&self, kind: ClosedForm, x: f64) -> Result<f64> {
        closed_form_reference(self.entry, kind, &self.params, x)
    }

    pub fn epsilon_formula(&self) -> Result<f64> {
        Ok(self.entry.epsilon_formula().evaluate(0.0, &self.params)?)
    }

    pub fn normalizability(&self) -> Result<Normalizability> {
        normalizability(self.entry, &self.params)
    }
}

/// Resolves parameters against the family defaults, checks the family constraints and
/// validates the seed on `interval` (the family default when `None`).
pub fn instantiate(
    name: &str,
    params: &ParameterBindings,
    interval: Option<(f64, f64)>,
) -> Result<SeedInstance> {
    let entry = lookup(name)?;
    let params = entry.resolve_params(params)?;
    entry.check_constraints(&params)?;
    let seed = validate_seed(
        &entry.wplus(),
        &params,
        interval.unwrap_or(entry.default_interval),
    )?;
    Ok(SeedInstance {
        entry,
        params,
        seed,
    })
}

/// Evaluates a printed closed form (wavefunctions unnormalized) at `x`.
pub fn closed_form_reference(
    entry: &SeedCatalogEntry,
    kind: ClosedForm,
    params: &ParameterBindings,
    x: f64,
) -> Result<f64> {
    let e = entry.closed_form(kind).ok_or(SeedError::MissingClosedForm {
        seed: entry.name,
        kind,
    })?;
    Ok(e.evaluate(x, params)?)
}

pub fn normalizability(entry: &SeedCatalogEntry, params: &ParameterBindings) -> Result<Normalizability> {
    match entry.excited_normalizable {
        Some(rule) if !rule.holds(params)? => Ok(Normalizability::GroundOnly),
        _ => Ok(Normalizability::BothStates),
    }
}

/// `max |W₁(x) − αb/(2(b+c))·tanh(αx/2)|` over 1000 points of the default interval, for the
/// hyperbolic-ratio family. It vanishes when `A = αc`.
pub fn ces_reduction_check(params: &ParameterBindings) -> Result<f64> {
    let inst = instantiate(HYPERBOLIC_RATIO.name, params, None)?;
    let model = inst.model();
    let p = |n: &str| inst.params.get(n).unwrap_or(f64::NAN);
    let (alpha, b, c) = (p("alpha"), p("b"), p("c"));
    let grid = Grid::new(inst.seed.interval().0, inst.seed.interval().1, 1000).map_err(SusyError::from)?;
    let mut worst: f64 = 0.0;
    for x in grid.points() {
        let (_, w1) = model.superpotentials(x)?;
        let reduced = alpha * b / (2.0 * (b + c)) * (0.5 * alpha * x).tanh();
        worst = worst.max((w1 - reduced).abs());
    }
    Ok(worst)
}

/// `max |V₋(x) − V_closed(x)| / (1 + |V_closed(x)|)` over `grid`.
pub fn potential_deviation(inst: &SeedInstance, model: &SusyModel, grid: &Grid) -> Result<f64> {
    let reference = inst
        .entry
        .closed_form(ClosedForm::Potential)
        .ok_or(SeedError::MissingClosedForm {
            seed: inst.entry.name,
            kind: ClosedForm::Potential,
        })?;
    let mut worst: f64 = 0.0;
    for x in grid.points() {
        let v = model.potential(Branch::Minus, x)?;
        let r = reference.evaluate(x, &inst.params)?;
        worst = worst.max((v - r).abs() / (1.0 + r.abs()));
    }
    Ok(worst)
}

/// Largest relative deviation between a normalized table row and the printed closed form
/// normalized on the same grid, over points where `|ψ| > 1e-6·max|ψ|`.
pub fn wavefunction_deviation(inst: &SeedInstance, table: &WavefunctionTable, kind: ClosedForm) -> Result<f64> {
    let row = match kind {
        ClosedForm::Psi0 => &table.psi0,
        ClosedForm::Psi1 => &table.psi1,
        ClosedForm::Potential => {
            return Err(SeedError::MissingClosedForm {
                seed: inst.entry.name,
                kind,
            })
        }
    };
    let grid = &table.grid;
    let mut reference = Vec::with_capacity(grid.len());
    for x in grid.points() {
        reference.push(inst.closed_form(kind, x)?);
    }
    let h = grid.spacing();
    let norm = (reference.iter().map(|v| v * v).sum::<f64>() * h).sqrt();
    let overlap: f64 = reference.iter().zip(row).map(|(r, p)| r * p).sum();
    let scale = overlap.signum() / norm;
    reference.iter_mut().for_each(|v| *v *= scale);

    let peak = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(reference
        .iter()
        .zip(row)
        .filter(|(r, _)| r.abs() > 1e-6 * peak)
        .map(|(r, p)| (p - r).abs() / r.abs())
        .fold(0.0, f64::max))
}
