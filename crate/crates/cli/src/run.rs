//! Turning a [`RunConfig`] into a validated model and emitting the data tables.

use std::fmt::Write as _;

use qes_core::expr::{Expression, ParameterBindings};
use qes_core::numeric::Grid;
use qes_core::seeds::{self, SeedInstance};
use qes_core::susy::{validate_seed, Branch, SusyModel, WavefunctionTable};

use crate::config::{RunConfig, SeedSource, CUSTOM_INTERVAL, CUSTOM_POINTS};
use crate::{fmt_float, CliError};

pub const CSV_HEADER: &str = "x,W,W1,V_minus,V_plus,psi0,psi1";

/// A validated seed, its model and the working grid.
#[derive(Debug, Clone)]
pub struct Prepared {
    /// Catalog name, or `custom`.
    pub label: String,
    pub wplus_text: String,
    pub instance: Option<SeedInstance>,
    pub model: SusyModel,
    pub grid: Grid,
}

impl Prepared {
    pub fn params(&self) -> &ParameterBindings {
        self.model.seed().bindings()
    }
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    match &cfg.source {
        SeedSource::Builtin(name) => {
            let inst = seeds::instantiate(name, &cfg.params, cfg.interval)?;
            let (a, b) = inst.seed.interval();
            let n = cfg.points.unwrap_or(inst.entry.default_points);
            Ok(Prepared {
                label: inst.entry.name.to_string(),
                wplus_text: inst.entry.wplus_text.to_string(),
                model: inst.model(),
                grid: grid(a, b, n)?,
                instance: Some(inst),
            })
        }
        SeedSource::Custom(text) => {
            let wplus: Expression = text.parse()?;
            let interval = cfg.interval.unwrap_or(CUSTOM_INTERVAL);
            let seed = validate_seed(&wplus, &cfg.params, interval)?;
            Ok(Prepared {
                label: "custom".to_string(),
                wplus_text: text.trim().to_string(),
                model: SusyModel::new(seed),
                grid: grid(interval.0, interval.1, cfg.points.unwrap_or(CUSTOM_POINTS))?,
                instance: None,
            })
        }
    }
}

fn grid(a: f64, b: f64, n: usize) -> Result<Grid, CliError> {
    Grid::new(a, b, n).map_err(|e| CliError::Config(e.to_string()))
}

/// CSV text and metadata text for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub csv: String,
    pub metadata: String,
}

pub fn generate(prepared: &Prepared) -> Result<Generated, CliError> {
    let points = prepared.model.tabulate(&prepared.grid)?;
    let table = prepared.model.wavefunctions(&prepared.grid)?;

    let mut csv = String::with_capacity(points.len() * 170);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for (i, p) in points.iter().enumerate() {
        let row = [
            p.x,
            p.w,
            p.w1,
            p.potential(Branch::Minus),
            p.potential(Branch::Plus),
            table.psi0[i],
            table.psi1[i],
        ];
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                csv.push(',');
            }
            // 17 significant digits
            write!(csv, "{v:.16e}").unwrap();
        }
        csv.push('\n');
    }
    Ok(Generated {
        csv,
        metadata: metadata(prepared, &table),
    })
}

pub fn metadata(prepared: &Prepared, table: &WavefunctionTable) -> String {
    let seed = prepared.model.seed();
    let (a, b) = (prepared.grid.xmin(), prepared.grid.xmax());
    let lines = [
        ("seed", prepared.label.clone()),
        ("wplus", prepared.wplus_text.clone()),
        ("params", prepared.params().to_string()),
        ("x0", fmt_float(seed.x0())),
        ("epsilon", fmt_float(prepared.model.epsilon())),
        ("xmin", fmt_float(a)),
        ("xmax", fmt_float(b)),
        ("n", prepared.grid.len().to_string()),
        ("c0", fmt_float(table.c0())),
        ("c1", fmt_float(table.c1())),
        ("ln_c0", fmt_float(table.log_c0)),
        ("ln_c1", fmt_float(table.log_c1)),
    ];
    lines.iter().map(|(k, v)| format!("{k}={v}\n")).collect()
}
