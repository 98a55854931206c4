//! The verification suite behind `qes verify`.

use std::fmt::Write as _;

use qes_core::numeric::{
    count_nodes, discretize, lowest_eigenvalues, norm_growth_probe, schrodinger_residual, Grid,
    ProbeVerdict,
};
use qes_core::seeds::{self, ClosedForm, Normalizability};
use qes_core::susy::{Branch, SusyModel, WavefunctionTable};

use crate::config::{ReportFormat, RunConfig};
use crate::fmt_float;
use crate::run::Prepared;

pub const RICCATI_TOL: f64 = 1e-9;
pub const POTENTIAL_ORACLE_TOL: f64 = 1e-10;
pub const WAVEFUNCTION_ORACLE_TOL: f64 = 1e-8;
pub const EPSILON_FORMULA_TOL: f64 = 1e-12;
pub const BOX_EDGE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl Check {
    /// Passes when `value <= tol`.
    fn at_most(name: &'static str, value: f64, tol: f64) -> Check {
        Check {
            name,
            value,
            tol,
            pass: value <= tol,
            note: None,
        }
    }

    fn failed(name: &'static str, tol: f64, reason: impl ToString) -> Check {
        Check {
            name,
            value: f64::NAN,
            tol,
            pass: false,
            note: Some(reason.to_string()),
        }
    }

    fn skipped(name: &'static str, tol: f64, reason: &str) -> Check {
        Check {
            name,
            value: f64::NAN,
            tol,
            pass: true,
            note: Some(format!("skipped: {reason}")),
        }
    }

    fn from_result(name: &'static str, tol: f64, r: Result<f64, String>) -> Check {
        match r {
            Ok(v) => Check::at_most(name, v, tol),
            Err(e) => Check::failed(name, tol, e),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub seed: String,
    pub wplus: String,
    pub params: String,
    pub xmin: f64,
    pub xmax: f64,
    pub n: usize,
    pub x0: f64,
    pub epsilon: f64,
    pub e0: Option<f64>,
    pub e1: Option<f64>,
    pub normalizability: Normalizability,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn overall(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.to_text(),
            ReportFormat::Records => self.to_records(),
        }
    }

    pub fn to_records(&self) -> String {
        let mut out = String::new();
        let opt = |v: Option<f64>| v.map_or("nan".to_string(), fmt_float);
        writeln!(
            out,
            "seed={} params={} x0={} epsilon={} e0={} e1={} xmin={} xmax={} n={} normalizability={}",
            self.seed,
            self.params,
            fmt_float(self.x0),
            fmt_float(self.epsilon),
            opt(self.e0),
            opt(self.e1),
            fmt_float(self.xmin),
            fmt_float(self.xmax),
            self.n,
            self.normalizability
        )
        .unwrap();
        for c in &self.checks {
            write!(
                out,
                "check={} value={} tol={} pass={}",
                c.name,
                fmt_float(c.value),
                fmt_float(c.tol),
                c.pass
            )
            .unwrap();
            if let Some(note) = &c.note {
                write!(out, " note={}", note.replace(char::is_whitespace, "_")).unwrap();
            }
            out.push('\n');
        }
        writeln!(out, "overall={}", if self.overall() { "pass" } else { "fail" }).unwrap();
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let params = if self.params.is_empty() { "none" } else { &self.params };
        writeln!(out, "seed:      {} (W+ = {})", self.seed, self.wplus).unwrap();
        writeln!(out, "params:    {params}").unwrap();
        writeln!(out, "grid:      [{}, {}], n = {}", self.xmin, self.xmax, self.n).unwrap();
        writeln!(out, "x0:        {}", self.x0).unwrap();
        writeln!(out, "epsilon:   {}", self.epsilon).unwrap();
        let level = |v: Option<f64>| v.map_or("unavailable".to_string(), |v| format!("{v:.10}"));
        writeln!(out, "E0 (num):  {}", level(self.e0)).unwrap();
        writeln!(out, "E1 (num):  {}", level(self.e1)).unwrap();
        writeln!(out, "states:    {}", self.normalizability).unwrap();
        writeln!(out).unwrap();
        writeln!(out, "{:<18} {:>12} {:>10}  result", "check", "value", "tol").unwrap();
        for c in &self.checks {
            let result = match (&c.note, c.pass) {
                (Some(n), _) if n.starts_with("skipped") => "skip".to_string(),
                (Some(n), true) => format!("pass ({n})"),
                (Some(n), false) => format!("FAIL ({n})"),
                (None, true) => "pass".to_string(),
                (None, false) => "FAIL".to_string(),
            };
            writeln!(out, "{:<18} {:>12.3e} {:>10.1e}  {result}", c.name, c.value, c.tol).unwrap();
        }
        writeln!(out).unwrap();
        let annotation = match self.normalizability {
            Normalizability::GroundOnly => " (ground-only)",
            Normalizability::BothStates => "",
        };
        let verdict = if self.overall() { "PASS" } else { "FAIL" };
        writeln!(out, "overall:   {verdict}{annotation}").unwrap();
        out
    }
}

fn probe_code(v: &Result<ProbeVerdict, String>) -> f64 {
    match v {
        Ok(ProbeVerdict::Converged) => 0.0,
        Ok(ProbeVerdict::Diverging) => 1.0,
        Err(_) => 2.0,
    }
}

/// Norm-growth probe from a quarter of the run interval out to twice it (same spacing),
/// which keeps far-field derivative evaluations of hyperbolic seeds finite.
fn probe(model: &SusyModel, grid: &Grid, excited: bool) -> Result<ProbeVerdict, String> {
    let base = grid.scaled(0.25).map_err(|e| e.to_string())?;
    norm_growth_probe(
        |g: &Grid| {
            model
                .raw_wavefunctions(g)
                .map(|(p0, p1)| if excited { p1 } else { p0 })
        },
        &base,
        2.0,
        3,
    )
    .map_err(|e| e.to_string())
}

fn edge_ratio(psi: &[f64]) -> f64 {
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let edge = psi[0].abs().max(psi[psi.len() - 1].abs());
    edge / peak
}

fn max_riccati(model: &SusyModel, grid: &Grid) -> Result<f64, String> {
    let x0 = model.seed().x0();
    let mut xs = grid.points();
    xs.extend([x0, x0 - 1e-6, x0 + 1e-6, x0 - 1e-3, x0 + 1e-3]);
    let mut worst: f64 = 0.0;
    for x in xs {
        worst = worst.max(model.scaled_riccati_residual(x).map_err(|e| e.to_string())?);
    }
    Ok(worst)
}

fn spectrum(model: &SusyModel, grid: &Grid) -> Result<Vec<f64>, String> {
    model.tabulate(grid).map_err(|e| e.to_string())?;
    let op = discretize(|x| model.potential(Branch::Minus, x).unwrap_or(f64::NAN), grid)
        .map_err(|e| e.to_string())?;
    Ok(lowest_eigenvalues(&op, 2, 1e-10)
        .map_err(|e| e.to_string())?
        .eigenvalues)
}

/// Runs every check. Failures inside individual checks are recorded, never propagated.
pub fn verify(prepared: &Prepared, cfg: &RunConfig) -> VerificationReport {
    let model = &prepared.model;
    let grid = &prepared.grid;
    let eps = model.epsilon();
    let ground_only = "first excited state not normalizable";

    let probe0 = probe(model, grid, false);
    let probe1 = probe(model, grid, true);
    let rule = match &prepared.instance {
        Some(inst) => inst.normalizability().map_err(|e| e.to_string()),
        None => Ok(match probe1 {
            Ok(ProbeVerdict::Diverging) => Normalizability::GroundOnly,
            _ => Normalizability::BothStates,
        }),
    };
    let normalizability = rule.clone().unwrap_or(Normalizability::BothStates);
    let both = normalizability == Normalizability::BothStates;

    let mut checks = Vec::new();

    if let Some(inst) = &prepared.instance {
        let r = inst
            .epsilon_formula()
            .map(|f| (f - eps).abs() / eps)
            .map_err(|e| e.to_string());
        checks.push(Check::from_result("epsilon_formula", EPSILON_FORMULA_TOL, r));
    }

    let levels = spectrum(model, grid);
    let (e0, e1) = match &levels {
        Ok(e) => (Some(e[0]), Some(e[1])),
        Err(_) => (None, None),
    };
    checks.push(Check::from_result(
        "e0",
        cfg.eigen_tol,
        levels.clone().map(|e| e[0].abs()),
    ));
    checks.push(if both {
        Check::from_result("e1", cfg.eigen_tol, levels.map(|e| (e[1] - eps).abs()))
    } else {
        Check::skipped("e1", cfg.eigen_tol, ground_only)
    });

    checks.push(Check::from_result("riccati", RICCATI_TOL, max_riccati(model, grid)));

    let table: Result<WavefunctionTable, String> = model.wavefunctions(grid).map_err(|e| e.to_string());
    let v = |x: f64| model.potential(Branch::Minus, x).unwrap_or(f64::NAN);
    checks.push(Check::from_result(
        "psi0_residual",
        cfg.residual_tol,
        table
            .as_ref()
            .map(|t| schrodinger_residual(v, &t.psi0, 0.0, grid))
            .map_err(Clone::clone),
    ));
    checks.push(if both {
        Check::from_result(
            "psi1_residual",
            cfg.residual_tol,
            table
                .as_ref()
                .map(|t| schrodinger_residual(v, &t.psi1, eps, grid))
                .map_err(Clone::clone),
        )
    } else {
        Check::skipped("psi1_residual", cfg.residual_tol, ground_only)
    });

    for (name, expected) in [("psi0_nodes", 0usize), ("psi1_nodes", 1)] {
        checks.push(match &table {
            Ok(t) => {
                let nodes = count_nodes(if expected == 0 { &t.psi0 } else { &t.psi1 });
                Check {
                    name,
                    value: nodes as f64,
                    tol: 0.0,
                    pass: nodes == expected,
                    note: None,
                }
            }
            Err(e) => Check::failed(name, 0.0, e),
        });
    }

    checks.push(match sign_violations(model, grid) {
        Ok((w, w1)) if both => Check::at_most("sign_condition", (w + w1) as f64, 0.0),
        Ok((w, w1)) => Check {
            note: Some(format!("W only; W1 violations {w1}")),
            ..Check::at_most("sign_condition", w as f64, 0.0)
        },
        Err(e) => Check::failed("sign_condition", 0.0, e),
    });

    checks.push(Check {
        name: "psi0_probe",
        value: probe_code(&probe0),
        tol: 0.0,
        pass: matches!(probe0, Ok(ProbeVerdict::Converged)),
        note: probe0.as_ref().err().cloned(),
    });
    let probe1_pass = match (&prepared.instance, &probe1, &rule) {
        (_, Err(_), _) | (_, _, Err(_)) => false,
        (Some(_), Ok(verdict), Ok(rule)) => {
            (*verdict == ProbeVerdict::Converged) == (*rule == Normalizability::BothStates)
        }
        (None, Ok(_), Ok(_)) => true,
    };
    checks.push(Check {
        name: "psi1_probe",
        value: probe_code(&probe1),
        tol: 0.0,
        pass: probe1_pass,
        note: match (&probe1, &rule) {
            (Err(e), _) | (_, Err(e)) => Some(e.clone()),
            (Ok(v), Ok(r)) if prepared.instance.is_some() => Some(format!("probe {v:?}, rule {r}")),
            (Ok(v), _) => Some(format!("probe {v:?}")),
        },
    });

    checks.push(Check::from_result(
        "box_edge",
        BOX_EDGE_TOL,
        table
            .as_ref()
            .map(|t| {
                let e0 = edge_ratio(&t.psi0);
                if both {
                    e0.max(edge_ratio(&t.psi1))
                } else {
                    e0
                }
            })
            .map_err(Clone::clone),
    ));

    if let Some(inst) = &prepared.instance {
        checks.push(Check::from_result(
            "closed_form_v",
            POTENTIAL_ORACLE_TOL,
            seeds::potential_deviation(inst, model, grid).map_err(|e| e.to_string()),
        ));
        for (name, kind) in [("closed_form_psi0", ClosedForm::Psi0), ("closed_form_psi1", ClosedForm::Psi1)] {
            if kind == ClosedForm::Psi1 && !both {
                checks.push(Check::skipped(name, WAVEFUNCTION_ORACLE_TOL, ground_only));
                continue;
            }
            let r = table
                .as_ref()
                .map_err(Clone::clone)
                .and_then(|t| seeds::wavefunction_deviation(inst, t, kind).map_err(|e| e.to_string()));
            checks.push(Check::from_result(name, WAVEFUNCTION_ORACLE_TOL, r));
        }
    }

    VerificationReport {
        seed: prepared.label.clone(),
        wplus: prepared.wplus_text.clone(),
        params: prepared.params().to_string(),
        xmin: grid.xmin(),
        xmax: grid.xmax(),
        n: grid.len(),
        x0: model.seed().x0(),
        epsilon: eps,
        e0,
        e1,
        normalizability,
        checks,
    }
}

/// Endpoint sign failures `(for W, for W₁)`: each wants a negative value at the left end and
/// a positive one at the right. A W₁ failure is what makes the excited state unnormalizable.
fn sign_violations(model: &SusyModel, grid: &Grid) -> Result<(usize, usize), String> {
    let (wa, w1a) = model.superpotentials(grid.xmin()).map_err(|e| e.to_string())?;
    let (wb, w1b) = model.superpotentials(grid.xmax()).map_err(|e| e.to_string())?;
    let bad = |l: f64, r: f64| usize::from(l >= 0.0) + usize::from(r <= 0.0);
    Ok((bad(wa, wb), bad(w1a, w1b)))
}
