use std::f64::consts::SQRT_2;

use qes_core::expr::{Expression, ParameterBindings};
use qes_core::numeric::{
    count_nodes, discretize, lowest_eigenvalues, norm_growth_probe, schrodinger_residual, Grid,
    ProbeVerdict,
};
use qes_core::seeds::{self, ClosedForm, SeedInstance};
use qes_core::susy::{validate_seed, Branch, SampledFunction, SusyModel};

fn params(pairs: &[(&str, f64)]) -> ParameterBindings {
    pairs.iter().copied().collect()
}

fn builtin(name: &str, pairs: &[(&str, f64)]) -> (SeedInstance, SusyModel) {
    let inst = seeds::instantiate(name, &params(pairs), None).unwrap();
    let model = inst.model();
    (inst, model)
}

fn two_levels(model: &SusyModel, grid: &Grid) -> (f64, f64) {
    let op = discretize(|x| model.potential(Branch::Minus, x).unwrap(), grid).unwrap();
    let s = lowest_eigenvalues(&op, 2, 1e-10).unwrap();
    (s.eigenvalues[0], s.eigenvalues[1])
}

#[test]
fn shifted_sinh_zero_and_slope() {
    let (inst, _) = builtin("razavy", &[("A", 1.0), ("alpha", 2.0), ("x0", 0.3)]);
    assert!((inst.seed.x0() - 0.3).abs() < 1e-12);
    let s0 = 2.0 * 0.6f64.cosh();
    assert!((inst.seed.s0() - s0).abs() < 1e-12);
    assert!((s0 - 2.3709).abs() < 1e-4);
}

#[test]
fn level_spacings() {
    let (_, m) = builtin("razavy", &[("A", 1.0), ("alpha", 2.0), ("x0", 0.0)]);
    assert!((m.epsilon() - 1.0).abs() < 1e-14);
    let (_, m) = builtin("sextic", &[("a", 2.0), ("b", 1.0)]);
    assert_eq!(m.epsilon(), 1.0);
    let (_, m) = builtin("algebraic-sqrt", &[("A", 3.0), ("b", 1.0)]);
    assert!((m.epsilon() - 1.5).abs() < 1e-14);
}

#[test]
fn symmetric_razavy_superpotential() {
    let (_, m) = builtin("razavy", &[("A", 1.0), ("alpha", 2.0), ("x0", 0.0)]);
    for i in 0..=160 {
        let x = -4.0 + 0.05 * i as f64;
        let (w, w1) = m.superpotentials(x).unwrap();
        let expected = 0.5 * ((2.0 * x).sinh() - 2.0 * x.tanh());
        assert!((w - expected).abs() <= 1e-12 * (1.0 + expected.abs()), "x = {x}");
        assert!((w1 - 0.5 * ((2.0 * x).sinh() + 2.0 * x.tanh())).abs() <= 1e-12 * (1.0 + w1.abs()));
    }
    assert!(m.potential(Branch::Minus, 0.0).unwrap().abs() < 1e-15);
    for x in [0.3, 1.1, 2.7, 5.0] {
        let (l, r) = (m.potential(Branch::Minus, -x).unwrap(), m.potential(Branch::Minus, x).unwrap());
        assert!((l - r).abs() <= 1e-12 * (1.0 + r.abs()));
    }
}

#[test]
fn difference_of_superpotentials() {
    for e in seeds::catalog() {
        let (inst, m) = builtin(e.name, &[]);
        let (x0, rr) = (inst.seed.x0(), inst.seed.reg_radius());
        let eps = m.epsilon();
        let d1 = inst.seed.d1();
        for x in Grid::new(-5.0, 5.0, 401).unwrap().points() {
            if (x - x0).abs() <= rr {
                continue;
            }
            let p = m.at(x).unwrap();
            let expected = (d1.eval(x).unwrap() - 2.0 * eps) / p.wplus;
            assert!((p.w1 - p.w - expected).abs() <= 1e-10 * (1.0 + expected.abs()), "{} x = {x}", e.name);
        }
    }
}

#[test]
fn partner_relation_and_sign_condition() {
    for e in seeds::catalog() {
        let (inst, m) = builtin(e.name, &[]);
        for x in Grid::new(-3.0, 3.0, 301).unwrap().points() {
            let p = m.at(x).unwrap();
            let gap = p.potential(Branch::Plus) - p.potential_w1() - m.epsilon();
            assert!(gap.abs() <= 1e-9 * p.wplus.powi(2).max(1.0), "{} x = {x}", e.name);
        }
        let (a, b) = inst.seed.interval();
        let (wa, w1a) = m.superpotentials(a).unwrap();
        let (wb, w1b) = m.superpotentials(b).unwrap();
        assert!(wa < 0.0 && w1a < 0.0 && wb > 0.0 && w1b > 0.0, "{}", e.name);
    }
}

#[test]
fn potential_oracle_agreement() {
    for e in seeds::catalog() {
        let (inst, m) = builtin(e.name, &[]);
        let (a, b) = e.default_interval;
        let dev = seeds::potential_deviation(&inst, &m, &Grid::new(a, b, 4001).unwrap()).unwrap();
        assert!(dev <= 1e-10, "{}: {dev:e}", e.name);
    }
    // off-default parameters, including an asymmetric shift and b < 0 for the ratio seed
    for (name, p) in [
        ("razavy", &[("A", 0.6), ("alpha", 1.5), ("x0", -0.8)][..]),
        ("hyperbolic-ratio", &[("A", 1.2), ("alpha", 0.7), ("b", -0.4), ("c", 1.5)][..]),
        ("sextic", &[("a", 0.5), ("b", 3.0)][..]),
        ("algebraic-sqrt", &[("A", 0.5), ("b", 2.0)][..]),
    ] {
        let (inst, m) = builtin(name, p);
        let dev = seeds::potential_deviation(&inst, &m, &Grid::new(-5.0, 5.0, 1001).unwrap()).unwrap();
        assert!(dev <= 1e-10, "{name}: {dev:e}");
    }
}

#[test]
fn wavefunction_oracle_agreement() {
    for e in seeds::catalog() {
        let (inst, m) = builtin(e.name, &[]);
        let (a, b) = e.default_interval;
        // the wide algebraic-sqrt box needs the finer spacing for 1e-8
        let n = if e.name == "algebraic-sqrt" { 8001 } else { 4001 };
        let table = m.wavefunctions(&Grid::new(a, b, n).unwrap()).unwrap();
        for kind in [ClosedForm::Psi0, ClosedForm::Psi1] {
            let dev = seeds::wavefunction_deviation(&inst, &table, kind).unwrap();
            assert!(dev <= 1e-8, "{} {kind}: {dev:e}", e.name);
        }
        assert_eq!(count_nodes(&table.psi0), 0);
        assert_eq!(count_nodes(&table.psi1), 1);
        assert!(table.psi0.iter().all(|v| *v >= 0.0));
    }
}

#[test]
fn schrodinger_residuals_of_analytic_states() {
    for e in seeds::catalog() {
        let (_, m) = builtin(e.name, &[]);
        let (a, b) = e.default_interval;
        let grid = Grid::new(a, b, 8001).unwrap();
        let t = m.wavefunctions(&grid).unwrap();
        let v = |x: f64| m.potential(Branch::Minus, x).unwrap();
        let r0 = schrodinger_residual(v, &t.psi0, 0.0, &grid);
        let r1 = schrodinger_residual(v, &t.psi1, m.epsilon(), &grid);
        assert!(r0 <= 5e-6 && r1 <= 5e-6, "{}: {r0:e} {r1:e}", e.name);
    }
}

#[test]
fn b_minus_annihilates_ground_state() {
    let (_, m) = builtin("sextic", &[]);
    let grid = Grid::new(-6.0, 6.0, 2401).unwrap();
    let t = m.wavefunctions(&grid).unwrap();
    let f = SampledFunction { grid: &grid, values: &t.psi0, derivative: None };
    let out = m.apply_b_minus_sampled(&f).unwrap();
    let peak = t.psi0.iter().fold(0.0f64, |a, v| a.max(*v));
    assert!(out[3..out.len() - 3].iter().all(|v| v.abs() <= 1e-7 * peak));
    let w = m.superpotentials(0.4).unwrap().0;
    assert!((m.apply_b_plus(0.4, 1.0, 0.0).unwrap() - w / SQRT_2).abs() < 1e-15);
}

#[test]
fn sextic_levels_do_not_depend_on_b() {
    let grid = Grid::new(-8.0, 8.0, 4001).unwrap();
    let gaps: Vec<f64> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&b| {
            let (_, m) = builtin("sextic", &[("a", 2.0), ("b", b)]);
            let (e0, e1) = two_levels(&m, &grid);
            e1 - e0
        })
        .collect();
    for g in &gaps {
        assert!((g - 1.0).abs() < 1e-4, "{gaps:?}");
    }
}

#[test]
fn linear_seed_is_the_oscillator() {
    let e: Expression = "a*x + b*x^3".parse().unwrap();
    let seed = validate_seed(&e, &params(&[("a", 2.0), ("b", 0.0)]), (-8.0, 8.0)).unwrap();
    let m = SusyModel::new(seed);
    for x in Grid::new(-8.0, 8.0, 801).unwrap().points() {
        let v = m.potential(Branch::Minus, x).unwrap();
        assert!((v - (0.5 * x * x - 0.5)).abs() <= 1e-12, "x = {x}");
    }
}

#[test]
fn ratio_seed_tends_to_razavy() {
    // c -> 0: W₊ -> (A/b)·sinh(αx), the razavy seed with amplitude A/b and x0 = 0
    let (_, m) = builtin("hyperbolic-ratio", &[("A", 2.0), ("alpha", 1.0), ("b", 1.0), ("c", 1e-6)]);
    let razavy = seeds::lookup("razavy").unwrap();
    let p = params(&[("A", 2.0), ("alpha", 1.0), ("x0", 0.0)]);
    for x in Grid::new(-4.0, 4.0, 201).unwrap().points() {
        let v = m.potential(Branch::Minus, x).unwrap();
        let r = seeds::closed_form_reference(razavy, ClosedForm::Potential, &p, x).unwrap();
        assert!((v - r).abs() <= 1e-4 * (1.0 + r.abs()), "x = {x}: {v} vs {r}");
    }
}

#[test]
fn excited_state_probe_follows_rule() {
    for (a, expected) in [(3.0, ProbeVerdict::Converged), (0.5, ProbeVerdict::Diverging)] {
        let (inst, m) = builtin("algebraic-sqrt", &[("A", a), ("b", 1.0)]);
        let base = Grid::new(-60.0, 60.0, 4001).unwrap();
        let verdict =
            norm_growth_probe(|g: &Grid| m.raw_wavefunctions(g).map(|(_, p1)| p1), &base, 2.0, 3).unwrap();
        assert_eq!(verdict, expected, "A = {a}");
        let ground = norm_growth_probe(|g: &Grid| m.raw_wavefunctions(g).map(|(p0, _)| p0), &base, 2.0, 3).unwrap();
        assert_eq!(ground, ProbeVerdict::Converged);
        let rule = inst.normalizability().unwrap();
        assert_eq!(rule == seeds::Normalizability::BothStates, expected == ProbeVerdict::Converged);
    }
}
