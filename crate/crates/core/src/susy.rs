//! The two-level construction.
//!
//! Given a seed `W₊(x)` with a single simple zero `x₀` and slope `s₀ = W₊′(x₀) > 0`, the
//! level spacing is `ε = s₀/2` and the pair
//!
//! ```text
//! W  = ½ (W₊ − r),   W₁ = ½ (W₊ + r),   r(x) = (W₊′(x) − s₀) / W₊(x)
//! ```
//!
//! is free of poles and satisfies `W² + W′ = W₁² − W₁′ + 2ε`. The Hamiltonian
//! `H₋ = −½ d²/dx² + ½(W² − W′)` then has the ground state `exp(−∫W)` at `E₀ = 0` and the
//! first excited state `W₊ exp(−∫W₁)` at `E₁ = ε`.
//!
//! `r` is a 0/0 ratio at `x₀`. Inside a small radius around `x₀` it is evaluated from the
//! Taylor series of `W₊` instead (third order in `x − x₀`, needing `W₊` up to its fifth
//! derivative), which keeps `W`, `W₁` and the potentials smooth through the zero.

use std::f64::consts::SQRT_2;

use thiserror::Error;

use crate::expr::{ExprError, Expression, ParameterBindings};
use crate::numeric::{self, derivative_7pt, find_zero, Grid, NumericError};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SusyError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("invalid working interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error("W+ has no sign change on [{a}, {b}]")]
    NoZero { a: f64, b: f64 },
    #[error("W+ changes sign {count} times on [{a}, {b}]; exactly one zero is required")]
    MultipleZeros { count: usize, a: f64, b: f64 },
    #[error("W+ slope at its zero x0 = {x0} is {s0}; it must be positive")]
    NonPositiveSlope { x0: f64, s0: f64 },
    #[error("W+ must be negative at the left end and positive at the right end (W+({a}) = {left}, W+({b}) = {right})")]
    SignCondition { a: f64, b: f64, left: f64, right: f64 },
    #[error("zero of W+ not resolved: |W+({x0})| = {residual:e}")]
    ZeroNotResolved { x0: f64, residual: f64 },
    #[error("evaluation failed at x = {x}: {source}")]
    Evaluation { x: f64, source: ExprError },
    #[error("{state} cannot be normalized on this grid")]
    OverflowUnnormalizable { state: &'static str },
    #[error("grid [{xmin}, {xmax}] does not contain x0 = {x0}")]
    GridMissesZero { x0: f64, xmin: f64, xmax: f64 },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

pub type Result<T> = std::result::Result<T, SusyError>;

/// Highest derivative of `W₊` kept on the seed.
const DERIVATIVE_ORDER: usize = 5;

/// A validated seed superpotential `W₊`.
#[derive(Debug, Clone)]
pub struct SeedFunction {
    wplus: Expression,
    bindings: ParameterBindings,
    /// `W₊` with parameters substituted.
    bound: Expression,
    /// `W₊′ … W₊⁽⁵⁾`, bound and simplified.
    derivatives: Vec<Expression>,
    interval: (f64, f64),
    x0: f64,
    /// `W₊⁽ᵏ⁾(x₀)` for `k = 1..=5` at index `k - 1`.
    taylor: [f64; DERIVATIVE_ORDER],
    reg_radius: f64,
}

impl SeedFunction {
    pub fn wplus(&self) -> &Expression {
        &self.wplus
    }

    pub fn bindings(&self) -> &ParameterBindings {
        &self.bindings
    }

    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// `W₊′(x₀)`.
    pub fn s0(&self) -> f64 {
        self.taylor[0]
    }

    pub fn reg_radius(&self) -> f64 {
        self.reg_radius
    }

    /// The `order`-th derivative of `W₊` (bound), for `order` in `1..=5`.
    pub fn derivative(&self, order: usize) -> &Expression {
        &self.derivatives[order - 1]
    }

    pub fn d1(&self) -> &Expression {
        self.derivative(1)
    }

    pub fn d2(&self) -> &Expression {
        self.derivative(2)
    }

    pub fn d3(&self) -> &Expression {
        self.derivative(3)
    }

    /// `W₊⁽ᵏ⁾(x₀)`, `k` in `1..=5`.
    pub fn taylor_coefficient(&self, k: usize) -> f64 {
        self.taylor[k - 1]
    }

    pub fn epsilon(&self) -> f64 {
        epsilon_of(self)
    }

    pub fn eval_wplus(&self, x: f64) -> Result<f64> {
        eval_at(&self.bound, x)
    }

    fn eval_derivative(&self, order: usize, x: f64) -> Result<f64> {
        eval_at(self.derivative(order), x)
    }
}

fn eval_at(e: &Expression, x: f64) -> Result<f64> {
    e.eval(x).map_err(|source| SusyError::Evaluation { x, source })
}

/// Checks every seed requirement and attaches derivatives, `x₀`, `s₀` and the
/// regularization radius.
pub fn validate_seed(
    wplus: &Expression,
    bindings: &ParameterBindings,
    interval: (f64, f64),
) -> Result<SeedFunction> {
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(SusyError::InvalidInterval(a, b));
    }
    let bound = wplus.bind(bindings)?;
    let sample = |x: f64| bound.eval(x).unwrap_or(f64::NAN);

    let x0 = find_zero(sample, a, b, 0.0).map_err(|e| match e {
        NumericError::NoSignChange { .. } => SusyError::NoZero { a, b },
        NumericError::MultipleZeros { count, .. } => SusyError::MultipleZeros { count, a, b },
        NumericError::NonFiniteSample { x, .. } => match bound.eval(x) {
            Err(source) => SusyError::Evaluation { x, source },
            Ok(_) => SusyError::Numeric(e),
        },
        other => SusyError::Numeric(other),
    })?;

    let left = eval_at(&bound, a)?;
    let right = eval_at(&bound, b)?;
    if !(left < 0.0 && right > 0.0) {
        return Err(SusyError::SignCondition { a, b, left, right });
    }

    let mut derivatives = Vec::with_capacity(DERIVATIVE_ORDER);
    let mut d = bound.clone();
    for _ in 0..DERIVATIVE_ORDER {
        d = d.differentiate();
        derivatives.push(d.clone());
    }
    let mut taylor = [0.0; DERIVATIVE_ORDER];
    for (k, slot) in taylor.iter_mut().enumerate() {
        *slot = eval_at(&derivatives[k], x0)?;
    }
    let s0 = taylor[0];
    if !(s0 > 0.0) {
        return Err(SusyError::NonPositiveSlope { x0, s0 });
    }
    let residual = eval_at(&bound, x0)?.abs();
    if residual > 1e-10 * s0.max(1.0) {
        return Err(SusyError::ZeroNotResolved { x0, residual });
    }

    Ok(SeedFunction {
        wplus: wplus.clone(),
        bindings: bindings.clone(),
        bound,
        derivatives,
        interval,
        x0,
        taylor,
        reg_radius: 1e-4 * (x0.abs() + 1.0),
    })
}

/// Level spacing `ε = W₊′(x₀)/2`, the first excited energy of `H₋` (its ground state sits at 0).
pub fn epsilon_of(seed: &SeedFunction) -> f64 {
    0.5 * seed.s0()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Minus,
    Plus,
}

/// Everything the construction defines at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointValues {
    pub x: f64,
    pub wplus: f64,
    pub w: f64,
    pub w1: f64,
    /// `W′`
    pub dw: f64,
    /// `W₁′`
    pub dw1: f64,
}

impl PointValues {
    /// `V∓ = ½(W² ∓ W′)`.
    pub fn potential(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Minus => 0.5 * (self.w * self.w - self.dw),
            Branch::Plus => 0.5 * (self.w * self.w + self.dw),
        }
    }

    /// `½(W₁² − W₁′)`, the partner potential generated by `W₁`.
    pub fn potential_w1(&self) -> f64 {
        0.5 * (self.w1 * self.w1 - self.dw1)
    }
}

/// The constructed model: seed, `ε`, and evaluators for `W`, `W₁`, `V∓`.
#[derive(Debug, Clone)]
pub struct SusyModel {
    seed: SeedFunction,
    epsilon: f64,
    /// Series coefficients of `r` in powers of `x − x₀`.
    ratio_series: [f64; 4],
}

impl SusyModel {
    pub fn new(seed: SeedFunction) -> Self {
        let epsilon = epsilon_of(&seed);
        let ratio_series = ratio_series(&seed.taylor);
        SusyModel {
            seed,
            epsilon,
            ratio_series,
        }
    }

    pub fn seed(&self) -> &SeedFunction {
        &self.seed
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `(r, r′)` with `r = (W₊′ − s₀)/W₊`.
    fn ratio(&self, x: f64, wplus: f64, d1: f64) -> Result<(f64, f64)> {
        let t = x - self.seed.x0;
        if t.abs() < self.seed.reg_radius {
            let [r0, r1, r2, r3] = self.ratio_series;
            let r = r0 + t * (r1 + t * (r2 + t * r3));
            let dr = r1 + t * (2.0 * r2 + t * 3.0 * r3);
            return Ok((r, dr));
        }
        let d2 = self.seed.eval_derivative(2, x)?;
        let r = (d1 - self.seed.s0()) / wplus;
        let dr = (d2 - r * d1) / wplus;
        Ok((r, dr))
    }

    pub fn at(&self, x: f64) -> Result<PointValues> {
        let wplus = self.seed.eval_wplus(x)?;
        let d1 = self.seed.eval_derivative(1, x)?;
        let (r, dr) = self.ratio(x, wplus, d1)?;
        Ok(PointValues {
            x,
            wplus,
            w: 0.5 * (wplus - r),
            w1: 0.5 * (wplus + r),
            dw: 0.5 * (d1 - dr),
            dw1: 0.5 * (d1 + dr),
        })
    }

    /// `(W(x), W₁(x))`.
    pub fn superpotentials(&self, x: f64) -> Result<(f64, f64)> {
        let p = self.at(x)?;
        Ok((p.w, p.w1))
    }

    pub fn potential(&self, branch: Branch, x: f64) -> Result<f64> {
        Ok(self.at(x)?.potential(branch))
    }

    /// `(W² + W′) − (W₁² − W₁′) − 2ε`; zero by construction.
    pub fn riccati_residual(&self, x: f64) -> Result<f64> {
        self.riccati_residual_with_epsilon(x, self.epsilon)
    }

    /// The Riccati residual for an arbitrary level spacing, to show that only `ε = s₀/2` works.
    pub fn riccati_residual_with_epsilon(&self, x: f64, epsilon: f64) -> Result<f64> {
        let p = self.at(x)?;
        Ok((p.w * p.w + p.dw) - (p.w1 * p.w1 - p.dw1) - 2.0 * epsilon)
    }

    /// Riccati residual divided by `max(1, W₊(x)²)`.
    pub fn scaled_riccati_residual(&self, x: f64) -> Result<f64> {
        let p = self.at(x)?;
        let res = (p.w * p.w + p.dw) - (p.w1 * p.w1 - p.dw1) - 2.0 * self.epsilon;
        Ok(res.abs() / (p.wplus * p.wplus).max(1.0))
    }

    pub fn tabulate(&self, grid: &Grid) -> Result<Vec<PointValues>> {
        self.tabulate_with(Execution::default(), grid)
    }

    pub fn tabulate_with(&self, exec: Execution, grid: &Grid) -> Result<Vec<PointValues>> {
        exec.try_map_range(grid.len(), |i| self.at(grid.x(i)))
    }

    /// Unnormalized `exp(−∫_{x₀}^x W)` and `W₊ exp(−∫_{x₀}^x W₁)` on `grid`.
    ///
    /// No rescaling is applied, so values may overflow to infinity on wide grids; this is
    /// what the normalizability probe wants.
    pub fn raw_wavefunctions(&self, grid: &Grid) -> Result<(Vec<f64>, Vec<f64>)> {
        let phases = self.phases(grid)?;
        let psi0 = phases.phi0.iter().map(|p| (-p).exp()).collect();
        let psi1 = phases
            .phi1
            .iter()
            .zip(&phases.wplus)
            .map(|(p, w)| w * (-p).exp())
            .collect();
        Ok((psi0, psi1))
    }

    /// `∫_{x₀}^x W` and `∫_{x₀}^x W₁` on the grid plus the sampled `W₊`.
    fn phases(&self, grid: &Grid) -> Result<Phases> {
        let x0 = self.seed.x0;
        if !grid.contains(x0) {
            return Err(SusyError::GridMissesZero {
                x0,
                xmin: grid.xmin(),
                xmax: grid.xmax(),
            });
        }
        let table = self.tabulate(grid)?;
        let anchor = grid.nearest_index(x0);
        let w: Vec<f64> = table.iter().map(|p| p.w).collect();
        let w1: Vec<f64> = table.iter().map(|p| p.w1).collect();
        let h = grid.spacing();
        let mut phi0 = numeric::cumulative_integral_samples(&w, h, anchor)?;
        let mut phi1 = numeric::cumulative_integral_samples(&w1, h, anchor)?;

        // shift the anchor from the nearest grid point to x0 itself (Simpson on [x0, x_a])
        let xa = grid.x(anchor);
        if xa != x0 {
            let mid = self.at(0.5 * (x0 + xa))?;
            let start = self.at(x0)?;
            let len = (xa - x0) / 6.0;
            let off0 = len * (start.w + 4.0 * mid.w + table[anchor].w);
            let off1 = len * (start.w1 + 4.0 * mid.w1 + table[anchor].w1);
            phi0.iter_mut().for_each(|p| *p += off0);
            phi1.iter_mut().for_each(|p| *p += off1);
        }
        Ok(Phases {
            phi0,
            phi1,
            wplus: table.iter().map(|p| p.wplus).collect(),
        })
    }

    /// Ground and first excited states on `grid`, each with unit discrete L² norm
    /// (`Σ ψ² h = 1`).
    pub fn wavefunctions(&self, grid: &Grid) -> Result<WavefunctionTable> {
        let phases = self.phases(grid)?;
        let h = grid.spacing();

        let shift0 = phases.phi0.iter().map(|p| -p).fold(f64::NEG_INFINITY, f64::max);
        let raw0: Vec<f64> = phases.phi0.iter().map(|p| (-p - shift0).exp()).collect();
        let shift1 = phases.phi1.iter().map(|p| -p).fold(f64::NEG_INFINITY, f64::max);
        let raw1: Vec<f64> = phases
            .phi1
            .iter()
            .zip(&phases.wplus)
            .map(|(p, w)| w * (-p - shift1).exp())
            .collect();

        let (psi0, log_c0) = normalize(raw0, h, shift0, "ground state")?;
        let (psi1, log_c1) = normalize(raw1, h, shift1, "first excited state")?;
        Ok(WavefunctionTable {
            grid: *grid,
            psi0,
            psi1,
            log_c0,
            log_c1,
        })
    }

    /// `B⁺f = (−f′ + W f)/√2` at `x`.
    pub fn apply_b_plus(&self, x: f64, f: f64, df: f64) -> Result<f64> {
        let (w, _) = self.superpotentials(x)?;
        Ok((-df + w * f) / SQRT_2)
    }

    /// `B⁻f = (f′ + W f)/√2` at `x`.
    pub fn apply_b_minus(&self, x: f64, f: f64, df: f64) -> Result<f64> {
        let (w, _) = self.superpotentials(x)?;
        Ok((df + w * f) / SQRT_2)
    }

    /// [`SusyModel::apply_b_plus`] over a sampled function; without an analytic
    /// derivative a sixth-order finite difference is used.
    pub fn apply_b_plus_sampled(&self, f: &SampledFunction<'_>) -> Result<Vec<f64>> {
        self.apply_sampled(f, false)
    }

    pub fn apply_b_minus_sampled(&self, f: &SampledFunction<'_>) -> Result<Vec<f64>> {
        self.apply_sampled(f, true)
    }

    fn apply_sampled(&self, f: &SampledFunction<'_>, minus: bool) -> Result<Vec<f64>> {
        let fd;
        let df = match f.derivative {
            Some(d) => d,
            None => {
                fd = derivative_7pt(f.values, f.grid.spacing());
                &fd
            }
        };
        Execution::default().try_map_range(f.values.len(), |i| {
            let x = f.grid.x(i);
            if minus {
                self.apply_b_minus(x, f.values[i], df[i])
            } else {
                self.apply_b_plus(x, f.values[i], df[i])
            }
        })
    }

    /// Samples of `exp(−∫_{x₀}^x W₁)`, the ground state of the `W₁` partner, shifted so the
    /// largest exponent is zero, together with their analytic derivative `−W₁ f`.
    pub fn partner_ground_state(&self, grid: &Grid) -> Result<(Vec<f64>, Vec<f64>)> {
        let phases = self.phases(grid)?;
        let shift = phases.phi1.iter().map(|p| -p).fold(f64::NEG_INFINITY, f64::max);
        let f: Vec<f64> = phases.phi1.iter().map(|p| (-p - shift).exp()).collect();
        let table = self.tabulate(grid)?;
        let df = f.iter().zip(&table).map(|(v, p)| -p.w1 * v).collect();
        Ok((f, df))
    }
}

struct Phases {
    phi0: Vec<f64>,
    phi1: Vec<f64>,
    wplus: Vec<f64>,
}

fn normalize(
    mut v: Vec<f64>,
    h: f64,
    shift: f64,
    state: &'static str,
) -> Result<(Vec<f64>, f64)> {
    let mass: f64 = v.iter().map(|x| x * x).sum::<f64>() * h;
    if !(mass.is_finite() && mass > 0.0) {
        return Err(SusyError::OverflowUnnormalizable { state });
    }
    let norm = mass.sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    // normalized = exp(-shift)/norm * (unshifted raw form)
    Ok((v, -shift - norm.ln()))
}

/// Coefficients `r₀..r₃` of `r(x₀ + t) = Σ r_k t^k` from `W₊⁽ᵏ⁾(x₀)`, `k = 1..=5`.
///
/// With `W₊(x₀) = 0`, `r = P/Q` where `P = Σ s_{k+2} t^k/(k+1)!` and
/// `Q = Σ s_{k+1} t^k/(k+1)!`; the series is the power-series quotient.
fn ratio_series(s: &[f64; DERIVATIVE_ORDER]) -> [f64; 4] {
    // fact[i] = (i + 1)!, s[k - 1] = W₊⁽ᵏ⁾(x₀)
    let fact = [1.0, 2.0, 6.0, 24.0, 120.0];
    let p: [f64; 4] = std::array::from_fn(|k| s[k + 1] / fact[k]);
    let q: [f64; 4] = std::array::from_fn(|k| s[k] / fact[k]);
    let mut r = [0.0; 4];
    for k in 0..4 {
        let mut acc = p[k];
        for j in 0..k {
            acc -= r[j] * q[k - j];
        }
        r[k] = acc / q[0];
    }
    r
}

/// Samples of a function on a grid, optionally with its exact derivative.
#[derive(Debug, Clone, Copy)]
pub struct SampledFunction<'a> {
    pub grid: &'a Grid,
    pub values: &'a [f64],
    pub derivative: Option<&'a [f64]>,
}

/// Normalized ground and first excited states of `H₋` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionTable {
    pub grid: Grid,
    pub psi0: Vec<f64>,
    pub psi1: Vec<f64>,
    /// `ln C₀` with `ψ₀ = C₀ exp(−∫_{x₀}^x W)`.
    pub log_c0: f64,
    /// `ln C₁` with `ψ₁ = C₁ W₊ exp(−∫_{x₀}^x W₁)`.
    pub log_c1: f64,
}

impl WavefunctionTable {
    pub fn c0(&self) -> f64 {
        self.log_c0.exp()
    }

    pub fn c1(&self) -> f64 {
        self.log_c1.exp()
    }
}
