use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Grid, NumericError, Result};
use crate::par::Execution;

/// Symmetric tridiagonal matrix for `-1/2 d²/dx² + V` on the interior points of a grid,
/// with Dirichlet conditions at both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub grid: Grid,
}

impl TridiagonalOperator {
    /// Builds an operator directly from its diagonals (mainly for tests).
    pub fn from_diagonals(diag: Vec<f64>, offdiag: Vec<f64>, grid: Grid) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(NumericError::InvalidArgument(format!(
                "diagonal lengths {} / {} do not form a tridiagonal matrix",
                diag.len(),
                offdiag.len()
            )));
        }
        Ok(TridiagonalOperator { diag, offdiag, grid })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `T v` for a vector over the interior points.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.offdiag[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.offdiag[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                r += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    fn norm_inf(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }
}

/// Three-point discretization of `-1/2 d²/dx² + V` (eigenvalue error `O(h²)`).
pub fn discretize<V>(potential: V, grid: &Grid) -> Result<TridiagonalOperator>
where
    V: Fn(f64) -> f64 + Sync + Send,
{
    let n = grid.len();
    let h = grid.spacing();
    let kinetic = 1.0 / (h * h);
    let interior = n - 2;
    let diag = Execution::default().try_map_range(interior, |i| {
        let x = grid.x(i + 1);
        let v = potential(x);
        if v.is_finite() {
            Ok(kinetic + v)
        } else {
            Err(NumericError::NonFinitePotential { x })
        }
    })?;
    let offdiag = vec![-0.5 * kinetic; interior.saturating_sub(1)];
    Ok(TridiagonalOperator {
        diag,
        offdiag,
        grid: *grid,
    })
}

/// Number of eigenvalues strictly below `lambda`, from the signs of the LDLᵀ pivots
/// of `T - lambda I`.
pub fn sturm_count(diag: &[f64], offdiag: &[f64], lambda: f64) -> usize {
    let n = diag.len();
    if n == 0 {
        return 0;
    }
    let guard = f64::MIN_POSITIVE.sqrt();
    let mut count = 0;
    let mut q = diag[0] - lambda;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..n {
        let q_safe = if q.abs() < guard {
            if q < 0.0 {
                -guard
            } else {
                guard
            }
        } else {
            q
        };
        q = (diag[i] - lambda) - offdiag[i - 1] * offdiag[i - 1] / q_safe;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit-norm vectors over the interior grid points, when requested.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    /// `‖T v − λ v‖ / ‖v‖` per eigenpair; empty without eigenvectors.
    pub residual_norms: Vec<f64>,
    pub sturm_tolerance: f64,
}

const MAX_BISECTIONS: usize = 200;

/// The `k` smallest eigenvalues by Sturm-count bisection to absolute bracket width `tol`.
pub fn lowest_eigenvalues(op: &TridiagonalOperator, k: usize, tol: f64) -> Result<SpectrumResult> {
    lowest_eigenvalues_with(Execution::default(), op, k, tol)
}

pub fn lowest_eigenvalues_with(
    exec: Execution,
    op: &TridiagonalOperator,
    k: usize,
    tol: f64,
) -> Result<SpectrumResult> {
    if k == 0 || k > op.dim() {
        return Err(NumericError::InvalidArgument(format!(
            "requested {k} eigenvalues of a {}-dimensional operator",
            op.dim()
        )));
    }
    if !(tol > 0.0) {
        return Err(NumericError::InvalidArgument(format!("tolerance {tol} must be positive")));
    }
    let (lo, hi) = op.gershgorin();
    let eigenvalues = exec.try_map_range(k, |index| bisect_eigenvalue(op, index, lo, hi, tol))?;
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors: None,
        residual_norms: Vec::new(),
        sturm_tolerance: tol,
    })
}

fn bisect_eigenvalue(op: &TridiagonalOperator, index: usize, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    // widen slightly so the Gershgorin ends are strict brackets
    let pad = 1e-12 * lo.abs().max(hi.abs()).max(1.0);
    let (mut lo, mut hi) = (lo - pad, hi + pad);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if sturm_count(&op.diag, &op.offdiag, mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(NumericError::ToleranceNotReached {
        index,
        width: hi - lo,
    })
}

/// Eigenvalues as in [`lowest_eigenvalues`] plus eigenvectors by inverse iteration
/// (three sweeps from a seeded random start, Gram–Schmidt against earlier vectors).
pub fn lowest_eigenpairs(op: &TridiagonalOperator, k: usize, tol: f64) -> Result<SpectrumResult> {
    let mut spectrum = lowest_eigenvalues(op, k, tol)?;
    let n = op.dim();
    let tiny = f64::EPSILON * op.norm_inf().max(f64::MIN_POSITIVE);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    for (index, &lambda) in spectrum.eigenvalues.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + index as u64);
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalize(&mut v);
        for _ in 0..3 {
            v = solve_shifted(op, lambda, &v, tiny);
            for prev in &vectors {
                let d = dot(&v, prev);
                v.iter_mut().zip(prev).for_each(|(a, b)| *a -= d * b);
            }
            normalize(&mut v);
        }
        let tv = op.apply(&v);
        let r: f64 = tv
            .iter()
            .zip(&v)
            .map(|(t, x)| (t - lambda * x).powi(2))
            .sum::<f64>()
            .sqrt();
        residuals.push(r);
        vectors.push(v);
    }
    spectrum.eigenvectors = Some(vectors);
    spectrum.residual_norms = residuals;
    Ok(spectrum)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}

/// Solves `(T - shift I) y = rhs` by Gaussian elimination with partial pivoting.
/// Zero pivots are replaced by `tiny`, which is what inverse iteration wants.
fn solve_shifted(op: &TridiagonalOperator, shift: f64, rhs: &[f64], tiny: f64) -> Vec<f64> {
    let n = op.dim();
    let mut d: Vec<f64> = op.diag.iter().map(|v| v - shift).collect();
    let mut dl = op.offdiag.clone();
    let mut du = op.offdiag.clone();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let old_d_next = d[i + 1];
            d[i + 1] = du[i] - fact * old_d_next;
            du[i] = old_d_next;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            b.swap(i, i + 1);
            b[i + 1] -= fact * b[i];
        }
        dl[i] = 0.0;
    }
    if d[n - 1] == 0.0 {
        d[n - 1] = tiny;
    }
    let mut y = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= du[i] * y[i + 1];
        }
        if i + 2 < n {
            s -= du2[i] * y[i + 2];
        }
        y[i] = s / d[i];
    }
    y
}
