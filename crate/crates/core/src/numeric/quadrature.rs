use super::{Grid, NumericError, Result};
use crate::par::Execution;

/// Cumulative integral `F[i] = ∫_{x_anchor}^{x_i} f dx` on a uniform grid.
///
/// Points an even number of steps from the anchor are reached by composite Simpson
/// pairs; the remaining points add one single-interval rule built on four neighbouring
/// samples. Every rule is exact for cubics and the whole table is fourth-order accurate.
pub fn cumulative_integral<F>(f: F, grid: &Grid, anchor: usize) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64 + Sync + Send,
{
    let samples = Execution::default().map_range(grid.len(), |i| f(grid.x(i)));
    cumulative_integral_samples(&samples, grid.spacing(), anchor).map_err(|e| match e {
        NumericError::NonFiniteSample { index, .. } => NumericError::NonFiniteSample {
            index,
            x: grid.x(index),
        },
        other => other,
    })
}

/// [`cumulative_integral`] on pre-sampled values with spacing `h`.
pub fn cumulative_integral_samples(y: &[f64], h: f64, anchor: usize) -> Result<Vec<f64>> {
    let n = y.len();
    if n < 3 {
        return Err(NumericError::InvalidArgument(format!(
            "cumulative integral needs at least 3 samples, got {n}"
        )));
    }
    if anchor >= n {
        return Err(NumericError::InvalidArgument(format!(
            "anchor {anchor} outside 0..{n}"
        )));
    }
    if let Some(index) = y.iter().position(|v| !v.is_finite()) {
        return Err(NumericError::NonFiniteSample {
            index,
            x: f64::NAN,
        });
    }

    let simpson = |i: usize| h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
    let mut out = vec![0.0; n];

    let mut j = anchor;
    while j + 2 < n {
        out[j + 2] = out[j] + simpson(j);
        out[j + 1] = out[j] + single_interval(y, j, h);
        j += 2;
    }
    if j + 1 < n {
        out[j + 1] = out[j] + single_interval(y, j, h);
    }

    let mut j = anchor;
    while j >= 2 {
        out[j - 2] = out[j] - simpson(j - 2);
        out[j - 1] = out[j] - single_interval(y, j - 1, h);
        j -= 2;
    }
    if j == 1 {
        out[0] = out[1] - single_interval(y, 0, h);
    }
    Ok(out)
}

/// `∫_{x_i}^{x_{i+1}} f dx` from four samples around the interval (cubic-exact),
/// falling back to one-sided stencils at the ends and a quadratic rule when n = 3.
fn single_interval(y: &[f64], i: usize, h: f64) -> f64 {
    let n = y.len();
    if n < 4 {
        return if i == 0 {
            h / 12.0 * (5.0 * y[0] + 8.0 * y[1] - y[2])
        } else {
            h / 12.0 * (-y[0] + 8.0 * y[1] + 5.0 * y[2])
        };
    }
    if i >= 1 && i + 2 < n {
        h / 24.0 * (-y[i - 1] + 13.0 * y[i] + 13.0 * y[i + 1] - y[i + 2])
    } else if i == 0 {
        h / 24.0 * (9.0 * y[0] + 19.0 * y[1] - 5.0 * y[2] + y[3])
    } else {
        // i + 1 == n - 1
        h / 24.0 * (9.0 * y[i + 1] + 19.0 * y[i] - 5.0 * y[i - 1] + y[i - 2])
    }
}
