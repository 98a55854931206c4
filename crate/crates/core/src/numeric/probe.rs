use super::{Grid, NumericError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeVerdict {
    Converged,
    Diverging,
}

/// Decides empirically whether a state is square integrable.
///
/// `build` returns unnormalized samples of the state on a grid; it is called on `base`
/// and on `steps` successively `factor`-times wider grids of the same spacing. The
/// discrete L² mass increments between consecutive grids must shrink by at least half
/// each step for [`ProbeVerdict::Converged`], or grow each step for
/// [`ProbeVerdict::Diverging`]. Anything else is [`NumericError::Inconclusive`].
/// Overflowing samples count as divergence.
pub fn norm_growth_probe<B, E>(build: B, base: &Grid, factor: f64, steps: usize) -> Result<ProbeVerdict>
where
    B: Fn(&Grid) -> std::result::Result<Vec<f64>, E>,
    E: std::fmt::Display,
{
    if !(factor > 1.0) || steps < 2 {
        return Err(NumericError::InvalidArgument(format!(
            "probe needs factor > 1 and at least 2 steps (got {factor}, {steps})"
        )));
    }
    let mut masses = Vec::with_capacity(steps + 1);
    let mut grid = *base;
    for k in 0..=steps {
        if k > 0 {
            grid = base.scaled(factor.powi(k as i32))?;
        }
        let samples = build(&grid).map_err(|e| NumericError::InvalidArgument(e.to_string()))?;
        let mass: f64 = samples.iter().map(|v| v * v).sum::<f64>() * grid.spacing();
        if !mass.is_finite() {
            return Ok(ProbeVerdict::Diverging);
        }
        masses.push(mass);
    }

    let increments: Vec<f64> = masses.windows(2).map(|w| w[1] - w[0]).collect();
    let negligible = |k: usize| increments[k].abs() <= 1e-13 * masses[k + 1];

    let mut ratios = Vec::with_capacity(steps - 1);
    let (mut shrinking, mut growing) = (0, 0);
    for k in 1..increments.len() {
        match (negligible(k - 1), negligible(k)) {
            (_, true) => {
                shrinking += 1;
                ratios.push(0.0);
            }
            (true, false) => {
                growing += 1;
                ratios.push(f64::INFINITY);
            }
            (false, false) => {
                let r = increments[k] / increments[k - 1];
                ratios.push(r);
                if r < 0.5 {
                    shrinking += 1;
                } else if r > 1.0 {
                    growing += 1;
                }
            }
        }
    }
    if shrinking == ratios.len() {
        Ok(ProbeVerdict::Converged)
    } else if growing == ratios.len() {
        Ok(ProbeVerdict::Diverging)
    } else {
        Err(NumericError::Inconclusive { ratios })
    }
}
