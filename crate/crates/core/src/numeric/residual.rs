use super::Grid;

/// Sign changes in `samples`, ignoring samples whose magnitude is at most
/// `1e-9 * max|sample|` (tail chatter and a sample landing on the node itself).
pub fn count_nodes(samples: &[f64]) -> usize {
    let peak = samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-9 * peak;
    let mut count = 0;
    let mut last: Option<bool> = None;
    for &v in samples {
        if v.abs() <= floor {
            continue;
        }
        let negative = v < 0.0;
        if last.is_some_and(|prev| prev != negative) {
            count += 1;
        }
        last = Some(negative);
    }
    count
}

/// `‖−½ψ″ + Vψ − Eψ‖₂ / ‖ψ‖₂` with a five-point second derivative, over the interior
/// points that have two neighbours on each side.
///
/// `potential` is only evaluated where `ψ ≠ 0`, so huge potentials in underflowed
/// tails do not matter.
pub fn schrodinger_residual<V>(potential: V, psi: &[f64], energy: f64, grid: &Grid) -> f64
where
    V: Fn(f64) -> f64,
{
    let n = psi.len();
    assert_eq!(n, grid.len(), "wavefunction samples must match the grid");
    assert!(n >= 5, "need at least 5 samples");
    let h = grid.spacing();
    let inv = 1.0 / (12.0 * h * h);
    let mut res = 0.0;
    let mut norm = 0.0;
    for i in 2..n - 2 {
        let d2 = (-psi[i - 2] + 16.0 * psi[i - 1] - 30.0 * psi[i] + 16.0 * psi[i + 1]
            - psi[i + 2])
            * inv;
        let v_psi = if psi[i] == 0.0 {
            0.0
        } else {
            (potential(grid.x(i)) - energy) * psi[i]
        };
        let r = -0.5 * d2 + v_psi;
        res += r * r;
        norm += psi[i] * psi[i];
    }
    (res / norm).sqrt()
}

/// Sixth-order central first derivative of uniformly spaced samples, dropping to
/// fourth and second order within three points of either end.
pub fn derivative_7pt(y: &[f64], h: f64) -> Vec<f64> {
    let n = y.len();
    (0..n)
        .map(|i| {
            if i >= 3 && i + 3 < n {
                (-y[i - 3] + 9.0 * y[i - 2] - 45.0 * y[i - 1] + 45.0 * y[i + 1]
                    - 9.0 * y[i + 2]
                    + y[i + 3])
                    / (60.0 * h)
            } else if i >= 2 && i + 2 < n {
                (y[i - 2] - 8.0 * y[i - 1] + 8.0 * y[i + 1] - y[i + 2]) / (12.0 * h)
            } else if i >= 1 && i + 1 < n {
                (y[i + 1] - y[i - 1]) / (2.0 * h)
            } else if i == 0 {
                (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h)
            } else {
                (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(f: impl Fn(f64) -> f64, g: &Grid) -> Vec<f64> {
        g.points().into_iter().map(f).collect()
    }

    #[test]
    fn node_counts() {
        let g = Grid::new(-3.0, 3.0, 601).unwrap();
        assert_eq!(count_nodes(&sample(f64::sinh, &g)), 1);
        assert_eq!(count_nodes(&sample(f64::cosh, &g)), 0);
        let g = Grid::new(0.0, 2.5 * std::f64::consts::PI, 1001).unwrap();
        assert_eq!(count_nodes(&sample(f64::sin, &g)), 2);
    }

    #[test]
    fn tail_chatter_ignored() {
        let mut s = vec![1e-20, -1e-20, 1e-20];
        s.extend([0.5, 1.0, 0.5]);
        s.extend([-1e-18, 1e-18]);
        assert_eq!(count_nodes(&s), 0);
    }

    #[test]
    fn oscillator_ground_state_residual() {
        let g = Grid::new(-8.0, 8.0, 4001).unwrap();
        let psi = sample(|x| (-0.5 * x * x).exp(), &g);
        let r = schrodinger_residual(|x| 0.5 * x * x, &psi, 0.5, &g);
        assert!(r <= 1e-6, "r = {r}");
        let r = schrodinger_residual(|x| 0.5 * x * x, &psi, 0.6, &g);
        assert!((r - 0.1).abs() < 1e-6, "r = {r}");
    }

    #[test]
    fn derivative_accuracy() {
        let g = Grid::new(-1.0, 2.0, 301).unwrap();
        let y = sample(f64::exp, &g);
        let d = derivative_7pt(&y, g.spacing());
        for i in 3..g.len() - 3 {
            assert!((d[i] - y[i]).abs() < 1e-11 * y[i]);
        }
        assert!((d[0] - y[0]).abs() < 1e-3);
    }
}
