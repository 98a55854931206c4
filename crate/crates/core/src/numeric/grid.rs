use super::{NumericError, Result};

/// Uniform grid of `n` points spanning `[xmin, xmax]`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    xmin: f64,
    xmax: f64,
    n: usize,
}

impl Grid {
    pub fn new(xmin: f64, xmax: f64, n: usize) -> Result<Self> {
        if !(xmin.is_finite() && xmax.is_finite()) {
            return Err(NumericError::InvalidGrid(format!(
                "interval [{xmin}, {xmax}] is not finite"
            )));
        }
        if xmin >= xmax {
            return Err(NumericError::InvalidGrid(format!(
                "xmin {xmin} must be below xmax {xmax}"
            )));
        }
        if n < 3 {
            return Err(NumericError::InvalidGrid(format!("need at least 3 points, got {n}")));
        }
        Ok(Grid { xmin, xmax, n })
    }

    /// Same as [`Grid::new`] but rounds an even point count up to the next odd one,
    /// so Simpson pairs tile the grid from either end.
    pub fn with_odd_points(xmin: f64, xmax: f64, n: usize) -> Result<Self> {
        Grid::new(xmin, xmax, if n % 2 == 0 { n + 1 } else { n })
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }

    pub fn xmax(&self) -> f64 {
        self.xmax
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.xmax - self.xmin) / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.xmax
        } else {
            self.xmin + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.x(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.xmin && x <= self.xmax
    }

    /// Index of the grid point closest to `x` (clamped to the grid).
    pub fn nearest_index(&self, x: f64) -> usize {
        let t = ((x - self.xmin) / self.spacing()).round();
        t.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// A grid with the same spacing covering `[center - half*factor, center + half*factor]`.
    pub fn scaled(&self, factor: f64) -> Result<Grid> {
        let center = 0.5 * (self.xmin + self.xmax);
        let half = 0.5 * (self.xmax - self.xmin) * factor;
        let intervals = ((self.n - 1) as f64 * factor).round() as usize;
        Grid::new(center - half, center + half, intervals + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_points() {
        let g = Grid::new(0.0, 1.0, 4).unwrap();
        assert_eq!(g.spacing(), 1.0 / 3.0);
        assert_eq!(g.x(3), 1.0);
        assert_eq!(g.points().len(), 4);
        assert_eq!(g.nearest_index(0.7), 2);
        assert_eq!(g.nearest_index(-5.0), 0);
        assert_eq!(g.nearest_index(5.0), 3);
    }

    #[test]
    fn odd_rounding() {
        assert_eq!(Grid::with_odd_points(0.0, 1.0, 4000).unwrap().len(), 4001);
        assert_eq!(Grid::with_odd_points(0.0, 1.0, 4001).unwrap().len(), 4001);
    }

    #[test]
    fn invalid_grids() {
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(0.0, f64::INFINITY, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 2).is_err());
    }

    #[test]
    fn scaled_keeps_spacing() {
        let g = Grid::new(-8.0, 8.0, 4001).unwrap();
        let s = g.scaled(2.0).unwrap();
        assert_eq!(s.len(), 8001);
        assert_eq!(s.xmin(), -16.0);
        assert!((s.spacing() - g.spacing()).abs() < 1e-15);
    }
}
