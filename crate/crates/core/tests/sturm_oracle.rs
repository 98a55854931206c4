use nalgebra::DMatrix;
use qes_core::numeric::{
    discretize, lowest_eigenpairs, lowest_eigenvalues, sturm_count, Grid, TridiagonalOperator,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_tridiagonal(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = rng.gen_range(1..=12);
    let diag = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
    let off = (0..n - 1).map(|_| rng.gen_range(-3.0..3.0)).collect();
    (diag, off)
}

fn dense_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let m = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            diag[i]
        } else if i + 1 == j {
            off[i]
        } else if j + 1 == i {
            off[j]
        } else {
            0.0
        }
    });
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[test]
fn sturm_counts_match_dense_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let (diag, off) = random_tridiagonal(&mut rng);
        let ev = dense_eigenvalues(&diag, &off);
        assert_eq!(sturm_count(&diag, &off, ev[0] - 1.0), 0);
        for i in 0..ev.len() {
            let above = if i + 1 < ev.len() {
                0.5 * (ev[i] + ev[i + 1])
            } else {
                ev[i] + 1.0
            };
            if i + 1 < ev.len() && ev[i + 1] - ev[i] < 1e-9 {
                continue;
            }
            assert_eq!(sturm_count(&diag, &off, above), i + 1, "{diag:?} {off:?}");
        }
    }
}

#[test]
fn bisection_matches_dense_eigenvalues() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let (diag, off) = random_tridiagonal(&mut rng);
        let n = diag.len();
        let ev = dense_eigenvalues(&diag, &off);
        let grid = Grid::new(0.0, 1.0, n + 2).unwrap();
        let op = TridiagonalOperator::from_diagonals(diag, off, grid).unwrap();
        let s = lowest_eigenvalues(&op, n, 1e-12).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(&ev) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
    }
}

#[test]
fn oscillator_spectrum_and_h_convergence() {
    let grid = Grid::new(-10.0, 10.0, 2001).unwrap();
    let op = discretize(|x| 0.5 * x * x, &grid).unwrap();
    let s = lowest_eigenvalues(&op, 3, 1e-10).unwrap();
    for (k, e) in s.eigenvalues.iter().enumerate() {
        assert!((e - (k as f64 + 0.5)).abs() < 1e-4, "E{k} = {e}");
    }
    // O(h²): halving h divides the error by about four
    let err = |n: usize| {
        let g = Grid::new(-10.0, 10.0, n).unwrap();
        let op = discretize(|x| 0.5 * x * x, &g).unwrap();
        (lowest_eigenvalues(&op, 1, 1e-13).unwrap().eigenvalues[0] - 0.5).abs()
    };
    let ratio = err(201) / err(401);
    assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
}

#[test]
fn eigenvectors_are_orthonormal_eigenpairs() {
    let grid = Grid::new(-8.0, 8.0, 1601).unwrap();
    let op = discretize(|x| 0.5 * x * x + 0.1 * x.powi(4), &grid).unwrap();
    let s = lowest_eigenpairs(&op, 4, 1e-12).unwrap();
    let vecs = s.eigenvectors.as_ref().unwrap();
    for r in &s.residual_norms {
        assert!(*r <= 1e-8, "residual {r}");
    }
    for i in 0..vecs.len() {
        for j in 0..i {
            let dot: f64 = vecs[i].iter().zip(&vecs[j]).map(|(a, b)| a * b).sum();
            assert!(dot.abs() <= 1e-8);
        }
    }
}
