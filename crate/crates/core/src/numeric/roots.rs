use super::{NumericError, Result};

/// Number of equal subintervals scanned for sign changes before bisecting.
pub const SCAN_SUBINTERVALS: usize = 512;

/// Locations `(left, right)` of the scan cells in which `f` changes sign.
///
/// Exact zeros are skipped, so a crossing through a scan node yields one bracket spanning
/// the node and a touching zero yields none. Non-finite samples are reported with their
/// scan index.
pub fn scan_sign_changes<F>(f: F, a: f64, b: f64, cells: usize) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> f64,
{
    let step = (b - a) / cells as f64;
    let at = |i: usize| if i == cells { b } else { a + i as f64 * step };
    let sample = |i: usize| {
        let x = at(i);
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericError::NonFiniteSample { index: i, x })
        }
    };
    let mut out = Vec::new();
    // (sign, index) of the last nonzero sample
    let mut last: Option<(bool, usize)> = None;
    for i in 0..=cells {
        let cur = sample(i)?;
        if cur == 0.0 {
            continue;
        }
        let negative = cur < 0.0;
        if let Some((prev_negative, j)) = last {
            if prev_negative != negative {
                out.push((at(j), at(i)));
            }
        }
        last = Some((negative, i));
    }
    Ok(out)
}

/// Finds the single zero of `f` on `[a, b]` by bisection to bracket width `tol`.
///
/// The interval is first scanned over [`SCAN_SUBINTERVALS`] cells; more than one sign
/// change is an error, so the returned root is the unique one on the interval.
pub fn find_zero<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(NumericError::InvalidArgument(format!(
            "invalid bracket [{a}, {b}]"
        )));
    }
    let changes = scan_sign_changes(&f, a, b, SCAN_SUBINTERVALS)?;
    let (mut lo, mut hi) = match changes.len() {
        0 => return Err(NumericError::NoSignChange { a, b }),
        1 => changes[0],
        count => return Err(NumericError::MultipleZeros { count, a, b }),
    };
    let mut flo = f(lo);
    if flo == 0.0 {
        return Ok(lo);
    }
    if f(hi) == 0.0 {
        return Ok(hi);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    // pick the bracket end with the smaller residual
    Ok(if f(lo).abs() <= f(hi).abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sinh_root() {
        let r = find_zero(f64::sinh, -2.0, 3.0, 1e-14).unwrap();
        assert!(r.abs() <= 1e-12);
    }

    #[test]
    fn linear_root() {
        let r = find_zero(|x| x - 1.0, 0.0, 3.0, 1e-14).unwrap();
        assert!((r - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn multiple_zeros() {
        assert!(matches!(
            find_zero(f64::sin, -1.0, 7.0, 1e-12),
            Err(NumericError::MultipleZeros { count: 3, .. })
        ));
    }

    #[test]
    fn no_sign_change() {
        assert!(matches!(
            find_zero(f64::cosh, -5.0, 5.0, 1e-12),
            Err(NumericError::NoSignChange { .. })
        ));
    }

    #[test]
    fn zero_on_scan_node_counts_once() {
        // x = 0 is exactly a scan node for a symmetric interval
        let changes = scan_sign_changes(|x| x, -1.0, 1.0, 512).unwrap();
        assert_eq!(changes.len(), 1);
        assert_eq!(find_zero(|x| x, -1.0, 1.0, 1e-14).unwrap(), 0.0);
        // touching zero without crossing is not a sign change
        let touch = scan_sign_changes(|x| x * x, -1.0, 1.0, 512).unwrap();
        assert!(touch.is_empty());
    }

    #[test]
    fn non_finite_sample_reported() {
        assert!(matches!(
            find_zero(|x| 1.0 / x - 2.0, -1.0, 1.0, 1e-12),
            Err(NumericError::NonFiniteSample { .. })
        ));
    }
}
