//! Real symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

/// Number of eigenvalues strictly below `lambda`.
pub fn sturm_count(diag: &[f64], off: &[f64], lambda: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for (i, &d) in diag.iter().enumerate() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] / q };
        q = d - lambda - coupling;
        if q == 0.0 {
            q = -f64::MIN_POSITIVE;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// `k`-th smallest eigenvalue (0-based) inside `[lo, hi]`, to absolute `tol`.
pub fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize, lo: f64, hi: f64, tol: f64) -> Option<f64> {
    if sturm_count(diag, off, hi) <= k || sturm_count(diag, off, lo) > k {
        return None;
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_laplacian() {
        // eigenvalues 2 − 2cos(jπ/(n+1))
        let n = 50;
        let diag = vec![2.0; n];
        let off = vec![-1.0; n - 1];
        for k in [0, 7, 49] {
            let want = 2.0 - 2.0 * (((k + 1) as f64) * std::f64::consts::PI / (n + 1) as f64).cos();
            let got = kth_eigenvalue(&diag, &off, k, -1.0, 5.0, 1e-14).unwrap();
            assert!((got - want).abs() < 1e-13);
        }
        assert_eq!(sturm_count(&diag, &off, 0.0), 0);
        assert_eq!(sturm_count(&diag, &off, 4.0), n);
        assert!(kth_eigenvalue(&diag, &off, 0, 4.5, 5.0, 1e-12).is_none());
    }
}
