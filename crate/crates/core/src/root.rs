//! Bracketing bisection for monotone 1-D problems.

/// Finds `x` in `[lo, hi]` with `f(x) = 0` by bisection.
///
/// `f(lo)` and `f(hi)` must have opposite signs (or one of them is zero).
/// Iteration stops once the bracket is narrower than
/// `abs_tol + rel_tol * |x|`, or when the midpoint no longer moves.
/// Returns `None` when the endpoints do not bracket a root.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, abs_tol: f64, rel_tol: f64) -> Option<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_nan() || f_hi.is_nan() {
        return None;
    }
    if f_lo == 0.0 {
        return Some(lo);
    }
    if f_hi == 0.0 {
        return Some(hi);
    }
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return None;
    }
    for _ in 0..2_000 {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Some(mid);
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if hi - lo <= abs_tol + rel_tol * mid.abs() {
            break;
        }
    }
    Some(lo + (hi - lo) / 2.0)
}
