//! One-dimensional search primitives shared by the gain optimizer and the
//! threshold finders.

/// Inverse golden ratio, `(sqrt(5) - 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`; returns the
/// bracket midpoint once the bracket is narrower than `tol`.
pub fn golden_section_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    debug_assert!(lo < hi && tol > 0.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    0.5 * (a + b)
}

/// Bisects the boundary of a predicate that differs between `lo` and `hi`,
/// returning the midpoint of the final bracket of width `tol`.
///
/// The caller must ensure `pred(lo) != pred(hi)`; the returned point is
/// within `tol / 2` of the true boundary.
pub fn bisect_boundary(mut pred: impl FnMut(f64) -> bool, lo: f64, hi: f64, tol: f64) -> f64 {
    debug_assert!(lo < hi && tol > 0.0);
    let at_lo = pred(lo);
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid) == at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
