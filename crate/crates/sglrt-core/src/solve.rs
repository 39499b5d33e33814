//! Bracketed root finding and one-dimensional minimization.
//!
//! Everything downstream solves monotone equations (divergences and tail
//! bounds are strictly monotone in the solved variable), so plain bisection
//! at a fixed absolute tolerance is used throughout: robustness over speed.

use crate::{MAX_BISECT_ITER, MEAN_TOL};

/// Root of `f(x) = 0` on `[lo, hi]` by bisection, assuming `f(lo) <= 0 <= f(hi)`
/// or `f(hi) <= 0 <= f(lo)`. Returns the midpoint of the final bracket.
///
/// The bracket is narrowed until its width falls below `tol` or the iteration
/// cap is hit; non-finite evaluations are treated by sign (`NaN` counts as
/// positive, which keeps the bracket valid for divergence-style objectives
/// that blow up at a domain edge).
pub fn bisect_root(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    let (mut lo, mut hi) = if flo <= 0.0 { (lo, hi) } else { (hi, lo) };
    for _ in 0..MAX_BISECT_ITER {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm <= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Bisection for the infimum of `{x in (lo, hi) : pred(x)}` when the predicate
/// is upward-closed on the bracket (false below the boundary point, true above).
///
/// `lo` is assumed non-member and `hi` member. Returns a point within `tol`
/// of the boundary, from the member side.
pub fn bisect_boundary(mut pred: impl FnMut(f64) -> bool, lo: f64, hi: f64, tol: f64) -> f64 {
    let mut lo = lo;
    let mut hi = hi;
    for _ in 0..MAX_BISECT_ITER {
        if (hi - lo).abs() <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Expands an upper bracket geometrically from `start` until `f` becomes
/// nonnegative or the cap is reached. Returns the bracketing point.
///
/// Used for unbounded mean domains where no natural upper endpoint exists.
pub fn expand_upper(mut f: impl FnMut(f64) -> f64, start: f64, step0: f64) -> f64 {
    let mut step = step0.max(MEAN_TOL);
    let mut x = start + step;
    for _ in 0..1100 {
        if f(x) >= 0.0 {
            return x;
        }
        step *= 2.0;
        x = start + step;
    }
    x
}

/// Golden-section minimization of a unimodal-enough `f` on `[lo, hi]`.
///
/// Returns `(argmin, min)`. The objectives this is applied to (stitched sums
/// as a function of `log η`) are piecewise smooth with small jumps from the
/// ceiling in the epoch count, so the result is refined but the caller seeds
/// the bracket from a grid scan.
pub fn golden_min(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect_root(|x| x * x - 2.0, 0.0, 2.0, 1e-12);
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn bisect_handles_reversed_signs() {
        let r = bisect_root(|x| 2.0 - x * x, 0.0, 2.0, 1e-12);
        assert!((r - core::f64::consts::SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn boundary_bisection_matches_threshold() {
        let b = bisect_boundary(|x| x >= 0.3, 0.0, 1.0, 1e-12);
        assert!((b - 0.3).abs() < 1e-10);
    }

    #[test]
    fn golden_min_quadratic() {
        let (x, _) = golden_min(|x| (x - 1.25) * (x - 1.25), 0.0, 3.0, 80);
        assert!((x - 1.25).abs() < 1e-8);
    }
}
