//! Boundary functions, boundary-crossing probability bounds, and the
//! boundary values / sample-size bounds derived from them.
//!
//! The central inequality: for a boundary `g` that is nonnegative,
//! nondecreasing, and has `g(t)/t` nonincreasing with limit 0, the
//! probability that the log GLR-like statistic ever crosses `g(n)` under the
//! null is at most
//!
//! ```text
//!     e^{−g(1)}                                   if D1 ≥ g(1),
//!     inf_{η>1} Σ_{k=1}^{K_η} exp{−g(η^k)/η}       otherwise,
//! ```
//!
//! where `D1 = D_{ψ*_μ0}(μ1, μ0)` and `K_η` is the first geometric epoch at
//! which the tangent line at `μ1` dominates the boundary. Time is carved
//! into epochs `[η^{k−1}, η^k)` and a line-crossing inequality is applied in
//! each ("stitching"); the infimum trades epoch resolution against the
//! number of stitched terms.
//!
//! For a constant boundary the stitched sum collapses to an integer
//! minimization, `inf_k k·exp{−g (D1/g)^{1/k}}`, which is what the solvers
//! here evaluate. For the no-separation case (`D1 = 0`, infinite sum) the
//! log-log boundary `g_α^c(n) = c[log(1/α) + 2 log(log_c cn)]` keeps the sum
//! below `α (π²/6 − 1)`.

use alloc::vec::Vec;

use crate::family::PsiFamily;
use crate::num::{exp, ln, powf, sqrt};
use crate::solve::{bisect_boundary, golden_min};
use crate::{Error, Result, G_TOL};

/// Number of consecutive increasing terms after which the integer
/// minimization stops early (heuristic; the full scan is available).
const EARLY_EXIT_RUN: usize = 50;

/// Hard cap on the integer minimization index.
const K_CAP: usize = 1_000_000;

/// A rejection boundary on `n ∈ [1, ∞)`.
#[derive(Clone, Debug, PartialEq)]
pub enum Boundary {
    /// Constant value `g`.
    Constant(f64),
    /// `g_α^c(n) = c [log(1/α) + 2 log(log_c cn)]` with `c > 1`.
    LogLog { c: f64, alpha: f64 },
    /// Piecewise constant: `values[k]` on the open interval
    /// `(breaks[k], breaks[k+1])`, the smaller neighbor at shared break
    /// points, clamped to the first/last value outside the covered range.
    PiecewiseConstant { breaks: Vec<f64>, values: Vec<f64> },
}

impl Boundary {
    /// Boundary value at (real-valued) time `n ≥ 1`.
    pub fn eval(&self, n: f64) -> f64 {
        match self {
            Boundary::Constant(g) => *g,
            Boundary::LogLog { c, alpha } => loglog_boundary(*c, *alpha, n),
            Boundary::PiecewiseConstant { breaks, values } => {
                if values.is_empty() {
                    return 0.0;
                }
                if n <= breaks[0] {
                    return values[0];
                }
                for k in 0..values.len() {
                    let hi = breaks[k + 1];
                    if n < hi {
                        return values[k];
                    }
                    if n == hi {
                        return if k + 1 < values.len() {
                            values[k].min(values[k + 1])
                        } else {
                            values[k]
                        };
                    }
                }
                values[values.len() - 1]
            }
        }
    }

    /// Numeric check of the two boundary conditions: `g` nonnegative and
    /// nondecreasing, `g(t)/t` nonincreasing with limit 0 (checked on a
    /// geometric grid up to 1e12).
    pub fn validate(&self) -> Result<()> {
        if let Boundary::PiecewiseConstant { breaks, values } = self {
            if values.is_empty() || breaks.len() != values.len() + 1 {
                return Err(Error::InvalidParam {
                    what: "piecewise boundary shape",
                    value: values.len() as f64,
                });
            }
            if breaks.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::OverlappingIntervals);
            }
        }
        if let Boundary::LogLog { c, alpha } = self {
            check_c(*c)?;
            check_alpha(*alpha)?;
        }
        let mut n = 1.0f64;
        let mut prev_g = self.eval(1.0);
        let mut prev_ratio = prev_g;
        if prev_g < 0.0 {
            return Err(Error::InvalidParam {
                what: "boundary value g(1)",
                value: prev_g,
            });
        }
        while n < 1e12 {
            n *= 1.3;
            let g = self.eval(n);
            if g < prev_g - 1e-9 {
                return Err(Error::InvalidParam {
                    what: "boundary monotonicity at n",
                    value: n,
                });
            }
            let ratio = g / n;
            if ratio > prev_ratio + 1e-12 {
                return Err(Error::InvalidParam {
                    what: "boundary g(n)/n monotonicity at n",
                    value: n,
                });
            }
            prev_g = g;
            prev_ratio = ratio;
        }
        if prev_ratio > 1e-6 {
            return Err(Error::InvalidParam {
                what: "boundary g(n)/n limit",
                value: prev_ratio,
            });
        }
        Ok(())
    }
}

/// Stitching controls: the epoch ratio and the truncation cap for infinite
/// sums.
#[derive(Clone, Copy, Debug)]
pub struct StitchParams {
    pub eta: f64,
    pub k_max: usize,
}

impl Default for StitchParams {
    fn default() -> Self {
        StitchParams {
            eta: 2.0,
            k_max: 100_000,
        }
    }
}

/// Number of stitched epochs `K_η`, possibly infinite (`μ1 = μ0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KEta {
    Finite(u64),
    Infinite,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            what: "level alpha",
            value: alpha,
        })
    }
}

fn check_c(c: f64) -> Result<()> {
    if c > 1.0 && c.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            what: "log-log boundary base c",
            value: c,
        })
    }
}

/// Smallest `k ≥ 0` with `d1 ≥ g(η^k)/η^k`; `Infinite` iff `d1 = 0`, and `0`
/// iff `d1 ≥ g(1)`.
pub fn k_eta(boundary: &Boundary, d1: f64, eta: f64) -> Result<KEta> {
    if d1 < 0.0 {
        return Err(Error::InvalidParam {
            what: "divergence d1",
            value: d1,
        });
    }
    if !(eta > 1.0) {
        return Err(Error::InvalidParam {
            what: "stitching eta",
            value: eta,
        });
    }
    if d1 == 0.0 {
        return Ok(KEta::Infinite);
    }
    let mut n_k = 1.0f64;
    for k in 0..200_000u64 {
        if n_k > 1e300 {
            // g(n)/n -> 0 by the boundary conditions, so d1 > 0 dominates.
            return Ok(KEta::Finite(k));
        }
        if d1 >= boundary.eval(n_k) / n_k {
            return Ok(KEta::Finite(k));
        }
        n_k *= eta;
    }
    Ok(KEta::Infinite)
}

/// `min_{1 ≤ k} k · exp{−g r^{1/k}}` over the integers, with the argmin.
///
/// `full_scan` disables the early exit that stops after a long run of
/// increasing terms.
fn integer_min(g: f64, r: f64, full_scan: bool) -> (u64, f64) {
    let ln_r = ln(r);
    let mut best = f64::INFINITY;
    let mut best_k = 1u64;
    let mut rising = 0usize;
    for k in 1..=K_CAP {
        let term = k as f64 * exp(-g * exp(ln_r / k as f64));
        if term < best {
            best = term;
            best_k = k as u64;
            rising = 0;
        } else {
            rising += 1;
            if !full_scan && rising >= EARLY_EXIT_RUN {
                break;
            }
        }
        // term_k >= k e^{-g}, so once that floor exceeds the incumbent no
        // later k can win; this makes the scan exact when it fires.
        if k as f64 * exp(-g) > best {
            break;
        }
    }
    (best_k, best)
}

/// Upper bound on the probability that the GLR-like statistic with
/// hypothesis gap `d1 = D_{ψ*_μ0}(μ1, μ0)` ever crosses the constant
/// boundary `g`: `e^{−g}` when `d1 ≥ g`, else the integer-form stitched
/// bound, clamped into `(0, 1]`.
pub fn crossing_bound_constant(d1: f64, g: f64) -> Result<f64> {
    crossing_bound_constant_with(d1, g, false)
}

/// [`crossing_bound_constant`] with an explicit full-scan switch for the
/// integer minimization.
pub fn crossing_bound_constant_with(d1: f64, g: f64, full_scan: bool) -> Result<f64> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::InvalidParam {
            what: "boundary value g",
            value: g,
        });
    }
    if d1 < 0.0 {
        return Err(Error::InvalidParam {
            what: "divergence d1",
            value: d1,
        });
    }
    if d1 == 0.0 {
        return Err(Error::Degenerate);
    }
    if d1 >= g {
        return Ok(exp(-g));
    }
    let (_, v) = integer_min(g, d1 / g, full_scan);
    Ok(v.min(1.0))
}

/// Loose but cheap upper bound on the constant boundary value solving the
/// stitched bound at level `alpha` (used only to bracket the bisection).
pub fn g_alpha_constant_upper_bound(d1: f64, alpha: f64) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..240 {
        let eta = exp(0.02 + i as f64 * 0.025);
        let arg = (eta * sqrt(eta) / (alpha * d1 * ln(eta))).max(1.0);
        let g = eta * ln((1.0 + 2.0 * ln(arg) / ln(eta)) / alpha);
        if g < best {
            best = g;
        }
    }
    best
}

/// Smallest constant boundary `g` whose crossing bound equals `alpha`.
pub fn solve_g_alpha_constant(d1: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if d1 <= 0.0 {
        return Err(Error::Degenerate);
    }
    let g0 = ln(1.0 / alpha);
    if d1 >= g0 {
        return Ok(g0);
    }
    let mut hi = g_alpha_constant_upper_bound(d1, alpha).max(g0 + 1.0);
    for _ in 0..200 {
        if crossing_bound_constant(d1, hi)? <= alpha {
            break;
        }
        hi *= 2.0;
    }
    Ok(bisect_boundary(
        |g| crossing_bound_constant(d1, g).map(|b| b <= alpha).unwrap_or(false),
        g0,
        hi,
        G_TOL,
    ))
}

/// Smallest boundary value certified by the classical open-ended GLR bound
/// `(1 + g/d1) e^{−g}` (first branch `e^{−g}` when `d1 ≥ g`).
pub fn solve_g_alpha_lorden(d1: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if d1 <= 0.0 {
        return Err(Error::Degenerate);
    }
    let g0 = ln(1.0 / alpha);
    if d1 >= g0 {
        return Ok(g0);
    }
    let bound = |g: f64| (1.0 + g / d1) * exp(-g);
    let mut hi = g0.max(1.0);
    for _ in 0..400 {
        if bound(hi) <= alpha {
            break;
        }
        hi *= 2.0;
    }
    Ok(bisect_boundary(|g| bound(g) <= alpha, g0, hi, G_TOL))
}

/// The log-log boundary `g_α^c(n) = c [log(1/α) + 2 log(log_c cn)]`.
pub fn loglog_boundary(c: f64, alpha: f64, n: f64) -> f64 {
    debug_assert!(c > 1.0 && n >= 1.0);
    c * (ln(1.0 / alpha) + 2.0 * ln(1.0 + ln(n) / ln(c)))
}

/// Stitched sum `Σ_{k=1}^{1 ∨ K_η} exp{−g(η^k)/η}` at a fixed `η`.
///
/// When `K_η = ∞` the sum is truncated once the terms are decreasing and
/// fall below 1e-16; for the log-log boundary the (summable) remainder is
/// bounded analytically by integral comparison and added. Terms still
/// rising at the truncation cap yield [`Error::NonSummable`].
pub fn stitched_sum(boundary: &Boundary, d1: f64, params: StitchParams) -> Result<f64> {
    let eta = params.eta;
    let k_cap = match k_eta(boundary, d1, eta)? {
        KEta::Finite(k) => Some(k.max(1)),
        KEta::Infinite => None,
    };
    let mut sum = 0.0f64;
    let mut n_k = 1.0f64;
    let mut prev = f64::INFINITY;
    let mut k = 0u64;
    loop {
        k += 1;
        n_k *= eta;
        let term = exp(-boundary.eval(n_k) / eta);
        sum += term;
        if let Some(cap) = k_cap {
            if k >= cap {
                return Ok(sum);
            }
        } else {
            if term <= prev && term < 1e-16 {
                if let Boundary::LogLog { c, alpha } = boundary {
                    sum += loglog_tail(*c, *alpha, eta, k);
                }
                return Ok(sum);
            }
            if k as usize >= params.k_max {
                return Err(Error::NonSummable);
            }
        }
        prev = term;
    }
}

/// Integral-comparison bound on `Σ_{k>K} α^{c/η} (1 + k log_c η)^{−2c/η}`.
fn loglog_tail(c: f64, alpha: f64, eta: f64, k_last: u64) -> f64 {
    let p = 2.0 * c / eta;
    if p <= 1.0 {
        return f64::INFINITY;
    }
    let a = ln(eta) / ln(c);
    let w = powf(alpha, c / eta);
    w * powf(1.0 + k_last as f64 * a, 1.0 - p) / (a * (p - 1.0))
}

/// General boundary-crossing bound: first branch `e^{−g(1)}` when
/// `d1 ≥ g(1)`, otherwise the infimum of the stitched sum over `η`.
///
/// The infimum is taken over a geometric grid of 64 points on
/// `log η ∈ [0.01, 5]` followed by golden-section refinement around the best
/// grid cell; for a constant boundary the exact integer form is used
/// instead. The boundary is validated against the two theorem conditions.
pub fn crossing_bound_general(boundary: &Boundary, d1: f64, k_max: usize) -> Result<f64> {
    boundary.validate()?;
    if d1 < 0.0 {
        return Err(Error::InvalidParam {
            what: "divergence d1",
            value: d1,
        });
    }
    if d1 >= boundary.eval(1.0) && boundary.eval(1.0) > 0.0 {
        return Ok(exp(-boundary.eval(1.0)));
    }
    if let Boundary::Constant(g) = boundary {
        return crossing_bound_constant(d1, *g);
    }
    let eval = |log_eta: f64| -> f64 {
        let params = StitchParams {
            eta: exp(log_eta),
            k_max,
        };
        stitched_sum(boundary, d1, params).unwrap_or(f64::INFINITY)
    };
    let (lo, hi) = (0.01f64, 5.0f64);
    let mut best = f64::INFINITY;
    let mut best_i = 0usize;
    let n_grid = 64usize;
    for i in 0..n_grid {
        let t = lo + (hi - lo) * i as f64 / (n_grid - 1) as f64;
        let v = eval(t);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    if !best.is_finite() {
        return Err(Error::NonSummable);
    }
    let step = (hi - lo) / (n_grid - 1) as f64;
    let a = (lo + step * best_i.saturating_sub(1) as f64).max(lo);
    let b = (lo + step * (best_i + 1) as f64).min(hi);
    let (_, refined) = golden_min(eval, a, b, 60);
    Ok(best.min(refined).min(1.0))
}

/// Smallest integer `t ≥ 1` at which the log-log boundary at level `delta`
/// drops below `t · D*(μ, μ0)`: with probability at least `1 − δ` the
/// no-separation test stops by this time under the alternative `μ`.
pub fn t_high<F: PsiFamily + ?Sized>(
    family: &F,
    mu: f64,
    mu0: f64,
    c: f64,
    delta: f64,
) -> Result<u64> {
    check_c(c)?;
    check_alpha(delta)?;
    let dstar = family.dstar(mu, mu0)?;
    let hit = |t: u64| loglog_boundary(c, delta, t as f64) <= t as f64 * dstar;
    // The ratio g(t)/t need not be monotone near t = 1, so scan the head
    // linearly before switching to doubling + binary search.
    for t in 1..=4096u64 {
        if hit(t) {
            return Ok(t);
        }
    }
    let mut lo = 4096u64;
    let mut hi = 8192u64;
    while !hit(hi) {
        lo = hi;
        hi = hi.saturating_mul(2);
        if hi > 1 << 62 {
            return Err(Error::NoSolution);
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if hit(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let t = hi;
    debug_assert!(t as f64 <= t_high_bound(family, mu, mu0, c, delta)? + 1.0);
    Ok(t)
}

/// Closed-form upper bound `max(1, A)` on [`t_high`].
pub fn t_high_bound<F: PsiFamily + ?Sized>(
    family: &F,
    mu: f64,
    mu0: f64,
    c: f64,
    delta: f64,
) -> Result<f64> {
    check_c(c)?;
    check_alpha(delta)?;
    let dstar = family.dstar(mu, mu0)?;
    let log_c = |x: f64| ln(x) / ln(c);
    let inner = 2.0 * log_c(2.0 * c * c / ln(c)) + 2.0 * log_c(1.0 / dstar).max(0.0);
    let a = 2.0 * c / dstar * (ln(1.0 / delta) + ln(inner));
    Ok(a.max(1.0))
}

/// Expected-sample-size bound for the constant-boundary test with separated
/// hypotheses, at the true alternative mean `μ ≥ μ1`:
/// `g_α/D(μ, μ0) + [σ_μ ∇ψ*_μ0(μ) / D(μ, μ0)]² + 1`.
pub fn expected_n_bound_const<F: PsiFamily + ?Sized>(
    family: &F,
    mu: f64,
    mu0: f64,
    mu1: f64,
    alpha: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    if mu1 < mu0 {
        return Err(Error::InvalidHypotheses { mu0, mu1 });
    }
    if mu < mu1 {
        return Err(Error::InvalidParam {
            what: "alternative mean below mu1",
            value: mu,
        });
    }
    let d1 = family.bregman(mu1, mu0)?;
    let g = solve_g_alpha_constant(d1, alpha)?;
    let d_mu = family.bregman(mu, mu0)?;
    let sigma = sqrt(family.variance_bound(mu));
    let overshoot = sigma * family.bregman_grad(mu, mu0) / d_mu;
    Ok(g / d_mu + overshoot * overshoot + 1.0)
}

/// Expected-sample-size bound for the no-separation test with the log-log
/// boundary:
/// `1 + (2c/D*) log(1/α) + (2c/D*) log(2 log_c(2c^{5/2}/log c) + 2[log_c(1/D*)]₊)`.
pub fn expected_n_bound_noseq<F: PsiFamily + ?Sized>(
    family: &F,
    mu: f64,
    mu0: f64,
    c: f64,
    alpha: f64,
) -> Result<f64> {
    check_c(c)?;
    check_alpha(alpha)?;
    let dstar = family.dstar(mu, mu0)?;
    let log_c = |x: f64| ln(x) / ln(c);
    let inner = 2.0 * log_c(2.0 * powf(c, 2.5) / ln(c)) + 2.0 * log_c(1.0 / dstar).max(0.0);
    Ok(1.0 + 2.0 * c / dstar * (ln(1.0 / alpha) + ln(inner)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::SubGaussian;

    #[test]
    fn k_eta_examples() {
        let b = Boundary::Constant(5.0);
        assert_eq!(k_eta(&b, 0.02, 2.0).unwrap(), KEta::Finite(8));
        assert_eq!(k_eta(&b, 6.0, 2.0).unwrap(), KEta::Finite(0));
        assert_eq!(k_eta(&b, 0.0, 2.0).unwrap(), KEta::Infinite);
    }

    #[test]
    fn constant_bound_branches() {
        assert!((crossing_bound_constant(3.0, 2.0).unwrap() - exp(-2.0)).abs() < 1e-15);
        // branch continuity at d1 = g
        let at = crossing_bound_constant(2.0, 2.0).unwrap();
        assert!((at - exp(-2.0)).abs() < 1e-12);
        assert_eq!(crossing_bound_constant(0.0, 2.0), Err(Error::Degenerate));
    }

    #[test]
    fn solve_round_trips() {
        for &(d1, alpha) in &[(0.5, 0.05), (1e-3, 0.1), (1e-8, 0.025), (10.0, 0.1)] {
            let g = solve_g_alpha_constant(d1, alpha).unwrap();
            let b = crossing_bound_constant(d1, g).unwrap();
            assert!(b <= alpha && b >= alpha - 1e-6, "d1={d1} alpha={alpha} b={b}");
        }
    }

    #[test]
    fn lorden_solver_satisfies_bound() {
        let (d1, alpha) = (0.01, 0.05);
        let g = solve_g_alpha_lorden(d1, alpha).unwrap();
        let v = (1.0 + g / d1) * exp(-g);
        assert!((v - alpha).abs() < 1e-6);
        assert!(g >= ln(1.0 / alpha));
        assert!((solve_g_alpha_lorden(100.0, alpha).unwrap() - ln(1.0 / alpha)).abs() < 1e-12);
    }

    #[test]
    fn loglog_values() {
        let v = loglog_boundary(2.0, 0.1, 4.0);
        let expect = 2.0 * ((10.0f64).ln() + 2.0 * (3.0f64).ln());
        assert!((v - expect).abs() < 1e-12);
        assert!((loglog_boundary(2.0, 0.1, 1.0) - 2.0 * (10.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn stitched_loglog_sum_within_alpha() {
        let alpha = 0.1;
        let b = Boundary::LogLog { c: 2.0, alpha };
        let s = stitched_sum(
            &b,
            0.0,
            StitchParams {
                eta: 2.0,
                k_max: 1_000_000,
            },
        )
        .unwrap();
        let pi2 = core::f64::consts::PI * core::f64::consts::PI;
        assert!(s <= alpha);
        assert!((s - alpha * (pi2 / 6.0 - 1.0)).abs() < 1e-6);
    }

    #[test]
    fn general_bound_matches_constant_form() {
        for &(d1, g) in &[(0.3, 4.0), (0.01, 7.0), (1e-5, 3.0)] {
            let b = Boundary::Constant(g);
            let gen = crossing_bound_general(&b, d1, 100_000).unwrap();
            let exact = crossing_bound_constant(d1, g).unwrap();
            assert!((gen - exact).abs() <= 1e-10);
        }
    }

    #[test]
    fn general_bound_first_branch() {
        let b = Boundary::Constant(2.0);
        assert!((crossing_bound_general(&b, 5.0, 1000).unwrap() - exp(-2.0)).abs() < 1e-15);
    }

    #[test]
    fn loglog_general_bound_below_alpha() {
        let alpha = 0.05;
        let b = Boundary::LogLog { c: 2.0, alpha };
        let v = crossing_bound_general(&b, 0.0, 1_000_000).unwrap();
        assert!(v <= alpha);
    }

    #[test]
    fn t_high_monotone_and_bounded() {
        let f = SubGaussian::new(1.0).unwrap();
        let t1 = t_high(&f, 0.5, 0.0, 2.0, 0.05).unwrap();
        let t2 = t_high(&f, 0.5, 0.0, 2.0, 0.2).unwrap();
        assert!(t1 >= t2);
        let bound = t_high_bound(&f, 0.5, 0.0, 2.0, 0.05).unwrap();
        assert!((t1 as f64) <= bound);
        // enormous signal → stops immediately
        let t = t_high(&f, 500.0, 0.0, 2.0, 0.5).unwrap();
        assert_eq!(t, 1);
    }

    #[test]
    fn expected_n_const_matches_subgaussian_form() {
        let f = SubGaussian::new(1.0).unwrap();
        let (mu, mu0, mu1, alpha) = (0.3, 0.0, 0.1, 0.1);
        let bound = expected_n_bound_const(&f, mu, mu0, mu1, alpha).unwrap();
        let g = solve_g_alpha_constant(f.bregman(mu1, mu0).unwrap(), alpha).unwrap();
        let closed = 2.0 * (g + 2.0) / (mu * mu) + 1.0;
        assert!((bound - closed).abs() < 1e-9);
    }

}
