//! Sub-ψ_M families, Bregman divergences, and LR/GLR-like statistics.
//!
//! A family is described by a convex CGF bound `ψ_μ(λ)` per mean `μ` in an
//! open domain `M`, normalized so that `ψ_μ(0) = 0` and `∇ψ_μ(0) = μ`. Its
//! convex conjugate `ψ*_μ` then satisfies `ψ*_μ(μ) = 0`, `∇ψ*_μ(μ) = 0`, and
//! the Bregman divergence with respect to `ψ*_μ0` collapses to
//!
//! ```text
//!     D_{ψ*_μ0}(z, μ0) = ψ*_μ0(z).
//! ```
//!
//! The log LR-like statistic for `H0: μ = μ0` vs `H1: μ = μ1` based on `n`
//! observations with sample mean `x̄` is
//!
//! ```text
//!     n [ λ1 x̄ − ψ_μ0(λ1) ],    λ1 = ∇ψ*_μ0(μ1),
//! ```
//!
//! which, as a function of `x̄`, is the tangent line to `z ↦ D_{ψ*_μ0}(z, μ0)`
//! at `z = μ1`. The log GLR-like statistic for `H0: μ ≤ μ0` vs `H1: μ > μ1`
//! equals the divergence itself above `μ1` and the tangent clipped at zero
//! below it. All downstream boundary crossing bounds, stopping rules, and
//! confidence sequences consume these two statistics.
//!
//! Families are immutable after construction and safe to share across
//! threads; every operation is a pure function of its arguments.

use alloc::boxed::Box;

use crate::num::{abs, exp, ln, ln_1p, sqrt};
use crate::solve::bisect_root;
use crate::{Error, Result, MAX_BISECT_ITER, MEAN_TOL};

/// An open interval of the real line; endpoints may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const REAL_LINE: Interval = Interval {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub const fn open(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    /// Membership in the open interval.
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// Membership in the closure.
    pub fn closure_contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Which side of `μ0` to invert the divergence on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Upper,
    Lower,
}

/// Structural class of a family, which decides which fast paths apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// `ψ_μ(λ) = ψ(λ) + λμ`; divergences depend only on `z − μ0`.
    Additive,
    /// `ψ_μ(λ) = B(λ + θ_μ) − B(θ_μ)`; divergences equal `D_{B*}` (the KL
    /// divergence for true exponential families).
    EfLike,
    Custom,
}

/// Tangent line to `z ↦ D_{ψ*_μ0}(z, μ0)` at `z = μ1`.
///
/// Evaluating it at the sample mean gives the normalized log LR-like
/// statistic; it is also the building block of the discrete mixtures.
#[derive(Clone, Copy, Debug)]
pub struct Tangent {
    /// Tangency point `μ1`.
    pub at: f64,
    /// `D_{ψ*_μ0}(μ1, μ0)`.
    pub value: f64,
    /// `∇_z D_{ψ*_μ0}(z, μ0) |_{z=μ1}` (equals `λ1`).
    pub slope: f64,
}

impl Tangent {
    /// Normalized log LR-like statistic at sample mean `xbar`.
    #[inline]
    pub fn eval(&self, xbar: f64) -> f64 {
        self.value + self.slope * (xbar - self.at)
    }
}

/// A sub-ψ_M family of distributions.
///
/// Implementors provide the six primitive functions (`ψ`, its λ-derivative,
/// the conjugate `ψ*`, its z-derivative, the variance bound `∇²ψ_μ(0)` and
/// the domains); every statistic is derived from those. `ψ*` must return
/// `+∞` outside the region where it is finite so that root bracketing can
/// step past domain barriers safely.
pub trait PsiFamily {
    fn mean_domain(&self) -> Interval;
    fn lambda_domain(&self) -> Interval;
    fn kind(&self) -> FamilyKind;
    /// CGF bound `ψ_μ(λ)`.
    fn psi(&self, lambda: f64, mu: f64) -> f64;
    /// `∂ψ_μ/∂λ`.
    fn psi_grad(&self, lambda: f64, mu: f64) -> f64;
    /// Convex conjugate `ψ*_μ(z)`; `+∞` where the conjugate is infinite.
    fn psi_star(&self, z: f64, mu: f64) -> f64;
    /// `∇ψ*_μ(z)`.
    fn psi_star_grad(&self, z: f64, mu: f64) -> f64;
    /// Upper bound `σ²_μ = ∇²ψ_μ(0)` on the variance of any member.
    fn variance_bound(&self, mu: f64) -> f64;

    /// Whether confidence sets stay open intervals at all times, so binary
    /// search is sound outside the target window as well (true for additive
    /// families and EF-like families whose `∇B` is convex).
    fn interval_cs_everywhere(&self) -> bool {
        matches!(self.kind(), FamilyKind::Additive)
    }

    /// Closed-form divergence inverse, when one exists.
    fn inv_bregman_closed(&self, _mu0: f64, _d: f64, _side: Side) -> Option<f64> {
        None
    }

    /// Limit of `D_{ψ*_μ0}(z, μ0)` as `z` approaches the domain edge on the
    /// given side (the supremum of the divergence on that side).
    ///
    /// The default walks `z` toward the edge and reports the observed limit;
    /// built-in families override it with the analytic value.
    fn divergence_limit(&self, mu0: f64, side: Side) -> f64 {
        let m = self.mean_domain();
        let (edge, dir) = match side {
            Side::Upper => (m.hi, 1.0),
            Side::Lower => (m.lo, -1.0),
        };
        let mut last = 0.0;
        if edge.is_finite() {
            for j in 1..=60 {
                let z = edge - dir * (edge - mu0).abs() * exp(-(j as f64) * core::f64::consts::LN_2);
                let d = self.psi_star(z, mu0);
                if !d.is_finite() || d > 1e15 {
                    return f64::INFINITY;
                }
                last = d;
            }
            let at_edge = self.psi_star(edge, mu0);
            if at_edge.is_finite() {
                return at_edge;
            }
            last
        } else {
            let mut step = abs(mu0).max(1.0);
            for _ in 0..200 {
                let d = self.psi_star(mu0 + dir * step, mu0);
                if !d.is_finite() || d > 1e15 {
                    return f64::INFINITY;
                }
                if d - last < 1e-12 * (1.0 + d) {
                    return d;
                }
                last = d;
                step *= 2.0;
            }
            f64::INFINITY
        }
    }

    fn check_mean(&self, mu: f64) -> Result<()> {
        if self.mean_domain().contains(mu) {
            Ok(())
        } else {
            Err(Error::MeanOutOfDomain { mu })
        }
    }

    fn check_observation(&self, x: f64) -> Result<()> {
        if self.mean_domain().closure_contains(x) {
            Ok(())
        } else {
            Err(Error::ObservationOutOfSupport { x })
        }
    }

    /// Bregman divergence `D_{ψ*_μ0}(z, μ0) = ψ*_μ0(z)`.
    ///
    /// `z` may lie in the closure of `M`; at a closure endpoint the
    /// (possibly infinite) limit is returned.
    fn bregman(&self, z: f64, mu0: f64) -> Result<f64> {
        self.check_mean(mu0)?;
        self.check_observation(z)?;
        Ok(self.psi_star(z, mu0))
    }

    /// `∇_z D_{ψ*_μ0}(z, μ0)`.
    fn bregman_grad(&self, z: f64, mu0: f64) -> f64 {
        self.psi_star_grad(z, mu0)
    }

    /// Inverse of `z ↦ D_{ψ*_μ0}(z, μ0)` on the chosen side of `μ0`.
    ///
    /// Returns the `z` with `D(z, μ0) = d`, `z > μ0` for [`Side::Upper`] and
    /// `z < μ0` for [`Side::Lower`], found by bracketed bisection to the
    /// crate mean tolerance. Fails with [`Error::NoSolution`] when `d`
    /// reaches the divergence limit on that side.
    fn inv_bregman(&self, mu0: f64, d: f64, side: Side) -> Result<f64> {
        self.check_mean(mu0)?;
        if d < 0.0 {
            return Err(Error::InvalidParam {
                what: "divergence level",
                value: d,
            });
        }
        if d == 0.0 {
            return Ok(mu0);
        }
        if d >= self.divergence_limit(mu0, side) {
            return Err(Error::NoSolution);
        }
        if let Some(z) = self.inv_bregman_closed(mu0, d, side) {
            return Ok(z);
        }
        let m = self.mean_domain();
        let (edge, dir) = match side {
            Side::Upper => (m.hi, 1.0),
            Side::Lower => (m.lo, -1.0),
        };
        // Bracket: expand geometrically toward the edge until D >= d. An
        // evaluation past an interior barrier yields +inf, which still
        // brackets correctly.
        let mut hi = mu0;
        let mut found = false;
        if edge.is_finite() {
            let span = (edge - mu0).abs();
            for j in 1..=60 {
                hi = edge - dir * span * exp(-(j as f64) * core::f64::consts::LN_2);
                if self.psi_star(hi, mu0) >= d {
                    found = true;
                    break;
                }
            }
            if !found {
                // Root hugs the edge; the closure value bounds it from above.
                hi = edge;
                found = true;
            }
        } else {
            let mut step = abs(mu0).max(1.0) * 1e-3;
            for _ in 0..120 {
                hi = mu0 + dir * step;
                let v = self.psi_star(hi, mu0);
                if !v.is_finite() || v >= d {
                    found = true;
                    break;
                }
                step *= 2.0;
            }
        }
        if !found {
            return Err(Error::NoSolution);
        }
        Ok(bisect_root(
            |z| {
                let v = self.psi_star(z, mu0);
                if v.is_finite() {
                    v - d
                } else {
                    f64::INFINITY
                }
            },
            mu0,
            hi,
            MEAN_TOL,
        ))
    }

    /// Tangent line to the divergence at `μ1` (normalized log LR-like
    /// statistic as a function of the sample mean).
    fn lr_tangent(&self, mu1: f64, mu0: f64) -> Result<Tangent> {
        self.check_mean(mu0)?;
        self.check_mean(mu1)?;
        Ok(Tangent {
            at: mu1,
            value: self.psi_star(mu1, mu0),
            slope: self.psi_star_grad(mu1, mu0),
        })
    }

    /// Log LR-like statistic `n [λ1 x̄ − ψ_μ0(λ1)]` with `λ1 = ∇ψ*_μ0(μ1)`.
    fn log_lr_like(&self, n: u64, xbar: f64, mu1: f64, mu0: f64) -> Result<f64> {
        self.check_mean(mu0)?;
        self.check_mean(mu1)?;
        self.check_observation(xbar)?;
        let lambda1 = self.psi_star_grad(mu1, mu0);
        Ok(n as f64 * (lambda1 * xbar - self.psi(lambda1, mu0)))
    }

    /// Log GLR-like statistic `n · f(x̄; μ1, μ0)` for `H0: μ ≤ μ0` vs
    /// `H1: μ > μ1`: the divergence above `μ1`, its tangent clipped at zero
    /// below. Always nonnegative; requires `μ0 ≤ μ1`.
    fn log_glr_like(&self, n: u64, xbar: f64, mu1: f64, mu0: f64) -> Result<f64> {
        if mu1 < mu0 {
            return Err(Error::InvalidHypotheses { mu0, mu1 });
        }
        self.check_mean(mu0)?;
        self.check_mean(mu1)?;
        self.check_observation(xbar)?;
        let f = if xbar > mu1 {
            self.psi_star(xbar, mu0)
        } else {
            self.lr_tangent(mu1, mu0)?.eval(xbar).max(0.0)
        };
        Ok(n as f64 * f)
    }

    /// Balance point of the two divergences: the unique `z* ∈ (μ0, μ)` with
    /// `D_{ψ*_μ0}(z*, μ0) = D_{ψ*_μ}(z*, μ)`, together with the common value.
    fn dstar_point(&self, mu: f64, mu0: f64) -> Result<(f64, f64)> {
        self.check_mean(mu0)?;
        self.check_mean(mu)?;
        if mu <= mu0 {
            return Err(Error::InvalidHypotheses { mu0, mu1: mu });
        }
        let z = bisect_root(
            |z| self.psi_star(z, mu0) - self.psi_star(z, mu),
            mu0,
            mu,
            MEAN_TOL * (mu - mu0).min(1.0),
        );
        let v = self.psi_star(z, mu0).max(self.psi_star(z, mu));
        Ok((z, v))
    }

    /// The divergence `D*(μ, μ0)` governing worst-case detection times under
    /// the alternative `μ > μ0`.
    fn dstar(&self, mu: f64, mu0: f64) -> Result<f64> {
        Ok(self.dstar_point(mu, mu0)?.1)
    }
}

/// Distributions with CGF dominated by `λμ + σ²λ²/2`.
///
/// `M = Λ = ℝ` and `D_{ψ*_μ0}(z, μ0) = (z − μ0)² / (2σ²)`.
#[derive(Clone, Copy, Debug)]
pub struct SubGaussian {
    sigma: f64,
}

impl SubGaussian {
    pub fn new(sigma: f64) -> Result<Self> {
        if sigma > 0.0 && sigma.is_finite() {
            Ok(SubGaussian { sigma })
        } else {
            Err(Error::InvalidParam {
                what: "sub-Gaussian sigma",
                value: sigma,
            })
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl PsiFamily for SubGaussian {
    fn mean_domain(&self) -> Interval {
        Interval::REAL_LINE
    }

    fn lambda_domain(&self) -> Interval {
        Interval::REAL_LINE
    }

    fn kind(&self) -> FamilyKind {
        FamilyKind::Additive
    }

    fn psi(&self, lambda: f64, mu: f64) -> f64 {
        lambda * mu + 0.5 * self.sigma * self.sigma * lambda * lambda
    }

    fn psi_grad(&self, lambda: f64, mu: f64) -> f64 {
        mu + self.sigma * self.sigma * lambda
    }

    fn psi_star(&self, z: f64, mu: f64) -> f64 {
        let u = z - mu;
        u * u / (2.0 * self.sigma * self.sigma)
    }

    fn psi_star_grad(&self, z: f64, mu: f64) -> f64 {
        (z - mu) / (self.sigma * self.sigma)
    }

    fn variance_bound(&self, _mu: f64) -> f64 {
        self.sigma * self.sigma
    }

    fn divergence_limit(&self, _mu0: f64, _side: Side) -> f64 {
        f64::INFINITY
    }

    fn inv_bregman_closed(&self, mu0: f64, d: f64, side: Side) -> Option<f64> {
        let delta = self.sigma * sqrt(2.0 * d);
        Some(match side {
            Side::Upper => mu0 + delta,
            Side::Lower => mu0 - delta,
        })
    }
}

/// Bernoulli-mean family: `M = (0, 1)`, `ψ_μ(λ) = log(1 − μ + μ e^λ)`, and
/// the divergence is the Bernoulli KL divergence.
///
/// `∇B` (the logistic function) is not convex, so confidence sets are only
/// guaranteed to be intervals on the target time window; outside it a grid
/// scan is used.
#[derive(Clone, Copy, Debug, Default)]
pub struct Bernoulli;

impl PsiFamily for Bernoulli {
    fn mean_domain(&self) -> Interval {
        Interval::open(0.0, 1.0)
    }

    fn lambda_domain(&self) -> Interval {
        Interval::REAL_LINE
    }

    fn kind(&self) -> FamilyKind {
        FamilyKind::EfLike
    }

    fn psi(&self, lambda: f64, mu: f64) -> f64 {
        // log(1 - mu + mu e^λ), stable for large |λ|
        if lambda > 0.0 {
            lambda + ln_1p((1.0 - mu) * (exp(-lambda) - 1.0))
        } else {
            ln_1p(mu * (exp(lambda) - 1.0))
        }
    }

    fn psi_grad(&self, lambda: f64, mu: f64) -> f64 {
        let e = exp(lambda);
        mu * e / (1.0 - mu + mu * e)
    }

    fn psi_star(&self, z: f64, mu: f64) -> f64 {
        if !(0.0..=1.0).contains(&z) {
            return f64::INFINITY;
        }
        let a = if z > 0.0 { z * ln(z / mu) } else { 0.0 };
        let b = if z < 1.0 {
            (1.0 - z) * ln((1.0 - z) / (1.0 - mu))
        } else {
            0.0
        };
        a + b
    }

    fn psi_star_grad(&self, z: f64, mu: f64) -> f64 {
        ln(z / mu) - ln((1.0 - z) / (1.0 - mu))
    }

    fn variance_bound(&self, mu: f64) -> f64 {
        mu * (1.0 - mu)
    }

    fn interval_cs_everywhere(&self) -> bool {
        false
    }

    fn divergence_limit(&self, mu0: f64, side: Side) -> f64 {
        match side {
            Side::Upper => -ln(mu0),
            Side::Lower => -ln(1.0 - mu0),
        }
    }
}

/// Poisson-mean family: `M = (0, ∞)`, EF-like with `B(θ) = e^θ`, so the
/// divergence is `z log(z/μ0) − z + μ0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Poisson;

impl PsiFamily for Poisson {
    fn mean_domain(&self) -> Interval {
        Interval::open(0.0, f64::INFINITY)
    }

    fn lambda_domain(&self) -> Interval {
        Interval::REAL_LINE
    }

    fn kind(&self) -> FamilyKind {
        FamilyKind::EfLike
    }

    fn psi(&self, lambda: f64, mu: f64) -> f64 {
        mu * (exp(lambda) - 1.0)
    }

    fn psi_grad(&self, lambda: f64, mu: f64) -> f64 {
        mu * exp(lambda)
    }

    fn psi_star(&self, z: f64, mu: f64) -> f64 {
        if z < 0.0 {
            return f64::INFINITY;
        }
        if z == 0.0 {
            return mu;
        }
        z * ln(z / mu) - z + mu
    }

    fn psi_star_grad(&self, z: f64, mu: f64) -> f64 {
        ln(z / mu)
    }

    fn variance_bound(&self, mu: f64) -> f64 {
        mu
    }

    // ∇B = e^θ is convex, so confidence sets are intervals at every n.
    fn interval_cs_everywhere(&self) -> bool {
        true
    }

    fn divergence_limit(&self, mu0: f64, side: Side) -> f64 {
        match side {
            Side::Upper => f64::INFINITY,
            Side::Lower => mu0,
        }
    }
}

/// Additive sub-exponential family with scale `b`:
/// `ψ(λ) = −log(1 − λb) − λb` on `Λ = (−∞, 1/b)`, so
/// `D_{ψ*_μ0}(z, μ0) = u/b − log(1 + u/b)` with `u = z − μ0`.
///
/// This is one standard sub-exponential CGF bound (that of a centered
/// exponential variable with mean `b`), shipped as the toolkit's default; any
/// other additive ψ can be supplied through [`CustomFamily`].
#[derive(Clone, Copy, Debug)]
pub struct SubExponential {
    scale: f64,
}

impl SubExponential {
    pub fn new(scale: f64) -> Result<Self> {
        if scale > 0.0 && scale.is_finite() {
            Ok(SubExponential { scale })
        } else {
            Err(Error::InvalidParam {
                what: "sub-exponential scale",
                value: scale,
            })
        }
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl PsiFamily for SubExponential {
    fn mean_domain(&self) -> Interval {
        Interval::REAL_LINE
    }

    fn lambda_domain(&self) -> Interval {
        Interval::open(f64::NEG_INFINITY, 1.0 / self.scale)
    }

    fn kind(&self) -> FamilyKind {
        FamilyKind::Additive
    }

    fn psi(&self, lambda: f64, mu: f64) -> f64 {
        let lb = lambda * self.scale;
        if lb >= 1.0 {
            return f64::INFINITY;
        }
        lambda * mu - ln_1p(-lb) - lb
    }

    fn psi_grad(&self, lambda: f64, mu: f64) -> f64 {
        let b = self.scale;
        mu + b * b * lambda / (1.0 - lambda * b)
    }

    fn psi_star(&self, z: f64, mu: f64) -> f64 {
        let r = (z - mu) / self.scale;
        if r <= -1.0 {
            return f64::INFINITY;
        }
        r - ln_1p(r)
    }

    fn psi_star_grad(&self, z: f64, mu: f64) -> f64 {
        let u = z - mu;
        u / (self.scale * (u + self.scale))
    }

    fn variance_bound(&self, _mu: f64) -> f64 {
        self.scale * self.scale
    }

    fn divergence_limit(&self, _mu0: f64, _side: Side) -> f64 {
        f64::INFINITY
    }
}

type Fn2 = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Fn1 = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied sub-ψ_M family.
///
/// All six primitive functions must be provided; no differentiation is done
/// on the caller's behalf. `psi_star` must return `+∞` where the conjugate is
/// infinite. There is no automatic check that `psi` is a valid CGF bound.
pub struct CustomFamily {
    pub mean_domain: Interval,
    pub lambda_domain: Interval,
    pub psi: Fn2,
    pub psi_grad: Fn2,
    pub psi_star: Fn2,
    pub psi_star_grad: Fn2,
    pub variance_bound: Fn1,
    /// Set when the family is known to keep confidence sets intervals at all
    /// times (additive, or EF-like with convex `∇B`).
    pub interval_cs_everywhere: bool,
}

impl PsiFamily for CustomFamily {
    fn mean_domain(&self) -> Interval {
        self.mean_domain
    }

    fn lambda_domain(&self) -> Interval {
        self.lambda_domain
    }

    fn kind(&self) -> FamilyKind {
        FamilyKind::Custom
    }

    fn psi(&self, lambda: f64, mu: f64) -> f64 {
        (self.psi)(lambda, mu)
    }

    fn psi_grad(&self, lambda: f64, mu: f64) -> f64 {
        (self.psi_grad)(lambda, mu)
    }

    fn psi_star(&self, z: f64, mu: f64) -> f64 {
        (self.psi_star)(z, mu)
    }

    fn psi_star_grad(&self, z: f64, mu: f64) -> f64 {
        (self.psi_star_grad)(z, mu)
    }

    fn variance_bound(&self, mu: f64) -> f64 {
        (self.variance_bound)(mu)
    }

    fn interval_cs_everywhere(&self) -> bool {
        self.interval_cs_everywhere
    }
}

/// Brute-force GLR-like evaluation: `max(0, sup over a z-grid of the LR-like
/// statistic with alternatives z > μ1)`.
///
/// Only used to cross-check [`PsiFamily::log_glr_like`] in tests and property
/// suites; the closed form should dominate every grid value and match at the
/// grid resolution.
pub fn log_glr_like_grid(
    family: &dyn PsiFamily,
    n: u64,
    xbar: f64,
    mu1: f64,
    mu0: f64,
    z_hi: f64,
    grid: usize,
) -> Result<f64> {
    let mut best: f64 = 0.0;
    for i in 0..=grid {
        let z = mu1 + (z_hi - mu1) * i as f64 / grid as f64;
        if !family.mean_domain().contains(z) || z <= mu1 {
            continue;
        }
        best = best.max(family.log_lr_like(n, xbar, z, mu0)?);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgaussian_divergence_quadratic() {
        let f = SubGaussian::new(1.0).unwrap();
        assert!((f.bregman(0.2, 0.0).unwrap() - 0.02).abs() < 1e-15);
        assert_eq!(f.bregman(0.7, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn bernoulli_divergence_is_kl() {
        let f = Bernoulli;
        let d = f.bregman(0.75, 0.5).unwrap();
        let kl = 0.75 * (0.75f64 / 0.5).ln() + 0.25 * (0.25f64 / 0.5).ln();
        assert!((d - kl).abs() < 1e-14);
        // closure endpoints take the finite limits
        assert!((f.bregman(1.0, 0.25).unwrap() - (1.0f64 / 0.25).ln()).abs() < 1e-14);
        assert!((f.bregman(0.0, 0.25).unwrap() - (1.0f64 / 0.75).ln()).abs() < 1e-14);
    }

    #[test]
    fn bernoulli_domain_errors() {
        let f = Bernoulli;
        assert!(matches!(
            f.bregman(0.5, 1.2),
            Err(Error::MeanOutOfDomain { .. })
        ));
        assert!(matches!(
            f.bregman(1.5, 0.5),
            Err(Error::ObservationOutOfSupport { .. })
        ));
    }

    #[test]
    fn inv_bregman_round_trip() {
        let f = Bernoulli;
        let d = f.bregman(0.75, 0.5).unwrap();
        let z = f.inv_bregman(0.5, d, Side::Upper).unwrap();
        assert!((z - 0.75).abs() < 1e-8);
        let zl = f.inv_bregman(0.5, d, Side::Lower).unwrap();
        assert!(zl < 0.5);
        assert!((f.bregman(zl, 0.5).unwrap() - d).abs() < 1e-8);
    }

    #[test]
    fn inv_bregman_no_solution_past_limit() {
        let f = Bernoulli;
        let limit = f.divergence_limit(0.25, Side::Upper);
        assert!((limit - (1.0f64 / 0.25).ln()).abs() < 1e-14);
        assert_eq!(f.inv_bregman(0.25, limit, Side::Upper), Err(Error::NoSolution));
        assert!(f.inv_bregman(0.25, limit - 1e-6, Side::Upper).is_ok());
    }

    #[test]
    fn poisson_edge_cases() {
        let f = Poisson;
        assert!((f.bregman(0.0, 2.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(f.divergence_limit(2.0, Side::Lower), 2.0);
        assert_eq!(f.inv_bregman(2.0, 2.0, Side::Lower), Err(Error::NoSolution));
    }

    #[test]
    fn subexponential_conjugate_identities() {
        let f = SubExponential::new(0.5).unwrap();
        // psi*(z - mu) with z - mu = -b is infinite
        assert_eq!(f.psi_star(-0.5, 0.0), f64::INFINITY);
        let d = f.bregman(0.4, 0.0).unwrap();
        let z = f.inv_bregman(0.0, d, Side::Upper).unwrap();
        assert!((z - 0.4).abs() < 1e-8);
    }

    #[test]
    fn glr_like_examples() {
        let f = SubGaussian::new(1.0).unwrap();
        assert!((f.log_lr_like(10, 0.3, 0.2, 0.0).unwrap() - 0.4).abs() < 1e-12);
        assert!((f.log_glr_like(10, 0.3, 0.2, 0.0).unwrap() - 0.45).abs() < 1e-12);
        assert!(f.log_glr_like(10, 0.1, 0.2, 0.0).unwrap().abs() < 1e-12);
        assert_eq!(
            f.log_glr_like(5, 0.0, 0.1, 0.2),
            Err(Error::InvalidHypotheses { mu0: 0.2, mu1: 0.1 })
        );
    }

    #[test]
    fn dstar_subgaussian_midpoint() {
        let f = SubGaussian::new(1.0).unwrap();
        let (z, v) = f.dstar_point(0.4, 0.0).unwrap();
        assert!((z - 0.2).abs() < 1e-9);
        assert!((v - 0.02).abs() < 1e-9);
    }
}
