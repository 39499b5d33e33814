//! Sequential GLR-like tests and time-uniform confidence sequences for the
//! mean of nonparametric sub-ψ families.
//!
//! A *sub-ψ_M family* is a class of distributions whose cumulant generating
//! function is dominated by a known convex function `ψ_μ` with mean `μ`
//! ranging over an open interval `M`. Sub-Gaussian, sub-exponential,
//! Bernoulli, and Poisson observations are all special cases. The central
//! objects are:
//!
//! - LR-like and GLR-like statistics built from the convex conjugate `ψ*_μ`
//!   and its Bregman divergence ([`family`]),
//! - boundary-crossing probability bounds obtained by stitching geometric
//!   time epochs, and the boundary values that calibrate them ([`boundary`]),
//! - online stopping rules (constant-boundary tests for separated
//!   hypotheses, log-log boundary tests with no separation, an SPRT
//!   reference rule) and fixed-sample-size designers ([`sequential`]),
//! - anytime-valid confidence sequences tuned to be uniformly close to the
//!   pointwise Chernoff bound on a target time window, their discrete-mixture
//!   refinements, and two closed-form sub-Gaussian baselines ([`cs`]).
//!
//! Everything in this crate is deterministic, allocation-light, and
//! `no_std`-compatible (`alloc` is required). Monte Carlo experiments, the
//! CLI, and file formats live in the companion `sglrt-harness` crate.
//!
//! All tests and intervals here are one-sided for the hypotheses
//! `H0: μ ≤ μ0` vs `H1: μ > μ1` and produce lower confidence bounds. The
//! mirrored upper-bound constructions follow by negating the data and the
//! mean domain.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod boundary;
pub mod cs;
pub mod dist;
pub mod family;
pub mod sequential;
pub mod solve;

mod error;
mod num;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Absolute bisection tolerance on the mean scale.
pub const MEAN_TOL: f64 = 1e-10;

/// Absolute bisection tolerance for boundary values `g`.
pub const G_TOL: f64 = 1e-10;

/// Iteration cap for bracketed bisection.
pub const MAX_BISECT_ITER: usize = 200;
