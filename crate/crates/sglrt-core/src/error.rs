use core::fmt;

/// Errors reported by the statistical core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A mean (or candidate mean) lies outside the open mean domain `M`.
    MeanOutOfDomain { mu: f64 },
    /// An observation lies outside the closure of the mean domain; feeding it
    /// to a bounded-support family would make the sample mean leave `M̄`.
    ObservationOutOfSupport { x: f64 },
    /// `μ1 < μ0` was supplied where the one-sided ordering `μ0 ≤ μ1` is required.
    InvalidHypotheses { mu0: f64, mu1: f64 },
    /// No solution exists: the requested divergence level is at or above the
    /// limit of the divergence on the chosen side of the domain.
    NoSolution,
    /// The bound degenerates (for a constant boundary with `μ1 = μ0` every
    /// stitched term equals one); use a growing boundary instead.
    Degenerate,
    /// Stitched terms were still growing at the truncation cap, so the
    /// infinite sum cannot be certified summable.
    NonSummable,
    /// A parameter failed validation (value echoed for diagnostics).
    InvalidParam { what: &'static str, value: f64 },
    /// Monte Carlo calibration could not meet the target level on the grid.
    GridExhausted,
    /// The requested power is unattainable at any finite sample size.
    NoFiniteSize,
    /// Target time intervals overlap or are out of order.
    OverlappingIntervals,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MeanOutOfDomain { mu } => write!(f, "mean {mu} outside the open mean domain"),
            Error::ObservationOutOfSupport { x } => {
                write!(f, "observation {x} outside the support closure")
            }
            Error::InvalidHypotheses { mu0, mu1 } => {
                write!(f, "hypotheses out of order: mu1 = {mu1} < mu0 = {mu0}")
            }
            Error::NoSolution => write!(f, "no solution within the mean domain"),
            Error::Degenerate => write!(f, "degenerate bound; use a growing boundary"),
            Error::NonSummable => write!(f, "stitched series not certifiably summable"),
            Error::InvalidParam { what, value } => write!(f, "invalid {what}: {value}"),
            Error::GridExhausted => write!(f, "calibration grid exhausted"),
            Error::NoFiniteSize => write!(f, "no finite sample size attains the target power"),
            Error::OverlappingIntervals => write!(f, "target time intervals overlap"),
        }
    }
}

impl core::error::Error for Error {}
