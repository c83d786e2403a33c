//! Power-quality mathematics: synchronous harmonic analysis, THD, power
//! metrics, current decomposition and before/after comparison reports.
//!
//! All operations assume windows that span an exact integer number of
//! fundamental cycles at an integer number of samples per cycle — which the
//! engine guarantees by snapping the step size at load time. Under that
//! assumption the direct correlation used here is leakage-free and needs no
//! window function.

mod compare;
mod decompose;
mod power;
mod spectrum;

pub use compare::{compare_report, Comparison, HarmonicDelta};
pub use decompose::{decompose_current, CurrentDecomposition};
pub use power::{power_metrics, PowerReport};
pub use spectrum::{dft_spectrum, fundamental_is_settled, rms, thd, HarmonicSpectrum};

use thiserror::Error;

/// Default harmonic ceiling for power-quality metrics (h·f1 = 2.5 kHz at
/// 50 Hz). Switching content above this is excluded from THD by decision.
pub const DEFAULT_HARMONIC_CEILING: usize = 50;

/// Default steady-state analysis window, in fundamental cycles.
pub const DEFAULT_WINDOW_CYCLES: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    /// The window does not hold an exact integer number of fundamental
    /// cycles at an integer number of samples per cycle.
    #[error(
        "asynchronous window: {samples} samples at fs/f1 = {rate_ratio} \
         (need an integer number of cycles of an integer samples-per-cycle rate)"
    )]
    AsynchronousWindow { samples: usize, rate_ratio: f64 },

    /// Requested harmonics above the Nyquist limit of the sample rate.
    #[error("harmonic {harmonic} exceeds Nyquist at {samples_per_cycle} samples per cycle")]
    HarmonicAboveNyquist { harmonic: usize, samples_per_cycle: usize },

    /// The fundamental magnitude is zero, so ratios against it are undefined.
    #[error("no fundamental")]
    NoFundamental,

    /// Voltage channel carries no signal; conductance scaling is undefined.
    #[error("zero voltage channel")]
    ZeroVoltage,

    /// Two reports being compared were produced at different fundamentals.
    #[error("mismatched fundamental: {before} Hz vs {after} Hz")]
    MismatchedFundamental { before: f64, after: f64 },

    /// Paired channels must cover the same window.
    #[error("channel length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
}
