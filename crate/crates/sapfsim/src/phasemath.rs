//! Reference-frame transforms and discrete signal primitives.
//!
//! The transforms use the amplitude-invariant (2/3) Clarke convention, so a
//! balanced three-phase set of peak amplitude `A` maps to a rotating vector of
//! length `A` in the αβ plane, and the d/q components read directly as
//! phase-peak amperes (or volts). Power computations elsewhere apply the 3/2
//! factor explicitly.
//!
//! The Park rotation is chosen so that, with the angle taken from the mains
//! voltage vector ([`grid_angle`]), a current in phase with the voltage lands
//! entirely on the d axis and a lagging current produces a negative q
//! component.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

pub(crate) const SQRT_3: f64 = 1.732_050_807_568_877_2;

/// Instantaneous (a, b, c) values of a three-phase voltage or current at one
/// timestep. No balance assumption is made.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ThreePhaseSample {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ThreePhaseSample {
    pub const ZERO: Self = Self { a: 0.0, b: 0.0, c: 0.0 };

    pub fn new(a: f64, b: f64, c: f64) -> Self {
        Self { a, b, c }
    }

    /// Sum of the three phase values (three times the zero-sequence content).
    pub fn sum(&self) -> f64 {
        self.a + self.b + self.c
    }

    /// Largest absolute phase value.
    pub fn max_abs(&self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs())
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }
}

impl Add for ThreePhaseSample {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b, self.c + rhs.c)
    }
}

impl Sub for ThreePhaseSample {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b, self.c - rhs.c)
    }
}

impl Neg for ThreePhaseSample {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b, -self.c)
    }
}

impl Mul<f64> for ThreePhaseSample {
    type Output = Self;
    fn mul(self, k: f64) -> Self {
        Self::new(self.a * k, self.b * k, self.c * k)
    }
}

/// A value in the stationary αβ0 frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StationarySample {
    pub alpha: f64,
    pub beta: f64,
    pub zero: f64,
}

impl StationarySample {
    pub fn new(alpha: f64, beta: f64, zero: f64) -> Self {
        Self { alpha, beta, zero }
    }

    /// Squared length of the rotating (α, β) vector.
    pub fn norm_sq(&self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta
    }
}

/// A value in a frame rotating at the mains angle (d = active direction,
/// q = quadrature). The zero component passes through the rotation untouched.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RotatingSample {
    pub d: f64,
    pub q: f64,
    pub zero: f64,
}

impl RotatingSample {
    pub fn new(d: f64, q: f64, zero: f64) -> Self {
        Self { d, q, zero }
    }
}

/// Amplitude-invariant Clarke transform:
/// α = (2a − b − c)/3, β = (b − c)/√3, zero = (a + b + c)/3.
pub fn clarke(x: ThreePhaseSample) -> StationarySample {
    StationarySample {
        alpha: (2.0 * x.a - x.b - x.c) / 3.0,
        beta: (x.b - x.c) / SQRT_3,
        zero: (x.a + x.b + x.c) / 3.0,
    }
}

/// Inverse of [`clarke`]; `inverse_clarke(clarke(x))` reproduces `x` to
/// rounding.
pub fn inverse_clarke(x: StationarySample) -> ThreePhaseSample {
    let half_alpha = 0.5 * x.alpha;
    let beta_term = 0.5 * SQRT_3 * x.beta;
    ThreePhaseSample {
        a: x.alpha + x.zero,
        b: -half_alpha + beta_term + x.zero,
        c: -half_alpha - beta_term + x.zero,
    }
}

/// Rotate an αβ vector into the frame at angle `theta`:
/// d = α·cosθ + β·sinθ, q = −α·sinθ + β·cosθ.
pub fn park(x: StationarySample, theta: f64) -> RotatingSample {
    let (sin, cos) = theta.sin_cos();
    RotatingSample {
        d: x.alpha * cos + x.beta * sin,
        q: -x.alpha * sin + x.beta * cos,
        zero: x.zero,
    }
}

/// Inverse of [`park`].
pub fn inverse_park(x: RotatingSample, theta: f64) -> StationarySample {
    let (sin, cos) = theta.sin_cos();
    StationarySample {
        alpha: x.d * cos - x.q * sin,
        beta: x.d * sin + x.q * cos,
        zero: x.zero,
    }
}

/// Error from frame operations that need a live mains vector.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    /// The αβ voltage vector is identically zero, so no angle exists. Callers
    /// should hold the last known angle; this signals a dead grid.
    #[error("zero mains vector")]
    ZeroMainsVector,
}

/// Angle of the mains voltage vector, taken directly from the αβ components
/// (no PLL): θ = atan2(v_β, v_α), normalized to (−π, π].
pub fn grid_angle(v: StationarySample) -> Result<f64, FrameError> {
    if v.alpha == 0.0 && v.beta == 0.0 {
        return Err(FrameError::ZeroMainsVector);
    }
    let theta = v.beta.atan2(v.alpha);
    // atan2 returns −π for (−0.0, x<0); fold onto the (−π, π] contract.
    Ok(if theta == -PI { PI } else { theta })
}

/// First-order low-pass filter state, discretized with backward Euler:
/// y' = (y + a·x)/(1 + a) with a = 2π·cutoff·dt.
///
/// Backward Euler is unconditionally stable for any cutoff > 0 and never
/// overshoots: the output stays within the hull of the initial state and all
/// inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderFilter {
    y: f64,
    cutoff_hz: f64,
}

/// Invalid filter construction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error("filter cutoff must be positive, got {0} Hz")]
    NonPositiveCutoff(f64),
}

impl FirstOrderFilter {
    pub fn new(cutoff_hz: f64, initial: f64) -> Result<Self, FilterError> {
        if !(cutoff_hz > 0.0) {
            return Err(FilterError::NonPositiveCutoff(cutoff_hz));
        }
        Ok(Self { y: initial, cutoff_hz })
    }

    /// Advance the filter by one step of length `dt` with input `x` and
    /// return the new output.
    pub fn step(&mut self, x: f64, dt: f64) -> f64 {
        debug_assert!(dt > 0.0);
        let a = 2.0 * PI * self.cutoff_hz * dt;
        self.y = (self.y + a * x) / (1.0 + a);
        self.y
    }

    pub fn output(&self) -> f64 {
        self.y
    }

    pub fn cutoff_hz(&self) -> f64 {
        self.cutoff_hz
    }

    /// Phase lag introduced at frequency `f_hz`, in radians. Useful to
    /// correct angle estimates taken from filtered signals.
    pub fn phase_lag_at(&self, f_hz: f64) -> f64 {
        (f_hz / self.cutoff_hz).atan()
    }
}
