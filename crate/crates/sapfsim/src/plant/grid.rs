//! Ideal stiff three-phase source behind a series impedance.

use super::{check_param, PlantError};
use crate::phasemath::{ThreePhaseSample, SQRT_3};
use std::f64::consts::PI;

const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// Balanced three-phase EMF with per-phase series resistance and inductance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSource {
    pub v_ll_rms: f64,
    pub freq_hz: f64,
    pub r_s: f64,
    pub l_s: f64,
}

impl GridSource {
    pub fn new(v_ll_rms: f64, freq_hz: f64, r_s: f64, l_s: f64) -> Result<Self, PlantError> {
        check_param("grid", "v_ll_rms", v_ll_rms > 0.0, "must be > 0 V")?;
        check_param("grid", "freq_hz", freq_hz > 0.0, "must be > 0 Hz")?;
        check_param("grid", "r_s", r_s >= 0.0, "must be >= 0 ohm")?;
        check_param("grid", "l_s", l_s >= 0.0, "must be >= 0 H")?;
        Ok(Self { v_ll_rms, freq_hz, r_s, l_s })
    }

    /// Peak of the phase-to-neutral voltage, √2·v_ll/√3.
    pub fn phase_peak(&self) -> f64 {
        SQRT_2 * self.v_ll_rms / SQRT_3
    }

    /// Peak of the line-to-line voltage.
    pub fn line_peak(&self) -> f64 {
        SQRT_2 * self.v_ll_rms
    }

    /// Source EMF at time `t`: phase a = √2·(v_ll/√3)·sin(2πft), b and c
    /// shifted by ∓2π/3.
    pub fn voltage(&self, t: f64) -> ThreePhaseSample {
        let peak = self.phase_peak();
        let wt = 2.0 * PI * self.freq_hz * t;
        ThreePhaseSample {
            a: peak * wt.sin(),
            b: peak * (wt - 2.0 * PI / 3.0).sin(),
            c: peak * (wt + 2.0 * PI / 3.0).sin(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridSource {
        GridSource::new(415.0, 50.0, 0.1, 0.5e-3).unwrap()
    }

    #[test]
    fn peak_matches_rms_definition() {
        let g = grid();
        // At the quarter cycle phase a sits at its peak, √2 times the
        // phase RMS.
        let v = g.voltage(1.0 / (4.0 * 50.0));
        let v_ph_rms = 415.0 / SQRT_3;
        assert!((v.a - SQRT_2 * v_ph_rms).abs() < 1e-9);
    }

    #[test]
    fn symmetric_at_time_zero() {
        let v = grid().voltage(0.0);
        assert!(v.a.abs() < 1e-12);
        assert!((v.b + v.c).abs() < 1e-12);
    }

    #[test]
    fn balanced_sum_is_zero() {
        let g = grid();
        for k in 0..1000 {
            let v = g.voltage(k as f64 * 37e-6);
            assert!(v.sum().abs() < 1e-9 * g.phase_peak());
        }
    }

    #[test]
    fn rejects_nonpositive_voltage() {
        assert!(GridSource::new(0.0, 50.0, 0.0, 0.0).is_err());
        assert!(GridSource::new(415.0, -1.0, 0.0, 0.0).is_err());
    }
}
