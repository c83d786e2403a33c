//! Per-phase series R–L load (the lagging-power-factor component).

use super::{check_param, PlantError};
use crate::phasemath::ThreePhaseSample;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearLoad {
    pub r: f64,
    pub l: f64,
    pub i_abc: ThreePhaseSample,
}

impl LinearLoad {
    pub fn new(r: f64, l: f64) -> Result<Self, PlantError> {
        check_param("linear load", "r", r > 0.0, "must be > 0 ohm")?;
        check_param("linear load", "l", l >= 0.0, "must be >= 0 H")?;
        Ok(Self { r, l, i_abc: ThreePhaseSample::ZERO })
    }

    /// Advance the phase currents by one step: di/dt = (v − r·i)/l, or the
    /// instantaneous resistive solution when l = 0.
    pub fn step(&mut self, v_pcc: ThreePhaseSample, dt: f64) -> ThreePhaseSample {
        debug_assert!(dt > 0.0);
        if self.l == 0.0 {
            self.i_abc = v_pcc * (1.0 / self.r);
        } else {
            let di = (v_pcc - self.i_abc * self.r) * (1.0 / self.l);
            self.i_abc = self.i_abc + di * dt;
        }
        self.i_abc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn balanced(peak: f64, wt: f64) -> ThreePhaseSample {
        ThreePhaseSample::new(
            peak * wt.sin(),
            peak * (wt - 2.0 * PI / 3.0).sin(),
            peak * (wt + 2.0 * PI / 3.0).sin(),
        )
    }

    #[test]
    fn resistive_load_is_instantaneous() {
        let mut load = LinearLoad::new(10.0, 0.0).unwrap();
        let v = ThreePhaseSample::new(100.0, -40.0, -60.0);
        let i = load.step(v, 1e-5);
        assert!((i.a - 10.0).abs() < 1e-12);
        assert!((i.b + 4.0).abs() < 1e-12);
        assert!((i.c + 6.0).abs() < 1e-12);
    }

    #[test]
    fn steady_state_matches_phasor_solution() {
        // r = 10 Ω, ωl = 10 Ω: 45° lag, |i| = peak/(10√2).
        let f = 50.0;
        let w = 2.0 * PI * f;
        let l = 10.0 / w;
        let mut load = LinearLoad::new(10.0, l).unwrap();
        let dt = 2e-6;
        let peak = 100.0;
        let steps = (0.5 / dt) as usize;
        for k in 0..steps {
            load.step(balanced(peak, w * (k as f64) * dt), dt);
        }
        // Crest search over one cycle tells amplitude and phase.
        let cycle = (1.0 / f / dt) as usize;
        let mut best = (0usize, f64::MIN);
        for k in steps..steps + cycle {
            let i = load.step(balanced(peak, w * (k as f64) * dt), dt);
            if i.a > best.1 {
                best = (k, i.a);
            }
        }
        let expected_peak = peak / (10.0 * 2f64.sqrt());
        assert!(
            (best.1 - expected_peak).abs() < 0.01 * expected_peak,
            "amplitude {} vs {expected_peak}",
            best.1
        );
        // Voltage crest for phase a sits at wt = π/2; the current crest lags
        // by the impedance angle (45° here), checked within 1°.
        let wt_peak = (w * (best.0 as f64) * dt).rem_euclid(2.0 * PI);
        let lag = wt_peak - PI / 2.0;
        assert!(
            (lag - PI / 4.0).abs() < PI / 180.0,
            "lag {} rad vs {} rad",
            lag,
            PI / 4.0
        );
    }

    #[test]
    fn balanced_voltage_keeps_currents_balanced() {
        let mut load = LinearLoad::new(30.0, 0.06).unwrap();
        let dt = 5e-6;
        for k in 0..100_000 {
            let i = load.step(balanced(339.0, 2.0 * PI * 50.0 * (k as f64) * dt), dt);
            assert!(i.sum().abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(LinearLoad::new(0.0, 0.1).is_err());
        assert!(LinearLoad::new(-1.0, 0.1).is_err());
        assert!(LinearLoad::new(10.0, -0.1).is_err());
    }
}
