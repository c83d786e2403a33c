//! Ideal six-pulse diode bridge with a DC-side R–L load.
//!
//! Conduction follows the instantaneous PCC voltages: the phase at the
//! maximum sources +i_dc, the phase at the minimum returns −i_dc, the third
//! carries nothing. This produces the canonical 120°-conduction quasi-square
//! line currents with characteristic harmonics at orders 6k ± 1 and, for a
//! well-smoothed DC current, a line-current THD of √(π²/9 − 1) ≈ 31.1%.

use super::{check_param, PlantError};
use crate::phasemath::ThreePhaseSample;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectifierLoad {
    pub r_dc: f64,
    pub l_dc: f64,
    /// DC-side current state; diodes block reverse flow, so never negative.
    pub i_dc: f64,
}

impl RectifierLoad {
    pub fn new(r_dc: f64, l_dc: f64) -> Result<Self, PlantError> {
        check_param("rectifier", "r_dc", r_dc > 0.0, "must be > 0 ohm")?;
        check_param("rectifier", "l_dc", l_dc > 0.0, "must be > 0 H")?;
        Ok(Self { r_dc, l_dc, i_dc: 0.0 })
    }

    /// Advance the DC current by one step and return the three line currents
    /// drawn at the PCC. Exactly two phases conduct, or none while the DC
    /// current is zero and the rectified voltage is non-positive.
    pub fn step(&mut self, v_pcc: ThreePhaseSample, dt: f64) -> ThreePhaseSample {
        debug_assert!(dt > 0.0);
        let v = [v_pcc.a, v_pcc.b, v_pcc.c];
        let mut hi = 0usize;
        let mut lo = 0usize;
        for k in 1..3 {
            if v[k] > v[hi] {
                hi = k;
            }
            if v[k] < v[lo] {
                lo = k;
            }
        }
        let v_rect = v[hi] - v[lo];

        if self.i_dc == 0.0 && v_rect <= 0.0 {
            return ThreePhaseSample::ZERO;
        }

        let di = (v_rect - self.r_dc * self.i_dc) / self.l_dc;
        self.i_dc = (self.i_dc + dt * di).max(0.0);

        if self.i_dc == 0.0 {
            return ThreePhaseSample::ZERO;
        }
        let mut out = [0.0; 3];
        out[hi] = self.i_dc;
        out[lo] = -self.i_dc;
        ThreePhaseSample::new(out[0], out[1], out[2])
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
    fn steady_mean_matches_six_pulse_average() {
        // Mean rectified line-line voltage is (3√2/π)·V_ll_rms; with a large
        // smoothing inductor the DC current settles to that over r_dc.
        let v_ll_rms = 415.0;
        let peak = 2f64.sqrt() * v_ll_rms / 3f64.sqrt();
        let mut load = RectifierLoad::new(20.0, 1.0).unwrap();
        let dt = 5e-6;
        let steps = (1.2 / dt) as usize;
        for k in 0..steps {
            let wt = 2.0 * PI * 50.0 * (k as f64) * dt;
            load.step(balanced(peak, wt), dt);
        }
        // Average over one further cycle.
        let cycle = (0.02 / dt) as usize;
        let mut acc = 0.0;
        for k in steps..steps + cycle {
            let wt = 2.0 * PI * 50.0 * (k as f64) * dt;
            load.step(balanced(peak, wt), dt);
            acc += load.i_dc;
        }
        let mean = acc / cycle as f64;
        let expected = 3.0 * 2f64.sqrt() / PI * v_ll_rms / 20.0;
        assert!(
            (mean - expected).abs() < 0.02 * expected,
            "mean {mean} vs {expected}"
        );
    }

    #[test]
    fn phase_currents_limited_to_dc_rail() {
        let peak = 339.0;
        let mut load = RectifierLoad::new(10.0, 0.05).unwrap();
        let dt = 10e-6;
        for k in 0..20_000 {
            let wt = 2.0 * PI * 50.0 * (k as f64) * dt;
            let i = load.step(balanced(peak, wt), dt);
            for phase in [i.a, i.b, i.c] {
                let matches_rail =
                    phase == 0.0 || (phase - load.i_dc).abs() < 1e-12 || (phase + load.i_dc).abs() < 1e-12;
                assert!(matches_rail, "phase current {phase} vs rail {}", load.i_dc);
            }
            assert!(i.sum() == 0.0);
            assert!(load.i_dc >= 0.0);
        }
    }

    #[test]
    fn no_conduction_without_forward_voltage() {
        let mut load = RectifierLoad::new(10.0, 0.05).unwrap();
        let i = load.step(ThreePhaseSample::ZERO, 1e-5);
        assert_eq!(i, ThreePhaseSample::ZERO);
        assert_eq!(load.i_dc, 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(RectifierLoad::new(0.0, 0.05).is_err());
        assert!(RectifierLoad::new(10.0, 0.0).is_err());
    }
}
