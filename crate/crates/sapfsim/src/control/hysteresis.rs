//! Fixed-band hysteresis current controller for the VSC inner loop.

use super::ControlError;
use crate::phasemath::ThreePhaseSample;
use crate::plant::SwitchState;

/// Symmetric hysteresis band around the reference current.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HysteresisBand {
    pub half_band: f64,
}

impl HysteresisBand {
    pub fn new(half_band: f64) -> Result<Self, ControlError> {
        if !(half_band > 0.0) {
            return Err(ControlError::InvalidParameter {
                name: "hysteresis half_band",
                message: format!("must be > 0 A, got {half_band}"),
            });
        }
        Ok(Self { half_band })
    }
}

/// Per phase: error = i_ref − i_meas. Above +half_band the upper switch
/// turns on (drives the current up); below −half_band it turns off; inside
/// the band the previous state holds.
pub fn hysteresis_step(
    i_ref: ThreePhaseSample,
    i_meas: ThreePhaseSample,
    band: HysteresisBand,
    prev: SwitchState,
) -> SwitchState {
    let decide = |reference: f64, measured: f64, held: bool| -> bool {
        let error = reference - measured;
        if error > band.half_band {
            true
        } else if error < -band.half_band {
            false
        } else {
            held
        }
    };
    [
        decide(i_ref.a, i_meas.a, prev[0]),
        decide(i_ref.b, i_meas.b, prev[1]),
        decide(i_ref.c, i_meas.c, prev[2]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    const BAND: f64 = 0.5;

    fn band() -> HysteresisBand {
        HysteresisBand::new(BAND).unwrap()
    }

    #[test]
    fn large_positive_error_switches_on() {
        let sw = hysteresis_step(
            ThreePhaseSample::new(2.0 * BAND, 0.0, 0.0),
            ThreePhaseSample::ZERO,
            band(),
            [false; 3],
        );
        assert_eq!(sw, [true, false, false]);
    }

    #[test]
    fn large_negative_error_switches_off() {
        let sw = hysteresis_step(
            ThreePhaseSample::new(-2.0 * BAND, 0.0, 0.0),
            ThreePhaseSample::ZERO,
            band(),
            [true, true, true],
        );
        assert_eq!(sw, [false, true, true]);
    }

    #[test]
    fn inside_band_holds_previous_state() {
        for prev in [[true, false, true], [false, true, false]] {
            let sw = hysteresis_step(
                ThreePhaseSample::new(0.4 * BAND, -0.4 * BAND, 0.0),
                ThreePhaseSample::ZERO,
                band(),
                prev,
            );
            assert_eq!(sw, prev);
        }
    }

    #[test]
    fn rejects_non_positive_band() {
        assert!(HysteresisBand::new(0.0).is_err());
        assert!(HysteresisBand::new(-1.0).is_err());
    }
}
