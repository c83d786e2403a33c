//! Reference-current generation from the instantaneous active and reactive
//! current components of the load.
//!
//! The load current is rotated into a frame locked to the mains voltage
//! vector. In that frame the DC part of the d component is the fundamental
//! active current — the only part the source should supply. Everything else
//! (the oscillating d part, the whole q component and the zero sequence) goes
//! into the compensating reference, minus a PI-driven loss current that keeps
//! the DC link charged by drawing a little extra active current from the
//! grid.
//!
//! The frame angle comes straight from atan2 of the αβ mains voltage — no
//! PLL. Distorted mains are handled by low-pass filtering v_α and v_β before
//! the atan2 (default cutoff twice the fundamental); the filter's known phase
//! lag at the fundamental is added back so the frame orientation stays exact.

use super::pi::PiController;
use super::ControlError;
use crate::phasemath::{
    clarke, grid_angle, inverse_clarke, inverse_park, park, FirstOrderFilter, FrameError,
    RotatingSample, ThreePhaseSample,
};

/// Controller configuration. Defaults: 15 Hz d-axis filter (well below the
/// 6× fundamental ripple, fast enough to track load steps in ~50 ms), angle
/// filter at twice the fundamental, PI gains 0.5 A/V and 20 A/(V·s) limited
/// to ±50 A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdqConfig {
    pub freq_hz: f64,
    pub d_cutoff_hz: f64,
    /// `None` disables mains prefiltering entirely.
    pub angle_cutoff_hz: Option<f64>,
    pub pi_kp: f64,
    pub pi_ki: f64,
    pub pi_limit: f64,
}

impl Default for IdqConfig {
    fn default() -> Self {
        Self {
            freq_hz: 50.0,
            d_cutoff_hz: 15.0,
            angle_cutoff_hz: Some(100.0),
            pi_kp: 0.5,
            pi_ki: 20.0,
            pi_limit: 50.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdqController {
    d_filter: FirstOrderFilter,
    angle_filters: Option<(FirstOrderFilter, FirstOrderFilter)>,
    /// Phase lag of the angle filter at the fundamental, added back to the
    /// measured angle.
    angle_lag: f64,
    pi: PiController,
}

/// One controller evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdqOutput {
    pub i_ref: ThreePhaseSample,
    /// Frame angle used for the transforms.
    pub theta: f64,
    /// Rotating-frame load current components.
    pub i_d: f64,
    pub i_q: f64,
    /// Low-pass output: the fundamental active current left to the source.
    pub i_d_fundamental: f64,
    /// PI loss-compensation current (positive = extra draw from the grid).
    pub i_loss: f64,
}

impl IdqController {
    pub fn new(config: IdqConfig) -> Result<Self, ControlError> {
        let invalid = |name: &'static str, message: String| ControlError::InvalidParameter {
            name,
            message,
        };
        if !(config.freq_hz > 0.0) {
            return Err(invalid("freq_hz", format!("must be > 0, got {}", config.freq_hz)));
        }
        let d_filter = FirstOrderFilter::new(config.d_cutoff_hz, 0.0)
            .map_err(|e| invalid("d_cutoff_hz", e.to_string()))?;
        if config.d_cutoff_hz >= 6.0 * config.freq_hz {
            return Err(invalid(
                "d_cutoff_hz",
                format!(
                    "must stay well below the first rotating-frame harmonic at {} Hz",
                    6.0 * config.freq_hz
                ),
            ));
        }
        let (angle_filters, angle_lag) = match config.angle_cutoff_hz {
            Some(cutoff) => {
                let f = FirstOrderFilter::new(cutoff, 0.0)
                    .map_err(|e| invalid("angle_cutoff_hz", e.to_string()))?;
                (Some((f, f)), f.phase_lag_at(config.freq_hz))
            }
            None => (None, 0.0),
        };
        let pi = PiController::symmetric(config.pi_kp, config.pi_ki, config.pi_limit)
            .map_err(|e| invalid("pi gains", e.to_string()))?;
        Ok(Self { d_filter, angle_filters, angle_lag, pi })
    }

    /// The settled fundamental-active estimate (the d-filter output).
    pub fn i_d_fundamental(&self) -> f64 {
        self.d_filter.output()
    }

    /// Compute the compensating reference for this step.
    pub fn reference(
        &mut self,
        i_load: ThreePhaseSample,
        v_pcc: ThreePhaseSample,
        v_dc: f64,
        v_dc_ref: f64,
        dt: f64,
    ) -> Result<IdqOutput, FrameError> {
        let v_ab = clarke(v_pcc);
        let theta = match &mut self.angle_filters {
            Some((fa, fb)) => {
                let alpha = fa.step(v_ab.alpha, dt);
                let beta = fb.step(v_ab.beta, dt);
                grid_angle(crate::phasemath::StationarySample::new(alpha, beta, 0.0))?
                    + self.angle_lag
            }
            None => grid_angle(v_ab)?,
        };

        let i_dq = park(clarke(i_load), theta);
        let i_d_fundamental = self.d_filter.step(i_dq.d, dt);
        let i_d_oscillating = i_dq.d - i_d_fundamental;
        let i_loss = self.pi.step(v_dc_ref - v_dc, dt);

        let reference = RotatingSample::new(i_d_oscillating - i_loss, i_dq.q, i_dq.zero);
        let i_ref = inverse_clarke(inverse_park(reference, theta));

        Ok(IdqOutput {
            i_ref,
            theta,
            i_d: i_dq.d,
            i_q: i_dq.q,
            i_d_fundamental,
            i_loss,
        })
    }
}
