//! Duty-cycle-averaged boost converter feeding the DC link.
//!
//! No switching ripple is modeled here; the converter matches the array's
//! load impedance by duty variation. The switch network itself is lossless:
//! power entering the switch stage, (1−d)·v_dc·i_l, equals the power
//! delivered to the DC link, v_dc·i_out, identically. The inductor is honest
//! storage, so instantaneous input and output power differ by dE_L/dt.

use super::{check_param, PlantError};

pub const MAX_DUTY: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoostConverter {
    pub l: f64,
    pub duty: f64,
    /// Inductor current state; clamped at zero (discontinuous-mode floor).
    pub i_l: f64,
}

impl BoostConverter {
    pub fn new(l: f64, duty: f64) -> Result<Self, PlantError> {
        check_param("boost", "l", l > 0.0, "must be > 0 H")?;
        check_param(
            "boost",
            "duty",
            (0.0..=MAX_DUTY).contains(&duty),
            "must be within [0, 0.95]",
        )?;
        Ok(Self { l, duty, i_l: 0.0 })
    }

    pub fn set_duty(&mut self, duty: f64) {
        self.duty = duty.clamp(0.0, MAX_DUTY);
    }

    /// Advance the inductor current and return the current delivered into the
    /// DC link: di_l/dt = (v_in − (1−d)·v_dc)/l, i_out = (1−d)·i_l.
    pub fn step(&mut self, v_in: f64, v_dc: f64, dt: f64) -> f64 {
        debug_assert!(dt > 0.0 && v_dc > 0.0);
        let off = 1.0 - self.duty;
        let di = (v_in - off * v_dc) / self.l;
        self.i_l = (self.i_l + dt * di).max(0.0);
        off * self.i_l
    }
}
