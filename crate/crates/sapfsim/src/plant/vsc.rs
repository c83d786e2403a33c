//! Switched two-level voltage-source converter with coupling inductors and a
//! DC-link capacitor.
//!
//! Each leg connects its phase through l_f/r_f to either +v_dc/2 or −v_dc/2
//! (midpoint reference). The converter is three-wire: the star point of the
//! coupling inductors floats, so the common-mode part of the leg voltages,
//! (Σ v_leg)/3, drives no current and the filter currents keep summing to
//! zero. The DC link sees i_conv = Σ s_k·i_f,k, which makes the AC-side
//! power v_dc·Σ s_k·i_f,k equal the DC-side discharge power identically
//! (lossless switch model).

use super::{check_param, PlantError};
use crate::phasemath::ThreePhaseSample;

/// Upper-switch state per phase; `true` connects the phase to +v_dc/2.
pub type SwitchState = [bool; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VscSapf {
    pub l_f: f64,
    pub r_f: f64,
    pub c_dc: f64,
    pub v_dc: f64,
    pub i_f: ThreePhaseSample,
    pub switches: SwitchState,
}

impl VscSapf {
    pub fn new(l_f: f64, r_f: f64, c_dc: f64, v_dc_init: f64) -> Result<Self, PlantError> {
        check_param("vsc", "l_f", l_f > 0.0, "must be > 0 H")?;
        check_param("vsc", "r_f", r_f >= 0.0, "must be >= 0 ohm")?;
        check_param("vsc", "c_dc", c_dc > 0.0, "must be > 0 F")?;
        check_param("vsc", "v_dc", v_dc_init > 0.0, "must be > 0 V")?;
        Ok(Self {
            l_f,
            r_f,
            c_dc,
            v_dc: v_dc_init,
            i_f: ThreePhaseSample::ZERO,
            switches: [false; 3],
        })
    }

    /// Per-phase leg voltages for the present switch state.
    pub fn leg_voltages(&self) -> ThreePhaseSample {
        let half = 0.5 * self.v_dc;
        ThreePhaseSample::new(
            if self.switches[0] { half } else { -half },
            if self.switches[1] { half } else { -half },
            if self.switches[2] { half } else { -half },
        )
    }

    /// Current drawn from the DC link by the bridge for the present switch
    /// and current state.
    pub fn converter_current(&self) -> f64 {
        let mut acc = 0.0;
        if self.switches[0] {
            acc += self.i_f.a;
        }
        if self.switches[1] {
            acc += self.i_f.b;
        }
        if self.switches[2] {
            acc += self.i_f.c;
        }
        acc
    }

    /// Advance filter currents and the DC-link voltage by one step. The DC
    /// link integrates i_dc_in (from the PV boost stage) minus the bridge
    /// current.
    pub fn step(
        &mut self,
        v_pcc: ThreePhaseSample,
        i_dc_in: f64,
        dt: f64,
    ) -> Result<(), PlantError> {
        debug_assert!(dt > 0.0);
        if self.v_dc <= 0.0 {
            return Err(PlantError::DcLinkCollapsed);
        }

        let legs = self.leg_voltages();
        let common_mode = legs.sum() / 3.0;
        let i_conv = self.converter_current();

        let drive = ThreePhaseSample::new(
            legs.a - common_mode - v_pcc.a - self.r_f * self.i_f.a,
            legs.b - common_mode - v_pcc.b - self.r_f * self.i_f.b,
            legs.c - common_mode - v_pcc.c - self.r_f * self.i_f.c,
        );
        self.i_f = self.i_f + drive * (dt / self.l_f);
        self.v_dc += dt * (i_dc_in - i_conv) / self.c_dc;

        if self.v_dc <= 0.0 {
            return Err(PlantError::DcLinkCollapsed);
        }
        Ok(())
    }
}
