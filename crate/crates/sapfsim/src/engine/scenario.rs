//! Declarative description of one simulation run, plus load-time validation.

use crate::control::ControlError;
use crate::plant::{
    GridSource, LinearLoad, PlantError, PvArray, RectifierLoad, MAX_DUTY,
};
use thiserror::Error;

/// How the commanded compensating current reaches the PCC.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InjectionMode {
    /// Full switched VSC with hysteresis current control.
    Switched,
    /// Verification mode: the reference is injected exactly, bypassing the
    /// bridge; the DC link still runs, fed by the PV stage and discharged by
    /// the injected power.
    Ideal,
}

/// Shunt-filter block: converter sizing plus controller settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SapfConfig {
    pub enabled_at_start: bool,
    pub mode: InjectionMode,
    pub l_f: f64,
    pub r_f: f64,
    pub c_dc: f64,
    pub v_dc_ref: f64,
    /// Pre-charge voltage; defaults to `v_dc_ref`.
    pub v_dc_init: Option<f64>,
    pub half_band: f64,
    pub d_cutoff_hz: f64,
    pub angle_cutoff_hz: Option<f64>,
    pub pi_kp: f64,
    pub pi_ki: f64,
    pub pi_limit: f64,
}

impl Default for SapfConfig {
    fn default() -> Self {
        Self {
            enabled_at_start: true,
            mode: InjectionMode::Switched,
            l_f: 3e-3,
            r_f: 0.05,
            c_dc: 2200e-6,
            v_dc_ref: 800.0,
            v_dc_init: None,
            half_band: 0.5,
            d_cutoff_hz: 15.0,
            angle_cutoff_hz: Some(100.0),
            pi_kp: 0.5,
            pi_ki: 20.0,
            pi_limit: 50.0,
        }
    }
}

/// Photovoltaic block: array, boost inductor and tracker settings. The PV
/// stage runs while the SAPF is enabled (its power leaves through the DC
/// link, so it has nowhere to go before that).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PvChain {
    pub array: PvArray,
    pub boost_l: f64,
    pub duty_init: f64,
    pub mppt_step: f64,
    pub mppt_period: f64,
}

/// Timed parameter change: at time `t`, the parameter addressed by `target`
/// takes `value`. State variables are never re-initialized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub t: f64,
    pub target: EventTarget,
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventTarget {
    GridVllRms,
    GridRs,
    GridLs,
    RectifierRdc,
    RectifierLdc,
    LinearR,
    LinearL,
    SapfEnabled,
    SapfVdcRef,
    SapfHalfBand,
    PvIrradiance,
    PvTemperature,
}

impl EventTarget {
    pub const ALL: [EventTarget; 12] = [
        EventTarget::GridVllRms,
        EventTarget::GridRs,
        EventTarget::GridLs,
        EventTarget::RectifierRdc,
        EventTarget::RectifierLdc,
        EventTarget::LinearR,
        EventTarget::LinearL,
        EventTarget::SapfEnabled,
        EventTarget::SapfVdcRef,
        EventTarget::SapfHalfBand,
        EventTarget::PvIrradiance,
        EventTarget::PvTemperature,
    ];

    pub fn path(&self) -> &'static str {
        match self {
            EventTarget::GridVllRms => "grid.v_ll_rms",
            EventTarget::GridRs => "grid.r_s",
            EventTarget::GridLs => "grid.l_s",
            EventTarget::RectifierRdc => "loads.rectifier.r_dc",
            EventTarget::RectifierLdc => "loads.rectifier.l_dc",
            EventTarget::LinearR => "loads.linear.r",
            EventTarget::LinearL => "loads.linear.l",
            EventTarget::SapfEnabled => "sapf.enabled",
            EventTarget::SapfVdcRef => "sapf.v_dc_ref",
            EventTarget::SapfHalfBand => "sapf.hysteresis_half_band",
            EventTarget::PvIrradiance => "pv.irradiance",
            EventTarget::PvTemperature => "pv.temperature_k",
        }
    }

    pub fn parse(path: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|t| t.path() == path)
    }
}

/// Complete declarative description of one run. Seed-free: a scenario fully
/// determines its output bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub grid: GridSource,
    pub rectifier: Option<RectifierLoad>,
    pub linear: Option<LinearLoad>,
    pub sapf: Option<SapfConfig>,
    pub pv: Option<PvChain>,
    pub dt: f64,
    pub t_end: f64,
    pub events: Vec<Event>,
    pub record: Vec<String>,
}

impl Scenario {
    /// Force or clear ideal-injection mode. Toggling never changes whether
    /// the scenario validates.
    pub fn set_ideal_injection(&mut self, on: bool) {
        if let Some(sapf) = &mut self.sapf {
            sapf.mode = if on { InjectionMode::Ideal } else { InjectionMode::Switched };
        }
    }

    /// Step size snapped to the nearest value giving an integer number of
    /// samples per fundamental cycle (enables leakage-free synchronous
    /// analysis).
    pub fn snapped_dt(&self) -> f64 {
        let spc = (1.0 / (self.grid.freq_hz * self.dt)).round().max(1.0);
        1.0 / (self.grid.freq_hz * spc)
    }

    /// Samples per fundamental cycle after snapping.
    pub fn samples_per_cycle(&self) -> usize {
        (1.0 / (self.grid.freq_hz * self.snapped_dt())).round() as usize
    }
}

/// Recordable channel. The engine computes every signal each step; recording
/// copies the selected ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    EmfA,
    EmfB,
    EmfC,
    VPccA,
    VPccB,
    VPccC,
    ISourceA,
    ISourceB,
    ISourceC,
    ILoadA,
    ILoadB,
    ILoadC,
    IRectA,
    IRectB,
    IRectC,
    ILinA,
    ILinB,
    ILinC,
    IInjA,
    IInjB,
    IInjC,
    IRefA,
    IRefB,
    IRefC,
    VDc,
    ILoss,
    Theta,
    IRectDc,
    VPv,
    IPv,
    PPv,
    Duty,
}

/// What a channel needs to be meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Needs {
    Nothing,
    Rectifier,
    Linear,
    Sapf,
    Pv,
}

pub(crate) const CHANNEL_CATALOG: &[(&str, Channel, Needs)] = &[
    ("e_sa", Channel::EmfA, Needs::Nothing),
    ("e_sb", Channel::EmfB, Needs::Nothing),
    ("e_sc", Channel::EmfC, Needs::Nothing),
    ("v_pa", Channel::VPccA, Needs::Nothing),
    ("v_pb", Channel::VPccB, Needs::Nothing),
    ("v_pc", Channel::VPccC, Needs::Nothing),
    ("i_sa", Channel::ISourceA, Needs::Nothing),
    ("i_sb", Channel::ISourceB, Needs::Nothing),
    ("i_sc", Channel::ISourceC, Needs::Nothing),
    ("i_la", Channel::ILoadA, Needs::Nothing),
    ("i_lb", Channel::ILoadB, Needs::Nothing),
    ("i_lc", Channel::ILoadC, Needs::Nothing),
    ("i_ra", Channel::IRectA, Needs::Rectifier),
    ("i_rb", Channel::IRectB, Needs::Rectifier),
    ("i_rc", Channel::IRectC, Needs::Rectifier),
    ("i_lna", Channel::ILinA, Needs::Linear),
    ("i_lnb", Channel::ILinB, Needs::Linear),
    ("i_lnc", Channel::ILinC, Needs::Linear),
    ("i_fa", Channel::IInjA, Needs::Sapf),
    ("i_fb", Channel::IInjB, Needs::Sapf),
    ("i_fc", Channel::IInjC, Needs::Sapf),
    ("i_refa", Channel::IRefA, Needs::Sapf),
    ("i_refb", Channel::IRefB, Needs::Sapf),
    ("i_refc", Channel::IRefC, Needs::Sapf),
    ("v_dc", Channel::VDc, Needs::Sapf),
    ("i_loss", Channel::ILoss, Needs::Sapf),
    ("theta", Channel::Theta, Needs::Sapf),
    ("i_rect_dc", Channel::IRectDc, Needs::Rectifier),
    ("v_pv", Channel::VPv, Needs::Pv),
    ("i_pv", Channel::IPv, Needs::Pv),
    ("p_pv", Channel::PPv, Needs::Pv),
    ("duty", Channel::Duty, Needs::Pv),
];

/// Every channel name available for the given scenario's components, in
/// catalog order.
pub fn default_record(scenario: &Scenario) -> Vec<String> {
    CHANNEL_CATALOG
        .iter()
        .filter(|(_, _, needs)| match needs {
            Needs::Nothing => true,
            Needs::Rectifier => scenario.rectifier.is_some(),
            Needs::Linear => scenario.linear.is_some(),
            Needs::Sapf => scenario.sapf.is_some(),
            Needs::Pv => scenario.pv.is_some() && scenario.sapf.is_some(),
        })
        .map(|(name, _, _)| name.to_string())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("sim.dt must be > 0, got {0}")]
    NonPositiveDt(f64),

    #[error("sim.t_end ({t_end}) must exceed dt ({dt})")]
    EndBeforeFirstStep { dt: f64, t_end: f64 },

    #[error("sim.dt: {spc} samples per cycle is too coarse (need at least {min})")]
    TooFewSamplesPerCycle { spc: usize, min: usize },

    #[error("sim.dt must be <= 10 us when a VSC is present, got {0} s")]
    StepTooCoarseForVsc(f64),

    #[error("events[{index}]: out of order (t = {t} after t = {previous})")]
    EventsUnsorted { index: usize, t: f64, previous: f64 },

    #[error("events[{index}] at t = {t}: outside [0, {t_end}]")]
    EventOutOfRange { index: usize, t: f64, t_end: f64 },

    #[error("events[{index}]: unknown parameter path {path:?}")]
    UnknownEventTarget { index: usize, path: String },

    #[error("events[{index}] targets {path} but the scenario has no such component")]
    EventTargetUnavailable { index: usize, path: &'static str },

    #[error("events[{index}]: {path} = {value} is invalid: {message}")]
    EventValueInvalid { index: usize, path: &'static str, value: f64, message: String },

    #[error("record: unknown channel {name:?}")]
    UnknownChannel { name: String },

    #[error("record: channel {name:?} needs the {needs} block")]
    ChannelUnavailable { name: String, needs: &'static str },

    #[error("pv.mppt_period must cover at least 10 simulation steps, got {period} s at dt {dt} s")]
    MpptPeriodTooShort { period: f64, dt: f64 },

    #[error(transparent)]
    Plant(#[from] PlantError),

    #[error(transparent)]
    Control(#[from] ControlError),
}

pub(crate) fn validate_event_value(
    target: EventTarget,
    value: f64,
) -> Result<(), String> {
    if !value.is_finite() {
        return Err("must be finite".into());
    }
    let positive = |what: &str| -> Result<(), String> {
        if value > 0.0 {
            Ok(())
        } else {
            Err(format!("{what} must be > 0"))
        }
    };
    match target {
        EventTarget::GridVllRms => positive("voltage"),
        EventTarget::GridRs | EventTarget::GridLs => {
            if value >= 0.0 {
                Ok(())
            } else {
                Err("must be >= 0".into())
            }
        }
        EventTarget::RectifierRdc | EventTarget::RectifierLdc => positive("rectifier parameter"),
        EventTarget::LinearR => positive("resistance"),
        EventTarget::LinearL => {
            if value >= 0.0 {
                Ok(())
            } else {
                Err("must be >= 0".into())
            }
        }
        EventTarget::SapfEnabled => {
            if value == 0.0 || value == 1.0 {
                Ok(())
            } else {
                Err("must be 0 or 1".into())
            }
        }
        EventTarget::SapfVdcRef => positive("dc-link reference"),
        EventTarget::SapfHalfBand => positive("hysteresis band"),
        EventTarget::PvIrradiance => {
            if value >= 0.0 {
                Ok(())
            } else {
                Err("must be >= 0".into())
            }
        }
        EventTarget::PvTemperature => positive("temperature"),
    }
}

/// Resolve and validate the record list against the catalog and the present
/// components.
pub(crate) fn resolve_record(scenario: &Scenario) -> Result<Vec<Channel>, ValidationError> {
    scenario
        .record
        .iter()
        .map(|name| {
            let (_, channel, needs) = CHANNEL_CATALOG
                .iter()
                .find(|(n, _, _)| n == name)
                .ok_or_else(|| ValidationError::UnknownChannel { name: name.clone() })?;
            let missing = match needs {
                Needs::Nothing => None,
                Needs::Rectifier if scenario.rectifier.is_none() => Some("loads.rectifier"),
                Needs::Linear if scenario.linear.is_none() => Some("loads.linear"),
                Needs::Sapf if scenario.sapf.is_none() => Some("sapf"),
                Needs::Pv if scenario.pv.is_none() || scenario.sapf.is_none() => Some("pv (with sapf)"),
                _ => None,
            };
            match missing {
                Some(needs) => Err(ValidationError::ChannelUnavailable {
                    name: name.clone(),
                    needs,
                }),
                None => Ok(*channel),
            }
        })
        .collect()
}

pub(crate) fn validate_pv(pv: &PvChain, dt: f64) -> Result<(), ValidationError> {
    if pv.mppt_period < 10.0 * dt {
        return Err(ValidationError::MpptPeriodTooShort { period: pv.mppt_period, dt });
    }
    if !(pv.boost_l > 0.0) {
        return Err(PlantError::InvalidParameter {
            component: "boost",
            name: "l",
            message: "must be > 0 H".into(),
        }
        .into());
    }
    if !(0.0..=MAX_DUTY).contains(&pv.duty_init) {
        return Err(PlantError::InvalidParameter {
            component: "boost",
            name: "duty_init",
            message: format!("must be within [0, {MAX_DUTY}]"),
        }
        .into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn event_paths_round_trip() {
        for target in EventTarget::ALL {
            assert_eq!(EventTarget::parse(target.path()), Some(target));
        }
        assert_eq!(EventTarget::parse("gird.v_ll_rms"), None);
    }

    #[test]
    fn snapping_yields_integer_samples_per_cycle() {
        let scenario = Scenario {
            grid: GridSource::new(415.0, 50.0, 0.1, 0.5e-3).unwrap(),
            rectifier: None,
            linear: None,
            sapf: None,
            pv: None,
            dt: 4.9e-6,
            t_end: 0.1,
            events: vec![],
            record: vec![],
        };
        let dt = scenario.snapped_dt();
        let spc = 1.0 / (50.0 * dt);
        assert!((spc - spc.round()).abs() < 1e-9);
        assert_eq!(scenario.samples_per_cycle(), spc.round() as usize);
    }
}
