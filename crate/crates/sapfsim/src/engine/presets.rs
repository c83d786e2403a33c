//! Bundled scenarios.

use super::scenario::{default_record, Event, EventTarget, InjectionMode, PvChain, SapfConfig, Scenario};
use crate::plant::{GridSource, LinearLoad, PvArray, PvArrayParams, RectifierLoad};

/// 415 V line-line, 50 Hz grid behind 0.1 Ω / 0.5 mH per phase.
pub fn default_grid() -> GridSource {
    GridSource::new(415.0, 50.0, 0.1, 0.5e-3).expect("default grid parameters are valid")
}

/// The bundled demonstration scenario: a six-pulse rectifier (20 Ω, 50 mH on
/// the DC side) plus a lagging linear load (30 Ω, 60 mH) on the 415 V grid.
/// The compensator is enabled at t = 0.2 s and the irradiance steps from
/// 1000 to 600 W/m² at t = 0.4 s, so one run shows the uncompensated
/// baseline, the compensated steady state and a PV disturbance.
///
/// The filter here is sized above the library defaults (0.8 mH coupling
/// inductor, 1100 V DC link on a 6.6 mF bank): the ideal bridge commutates
/// its current between phases instantaneously, and tracking those reference
/// edges at an acceptable residual distortion needs the extra slew headroom.
pub fn demo() -> Scenario {
    let mut scenario = Scenario {
        grid: default_grid(),
        rectifier: Some(RectifierLoad::new(20.0, 50e-3).expect("valid")),
        linear: Some(LinearLoad::new(30.0, 60e-3).expect("valid")),
        sapf: Some(SapfConfig {
            enabled_at_start: false,
            mode: InjectionMode::Ideal,
            l_f: 0.8e-3,
            r_f: 0.05,
            c_dc: 6600e-6,
            v_dc_ref: 1100.0,
            ..SapfConfig::default()
        }),
        pv: Some(PvChain {
            array: PvArray::new(PvArrayParams {
                n_parallel: 2,
                ..PvArrayParams::default()
            })
            .expect("valid"),
            boost_l: 2e-3,
            duty_init: 0.75,
            mppt_step: 0.005,
            mppt_period: 0.01,
        }),
        dt: 2e-6,
        t_end: 0.6,
        events: vec![
            Event { t: 0.2, target: EventTarget::SapfEnabled, value: 1.0 },
            Event { t: 0.4, target: EventTarget::PvIrradiance, value: 600.0 },
        ],
        record: Vec::new(),
    };
    scenario.record = default_record(&scenario);
    scenario
}

/// Rectifier-only baseline with a strongly smoothed DC side (`l_dc`); with
/// 200 mH the line-current distortion sits at the analytic six-pulse value
/// √(π²/9 − 1) ≈ 31.1%.
pub fn rectifier_baseline(l_dc: f64) -> Scenario {
    let mut scenario = Scenario {
        grid: default_grid(),
        rectifier: Some(RectifierLoad::new(20.0, l_dc).expect("valid")),
        linear: None,
        sapf: None,
        pv: None,
        dt: 5e-6,
        t_end: 0.6,
        events: vec![],
        record: Vec::new(),
    };
    scenario.record = default_record(&scenario);
    scenario
}

/// Grid plus a purely linear load; the source current stays sinusoidal.
pub fn linear_only(r: f64, l: f64) -> Scenario {
    let mut scenario = Scenario {
        grid: default_grid(),
        rectifier: None,
        linear: Some(LinearLoad::new(r, l).expect("valid")),
        sapf: None,
        pv: None,
        dt: 5e-6,
        t_end: 0.3,
        events: vec![],
        record: Vec::new(),
    };
    scenario.record = default_record(&scenario);
    scenario
}
