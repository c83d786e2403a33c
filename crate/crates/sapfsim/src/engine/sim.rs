//! The fixed-step executor.
//!
//! Per step, in fixed order: source EMF, load advances (on the previous
//! step's PCC voltage), reference generation, PV/boost and converter
//! advances, then the KCL balance at the PCC — the source current is defined
//! as i_load − i_injected, so the balance holds exactly by construction —
//! and finally the PCC voltage solve and recording.
//!
//! The PCC voltage is the EMF minus the source-impedance drop. The resistive
//! part uses the full source current. The inductive part differentiates only
//! the continuous constituents (linear-load and switched-filter currents):
//! the ideal bridge hands its DC current between phases within one step, and
//! an ideal commanded injection jumps with its reference, so a raw backward
//! difference of those would put one-sample voltage impulses onto the bus
//! and feed back into the conduction rule.

use super::scenario::{
    resolve_record, validate_event_value, validate_pv, Channel, EventTarget, InjectionMode,
    Scenario, ValidationError,
};
use super::timeseries::{EventLogEntry, TimeSeries};
use crate::control::{
    hysteresis_step, HysteresisBand, IdqConfig, IdqController, PerturbObserve,
};
use crate::phasemath::ThreePhaseSample;
use crate::plant::{
    BoostConverter, GridSource, LinearLoad, PvArray, RectifierLoad, VscSapf,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Validation(#[from] ValidationError),

    /// A component failed mid-run; names the simulation time and component.
    #[error("runtime abort at t = {t:.6} s in {component}: {message}")]
    Runtime { t: f64, component: &'static str, message: String },
}

struct SapfState {
    enabled: bool,
    mode: InjectionMode,
    vsc: VscSapf,
    controller: IdqController,
    band: HysteresisBand,
    v_dc_ref: f64,
}

struct PvState {
    array: PvArray,
    boost: BoostConverter,
    mppt: PerturbObserve,
    period_steps: usize,
    steps_since_update: usize,
    v_pv: f64,
}

struct PreparedEvent {
    step: usize,
    t: f64,
    target: EventTarget,
    value: f64,
}

/// Everything the recorder can see after one step.
#[derive(Debug, Clone, Copy)]
struct Frame {
    emf: ThreePhaseSample,
    v_pcc: ThreePhaseSample,
    i_source: ThreePhaseSample,
    i_load: ThreePhaseSample,
    i_rect: ThreePhaseSample,
    i_lin: ThreePhaseSample,
    i_inj: ThreePhaseSample,
    i_ref: ThreePhaseSample,
    v_dc: f64,
    i_loss: f64,
    theta: f64,
    i_rect_dc: f64,
    v_pv: f64,
    i_pv: f64,
    p_pv: f64,
    duty: f64,
}

impl Frame {
    fn value(&self, channel: Channel) -> f64 {
        match channel {
            Channel::EmfA => self.emf.a,
            Channel::EmfB => self.emf.b,
            Channel::EmfC => self.emf.c,
            Channel::VPccA => self.v_pcc.a,
            Channel::VPccB => self.v_pcc.b,
            Channel::VPccC => self.v_pcc.c,
            Channel::ISourceA => self.i_source.a,
            Channel::ISourceB => self.i_source.b,
            Channel::ISourceC => self.i_source.c,
            Channel::ILoadA => self.i_load.a,
            Channel::ILoadB => self.i_load.b,
            Channel::ILoadC => self.i_load.c,
            Channel::IRectA => self.i_rect.a,
            Channel::IRectB => self.i_rect.b,
            Channel::IRectC => self.i_rect.c,
            Channel::ILinA => self.i_lin.a,
            Channel::ILinB => self.i_lin.b,
            Channel::ILinC => self.i_lin.c,
            Channel::IInjA => self.i_inj.a,
            Channel::IInjB => self.i_inj.b,
            Channel::IInjC => self.i_inj.c,
            Channel::IRefA => self.i_ref.a,
            Channel::IRefB => self.i_ref.b,
            Channel::IRefC => self.i_ref.c,
            Channel::VDc => self.v_dc,
            Channel::ILoss => self.i_loss,
            Channel::Theta => self.theta,
            Channel::IRectDc => self.i_rect_dc,
            Channel::VPv => self.v_pv,
            Channel::IPv => self.i_pv,
            Channel::PPv => self.p_pv,
            Channel::Duty => self.duty,
        }
    }
}

/// A running simulation. Strictly sequential; create one per scenario.
pub struct Simulation {
    grid: GridSource,
    dt: f64,
    n_steps: usize,
    step_index: usize,
    rectifier: Option<RectifierLoad>,
    linear: Option<LinearLoad>,
    sapf: Option<SapfState>,
    pv: Option<PvState>,
    events: Vec<PreparedEvent>,
    next_event: usize,
    channels: Vec<Channel>,
    v_pcc_prev: ThreePhaseSample,
    smooth_prev: ThreePhaseSample,
    series: TimeSeries,
    warned_low_v_dc: bool,
    row_buffer: Vec<f64>,
}

impl Simulation {
    pub fn new(scenario: &Scenario) -> Result<Self, ValidationError> {
        if !(scenario.dt > 0.0) {
            return Err(ValidationError::NonPositiveDt(scenario.dt));
        }
        let dt = scenario.snapped_dt();
        if scenario.t_end <= dt {
            return Err(ValidationError::EndBeforeFirstStep { dt, t_end: scenario.t_end });
        }
        let spc = scenario.samples_per_cycle();
        if spc < 40 {
            return Err(ValidationError::TooFewSamplesPerCycle { spc, min: 40 });
        }
        if scenario.sapf.is_some() && dt > 10e-6 + 1e-12 {
            return Err(ValidationError::StepTooCoarseForVsc(dt));
        }

        let n_steps = (scenario.t_end / dt).round().max(1.0) as usize;
        let t_end = n_steps as f64 * dt;

        let mut events = Vec::with_capacity(scenario.events.len());
        let mut previous_t = 0.0;
        for (index, event) in scenario.events.iter().enumerate() {
            if event.t < previous_t {
                return Err(ValidationError::EventsUnsorted {
                    index,
                    t: event.t,
                    previous: previous_t,
                });
            }
            previous_t = event.t;
            if !(0.0..=t_end).contains(&event.t) {
                return Err(ValidationError::EventOutOfRange { index, t: event.t, t_end });
            }
            let available = match event.target {
                EventTarget::GridVllRms | EventTarget::GridRs | EventTarget::GridLs => true,
                EventTarget::RectifierRdc | EventTarget::RectifierLdc => {
                    scenario.rectifier.is_some()
                }
                EventTarget::LinearR | EventTarget::LinearL => scenario.linear.is_some(),
                EventTarget::SapfEnabled
                | EventTarget::SapfVdcRef
                | EventTarget::SapfHalfBand => scenario.sapf.is_some(),
                EventTarget::PvIrradiance | EventTarget::PvTemperature => scenario.pv.is_some(),
            };
            if !available {
                return Err(ValidationError::EventTargetUnavailable {
                    index,
                    path: event.target.path(),
                });
            }
            validate_event_value(event.target, event.value).map_err(|message| {
                ValidationError::EventValueInvalid {
                    index,
                    path: event.target.path(),
                    value: event.value,
                    message,
                }
            })?;
            // The event takes effect at the first step boundary at or after
            // its time.
            let step = (event.t / dt - 1e-9).ceil().max(0.0) as usize;
            events.push(PreparedEvent { step, t: event.t, target: event.target, value: event.value });
        }

        let channels = resolve_record(scenario)?;

        let sapf = match &scenario.sapf {
            Some(config) => {
                let v_dc_init = config.v_dc_init.unwrap_or(config.v_dc_ref);
                let vsc = VscSapf::new(config.l_f, config.r_f, config.c_dc, v_dc_init)?;
                let controller = IdqController::new(IdqConfig {
                    freq_hz: scenario.grid.freq_hz,
                    d_cutoff_hz: config.d_cutoff_hz,
                    angle_cutoff_hz: config.angle_cutoff_hz,
                    pi_kp: config.pi_kp,
                    pi_ki: config.pi_ki,
                    pi_limit: config.pi_limit,
                })?;
                let band = HysteresisBand::new(config.half_band)?;
                Some(SapfState {
                    enabled: config.enabled_at_start,
                    mode: config.mode,
                    vsc,
                    controller,
                    band,
                    v_dc_ref: config.v_dc_ref,
                })
            }
            None => None,
        };

        let pv = match &scenario.pv {
            Some(chain) => {
                validate_pv(chain, dt)?;
                let boost = BoostConverter::new(chain.boost_l, chain.duty_init)?;
                let mppt = PerturbObserve::new(chain.mppt_step, chain.mppt_period, chain.duty_init)?;
                Some(PvState {
                    array: chain.array,
                    boost,
                    mppt,
                    period_steps: (chain.mppt_period / dt).round() as usize,
                    steps_since_update: 0,
                    v_pv: 0.0,
                })
            }
            None => None,
        };

        let names: Vec<String> = scenario.record.clone();
        let mut series = TimeSeries::new(
            dt,
            0.0,
            scenario.grid.freq_hz,
            names,
            n_steps + 1,
        );

        // Row at t = 0: quiescent states, the bus at the bare EMF.
        let emf0 = scenario.grid.voltage(0.0);
        let initial = Frame {
            emf: emf0,
            v_pcc: emf0,
            i_source: ThreePhaseSample::ZERO,
            i_load: ThreePhaseSample::ZERO,
            i_rect: ThreePhaseSample::ZERO,
            i_lin: ThreePhaseSample::ZERO,
            i_inj: ThreePhaseSample::ZERO,
            i_ref: ThreePhaseSample::ZERO,
            v_dc: sapf.as_ref().map_or(0.0, |s| s.vsc.v_dc),
            i_loss: 0.0,
            theta: 0.0,
            i_rect_dc: 0.0,
            v_pv: 0.0,
            i_pv: 0.0,
            p_pv: 0.0,
            duty: pv.as_ref().map_or(0.0, |p| p.boost.duty),
        };
        let mut row_buffer = vec![0.0; channels.len()];
        for (slot, channel) in row_buffer.iter_mut().zip(&channels) {
            *slot = initial.value(*channel);
        }
        series.push_row(&row_buffer);

        Ok(Self {
            grid: scenario.grid,
            dt,
            n_steps,
            step_index: 0,
            rectifier: scenario.rectifier,
            linear: scenario.linear,
            sapf,
            pv,
            events,
            next_event: 0,
            channels,
            v_pcc_prev: emf0,
            smooth_prev: ThreePhaseSample::ZERO,
            series,
            warned_low_v_dc: false,
            row_buffer,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps_total(&self) -> usize {
        self.n_steps
    }

    pub fn steps_done(&self) -> usize {
        self.step_index
    }

    pub fn finished(&self) -> bool {
        self.step_index >= self.n_steps
    }

    fn apply_due_events(&mut self) {
        while self.next_event < self.events.len()
            && self.events[self.next_event].step <= self.step_index
        {
            let event = &self.events[self.next_event];
            let (old, new) = match event.target {
                EventTarget::GridVllRms => {
                    let old = self.grid.v_ll_rms;
                    self.grid.v_ll_rms = event.value;
                    (old, event.value)
                }
                EventTarget::GridRs => {
                    let old = self.grid.r_s;
                    self.grid.r_s = event.value;
                    (old, event.value)
                }
                EventTarget::GridLs => {
                    let old = self.grid.l_s;
                    self.grid.l_s = event.value;
                    (old, event.value)
                }
                EventTarget::RectifierRdc => {
                    let rectifier = self.rectifier.as_mut().expect("validated");
                    let old = rectifier.r_dc;
                    rectifier.r_dc = event.value;
                    (old, event.value)
                }
                EventTarget::RectifierLdc => {
                    let rectifier = self.rectifier.as_mut().expect("validated");
                    let old = rectifier.l_dc;
                    rectifier.l_dc = event.value;
                    (old, event.value)
                }
                EventTarget::LinearR => {
                    let linear = self.linear.as_mut().expect("validated");
                    let old = linear.r;
                    linear.r = event.value;
                    (old, event.value)
                }
                EventTarget::LinearL => {
                    let linear = self.linear.as_mut().expect("validated");
                    let old = linear.l;
                    linear.l = event.value;
                    (old, event.value)
                }
                EventTarget::SapfEnabled => {
                    let sapf = self.sapf.as_mut().expect("validated");
                    let old = if sapf.enabled { 1.0 } else { 0.0 };
                    sapf.enabled = event.value != 0.0;
                    (old, event.value)
                }
                EventTarget::SapfVdcRef => {
                    let sapf = self.sapf.as_mut().expect("validated");
                    let old = sapf.v_dc_ref;
                    sapf.v_dc_ref = event.value;
                    (old, event.value)
                }
                EventTarget::SapfHalfBand => {
                    let sapf = self.sapf.as_mut().expect("validated");
                    let old = sapf.band.half_band;
                    sapf.band.half_band = event.value;
                    (old, event.value)
                }
                EventTarget::PvIrradiance => {
                    let pv = self.pv.as_mut().expect("validated");
                    let old = pv.array.irradiance;
                    pv.array.irradiance = event.value;
                    (old, event.value)
                }
                EventTarget::PvTemperature => {
                    let pv = self.pv.as_mut().expect("validated");
                    let old = pv.array.temperature_k;
                    pv.array.temperature_k = event.value;
                    (old, event.value)
                }
            };
            self.series.log_event(EventLogEntry {
                t: event.t,
                path: event.target.path().to_string(),
                old,
                new,
            });
            self.next_event += 1;
        }
    }

    /// Advance one step of length `dt`.
    pub fn step(&mut self) -> Result<(), SimError> {
        self.apply_due_events();

        let t_next = (self.step_index + 1) as f64 * self.dt;
        let runtime = |component: &'static str, message: String| SimError::Runtime {
            t: t_next,
            component,
            message,
        };

        let emf = self.grid.voltage(t_next);

        // Loads advance on the lagged PCC voltage (avoids the algebraic loop
        // at the bus; the O(dt) error is covered by the analysis tolerances).
        let i_rect = match &mut self.rectifier {
            Some(load) => load.step(self.v_pcc_prev, self.dt),
            None => ThreePhaseSample::ZERO,
        };
        let i_lin = match &mut self.linear {
            Some(load) => load.step(self.v_pcc_prev, self.dt),
            None => ThreePhaseSample::ZERO,
        };
        let i_load = i_rect + i_lin;

        // Reference generation runs whenever a SAPF exists so its filters and
        // angle estimate are settled by the time an event enables injection.
        let mut i_ref = ThreePhaseSample::ZERO;
        let mut i_loss = 0.0;
        let mut theta = 0.0;
        let mut sapf_enabled = false;
        if let Some(sapf) = &mut self.sapf {
            let out = sapf
                .controller
                .reference(i_load, self.v_pcc_prev, sapf.vsc.v_dc, sapf.v_dc_ref, self.dt)
                .map_err(|e| runtime("idq controller", e.to_string()))?;
            i_ref = out.i_ref;
            i_loss = out.i_loss;
            theta = out.theta;
            sapf_enabled = sapf.enabled;
        }

        // PV chain: active while the SAPF is enabled. The array voltage
        // follows from the boost inductor current through the diode curve.
        let mut i_dc_in = 0.0;
        let mut v_pv = 0.0;
        let mut i_pv = 0.0;
        let mut duty = self.pv.as_ref().map_or(0.0, |p| p.boost.duty);
        if sapf_enabled {
            if let Some(pv) = &mut self.pv {
                v_pv = pv
                    .array
                    .voltage_for_current(pv.boost.i_l)
                    .map_err(|e| runtime("pv array", e.to_string()))?;
                pv.v_pv = v_pv;
                i_pv = pv.boost.i_l;
                pv.steps_since_update += 1;
                if pv.steps_since_update >= pv.period_steps {
                    pv.steps_since_update = 0;
                    duty = pv.mppt.step(v_pv * i_pv, v_pv);
                    pv.boost.set_duty(duty);
                }
                duty = pv.boost.duty;
                let v_dc = self.sapf.as_ref().expect("pv requires sapf").vsc.v_dc;
                i_dc_in = pv.boost.step(v_pv, v_dc, self.dt);
            }
        }

        // Converter advance and the injected current.
        let mut i_inj = ThreePhaseSample::ZERO;
        let mut v_dc = 0.0;
        if let Some(sapf) = &mut self.sapf {
            if sapf.enabled {
                match sapf.mode {
                    InjectionMode::Switched => {
                        // The switching loop is far stiffer than the rest of
                        // the plant: at full bridge voltage the filter
                        // current can cross the whole hysteresis band within
                        // one outer step, and explicit Euler then manufactures
                        // O(Δi²) energy per switch event. Substep the
                        // bridge+band loop so each move stays a fraction of
                        // the band; inputs (PCC voltage, DC injection) hold
                        // for the outer step.
                        let slope_max = (2.0 / 3.0 * sapf.vsc.v_dc
                            + self.v_pcc_prev.max_abs()
                            + sapf.vsc.r_f * sapf.vsc.i_f.max_abs())
                            / sapf.vsc.l_f;
                        let substeps = ((self.dt * slope_max / (0.5 * sapf.band.half_band))
                            .ceil() as usize)
                            .clamp(1, 64);
                        let dt_sub = self.dt / substeps as f64;
                        for _ in 0..substeps {
                            sapf.vsc.switches =
                                hysteresis_step(i_ref, sapf.vsc.i_f, sapf.band, sapf.vsc.switches);
                            sapf.vsc
                                .step(self.v_pcc_prev, i_dc_in, dt_sub)
                                .map_err(|e| runtime("vsc", e.to_string()))?;
                        }
                        i_inj = sapf.vsc.i_f;
                    }
                    InjectionMode::Ideal => {
                        i_inj = i_ref;
                        let p_ac = self.v_pcc_prev.a * i_inj.a
                            + self.v_pcc_prev.b * i_inj.b
                            + self.v_pcc_prev.c * i_inj.c;
                        let i_conv = p_ac / sapf.vsc.v_dc;
                        sapf.vsc.v_dc += self.dt * (i_dc_in - i_conv) / sapf.vsc.c_dc;
                        if sapf.vsc.v_dc <= 0.0 {
                            return Err(runtime("vsc", "dc link collapsed".into()));
                        }
                    }
                }
            }
            v_dc = sapf.vsc.v_dc;
            if sapf.enabled && v_dc < self.grid.line_peak() && !self.warned_low_v_dc {
                self.warned_low_v_dc = true;
                self.series.log_event(EventLogEntry {
                    t: t_next,
                    path: "warning.dc_link_below_line_peak".to_string(),
                    old: self.grid.line_peak(),
                    new: v_dc,
                });
            }
        }

        // KCL at the PCC: the source supplies whatever the loads draw beyond
        // the injection. Exact by construction.
        let i_source = i_load - i_inj;

        // PCC solve. The inductive drop differentiates the linear-load
        // current only: the bridge hands its current between phases within a
        // step and the switched filter current slews at the full bridge
        // voltage, so their backward differences are impulsive and would
        // feed the conduction comparator with artifacts.
        let smooth = i_lin;
        let di_smooth = (smooth - self.smooth_prev) * (1.0 / self.dt);
        let v_pcc = emf - i_source * self.grid.r_s - di_smooth * self.grid.l_s;
        self.smooth_prev = smooth;
        self.v_pcc_prev = v_pcc;

        let frame = Frame {
            emf,
            v_pcc,
            i_source,
            i_load,
            i_rect,
            i_lin,
            i_inj,
            i_ref,
            v_dc,
            i_loss,
            theta,
            i_rect_dc: self.rectifier.as_ref().map_or(0.0, |r| r.i_dc),
            v_pv,
            i_pv,
            p_pv: v_pv * i_pv,
            duty,
        };
        for (slot, channel) in self.row_buffer.iter_mut().zip(&self.channels) {
            *slot = frame.value(*channel);
        }
        self.series.push_row(&self.row_buffer);

        self.step_index += 1;
        Ok(())
    }

    /// Run to completion and hand back the recording.
    pub fn run(mut self) -> Result<TimeSeries, SimError> {
        while !self.finished() {
            self.step()?;
        }
        Ok(self.series)
    }

    /// Stop here and hand back what was recorded so far.
    pub fn into_series(self) -> TimeSeries {
        self.series
    }
}

/// Validate and execute a scenario. Deterministic: the same scenario yields a
/// bit-identical recording.
pub fn run_scenario(scenario: &Scenario) -> Result<TimeSeries, SimError> {
    Simulation::new(scenario)?.run()
}
