//! Deterministic fixed-step simulation of a three-phase micro-grid with a
//! nonlinear rectifier load and a PV-fed shunt active power filter, plus the
//! power-quality mathematics to verify harmonic elimination.
//!
//! The crate is organized by subsystem:
//!
//! - [`phasemath`] — Clarke/Park reference-frame transforms, the mains-angle
//!   estimate and first-order filters.
//! - [`plant`] — grid source, six-pulse rectifier, linear RL load,
//!   single-diode PV array, averaged boost converter and the switched VSC.
//! - [`control`] — d–q reference-current generation (with an
//!   instantaneous-power cross-check), PI DC-link regulation, hysteresis
//!   current control and perturb-and-observe maximum-power tracking.
//! - [`engine`] — the fixed-step scenario executor with timed events,
//!   channel recording and KCL enforced exactly at the PCC.
//! - [`analysis`] — synchronous spectra, THD, power metrics, current
//!   decomposition and before/after comparisons.
//!
//! A quick taste — a linear load draws a clean sinusoid from the source:
//!
//! ```
//! use sapfsim::engine::{presets, run_scenario};
//! use sapfsim::analysis::{dft_spectrum, thd};
//!
//! let mut scenario = presets::linear_only(30.0, 0.06);
//! scenario.t_end = 0.2;
//! let run = run_scenario(&scenario).unwrap();
//! let window = run.last_cycles("i_sa", 5).unwrap();
//! let spectrum = dft_spectrum(window, 50.0, run.sample_rate(), 50).unwrap();
//! assert!(thd(&spectrum).unwrap() < 0.001);
//! ```

pub mod analysis;
pub mod control;
pub mod engine;
pub mod phasemath;
pub mod plant;

// The guide chapters double as doctests so their snippets stay in sync with
// the crate.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(reference_frames, "../../../book/src/reference-frames.md");
    chapter!(compensation, "../../../book/src/compensation.md");
    chapter!(plant_models, "../../../book/src/plant-models.md");
    chapter!(scenarios, "../../../book/src/scenarios.md");
    chapter!(power_quality, "../../../book/src/power-quality.md");
    chapter!(cli, "../../../book/src/cli.md");
}
