//! Continuous-state models of the electrical components: stiff grid source
//! behind an impedance, six-pulse rectifier, linear RL load, single-diode PV
//! array, duty-averaged boost converter and a switched two-level VSC with its
//! DC link.
//!
//! Every model is a plain struct with explicit state advanced by a `step`
//! method using forward Euler; identical inputs produce bit-identical
//! outputs.

pub(crate) mod boost;
mod grid;
mod linear;
mod pv;
mod rectifier;
mod vsc;

pub use boost::{BoostConverter, MAX_DUTY};
pub use grid::GridSource;
pub use linear::LinearLoad;
pub use pv::{PvArray, PvArrayParams};
pub use rectifier::RectifierLoad;
pub use vsc::{SwitchState, VscSapf};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlantError {
    #[error("invalid {component} parameter {name}: {message}")]
    InvalidParameter {
        component: &'static str,
        name: &'static str,
        message: String,
    },

    /// Newton iteration on the implicit module equation failed to converge;
    /// signals pathological parameters, the engine aborts the scenario.
    #[error("pv solve failed (no convergence after {iterations} iterations at {context})")]
    PvSolveFailed { iterations: usize, context: &'static str },

    /// DC-link voltage reached zero; bad sizing or control.
    #[error("dc link collapsed")]
    DcLinkCollapsed,
}

pub(crate) fn check_param(
    component: &'static str,
    name: &'static str,
    ok: bool,
    message: &str,
) -> Result<(), PlantError> {
    if ok {
        Ok(())
    } else {
        Err(PlantError::InvalidParameter {
            component,
            name,
            message: message.to_string(),
        })
    }
}
