//! Controllers: d–q reference-current generation (primary), instantaneous-
//! power reference generation (cross-check), PI DC-link regulation,
//! hysteresis current control and perturb-and-observe maximum-power
//! tracking.

mod hysteresis;
mod idq;
mod mppt;
mod pi;
mod pq;

pub use hysteresis::{hysteresis_step, HysteresisBand};
pub use idq::{IdqConfig, IdqController, IdqOutput};
pub use mppt::PerturbObserve;
pub use pi::PiController;
pub use pq::pq_reference;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControlError {
    #[error("invalid {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },
}
