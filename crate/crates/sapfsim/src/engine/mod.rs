//! Fixed-step scenario executor: wires the plant models and controllers into
//! the micro-grid topology, enforces KCL at the point of common coupling,
//! schedules controller rates, applies timed events and records channels.

mod scenario;
mod sim;
mod timeseries;

pub mod presets;

pub use scenario::{
    default_record, Channel, Event, EventTarget, InjectionMode, PvChain, SapfConfig, Scenario,
    ValidationError,
};
pub use sim::{run_scenario, SimError, Simulation};
pub use timeseries::{EventLogEntry, TimeSeries};
