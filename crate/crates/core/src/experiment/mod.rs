//! Six-step protocol runner with an aggregate error model.
//!
//! Reports are in units of the delivered refresh polarization `P'`.

mod fit;
mod model;
mod schedule;
mod summary;

pub use fit::{
    fit_error_model, fit_error_model_with, predict, reference_observations, ErrorFit,
    FreeParameters, Observation, Quantity,
};
pub use model::{gate_state_fidelity, run_protocol, simulate, ErrorModel, StepReport};
pub use schedule::{ProtocolSchedule, Step};
pub use summary::{
    calibrate_refresh, protocol_fidelity, ProtocolFidelity, IDEAL_FINAL, PROTON_TO_CARBON,
};
