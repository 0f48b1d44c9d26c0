//! Ergodic outage probability of energy-harvesting dual-hop relay links over
//! log-normal fading.
//!
//! The [`analytic`] evaluators and the [`montecarlo`] simulator share only the
//! signal model in [`model`], so each can validate the other.

pub mod analytic;
pub mod error;
pub mod lognormal;
pub mod model;
pub mod montecarlo;
pub mod optimize;
pub mod quadrature;

pub use analytic::{evaluate, Method, OutageEstimate};
pub use error::{OutageError, Result};
pub use lognormal::ChannelSpec;
pub use model::{Duplex, FadeSample, Harvesting, LinkModel, Relaying, Scenario, SystemConfig};
pub use montecarlo::{estimate_outage, McPlan};
pub use optimize::{minimize_over_eh_param, OptResult};
pub use quadrature::QuadSpec;
