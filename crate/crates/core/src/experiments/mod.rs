//! Seeded reproduction harnesses and randomized property suites.
//!
//! Every run is replayable from its (seed, config) pair; reports embed the
//! seed and a hash of the fully-resolved configuration.

mod cat;
mod eta_tensor;
mod lossy_scan;
mod mono;
mod record;
pub mod rng;
mod tau_tensor;
mod tmsv;

pub use cat::{cat_amplification, CatConfig, CatRecord, CatReport};
pub use eta_tensor::{
    eta_tensorization_experiment, EtaTensorConfig, EtaTensorRecord, EtaTensorReport,
};
pub use lossy_scan::{lossy_concentration_scan, LossyScanConfig, LossyScanRecord, LossyScanReport};
pub use mono::{monotonicity_suite, MonoConfig, MonoReport, MonoViolation};
pub use record::{config_hash, RunMeta};
pub use tau_tensor::{
    tau_channel_tensorization, TauTensorConfig, TauTensorRecord, TauTensorReport,
};
pub use tmsv::{tmsv_conditioning, TmsvConfig, TmsvRecord, TmsvReport};
