//! Finite-dimensional channels in Choi form and channel-output resource
//! measures.

mod choi;
mod eta;
mod nelder_mead;
mod output_depth;
mod random;

pub use choi::{ChoiDescriptor, ChoiMatrix, MAX_CHOI_DIM};
pub use eta::{
    output_max_coherence, output_max_coherence_with, EtaOptions, OptimizationReport, StartOutcome,
};
pub use nelder_mead::{minimize, NmOptions, NmResult};
pub use output_depth::{
    output_nc_depth, single_mode_family, two_mode_family, CandidateDepth, ChannelDepthReport,
};
pub use random::random_channel;
