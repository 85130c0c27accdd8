//! Truncated Fock-space simulation: states, free operations, noise
//! channels, and quasiprobability evaluation.
//!
//! Conventions fixed here and relied on everywhere else:
//! - quadratures `x = (a+a†)/√2`, `p = (a−a†)/(i√2)`, vacuum variance 1/2;
//! - mode 0 is the most significant flat index (Kronecker order);
//! - beam splitter acts as `|α⟩⊗|β⟩ → |αcosθ+βsinθ⟩⊗|βcosθ−αsinθ⟩`.

mod build;
mod channel;
mod descriptor;
mod project;
mod quasiprob;
mod state;
mod unitary;

pub use build::{
    make_cat, make_coherent, make_coherent_eps, make_fock, make_lossy_photon,
    make_lossy_photon_dim, make_squeezed, make_tmsv, recommended_dim,
};
pub use channel::{
    loss_channel, loss_kraus_ops, thermal_noise_channel, thermal_noise_channel_with, KrausChannel,
    ThermalOptions, KRAUS_TOL,
};
pub use descriptor::StateDescriptor;
pub use project::{
    project_coherent, project_fock, project_vector, project_vector_pure, CoherentProjection,
    ZERO_WEIGHT,
};
pub use quasiprob::{has_negativity, min_on_grid, quasiprob, MAX_KERNEL_DIM};
pub use state::{
    DensityOperator, FockVector, DEFAULT_TRUNC_EPS, HERMITICITY_TOL, PSD_FLOOR, TRACE_TOL,
};
pub use unitary::{
    beam_splitter, beam_splitter_apply_vec, displacement_matrix_exact, displacement_unitary,
    phase_shift,
};
