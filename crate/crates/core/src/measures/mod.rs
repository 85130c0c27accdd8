//! State-level resource measures: scaled QFI / metrological power, numerical
//! nonclassicality depth, and maximal coherence.

mod coherence;
mod depth;
mod qfi;

#[allow(unused_imports)]
pub(crate) use coherence::max_coherence_raw;
pub use coherence::{
    max_coherence, max_coherence_matrix, predicted_sio_fidelity, SioPrediction, ZERO_DIAGONAL,
};
pub use depth::{grid_axes, nc_depth, DepthEstimate, GridSpec, MIN_TOL};
pub use qfi::{
    metrological_power, qfi_boundary_warning, qfi_matrix, quadrature_operators, quadrature_pair,
    QfiMatrix, BOUNDARY_WARN_MASS, EIGENPAIR_CUTOFF,
};
