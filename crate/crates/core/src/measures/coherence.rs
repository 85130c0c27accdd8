//! Maximal coherence η and the SIO distillation fidelity it predicts.

use crate::fock::DensityOperator;
use crate::linalg::{hermiticity_deviation, min_eigenvalue};
use crate::{CMatrix, Error, Result};
use serde::{Deserialize, Serialize};

/// Diagonal entries at or below this are treated as exactly zero: by
/// positivity their whole row and column vanish, and the pair contributes 0
/// rather than 0/0.
pub const ZERO_DIAGONAL: f64 = 1e-14;

/// Maximal coherence of a PSD matrix in its computational basis:
/// `η = max_{i≠j} |ρ_ij| / √(ρ_ii ρ_jj)`, always in [0, 1] by
/// Cauchy–Schwarz (clamped against roundoff overshoot).
pub(crate) fn max_coherence_raw(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut best = 0.0f64;
    for i in 0..n {
        let di = m[(i, i)].re;
        if di <= ZERO_DIAGONAL {
            continue;
        }
        for j in (i + 1)..n {
            let dj = m[(j, j)].re;
            if dj <= ZERO_DIAGONAL {
                continue;
            }
            let ratio = m[(i, j)].norm() / (di * dj).sqrt();
            if ratio > best {
                best = ratio;
            }
        }
    }
    best.min(1.0)
}

/// Maximal coherence of a raw Hermitian PSD matrix. Validates the input.
pub fn max_coherence_matrix(m: &CMatrix) -> Result<f64> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch("matrix must be square".into()));
    }
    let dev = hermiticity_deviation(m);
    if dev > 1e-10 {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let min_eig = min_eigenvalue(m);
    if min_eig < -1e-10 {
        return Err(Error::NotPositive { min_eig });
    }
    Ok(max_coherence_raw(m))
}

/// Maximal coherence of a density operator (already validated on entry).
pub fn max_coherence(rho: &DensityOperator) -> f64 {
    max_coherence_raw(rho.matrix())
}

/// Prediction derived from η: the asymptotic SIO distillation fidelity
/// `(1 + η)/2` and the distillability flag `η = 1` (within 1e-10).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SioPrediction {
    pub eta: f64,
    pub fidelity: f64,
    pub distillable: bool,
}

pub fn predicted_sio_fidelity(rho: &DensityOperator) -> SioPrediction {
    let eta = max_coherence(rho);
    SioPrediction {
        eta,
        fidelity: (1.0 + eta) / 2.0,
        distillable: (1.0 - eta).abs() <= 1e-10,
    }
}
