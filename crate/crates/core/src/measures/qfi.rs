//! Scaled quantum Fisher information matrix and the metrological power.

use crate::fock::DensityOperator;
use crate::linalg::{hermitian_eig, symmetric_eig};
use crate::{CMatrix, Error, RMatrix, Result, C64};

/// Scaled QFI matrix over the quadratures `(x₁, p₁, …, xₙ, pₙ)`:
///
/// `F_kl = ½ Σ_{ij} (λᵢ−λⱼ)²/(λᵢ+λⱼ) ⟨i|R_k|j⟩⟨j|R_l|i⟩`
///
/// over eigenpairs of ρ. The convention already carries the 1/4 scaling
/// relative to the unscaled QFI, anchored by `F(vacuum) = I/2` and
/// `F₁(|1⟩) = 1`.
#[derive(Debug, Clone)]
pub struct QfiMatrix {
    matrix: RMatrix,
    modes: usize,
}

impl QfiMatrix {
    pub fn matrix(&self) -> &RMatrix {
        &self.matrix
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Largest eigenvalue.
    pub fn lambda_max(&self) -> f64 {
        let eigs = symmetric_eig(&self.matrix).0;
        eigs[eigs.len() - 1]
    }

    /// Symmetry and positivity contract (symmetric to 1e-10, PSD to −1e-10).
    pub fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        let mut dev: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in (i + 1)..m.ncols() {
                dev = dev.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if dev > 1e-10 {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let min = symmetric_eig(m).0[0];
        if min < -1e-10 {
            return Err(Error::NotPositive { min_eig: min });
        }
        Ok(())
    }
}

/// Single-mode quadrature matrices `x = (a+a†)/√2`, `p = (a−a†)/(i√2)`.
pub fn quadrature_pair(dim: usize) -> (CMatrix, CMatrix) {
    let mut x = CMatrix::zeros(dim, dim);
    let mut p = CMatrix::zeros(dim, dim);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for n in 0..(dim - 1) {
        let g = ((n + 1) as f64).sqrt() * s;
        x[(n, n + 1)] = C64::new(g, 0.0);
        x[(n + 1, n)] = C64::new(g, 0.0);
        p[(n, n + 1)] = C64::new(0.0, -g);
        p[(n + 1, n)] = C64::new(0.0, g);
    }
    (x, p)
}

/// All `2n` quadrature operators lifted to the full space, in the order
/// `(x₁, p₁, …, xₙ, pₙ)`.
pub fn quadrature_operators(dims: &[usize]) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(2 * dims.len());
    for (mode, &d) in dims.iter().enumerate() {
        let (x, p) = quadrature_pair(d);
        out.push(lift(&x, dims, mode));
        out.push(lift(&p, dims, mode));
    }
    out
}

fn lift(op: &CMatrix, dims: &[usize], mode: usize) -> CMatrix {
    let mut full = CMatrix::identity(1, 1);
    for (m, &d) in dims.iter().enumerate() {
        let factor = if m == mode {
            op.clone()
        } else {
            CMatrix::identity(d, d)
        };
        full = full.kronecker(&factor);
    }
    full
}

/// Eigenvalue-pair cutoff: pairs with `λᵢ + λⱼ` below this are skipped.
/// Pairs with a single (numerically) zero eigenvalue are kept — they
/// contribute `λᵢ` and carry the coupling into the empty sector.
pub const EIGENPAIR_CUTOFF: f64 = 1e-12;

/// Fraction of population at the top truncation level beyond which the QFI
/// is unreliable (the quadratures couple `n ↔ n±1` across the boundary).
pub const BOUNDARY_WARN_MASS: f64 = 1e-10;

/// Whether the state's support touches the truncation boundary of any mode.
pub fn qfi_boundary_warning(rho: &DensityOperator) -> bool {
    (0..rho.modes()).any(|m| rho.boundary_mass(m) > BOUNDARY_WARN_MASS)
}

/// Compute the scaled QFI matrix over all quadrature directions.
pub fn qfi_matrix(rho: &DensityOperator) -> Result<QfiMatrix> {
    let dims = rho.dims();
    let (vals, vecs) = hermitian_eig(rho.matrix());
    let quads = quadrature_operators(dims);
    let k_count = quads.len();
    let d = rho.total_dim();

    // matrix elements of each quadrature in the eigenbasis
    let m_k: Vec<CMatrix> = quads.iter().map(|r| vecs.adjoint() * r * &vecs).collect();

    let mut f = RMatrix::zeros(k_count, k_count);
    for k in 0..k_count {
        for l in k..k_count {
            let mut acc = 0.0f64;
            for i in 0..d {
                for j in 0..d {
                    let sum = vals[i] + vals[j];
                    if sum < EIGENPAIR_CUTOFF {
                        continue;
                    }
                    let diff = vals[i] - vals[j];
                    let w = diff * diff / sum;
                    if w == 0.0 {
                        continue;
                    }
                    acc += w * (m_k[k][(i, j)] * m_k[l][(j, i)]).re;
                }
            }
            let v = 0.5 * acc;
            f[(k, l)] = v;
            f[(l, k)] = v;
        }
    }
    Ok(QfiMatrix {
        matrix: f,
        modes: dims.len(),
    })
}

/// Metrological power `F₁(ρ) = max{λ_max(F) − 1/2, 0}`: the best
/// displacement-sensing advantage over any phase-space direction.
pub fn metrological_power(rho: &DensityOperator) -> Result<f64> {
    let f = qfi_matrix(rho)?;
    Ok((f.lambda_max() - 0.5).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_cat, make_coherent, make_fock, make_lossy_photon_dim, FockVector};

    /// Pure-state oracle: the QFI of a pure state is the symmetrized
    /// quadrature covariance matrix.
    fn pure_state_covariance(psi: &FockVector) -> RMatrix {
        let rho = psi.to_density();
        let quads = quadrature_operators(psi.dims());
        let k = quads.len();
        let means: Vec<f64> = quads
            .iter()
            .map(|r| crate::linalg::trace(&(r * rho.matrix())).re)
            .collect();
        RMatrix::from_fn(k, k, |a, b| {
            let anti = (&quads[a] * &quads[b] + &quads[b] * &quads[a]).scale(0.5);
            crate::linalg::trace(&(anti * rho.matrix())).re - means[a] * means[b]
        })
    }

    #[test]
    fn vacuum_qfi_is_half_identity() {
        let vac = make_fock(0, 4).unwrap().to_density();
        let f = qfi_matrix(&vac).unwrap();
        assert!((f.matrix() - RMatrix::identity(2, 2) * 0.5).norm() < 1e-10);
        f.validate().unwrap();
        assert!(metrological_power(&vac).unwrap() < 1e-12);
    }

    #[test]
    fn coherent_qfi_matches_covariance_oracle_and_f1_vanishes() {
        let psi = make_coherent(C64::new(0.9, -0.4), 16).unwrap();
        let f = qfi_matrix(&psi.to_density()).unwrap();
        let oracle = pure_state_covariance(&psi);
        assert!((f.matrix() - oracle).norm() < 1e-8);
        assert!(metrological_power(&psi.to_density()).unwrap() < 1e-8);
    }

    #[test]
    fn single_photon_metrological_power_is_one() {
        let one = make_fock(1, 4).unwrap().to_density();
        let f = qfi_matrix(&one).unwrap();
        // Var(x) = 3/2 for |1⟩ ⇒ F = (3/2)I
        assert!((f.matrix() - RMatrix::identity(2, 2) * 1.5).norm() < 1e-10);
        assert!((metrological_power(&one).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lossy_photon_qfi_closed_form() {
        // F_xx = (1−2q)²/2 + q, hand-evaluated on the 3-level support;
        // requires the λ=0 third level to be kept.
        for q in [0.1, 0.35, 0.5, 0.8, 1.0] {
            let rho = make_lossy_photon_dim(q, 3).unwrap();
            let f = qfi_matrix(&rho).unwrap();
            let expect = (1.0 - 2.0 * q).powi(2) / 2.0 + q;
            assert!(
                (f.matrix()[(0, 0)] - expect).abs() < 1e-10,
                "q={q}: {} vs {expect}",
                f.matrix()[(0, 0)]
            );
            assert!(f.matrix()[(0, 1)].abs() < 1e-12);
            let f1 = metrological_power(&rho).unwrap();
            let f1_expect = (q * (2.0 * q - 1.0)).max(0.0);
            assert!((f1 - f1_expect).abs() < 1e-10, "q={q}");
        }
    }

    #[test]
    fn dim_two_misses_the_coupling_and_warns() {
        // With no headroom the |1⟩⟨1| QFI is silently wrong; the boundary
        // flag is the contract for detecting that.
        let mut m = CMatrix::zeros(2, 2);
        m[(1, 1)] = C64::new(1.0, 0.0);
        let rho = DensityOperator::new(m, vec![2]).unwrap();
        assert!(qfi_boundary_warning(&rho));
        let ok = make_fock(1, 4).unwrap().to_density();
        assert!(!qfi_boundary_warning(&ok));
    }

    #[test]
    fn cat_metrological_power_closed_form() {
        // F₁(cat α) = α²(1 + tanh α²) exactly at finite α.
        let alpha = 1.4f64;
        let cat = make_cat(C64::new(alpha, 0.0), 24).unwrap();
        let f1 = metrological_power(&cat.to_density()).unwrap();
        let a2 = alpha * alpha;
        let expect = a2 * (1.0 + a2.tanh());
        assert!((f1 - expect).abs() < 1e-8, "{f1} vs {expect}");
        // covariance oracle agrees (pure state)
        let f = qfi_matrix(&cat.to_density()).unwrap();
        let oracle = pure_state_covariance(&cat);
        assert!((f.matrix() - oracle).norm() < 1e-8);
    }

    #[test]
    fn displacement_invariance_of_f1() {
        let rho = make_lossy_photon_dim(0.7, 8).unwrap();
        let u = crate::fock::displacement_unitary(C64::new(0.4, 0.3), 8);
        let moved = rho.conjugate(&u).unwrap();
        let a = metrological_power(&rho).unwrap();
        let b = metrological_power(&moved).unwrap();
        assert!((a - b).abs() < 1e-8);
    }
}
