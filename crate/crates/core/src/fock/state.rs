//! Truncated Fock-space state containers and their validity contracts.

use crate::linalg::{checked_hermitian, hermitian_eigenvalues, strides, total_dim, trace};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Default admissible tail mass for analytically constructed states.
pub const DEFAULT_TRUNC_EPS: f64 = 1e-8;

/// Hermiticity tolerance for density operators (max elementwise deviation).
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalue floor for positive semidefiniteness.
pub const PSD_FLOOR: f64 = -1e-10;

/// Trace tolerance for normalized density operators.
pub const TRACE_TOL: f64 = 1e-8;

/// Pure state on a truncated multimode Fock space.
///
/// Mode 0 is the most significant index: the flat amplitude index is
/// `n₀·d₁·…·d_{k-1} + … + n_{k-1}`, matching `A ⊗ B` Kronecker order.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl FockVector {
    /// Wrap amplitudes, enforcing `dims ≥ 2` per mode and squared norm
    /// within `[1 − eps, 1 + eps]`.
    pub fn with_eps(amplitudes: CVector, dims: Vec<usize>, eps: f64) -> Result<Self> {
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::DimensionMismatch(format!(
                "all mode dimensions must be ≥ 2, got {dims:?}"
            )));
        }
        if total_dim(&dims) != amplitudes.len() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude length {} does not match dims {:?}",
                amplitudes.len(),
                dims
            )));
        }
        let norm2 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if norm2 < 1.0 - eps || norm2 > 1.0 + eps {
            return Err(Error::Truncation {
                context: "state vector norm escaped [1−ε, 1+ε]".into(),
                tail: (1.0 - norm2).abs(),
                limit: eps,
            });
        }
        Ok(Self { amplitudes, dims })
    }

    /// As [`FockVector::with_eps`] with the default tolerance.
    pub fn new(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        Self::with_eps(amplitudes, dims, DEFAULT_TRUNC_EPS)
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn modes(&self) -> usize {
        self.dims.len()
    }

    /// Squared norm (1 up to the admitted truncation tail).
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Normalize in place (used after conditioning).
    pub fn normalized(mut self) -> Self {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 {
            self.amplitudes /= C64::new(n, 0.0);
        }
        self
    }

    /// Tensor product; `self` occupies the leading modes.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        Self { amplitudes, dims }
    }

    /// Mean photon number of one mode.
    pub fn mean_photon(&self, mode: usize) -> f64 {
        let st = strides(&self.dims)[mode];
        let d = self.dims[mode];
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(idx, a)| ((idx / st) % d) as f64 * a.norm_sqr())
            .sum()
    }

    /// Projector `|ψ⟩⟨ψ|` as a density operator (renormalized).
    pub fn to_density(&self) -> DensityOperator {
        let n2 = self.norm_sqr();
        let v = &self.amplitudes;
        let len = v.len();
        let mut m = CMatrix::zeros(len, len);
        for i in 0..len {
            for j in 0..len {
                m[(i, j)] = v[i] * v[j].conj() / n2;
            }
        }
        DensityOperator::from_trusted(m, self.dims.clone())
    }
}

/// Mixed state on a truncated multimode Fock space.
///
/// Always normalized: subnormalized conditional states are returned as an
/// explicit `(weight, state)` pair by the operations producing them.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityOperator {
    /// Validate Hermiticity (1e-12), positivity (eigenvalues ≥ −1e-10), and
    /// unit trace (1e-8), then store the symmetrized matrix.
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::DimensionMismatch(format!(
                "all mode dimensions must be ≥ 2, got {dims:?}"
            )));
        }
        if total_dim(&dims) != matrix.nrows() || matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "matrix {}×{} does not match dims {:?}",
                matrix.nrows(),
                matrix.ncols(),
                dims
            )));
        }
        let sym = checked_hermitian(&matrix, HERMITICITY_TOL)?;
        let tr = trace(&sym).re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace: tr });
        }
        let min_eig = hermitian_eigenvalues(&sym)[0];
        if min_eig < PSD_FLOOR {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(Self { matrix: sym, dims })
    }

    /// Construct from an operation that preserves validity mathematically.
    /// Symmetrizes roundoff but skips the eigenvalue check.
    pub(crate) fn from_trusted(mut matrix: CMatrix, dims: Vec<usize>) -> Self {
        crate::linalg::hermitize(&mut matrix);
        Self { matrix, dims }
    }

    /// Re-run the full validity contract.
    pub fn validate(&self) -> Result<()> {
        let dev = crate::linalg::hermiticity_deviation(&self.matrix);
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let tr = trace(&self.matrix).re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace { trace: tr });
        }
        let min_eig = hermitian_eigenvalues(&self.matrix)[0];
        if min_eig < PSD_FLOOR {
            return Err(Error::NotPositive { min_eig });
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn modes(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        trace(&self.matrix).re
    }

    pub fn purity(&self) -> f64 {
        let m = &self.matrix;
        let mut p = 0.0;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                p += (m[(i, j)] * m[(j, i)]).re;
            }
        }
        p
    }

    /// Mean photon number of one mode.
    pub fn mean_photon(&self, mode: usize) -> f64 {
        let st = strides(&self.dims)[mode];
        let d = self.dims[mode];
        (0..self.matrix.nrows())
            .map(|idx| ((idx / st) % d) as f64 * self.matrix[(idx, idx)].re)
            .sum()
    }

    /// Mean field `⟨a⟩` of one mode.
    pub fn mean_field(&self, mode: usize) -> C64 {
        let st = strides(&self.dims)[mode];
        let d = self.dims[mode];
        let total = self.matrix.nrows();
        let outer = total / d;
        let mut acc = C64::ZERO;
        // ⟨a⟩ = Σ √(n+1) ρ[(…,n,…),(…,n+1,…)]
        for o in 0..outer {
            let base = (o / st) * st * d + (o % st);
            for n in 0..(d - 1) {
                acc += ((n + 1) as f64).sqrt() * self.matrix[(base + n * st, base + (n + 1) * st)];
            }
        }
        acc
    }

    /// Total mean photon number.
    pub fn mean_photon_total(&self) -> f64 {
        (0..self.modes()).map(|m| self.mean_photon(m)).sum()
    }

    /// Population remaining in the highest level of `mode`: the mass the
    /// truncation boundary carries. Large values flag unreliable results
    /// for operations needing headroom (QFI, channels).
    pub fn boundary_mass(&self, mode: usize) -> f64 {
        let st = strides(&self.dims)[mode];
        let d = self.dims[mode];
        (0..self.matrix.nrows())
            .filter(|idx| (idx / st) % d == d - 1)
            .map(|idx| self.matrix[(idx, idx)].re)
            .sum()
    }

    /// Tensor product; `self` occupies the leading modes.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self::from_trusted(self.matrix.kronecker(&other.matrix), dims)
    }

    /// Partial trace keeping the listed modes (ascending order preserved).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let modes = self.modes();
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.iter().any(|&m| m >= modes) {
            return Err(Error::BadMode {
                mode: *keep.iter().max().unwrap(),
                modes,
            });
        }
        if keep.is_empty() {
            return Err(Error::DimensionMismatch(
                "partial_trace must keep at least one mode".into(),
            ));
        }
        let st = strides(&self.dims);
        let traced: Vec<usize> = (0..modes).filter(|m| !keep.contains(m)).collect();
        let kept_dims: Vec<usize> = keep.iter().map(|&m| self.dims[m]).collect();
        let out_dim = total_dim(&kept_dims);
        let out_strides = strides(&kept_dims);

        let mut out = CMatrix::zeros(out_dim, out_dim);
        // Enumerate kept row/col indices and traced diagonal indices.
        let traced_dims: Vec<usize> = traced.iter().map(|&m| self.dims[m]).collect();
        let traced_total = total_dim(&traced_dims).max(1);
        for row_out in 0..out_dim {
            let row_base: usize = keep
                .iter()
                .enumerate()
                .map(|(pos, &m)| ((row_out / out_strides[pos]) % kept_dims[pos]) * st[m])
                .sum();
            for col_out in 0..out_dim {
                let col_base: usize = keep
                    .iter()
                    .enumerate()
                    .map(|(pos, &m)| ((col_out / out_strides[pos]) % kept_dims[pos]) * st[m])
                    .sum();
                let mut acc = C64::ZERO;
                for t in 0..traced_total {
                    let mut offset = 0usize;
                    let mut rem = t;
                    for (pos, &m) in traced.iter().enumerate().rev() {
                        let d = traced_dims[pos];
                        offset += (rem % d) * st[m];
                        rem /= d;
                    }
                    acc += self.matrix[(row_base + offset, col_base + offset)];
                }
                out[(row_out, col_out)] = acc;
            }
        }
        Ok(Self::from_trusted(out, kept_dims))
    }

    /// Conjugate by a unitary on the full space.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        if u.nrows() != self.total_dim() || u.ncols() != self.total_dim() {
            return Err(Error::DimensionMismatch(format!(
                "unitary {}×{} vs state dim {}",
                u.nrows(),
                u.ncols(),
                self.total_dim()
            )));
        }
        Ok(Self::from_trusted(
            u * &self.matrix * u.adjoint(),
            self.dims.clone(),
        ))
    }

    /// Convex mixture `Σ pᵢ ρᵢ`. Weights must sum to 1 within 1e-10.
    pub fn mix(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::DimensionMismatch("empty mixture".into()));
        }
        let dims = parts[0].1.dims.clone();
        let psum: f64 = parts.iter().map(|(p, _)| p).sum();
        if (psum - 1.0).abs() > 1e-10 || parts.iter().any(|(p, _)| *p < 0.0) {
            return Err(Error::OutOfRange {
                name: "mixture weights",
                value: psum,
                range: "non-negative, summing to 1",
            });
        }
        let n = parts[0].1.total_dim();
        let mut m = CMatrix::zeros(n, n);
        for (p, rho) in parts {
            if rho.dims != dims {
                return Err(Error::DimensionMismatch(
                    "mixture parts must share dims".into(),
                ));
            }
            m += rho.matrix.scale(*p);
        }
        Ok(Self::from_trusted(m, dims))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build::{make_coherent, make_fock};

    #[test]
    fn rejects_dims_below_two() {
        let v = CVector::from_element(1, C64::new(1.0, 0.0));
        assert!(FockVector::new(v, vec![1]).is_err());
    }

    #[test]
    fn rejects_unnormalized() {
        let v = CVector::from_vec(vec![C64::new(0.5, 0.0), C64::ZERO]);
        assert!(FockVector::new(v, vec![2]).is_err());
    }

    #[test]
    fn partial_trace_of_product_recovers_factor() {
        let a = make_coherent(C64::new(0.6, 0.1), 8).unwrap().to_density();
        let b = make_fock(1, 4).unwrap().to_density();
        let ab = a.tensor(&b);
        let ra = ab.partial_trace(&[0]).unwrap();
        let rb = ab.partial_trace(&[1]).unwrap();
        assert!((ra.matrix() - a.matrix()).norm() < 1e-12);
        assert!((rb.matrix() - b.matrix()).norm() < 1e-12);
        // trace preserved
        assert!((ra.trace() - ab.trace()).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_of_entangled_state_is_mixed() {
        // (|01⟩ + |10⟩)/√2 — Schmidt rank 2, reduced purity 1/2.
        let mut v = CVector::zeros(9);
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[1] = s; // |0,1⟩
        v[3] = s; // |1,0⟩
        let psi = FockVector::new(v, vec![3, 3]).unwrap();
        let reduced = psi.to_density().partial_trace(&[0]).unwrap();
        assert!((reduced.purity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mixture_validates_weights() {
        let a = make_fock(0, 3).unwrap().to_density();
        let b = make_fock(1, 3).unwrap().to_density();
        let m = DensityOperator::mix(&[(0.25, &a), (0.75, &b)]).unwrap();
        assert!((m.matrix()[(1, 1)].re - 0.75).abs() < 1e-14);
        assert!(DensityOperator::mix(&[(0.5, &a), (0.6, &b)]).is_err());
    }

    #[test]
    fn boundary_mass_detects_support_at_cutoff() {
        let top = make_fock(3, 4).unwrap().to_density();
        assert!((top.boundary_mass(0) - 1.0).abs() < 1e-14);
        let low = make_fock(0, 4).unwrap().to_density();
        assert!(low.boundary_mass(0) < 1e-14);
    }
}
