//! Covariance-matrix level Gaussian states, symplectic free operations, and
//! the closed-form Gaussian resource measures.
//!
//! Conventions: ħ = 1, vacuum variance 1/2, quadratures ordered
//! `(x₁, p₁, …, xₙ, pₙ)` so the symplectic form Ω is block-diagonal in
//! 2×2 blocks `[[0, 1], [−1, 0]]`.

use crate::linalg::min_eigenvalue;
use crate::{CMatrix, Error, RMatrix, RVector, Result, C64};
use serde::{Deserialize, Serialize};

/// Symmetry tolerance for covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Physicality floor for `V + iΩ/2`.
pub const PHYSICALITY_FLOOR: f64 = -1e-10;

/// Gaussian state: displacement vector and covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: RVector,
    cov: RMatrix,
}

/// The standard symplectic form on `n` modes.
pub fn omega(n_modes: usize) -> RMatrix {
    let mut o = RMatrix::zeros(2 * n_modes, 2 * n_modes);
    for k in 0..n_modes {
        o[(2 * k, 2 * k + 1)] = 1.0;
        o[(2 * k + 1, 2 * k)] = -1.0;
    }
    o
}

impl GaussianState {
    /// Validate symmetry and the uncertainty relation `V + iΩ/2 ⪰ 0`.
    pub fn new(mean: RVector, cov: RMatrix) -> Result<Self> {
        let d = mean.len();
        if d == 0 || !d.is_multiple_of(2) || cov.nrows() != d || cov.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "mean length {d} and covariance {}×{} must be matching and even",
                cov.nrows(),
                cov.ncols()
            )));
        }
        let mut dev: f64 = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                dev = dev.max((cov[(i, j)] - cov[(j, i)]).abs());
            }
        }
        if dev > SYMMETRY_TOL {
            return Err(Error::NotHermitian { deviation: dev });
        }
        let cov = 0.5 * (&cov + cov.transpose());
        let n = d / 2;
        let om = omega(n);
        let m = CMatrix::from_fn(d, d, |i, j| C64::new(cov[(i, j)], 0.5 * om[(i, j)]));
        let min_eig = min_eigenvalue(&m);
        if min_eig < PHYSICALITY_FLOOR {
            return Err(Error::Unphysical { min_eig });
        }
        Ok(Self { mean, cov })
    }

    /// The n-mode vacuum, `V = I/2`.
    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            mean: RVector::zeros(2 * n_modes),
            cov: RMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        }
    }

    /// Single-mode thermal state with the given added noise, `V = (½+δ)I`.
    pub fn thermal(delta: f64) -> Self {
        Self {
            mean: RVector::zeros(2),
            cov: RMatrix::identity(2, 2) * (0.5 + delta),
        }
    }

    /// Single-mode squeezed vacuum: variance `e^{∓2r}/2` along the rotated
    /// axes (angle 0 squeezes x).
    pub fn squeezed_vacuum(r: f64, angle: f64) -> Self {
        let g = Self::vacuum(1);
        g.apply_symplectic(&squeeze_symplectic(r, angle))
    }

    pub fn mean(&self) -> &RVector {
        &self.mean
    }

    pub fn cov(&self) -> &RMatrix {
        &self.cov
    }

    pub fn modes(&self) -> usize {
        self.mean.len() / 2
    }

    /// `V → SVSᵀ`, `mean → S·mean`.
    pub fn apply_symplectic(&self, s: &RMatrix) -> Self {
        Self {
            mean: s * &self.mean,
            cov: s * &self.cov * s.transpose(),
        }
    }

    /// Phase-space displacement by `γ` on one mode:
    /// `⟨x⟩ += √2 Re γ`, `⟨p⟩ += √2 Im γ`.
    pub fn displace(&self, mode: usize, gamma: C64) -> Result<Self> {
        if mode >= self.modes() {
            return Err(Error::BadMode {
                mode,
                modes: self.modes(),
            });
        }
        let mut mean = self.mean.clone();
        mean[2 * mode] += std::f64::consts::SQRT_2 * gamma.re;
        mean[2 * mode + 1] += std::f64::consts::SQRT_2 * gamma.im;
        Ok(Self {
            mean,
            cov: self.cov.clone(),
        })
    }

    /// Additive thermal noise on every mode: `V → V + δI`.
    pub fn add_thermal(&self, delta: f64) -> Result<Self> {
        if delta < 0.0 {
            return Err(Error::OutOfRange {
                name: "delta",
                value: delta,
                range: "δ ≥ 0",
            });
        }
        let d = self.mean.len();
        Ok(Self {
            mean: self.mean.clone(),
            cov: &self.cov + RMatrix::identity(d, d) * delta,
        })
    }

    /// Tensor product (block-diagonal covariance).
    pub fn tensor(&self, other: &Self) -> Self {
        let d1 = self.mean.len();
        let d2 = other.mean.len();
        let mut mean = RVector::zeros(d1 + d2);
        mean.rows_mut(0, d1).copy_from(&self.mean);
        mean.rows_mut(d1, d2).copy_from(&other.mean);
        let mut cov = RMatrix::zeros(d1 + d2, d1 + d2);
        cov.view_mut((0, 0), (d1, d1)).copy_from(&self.cov);
        cov.view_mut((d1, d1), (d2, d2)).copy_from(&other.cov);
        Self { mean, cov }
    }

    /// Conditional state of the remaining modes after a heterodyne
    /// (coherent-projection) measurement of `mode` with outcome `xi`.
    /// Covariance: Schur complement against `B + I/2`.
    pub fn condition_heterodyne(&self, mode: usize, xi: C64) -> Result<Self> {
        let n = self.modes();
        if mode >= n {
            return Err(Error::BadMode { mode, modes: n });
        }
        if n < 2 {
            return Err(Error::DimensionMismatch(
                "conditioning needs at least two modes".into(),
            ));
        }
        let keep: Vec<usize> = (0..n).filter(|&m| m != mode).collect();
        let idx_keep: Vec<usize> = keep.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect();
        let idx_meas = [2 * mode, 2 * mode + 1];
        let a = RMatrix::from_fn(idx_keep.len(), idx_keep.len(), |i, j| {
            self.cov[(idx_keep[i], idx_keep[j])]
        });
        let c = RMatrix::from_fn(idx_keep.len(), 2, |i, j| {
            self.cov[(idx_keep[i], idx_meas[j])]
        });
        let b = RMatrix::from_fn(2, 2, |i, j| self.cov[(idx_meas[i], idx_meas[j])]);
        let b_reg = b + RMatrix::identity(2, 2) * 0.5;
        let b_inv = b_reg
            .try_inverse()
            .ok_or(Error::Unphysical { min_eig: 0.0 })?;
        let cov = &a - &c * &b_inv * c.transpose();
        let mean_keep = RVector::from_fn(idx_keep.len(), |i, _| self.mean[idx_keep[i]]);
        let mean_meas = RVector::from_vec(vec![self.mean[idx_meas[0]], self.mean[idx_meas[1]]]);
        let outcome = RVector::from_vec(vec![
            std::f64::consts::SQRT_2 * xi.re,
            std::f64::consts::SQRT_2 * xi.im,
        ]);
        let mean = mean_keep + &c * b_inv * (outcome - mean_meas);
        Ok(Self { mean, cov })
    }
}

// ---------------------------------------------------------------------------
// Symplectic generators
// ---------------------------------------------------------------------------

/// Beam-splitter symplectic on two modes, matching the Fock-space
/// convention `a → a cosθ + b sinθ`, `b → b cosθ − a sinθ`.
pub fn bs_symplectic(theta: f64) -> RMatrix {
    let (c, s) = (theta.cos(), theta.sin());
    let mut m = RMatrix::zeros(4, 4);
    for q in 0..2 {
        m[(q, q)] = c;
        m[(q, 2 + q)] = s;
        m[(2 + q, q)] = -s;
        m[(2 + q, 2 + q)] = c;
    }
    m
}

/// Single-mode rotation (phase shift) symplectic.
pub fn rotation_symplectic(phi: f64) -> RMatrix {
    let (c, s) = (phi.cos(), phi.sin());
    RMatrix::from_row_slice(2, 2, &[c, s, -s, c])
}

/// Single-mode squeezer: at `angle = 0`, `x` variance shrinks by `e^{−2r}`.
pub fn squeeze_symplectic(r: f64, angle: f64) -> RMatrix {
    let rot = rotation_symplectic(angle);
    let core = RMatrix::from_row_slice(2, 2, &[(-r).exp(), 0.0, 0.0, r.exp()]);
    &rot * core * rot.transpose()
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

/// Nonclassicality depth of a Gaussian state:
/// `max{0, 1/2 − λ_min(V)}`. Independent of the mean.
pub fn nc_depth_gaussian(g: &GaussianState) -> f64 {
    let eigs = crate::linalg::symmetric_eig(g.cov()).0;
    (0.5 - eigs[0]).max(0.0)
}

/// Gaussian nonclassicality measure `κ_F` against classical states:
/// closed form `max{1, 1/(2λ_min(V))}`.
pub fn kappa_classical(g: &GaussianState) -> f64 {
    let eigs = crate::linalg::symmetric_eig(g.cov()).0;
    (1.0 / (2.0 * eigs[0])).max(1.0)
}

/// Symplectic eigenvalues of a covariance matrix: moduli of the eigenvalues
/// of `iΩV`, one per mode, ascending.
pub fn symplectic_eigenvalues(cov: &RMatrix) -> Vec<f64> {
    let n = cov.nrows() / 2;
    let m = omega(n) * cov;
    let eigs = m.complex_eigenvalues();
    let mut nu: Vec<f64> = eigs.iter().map(|e| e.im.abs()).collect();
    nu.sort_by(f64::total_cmp);
    debug_assert_eq!(nu.len(), 2 * n);
    // eigenvalues come in ±iν pairs; keep one per adjacent duplicate pair
    nu.into_iter().step_by(2).collect()
}

/// Partial transpose of a two-mode covariance matrix (p₂ → −p₂).
pub fn partial_transpose_two_mode(cov: &RMatrix) -> RMatrix {
    let mut lambda = RMatrix::identity(4, 4);
    lambda[(3, 3)] = -1.0;
    &lambda * cov * lambda
}

/// Gaussian entanglement measure `κ_F` against two-mode separable states:
/// smallest `t ≥ 1` such that the partial transpose of `tV` is physical,
/// located by bisection to 1e-8.
pub fn kappa_separable_two_mode(g: &GaussianState) -> Result<f64> {
    if g.modes() != 2 {
        return Err(Error::DimensionMismatch(
            "kappa_separable is defined for two-mode states".into(),
        ));
    }
    let pt = partial_transpose_two_mode(g.cov());
    let separable_at = |t: f64| -> bool {
        let nu = symplectic_eigenvalues(&(&pt * t));
        nu[0] >= 0.5
    };
    if separable_at(1.0) {
        return Ok(1.0);
    }
    let mut lo = 1.0;
    let mut hi = 2.0;
    while !separable_at(hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Unphysical { min_eig: 0.0 });
        }
    }
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if separable_at(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

// ---------------------------------------------------------------------------
// Descriptor
// ---------------------------------------------------------------------------

/// JSON descriptor for Gaussian states.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GaussianDescriptor {
    Gaussian { mean: Vec<f64>, cov: Vec<Vec<f64>> },
}

impl GaussianDescriptor {
    pub fn to_state(&self) -> Result<GaussianState> {
        let Self::Gaussian { mean, cov } = self;
        let d = mean.len();
        if cov.len() != d || cov.iter().any(|r| r.len() != d) {
            return Err(Error::Descriptor(format!(
                "covariance must be {d}×{d} to match the mean"
            )));
        }
        GaussianState::new(
            RVector::from_vec(mean.clone()),
            RMatrix::from_fn(d, d, |i, j| cov[i][j]),
        )
    }

    pub fn from_state(g: &GaussianState) -> Self {
        let d = g.mean().len();
        Self::Gaussian {
            mean: g.mean().iter().copied().collect(),
            cov: (0..d)
                .map(|i| (0..d).map(|j| g.cov()[(i, j)]).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tmsv_cov(r: f64) -> GaussianState {
        // mix x-squeezed and p-squeezed vacua on a 50:50 splitter
        let sx = GaussianState::squeezed_vacuum(r, 0.0);
        let sp = GaussianState::squeezed_vacuum(r, std::f64::consts::FRAC_PI_2);
        sx.tensor(&sp)
            .apply_symplectic(&bs4(std::f64::consts::FRAC_PI_4))
    }

    fn bs4(theta: f64) -> RMatrix {
        bs_symplectic(theta)
    }

    /// Random physical Gaussian state via Williamson construction.
    fn random_state(rng: &mut ChaCha8Rng, modes: usize) -> GaussianState {
        let mut g = if modes == 1 {
            GaussianState::thermal(rng.random::<f64>())
        } else {
            GaussianState::thermal(rng.random::<f64>())
                .tensor(&GaussianState::thermal(rng.random::<f64>()))
        };
        for mode in 0..modes {
            let r = rng.random::<f64>() * 1.2;
            let angle = rng.random::<f64>() * std::f64::consts::PI;
            let sq = squeeze_symplectic(r, angle);
            g = g.apply_symplectic(&embed_single(&sq, mode, modes));
        }
        if modes == 2 {
            g = g.apply_symplectic(&bs4(rng.random::<f64>() * std::f64::consts::FRAC_PI_2));
        }
        g.displace(
            0,
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
        )
        .unwrap()
    }

    fn embed_single(s: &RMatrix, mode: usize, modes: usize) -> RMatrix {
        let mut m = RMatrix::identity(2 * modes, 2 * modes);
        for i in 0..2 {
            for j in 0..2 {
                m[(2 * mode + i, 2 * mode + j)] = s[(i, j)];
            }
        }
        m
    }

    #[test]
    fn depth_anchors() {
        assert_eq!(nc_depth_gaussian(&GaussianState::vacuum(1)), 0.0);
        assert_eq!(nc_depth_gaussian(&GaussianState::thermal(0.7)), 0.0);
        let r = 0.6;
        let sq = GaussianState::squeezed_vacuum(r, 0.0);
        let expect = (1.0 - (-2.0 * r).exp()) / 2.0;
        assert!((nc_depth_gaussian(&sq) - expect).abs() < 1e-12);
    }

    #[test]
    fn depth_is_mean_independent() {
        let sq = GaussianState::squeezed_vacuum(0.4, 0.3);
        let moved = sq.displace(0, C64::new(1.3, -0.6)).unwrap();
        assert!((nc_depth_gaussian(&sq) - nc_depth_gaussian(&moved)).abs() < 1e-15);
    }

    #[test]
    fn kappa_classical_closed_form_vs_bisection_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let g = random_state(&mut rng, 1);
            let closed = kappa_classical(&g);
            // oracle: bisection on t with predicate λ_min(tV) ≥ 1/2
            let classical_at = |t: f64| {
                let eigs = crate::linalg::symmetric_eig(&(g.cov() * t)).0;
                eigs[0] >= 0.5
            };
            let oracle = if classical_at(1.0) {
                1.0
            } else {
                let (mut lo, mut hi) = (1.0, 2.0);
                while !classical_at(hi) {
                    hi *= 2.0;
                }
                while hi - lo > 1e-9 {
                    let mid = 0.5 * (lo + hi);
                    if classical_at(mid) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                0.5 * (lo + hi)
            };
            assert!((closed - oracle).abs() < 1e-8, "{closed} vs {oracle}");
        }
    }

    #[test]
    fn kappa_anchors() {
        assert_eq!(kappa_classical(&GaussianState::vacuum(1)), 1.0);
        assert_eq!(kappa_classical(&GaussianState::thermal(0.4)), 1.0);
        let r = 0.5;
        let g = GaussianState::squeezed_vacuum(r, 0.0);
        assert!((kappa_classical(&g) - (2.0 * r).exp()).abs() < 1e-10);
    }

    #[test]
    fn tmsv_from_mixing_and_kappa_separable() {
        let r = 0.5;
        let tmsv = tmsv_cov(r);
        // covariance blocks: diag cosh(2r)/2, off-diag ±sinh(2r)/2
        let c2 = (2.0 * r).cosh() / 2.0;
        let s2 = (2.0 * r).sinh() / 2.0;
        assert!((tmsv.cov()[(0, 0)] - c2).abs() < 1e-12);
        assert!((tmsv.cov()[(0, 2)] - s2).abs() < 1e-12);
        assert!((tmsv.cov()[(1, 3)] + s2).abs() < 1e-12);
        // PT symplectic eigenvalue e^{−2r}/2 ⇒ κ_sep = e^{2r}
        let nu = symplectic_eigenvalues(&partial_transpose_two_mode(tmsv.cov()));
        assert!((nu[0] - (-2.0 * r).exp() / 2.0).abs() < 1e-10);
        let kappa = kappa_separable_two_mode(&tmsv).unwrap();
        assert!((kappa - (2.0 * r).exp()).abs() < 1e-7, "kappa {kappa}");
        // product of vacua and classical states are separable
        let vac2 = GaussianState::vacuum(2);
        assert_eq!(kappa_separable_two_mode(&vac2).unwrap(), 1.0);
        let th2 = GaussianState::thermal(0.2).tensor(&GaussianState::thermal(0.9));
        assert_eq!(kappa_separable_two_mode(&th2).unwrap(), 1.0);
    }

    #[test]
    fn bs_identity_at_zero() {
        assert!((bs_symplectic(0.0) - RMatrix::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn add_thermal_classicalizes_at_depth() {
        let r = 0.45;
        let g = GaussianState::squeezed_vacuum(r, 0.0);
        let depth = nc_depth_gaussian(&g);
        let out = g.add_thermal(depth).unwrap();
        assert!(nc_depth_gaussian(&out) < 1e-12);
    }

    #[test]
    fn depth_tensorization_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let a = random_state(&mut rng, 1);
            let b = random_state(&mut rng, 1);
            let joint = a.tensor(&b);
            let lhs = nc_depth_gaussian(&joint);
            let rhs = nc_depth_gaussian(&a).max(nc_depth_gaussian(&b));
            assert!((lhs - rhs).abs() < 1e-14);
        }
    }

    #[test]
    fn depth_invariant_under_passive_ops() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let g = random_state(&mut rng, 2);
            let theta = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
            let phi = rng.random::<f64>() * std::f64::consts::PI;
            let passive = bs4(theta) * embed_single(&rotation_symplectic(phi), 0, 2);
            let out = g
                .apply_symplectic(&passive)
                .displace(1, C64::new(0.3, -0.7))
                .unwrap();
            assert!((nc_depth_gaussian(&g) - nc_depth_gaussian(&out)).abs() < 1e-10);
        }
    }

    #[test]
    fn kappa_monotone_under_thermal_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for i in 0..200 {
            let modes = if i % 3 == 0 { 2 } else { 1 };
            let g = random_state(&mut rng, modes);
            let delta = rng.random::<f64>();
            let noisy = g.add_thermal(delta).unwrap();
            assert!(kappa_classical(&noisy) <= kappa_classical(&g) + 1e-8);
            if modes == 2 {
                let ks = kappa_separable_two_mode(&g).unwrap();
                let ks_noisy = kappa_separable_two_mode(&noisy).unwrap();
                assert!(ks_noisy <= ks + 1e-8);
            }
        }
    }

    #[test]
    fn heterodyne_on_tmsv_gives_coherent() {
        let tmsv = tmsv_cov(0.5);
        let cond = tmsv.condition_heterodyne(1, C64::new(0.4, -0.2)).unwrap();
        assert!((cond.cov() - RMatrix::identity(2, 2) * 0.5).norm() < 1e-12);
        assert!(nc_depth_gaussian(&cond) < 1e-12);
    }

    #[test]
    fn physicality_is_enforced() {
        let bad = RMatrix::identity(2, 2) * 0.1;
        assert!(matches!(
            GaussianState::new(RVector::zeros(2), bad),
            Err(Error::Unphysical { .. })
        ));
    }

    #[test]
    fn descriptor_round_trip() {
        let g = GaussianState::squeezed_vacuum(0.3, 0.2)
            .displace(0, C64::new(0.5, 0.1))
            .unwrap();
        let d = GaussianDescriptor::from_state(&g);
        let json = serde_json::to_string(&d).unwrap();
        let back: GaussianDescriptor = serde_json::from_str(&json).unwrap();
        let g2 = back.to_state().unwrap();
        assert!((g.cov() - g2.cov()).norm() < 1e-12);
        assert!((g.mean() - g2.mean()).norm() < 1e-12);
    }
}
