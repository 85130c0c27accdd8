//! Constructors for the standard states used across the experiments.

use super::state::{DensityOperator, FockVector, DEFAULT_TRUNC_EPS};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Truncation dimension that keeps the tail of a coherent-like state with
/// amplitude `alpha` below ~1e-8: `⌈|α|² + 6|α| + 10⌉`.
pub fn recommended_dim(alpha: C64) -> usize {
    let a = alpha.norm();
    (a * a + 6.0 * a + 10.0).ceil() as usize
}

/// Coherent state `|α⟩` with amplitudes `c_n = e^{−|α|²/2} αⁿ/√n!`.
///
/// The raw analytic amplitudes are kept (no renormalization); the missing
/// tail mass must stay below `eps`.
pub fn make_coherent_eps(alpha: C64, dim: usize, eps: f64) -> Result<FockVector> {
    if dim < 2 {
        return Err(Error::DimensionMismatch(
            "coherent state needs dim ≥ 2".into(),
        ));
    }
    let mut amps = CVector::zeros(dim);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps[0] = c;
    for n in 1..dim {
        c *= alpha / C64::new((n as f64).sqrt(), 0.0);
        amps[n] = c;
    }
    let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let tail = 1.0 - norm2;
    if tail > eps {
        return Err(Error::Truncation {
            context: format!("coherent state |α|={:.4}, dim={dim}", alpha.norm()),
            tail,
            limit: eps,
        });
    }
    FockVector::with_eps(amps, vec![dim], eps)
}

/// As [`make_coherent_eps`] with the default tail tolerance 1e-8.
pub fn make_coherent(alpha: C64, dim: usize) -> Result<FockVector> {
    make_coherent_eps(alpha, dim, DEFAULT_TRUNC_EPS)
}

/// Even cat state `∝ |α⟩ + |−α⟩`, numerically normalized.
/// Odd Fock amplitudes cancel exactly.
pub fn make_cat(alpha: C64, dim: usize) -> Result<FockVector> {
    let plus = make_coherent(alpha, dim)?;
    let minus = make_coherent(-alpha, dim)?;
    let amps = plus.amplitudes() + minus.amplitudes();
    let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if norm2 < 1e-300 {
        return Err(Error::ZeroWeight { weight: norm2 });
    }
    let amps = amps / C64::new(norm2.sqrt(), 0.0);
    FockVector::with_eps(amps, vec![dim], 1e-12)
}

/// Fock basis state `|n⟩`.
pub fn make_fock(n: usize, dim: usize) -> Result<FockVector> {
    if n >= dim {
        return Err(Error::DimensionMismatch(format!(
            "fock level {n} does not fit in dim {dim}"
        )));
    }
    let mut amps = CVector::zeros(dim);
    amps[n] = C64::new(1.0, 0.0);
    FockVector::new(amps, vec![dim])
}

/// Lossy single-photon state `(1−q)|0⟩⟨0| + q|1⟩⟨1|` on `dim` levels.
///
/// The QFI needs one level of headroom above the support, hence `dim ≥ 3`.
pub fn make_lossy_photon_dim(q: f64, dim: usize) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::OutOfRange {
            name: "q",
            value: q,
            range: "[0, 1]",
        });
    }
    if dim < 3 {
        return Err(Error::DimensionMismatch(
            "lossy photon state needs dim ≥ 3".into(),
        ));
    }
    let mut m = CMatrix::zeros(dim, dim);
    m[(0, 0)] = C64::new(1.0 - q, 0.0);
    m[(1, 1)] = C64::new(q, 0.0);
    DensityOperator::new(m, vec![dim])
}

/// As [`make_lossy_photon_dim`] with the minimal dimension 3.
pub fn make_lossy_photon(q: f64) -> Result<DensityOperator> {
    make_lossy_photon_dim(q, 3)
}

/// Squeezed vacuum `S(ξ)|0⟩`, `ξ = r e^{iφ}`, with even amplitudes
/// `c_{2k} = (sech r)^{1/2} (−e^{iφ} tanh r)^k √(2k)!/(2^k k!)`.
pub fn make_squeezed(r: f64, phi: f64, dim: usize) -> Result<FockVector> {
    if r < 0.0 {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            range: "r ≥ 0",
        });
    }
    let mut amps = CVector::zeros(dim);
    let mut c = C64::new((1.0 / r.cosh()).sqrt(), 0.0);
    amps[0] = c;
    let factor = -C64::from_polar(r.tanh(), phi);
    let mut k = 1usize;
    while 2 * k < dim {
        let n = 2 * k;
        // c_{2k}/c_{2(k−1)} = (−e^{iφ} tanh r)·√((n−1)/n)·... computed via
        // √((2k)!)/(2^k k!) ratio = √((2k)(2k−1))/(2k).
        c *= factor * C64::new(((n * (n - 1)) as f64).sqrt() / n as f64, 0.0);
        amps[n] = c;
        k += 1;
    }
    let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let tail = 1.0 - norm2;
    if tail > DEFAULT_TRUNC_EPS {
        return Err(Error::Truncation {
            context: format!("squeezed vacuum r={r}, dim={dim}"),
            tail,
            limit: DEFAULT_TRUNC_EPS,
        });
    }
    FockVector::new(amps, vec![dim])
}

/// Two-mode squeezed vacuum `Σ tanhⁿr |n,n⟩ / cosh r`.
pub fn make_tmsv(r: f64, dim_per_mode: usize) -> Result<FockVector> {
    if r < 0.0 {
        return Err(Error::OutOfRange {
            name: "r",
            value: r,
            range: "r ≥ 0",
        });
    }
    let d = dim_per_mode;
    let mut amps = CVector::zeros(d * d);
    let mut c = 1.0 / r.cosh();
    for n in 0..d {
        amps[n * d + n] = C64::new(c, 0.0);
        c *= r.tanh();
    }
    let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let tail = 1.0 - norm2;
    if tail > DEFAULT_TRUNC_EPS {
        return Err(Error::Truncation {
            context: format!("two-mode squeezed vacuum r={r}, dim={d}"),
            tail,
            limit: DEFAULT_TRUNC_EPS,
        });
    }
    FockVector::new(amps, vec![d, d])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_exact() {
        let v = make_coherent(C64::ZERO, 4).unwrap();
        assert_eq!(v.amplitudes()[0], C64::new(1.0, 0.0));
        for n in 1..4 {
            assert_eq!(v.amplitudes()[n], C64::ZERO);
        }
    }

    #[test]
    fn coherent_amplitudes_match_closed_form() {
        // α = 1: c_n = e^{−1/2}/√n!
        let v = make_coherent(C64::new(1.0, 0.0), 20).unwrap();
        let mut fact = 1.0f64;
        for n in 0..20 {
            if n > 0 {
                fact *= n as f64;
            }
            let expect = (-0.5f64).exp() / fact.sqrt();
            assert!((v.amplitudes()[n].re - expect).abs() < 1e-14, "n={n}");
            assert!(v.amplitudes()[n].im.abs() < 1e-300);
        }
    }

    #[test]
    fn coherent_overlap_formula() {
        // ⟨α|β⟩ = e^{−(|α|²+|β|²)/2 + ᾱβ}; for α=1, β=−1 this is e^{−2}.
        let a = make_coherent(C64::new(1.0, 0.0), 25).unwrap();
        let b = make_coherent(C64::new(-1.0, 0.0), 25).unwrap();
        let overlap = a.inner(&b);
        assert!((overlap.re - (-2.0f64).exp()).abs() < 1e-9);
        assert!(overlap.im.abs() < 1e-12);
    }

    #[test]
    fn coherent_dim_too_small_errors() {
        assert!(matches!(
            make_coherent(C64::new(3.0, 0.0), 6),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn cat_limits_to_vacuum() {
        let v = make_cat(C64::new(1e-8, 0.0), 6).unwrap();
        assert!((v.amplitudes()[0].re - 1.0).abs() < 1e-8);
    }

    #[test]
    fn cat_has_even_support_only() {
        let v = make_cat(C64::new(2.0, 0.0), 40).unwrap();
        for n in (1..40).step_by(2) {
            assert_eq!(
                v.amplitudes()[n],
                C64::ZERO,
                "odd n={n} must vanish exactly"
            );
        }
        assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cat_mean_photon_is_alpha_sq_tanh() {
        // ⟨n̂⟩ = α² tanh(α²) for the even cat.
        let alpha = 2.0f64;
        let v = make_cat(C64::new(alpha, 0.0), 40).unwrap();
        let expect = alpha * alpha * (alpha * alpha).tanh();
        assert!((v.mean_photon(0) - expect).abs() < 1e-9);
    }

    #[test]
    fn lossy_photon_matrix() {
        let r = make_lossy_photon(0.8).unwrap();
        assert!((r.matrix()[(0, 0)].re - 0.2).abs() < 1e-15);
        assert!((r.matrix()[(1, 1)].re - 0.8).abs() < 1e-15);
        assert_eq!(r.matrix()[(2, 2)], C64::ZERO);
        assert!(make_lossy_photon(-0.1).is_err());
        assert!(make_lossy_photon(1.1).is_err());
    }

    #[test]
    fn squeezed_vacuum_photon_number() {
        // ⟨n̂⟩ = sinh²r.
        let r = 0.5f64;
        let v = make_squeezed(r, 0.0, 30).unwrap();
        assert!((v.mean_photon(0) - r.sinh().powi(2)).abs() < 1e-8);
        // odd levels empty
        assert_eq!(v.amplitudes()[1], C64::ZERO);
        assert_eq!(v.amplitudes()[3], C64::ZERO);
    }

    #[test]
    fn tmsv_schmidt_spectrum() {
        let r = 0.5f64;
        let v = make_tmsv(r, 16).unwrap();
        // reduced state thermal with n̄ = sinh²r
        let reduced = v.to_density().partial_trace(&[0]).unwrap();
        let nbar = r.sinh().powi(2);
        for n in 0..6 {
            let expect = nbar.powi(n as i32) / (nbar + 1.0).powi(n as i32 + 1);
            assert!((reduced.matrix()[(n, n)].re - expect).abs() < 1e-8, "n={n}");
        }
    }
}
