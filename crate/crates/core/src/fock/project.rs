//! Projective conditioning on single modes.

use super::state::{DensityOperator, FockVector};
use crate::linalg::{strides, total_dim};
use crate::{CMatrix, CVector, Error, Result, C64};

/// Weight below which the conditional state is undefined.
pub const ZERO_WEIGHT: f64 = 1e-14;

/// Result of a coherent-state projection on one mode.
///
/// Both normalization conventions are exposed: `povm_density` is the
/// measure density `⟨ξ|ρ|ξ⟩/π` used by POVM integrals over phase space,
/// `probability` is the projective outcome probability `⟨ξ|ρ|ξ⟩` used by
/// the protocols.
#[derive(Debug, Clone)]
pub struct CoherentProjection {
    pub povm_density: f64,
    pub probability: f64,
    pub conditional: Option<DensityOperator>,
}

/// Raw coherent amplitudes without tail validation; the projector onto the
/// truncated `|ξ⟩` only needs components inside the window.
pub(crate) fn coherent_amplitudes(alpha: C64, dim: usize) -> CVector {
    let mut amps = CVector::zeros(dim);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    amps[0] = c;
    for n in 1..dim {
        c *= alpha / C64::new((n as f64).sqrt(), 0.0);
        amps[n] = c;
    }
    amps
}

/// Project mode `mode` of `rho` onto the (unnormalized truncated) vector `v`,
/// returning the outcome weight `⟨v|ρ|v⟩` and the normalized conditional
/// state on the remaining modes.
pub fn project_vector(
    rho: &DensityOperator,
    mode: usize,
    v: &CVector,
) -> Result<(f64, Option<DensityOperator>)> {
    let modes = rho.modes();
    if mode >= modes {
        return Err(Error::BadMode { mode, modes });
    }
    if modes == 1 {
        return Err(Error::DimensionMismatch(
            "projection must leave at least one mode".into(),
        ));
    }
    let dims = rho.dims();
    let d = dims[mode];
    if v.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "projector length {} vs mode dim {d}",
            v.len()
        )));
    }
    let full_strides = strides(dims);
    let st = full_strides[mode];
    let kept: Vec<usize> = (0..modes).filter(|&m| m != mode).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&m| dims[m]).collect();
    let out_dim = total_dim(&kept_dims);
    let out_strides = strides(&kept_dims);
    let base_of = |out_idx: usize| -> usize {
        kept.iter()
            .enumerate()
            .map(|(pos, &m)| ((out_idx / out_strides[pos]) % kept_dims[pos]) * full_strides[m])
            .sum()
    };

    let mut out = CMatrix::zeros(out_dim, out_dim);
    for r in 0..out_dim {
        let rb = base_of(r);
        for cidx in 0..out_dim {
            let cb = base_of(cidx);
            let mut acc = C64::ZERO;
            for m in 0..d {
                let vm = v[m].conj();
                if vm == C64::ZERO {
                    continue;
                }
                for n in 0..d {
                    let vn = v[n];
                    if vn == C64::ZERO {
                        continue;
                    }
                    acc += vm * rho.matrix()[(rb + m * st, cb + n * st)] * vn;
                }
            }
            out[(r, cidx)] = acc;
        }
    }
    let weight = crate::linalg::trace(&out).re;
    if weight < ZERO_WEIGHT {
        return Ok((weight.max(0.0), None));
    }
    let normalized = out / C64::new(weight, 0.0);
    Ok((
        weight,
        Some(DensityOperator::from_trusted(normalized, kept_dims)),
    ))
}

/// Coherent projection `M_ξ` on one mode; see [`CoherentProjection`] for the
/// two normalization conventions.
pub fn project_coherent(rho: &DensityOperator, mode: usize, xi: C64) -> Result<CoherentProjection> {
    let d = rho.dims().get(mode).copied().ok_or(Error::BadMode {
        mode,
        modes: rho.modes(),
    })?;
    let v = coherent_amplitudes(xi, d);
    let (probability, conditional) = project_vector(rho, mode, &v)?;
    Ok(CoherentProjection {
        povm_density: probability / std::f64::consts::PI,
        probability,
        conditional,
    })
}

/// Fock projection `|n⟩⟨n|` on one mode.
pub fn project_fock(
    rho: &DensityOperator,
    mode: usize,
    n: usize,
) -> Result<(f64, Option<DensityOperator>)> {
    let d = rho.dims().get(mode).copied().ok_or(Error::BadMode {
        mode,
        modes: rho.modes(),
    })?;
    if n >= d {
        return Err(Error::DimensionMismatch(format!(
            "fock level {n} outside mode dim {d}"
        )));
    }
    let mut v = CVector::zeros(d);
    v[n] = C64::new(1.0, 0.0);
    project_vector(rho, mode, &v)
}

/// Project one mode of a pure state onto `v`, returning the probability and
/// the normalized conditional pure state.
pub fn project_vector_pure(
    psi: &FockVector,
    mode: usize,
    v: &CVector,
) -> Result<(f64, Option<FockVector>)> {
    let modes = psi.modes();
    if mode >= modes {
        return Err(Error::BadMode { mode, modes });
    }
    if modes == 1 {
        return Err(Error::DimensionMismatch(
            "projection must leave at least one mode".into(),
        ));
    }
    let dims = psi.dims();
    let d = dims[mode];
    let full_strides = strides(dims);
    let st = full_strides[mode];
    let kept: Vec<usize> = (0..modes).filter(|&m| m != mode).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&m| dims[m]).collect();
    let out_dim = total_dim(&kept_dims);
    let out_strides = strides(&kept_dims);

    let mut out = CVector::zeros(out_dim);
    for r in 0..out_dim {
        let base: usize = kept
            .iter()
            .enumerate()
            .map(|(pos, &m)| ((r / out_strides[pos]) % kept_dims[pos]) * full_strides[m])
            .sum();
        let mut acc = C64::ZERO;
        for m in 0..d {
            acc += v[m].conj() * psi.amplitudes()[base + m * st];
        }
        out[r] = acc;
    }
    let weight: f64 = out.iter().map(|a| a.norm_sqr()).sum();
    if weight < ZERO_WEIGHT {
        return Ok((weight, None));
    }
    let normalized = out / C64::new(weight.sqrt(), 0.0);
    Ok((
        weight,
        Some(FockVector::with_eps(normalized, kept_dims, 1e-9)?),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::build::{make_coherent, make_fock, make_lossy_photon_dim};
    use crate::fock::unitary::beam_splitter;

    #[test]
    fn vacuum_projection_on_product_vacuum() {
        let vac = make_fock(0, 3).unwrap();
        let rho = vac.tensor(&vac).to_density();
        let p = project_coherent(&rho, 1, C64::ZERO).unwrap();
        assert!((p.probability - 1.0).abs() < 1e-12);
        assert!((p.povm_density - 1.0 / std::f64::consts::PI).abs() < 1e-12);
        let cond = p.conditional.unwrap();
        assert!((cond.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lossy_pair_concentration_closed_form() {
        // ρ_loss ⊗ ρ_loss → 50:50 splitter → vacuum projection on mode 2:
        // P = 1 − q + q²/2,
        // σ_out = ((1−q)²|0⟩⟨0| + q(1−q)|1⟩⟨1| + (q²/2)|2⟩⟨2|)/P.
        let q = 0.8;
        let dim = 6;
        let rho = make_lossy_photon_dim(q, dim).unwrap();
        let pair = rho.tensor(&rho);
        let u = beam_splitter(std::f64::consts::FRAC_PI_4, dim, dim).unwrap();
        let mixed = pair.conjugate(&u).unwrap();
        let (p, cond) = project_fock(&mixed, 1, 0).unwrap();
        let p_expect = 1.0 - q + q * q / 2.0;
        assert!((p - p_expect).abs() < 1e-10);
        let cond = cond.unwrap();
        let w = [
            (1.0 - q) * (1.0 - q) / p_expect,
            q * (1.0 - q) / p_expect,
            q * q / 2.0 / p_expect,
        ];
        for (n, e) in w.iter().enumerate() {
            assert!((cond.matrix()[(n, n)].re - e).abs() < 1e-10, "n={n}");
        }
        // off-diagonals vanish
        assert!(cond.matrix()[(0, 1)].norm() < 1e-12);
        assert!(cond.matrix()[(0, 2)].norm() < 1e-12);
    }

    #[test]
    fn zero_weight_yields_no_conditional() {
        // project mode 2 of |0,1⟩ onto |0⟩: orthogonal outcome
        let psi = make_fock(0, 3).unwrap().tensor(&make_fock(1, 3).unwrap());
        let (w, cond) = project_fock(&psi.to_density(), 1, 0).unwrap();
        assert!(w < ZERO_WEIGHT);
        assert!(cond.is_none());
    }

    #[test]
    fn pure_projection_matches_density_projection() {
        let a = make_coherent(C64::new(0.5, 0.2), 8).unwrap();
        let b = make_coherent(C64::new(-0.3, 0.1), 8).unwrap();
        let psi = a.tensor(&b);
        let v = coherent_amplitudes(C64::new(0.1, -0.2), 8);
        let (wp, condp) = project_vector_pure(&psi, 1, &v).unwrap();
        let (wd, condd) = project_vector(&psi.to_density(), 1, &v).unwrap();
        // to_density renormalizes the truncation tail away, hence 1e-8
        assert!((wp - wd).abs() < 1e-8);
        let condp = condp.unwrap().to_density();
        assert!((condp.matrix() - condd.unwrap().matrix()).norm() < 1e-9);
    }
}
