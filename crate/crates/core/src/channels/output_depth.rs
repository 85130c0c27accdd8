//! Channel-output nonclassicality depth τ̃_m(Φ) = max_ρ τ_m(Φ(ρ)) over a
//! disclosed input family. The result is a lower bound on the true
//! supremum; the family is part of the report.

use crate::fock::{make_fock, DensityOperator, FockVector};
use crate::measures::{nc_depth, DepthEstimate, GridSpec};
use crate::{CVector, Result, C64};
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct CandidateDepth {
    pub name: String,
    pub estimate: DepthEstimate,
}

/// τ̃ estimate: per-candidate brackets plus the family-wide envelope
/// `[max lower, max upper]` (the bracket of the family maximum).
#[derive(Debug, Clone)]
pub struct ChannelDepthReport {
    pub per_candidate: Vec<CandidateDepth>,
    pub lower: f64,
    pub upper: f64,
    pub best_candidate: String,
}

/// Maximize `τ_m(Φ(ρ))` over the family. `channel` is any state map
/// (a Kraus channel's `apply`, or a composition closure).
pub fn output_nc_depth<F>(
    channel: F,
    family: &[(String, DensityOperator)],
    grid: &GridSpec,
    tol: f64,
) -> Result<ChannelDepthReport>
where
    F: Fn(&DensityOperator) -> Result<DensityOperator> + Sync,
{
    if family.is_empty() {
        return Err(crate::Error::DimensionMismatch(
            "input family must be non-empty".into(),
        ));
    }
    let per_candidate: Vec<CandidateDepth> = family
        .par_iter()
        .map(|(name, rho)| -> Result<CandidateDepth> {
            let out = channel(rho)?;
            let estimate = nc_depth(&out, grid, tol)?;
            Ok(CandidateDepth {
                name: name.clone(),
                estimate,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut lower = 0.0f64;
    let mut upper = 0.0f64;
    let mut best = per_candidate[0].name.clone();
    for c in &per_candidate {
        if c.estimate.lower > lower {
            lower = c.estimate.lower;
            best = c.name.clone();
        }
        upper = upper.max(c.estimate.upper);
    }
    Ok(ChannelDepthReport {
        per_candidate,
        lower,
        upper,
        best_candidate: best,
    })
}

/// Single-mode pure-state family: Fock states up to `photon_cutoff` and the
/// balanced two-level superpositions. All entries have exact finite support.
pub fn single_mode_family(
    dim: usize,
    photon_cutoff: usize,
) -> Result<Vec<(String, DensityOperator)>> {
    let cutoff = photon_cutoff.min(dim - 1);
    let mut family = Vec::new();
    for n in 0..=cutoff {
        family.push((format!("fock_{n}"), make_fock(n, dim)?.to_density()));
    }
    for n in 1..=cutoff {
        let mut v = CVector::zeros(dim);
        v[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        v[n] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        family.push((
            format!("plus_0_{n}"),
            FockVector::new(v, vec![dim])?.to_density(),
        ));
    }
    Ok(family)
}

/// Two-mode candidates for joint channels: Fock products and the canonical
/// entangled superpositions.
pub fn two_mode_family(dim: usize) -> Result<Vec<(String, DensityOperator)>> {
    let f = |n: usize| make_fock(n, dim);
    let mut family: Vec<(String, DensityOperator)> = vec![
        ("fock_1x1".into(), f(1)?.tensor(&f(1)?).to_density()),
        ("fock_1x0".into(), f(1)?.tensor(&f(0)?).to_density()),
        ("fock_0x1".into(), f(0)?.tensor(&f(1)?).to_density()),
    ];
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut bell01 = CVector::zeros(dim * dim);
    bell01[1] = s; // |0,1⟩
    bell01[dim] = s; // |1,0⟩
    family.push((
        "bell_01_10".into(),
        FockVector::new(bell01, vec![dim, dim])?.to_density(),
    ));
    let mut bell00 = CVector::zeros(dim * dim);
    bell00[0] = s; // |0,0⟩
    bell00[dim + 1] = s; // |1,1⟩
    family.push((
        "bell_00_11".into(),
        FockVector::new(bell00, vec![dim, dim])?.to_density(),
    ));
    Ok(family)
}
