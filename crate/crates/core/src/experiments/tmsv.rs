//! Two-mode squeezed vacuum conditioning: classical measurements cannot
//! concentrate nonclassicality out of a TMSV, photon counting can —
//! bounded by the success-probability bound.

use super::record::RunMeta;
use crate::fock::{make_tmsv, project_coherent, project_fock};
use crate::gaussian::{bs_symplectic, nc_depth_gaussian, GaussianState};
use crate::measures::{metrological_power, nc_depth, GridSpec};
use crate::{Error, Result, C64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TmsvConfig {
    pub r: f64,
    /// Per-mode Fock truncation; 0 picks a tail-driven choice.
    pub dim: usize,
    /// Heterodyne outcome for the coherent-projection arm.
    pub xi: [f64; 2],
    pub grid_points: usize,
    pub depth_tol: f64,
}

impl Default for TmsvConfig {
    fn default() -> Self {
        Self {
            r: 0.5,
            dim: 0,
            xi: [0.3, -0.2],
            grid_points: 41,
            depth_tol: 1e-2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TmsvRecord {
    pub r: f64,
    pub dim: usize,
    /// Single-mode squeezing depth (1 − e^{−2r})/2: the no-go budget.
    pub squeezing_depth: f64,
    /// Covariance-level conditional depth after heterodyne (exact 0).
    pub gaussian_conditional_depth: f64,
    /// Fock-level heterodyne conditional depth bracket.
    pub het_cond_lower: f64,
    pub het_cond_upper: f64,
    pub het_within_budget: bool,
    /// Fock |1⟩ projection arm.
    pub fock1_prob: f64,
    pub fock1_cond_lower: f64,
    pub fock1_cond_upper: f64,
    pub fock1_f1: f64,
    /// p · F₁(conditional) vs F₁(TMSV): the success-probability bound.
    pub p_f1: f64,
    pub f1_tmsv: f64,
    pub bound_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TmsvReport {
    pub meta: RunMeta,
    pub config: TmsvConfig,
    pub record: TmsvRecord,
}

pub fn tmsv_conditioning(config: &TmsvConfig, seed: u64) -> Result<TmsvReport> {
    if config.r > 1.5 {
        return Err(Error::OutOfRange {
            name: "r",
            value: config.r,
            range: "r ≤ 1.5 (truncation budget)",
        });
    }
    let meta = RunMeta::new("tmsv_conditioning", seed, config);
    let r = config.r;
    let dim = if config.dim == 0 {
        // tail (tanh r)^{2d} below 1e-9
        let t = r.tanh().max(1e-6);
        ((-9.0 * std::f64::consts::LN_10 / (2.0 * t.ln())).ceil() as usize).clamp(8, 40)
    } else {
        config.dim
    };
    let xi = C64::new(config.xi[0], config.xi[1]);
    let grid = GridSpec {
        points_per_axis: config.grid_points,
        ..GridSpec::default()
    };
    let squeezing_depth = (1.0 - (-2.0 * r).exp()) / 2.0;

    // Gaussian level: TMSV from mixing x- and p-squeezed vacua; heterodyne
    // conditioning collapses it to a coherent state.
    let tmsv_g = GaussianState::squeezed_vacuum(r, 0.0)
        .tensor(&GaussianState::squeezed_vacuum(
            r,
            std::f64::consts::FRAC_PI_2,
        ))
        .apply_symplectic(&bs_symplectic(std::f64::consts::FRAC_PI_4));
    let cond_g = tmsv_g.condition_heterodyne(1, xi)?;
    let gaussian_conditional_depth = nc_depth_gaussian(&cond_g);

    // Fock level
    let tmsv = make_tmsv(r, dim)?;
    let rho = tmsv.to_density();
    let f1_tmsv = metrological_power(&rho)?;

    let het = project_coherent(&rho, 1, xi)?;
    let het_cond = het.conditional.ok_or(Error::ZeroWeight {
        weight: het.probability,
    })?;
    let het_est = nc_depth(&het_cond, &grid, config.depth_tol)?;

    let (p1, fock1_cond) = project_fock(&rho, 1, 1)?;
    // at r = 0 the |1⟩ outcome never occurs; record a trivial arm
    let (fock1_est, fock1_f1) = match fock1_cond {
        Some(cond) => (
            nc_depth(&cond, &grid, config.depth_tol)?,
            metrological_power(&cond)?,
        ),
        None => (
            crate::measures::DepthEstimate {
                lower: 0.0,
                upper: 0.0,
                grid,
                extents: vec![],
            },
            0.0,
        ),
    };

    Ok(TmsvReport {
        meta,
        config: config.clone(),
        record: TmsvRecord {
            r,
            dim,
            squeezing_depth,
            gaussian_conditional_depth,
            het_cond_lower: het_est.lower,
            het_cond_upper: het_est.upper,
            het_within_budget: het_est.lower <= squeezing_depth + 1e-9,
            fock1_prob: p1,
            fock1_cond_lower: fock1_est.lower,
            fock1_cond_upper: fock1_est.upper,
            fock1_f1,
            p_f1: p1 * fock1_f1,
            f1_tmsv,
            bound_ok: p1 * fock1_f1 <= f1_tmsv + 1e-6,
        },
    })
}
