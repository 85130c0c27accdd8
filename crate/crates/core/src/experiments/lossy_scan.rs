//! Lossy single-photon concentration scan: a pair of lossy photons through
//! a 50:50 splitter with vacuum postselection, measuring where the
//! metrological power concentrates while the nonclassicality depth never
//! does, and locating the concentration threshold q*.

use super::record::RunMeta;
use crate::fock::{beam_splitter, make_lossy_photon_dim, project_fock, DensityOperator};
use crate::measures::{metrological_power, nc_depth, GridSpec};
use crate::{CMatrix, Error, Result, C64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LossyScanConfig {
    pub q_min: f64,
    pub q_max: f64,
    pub steps: usize,
    /// Per-mode truncation for the two-mode interference stage.
    pub dim: usize,
    /// Bisection width for the depth brackets.
    pub depth_tol: f64,
    pub grid_points: usize,
    /// Tolerance for locating q*.
    pub threshold_tol: f64,
}

impl Default for LossyScanConfig {
    fn default() -> Self {
        Self {
            q_min: 0.0,
            q_max: 1.0,
            steps: 101,
            dim: 8,
            depth_tol: 5e-3,
            grid_points: 61,
            threshold_tol: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LossyScanRecord {
    pub q: f64,
    /// Vacuum-outcome probability; closed form 1 − q + q²/2.
    pub p_succ: f64,
    pub f1_in: f64,
    pub f1_out: f64,
    pub p_f1_out: f64,
    pub tau_in_lower: f64,
    pub tau_in_upper: f64,
    pub tau_out_lower: f64,
    pub tau_out_upper: f64,
    /// Max deviation of the simulated conditional state from the closed form.
    pub sigma_dev: f64,
    /// Concentration bound P·F₁(σ_out) ≤ F₁(ρ_loss) within 1e-6.
    pub bound_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LossyScanReport {
    pub meta: RunMeta,
    pub config: LossyScanConfig,
    pub records: Vec<LossyScanRecord>,
    /// Concentration threshold: F₁(σ_out) = F₁(ρ_loss), located by bisection.
    pub q_star: f64,
}

/// One protocol evaluation at fixed q.
struct ProtocolOutcome {
    p_succ: f64,
    conditional: DensityOperator,
    sigma_dev: f64,
}

fn run_protocol(q: f64, dim: usize, u: &CMatrix) -> Result<ProtocolOutcome> {
    let rho = make_lossy_photon_dim(q, dim)?;
    let mixed = rho.tensor(&rho).conjugate(u)?;
    let (p_succ, conditional) = project_fock(&mixed, 1, 0)?;
    let conditional = conditional.ok_or(Error::ZeroWeight { weight: p_succ })?;
    // closed form: σ_out ∝ (1−q)²|0⟩⟨0| + q(1−q)|1⟩⟨1| + (q²/2)|2⟩⟨2|
    let p_expect = 1.0 - q + q * q / 2.0;
    let weights = [
        (1.0 - q) * (1.0 - q) / p_expect,
        q * (1.0 - q) / p_expect,
        q * q / 2.0 / p_expect,
    ];
    let mut dev: f64 = (p_succ - p_expect).abs();
    for i in 0..conditional.total_dim() {
        for j in 0..conditional.total_dim() {
            let expect = if i == j && i < 3 {
                C64::new(weights[i], 0.0)
            } else {
                C64::ZERO
            };
            dev = dev.max((conditional.matrix()[(i, j)] - expect).norm());
        }
    }
    Ok(ProtocolOutcome {
        p_succ,
        conditional,
        sigma_dev: dev,
    })
}

pub fn lossy_concentration_scan(config: &LossyScanConfig, seed: u64) -> Result<LossyScanReport> {
    if config.dim < 6 {
        return Err(Error::DimensionMismatch(
            "concentration scan needs dim ≥ 6".into(),
        ));
    }
    let meta = RunMeta::new("lossy_concentration_scan", seed, config);
    let u = beam_splitter(std::f64::consts::FRAC_PI_4, config.dim, config.dim)?;
    let grid = GridSpec {
        points_per_axis: config.grid_points,
        ..GridSpec::default()
    };

    let qs: Vec<f64> = (0..config.steps)
        .map(|i| {
            config.q_min
                + (config.q_max - config.q_min) * i as f64 / (config.steps.max(2) as f64 - 1.0)
        })
        .collect();

    let records: Vec<LossyScanRecord> = qs
        .par_iter()
        .map(|&q| -> Result<LossyScanRecord> {
            let rho_in = make_lossy_photon_dim(q, config.dim)?;
            let outcome = run_protocol(q, config.dim, &u)?;
            let f1_in = metrological_power(&rho_in)?;
            let f1_out = metrological_power(&outcome.conditional)?;
            let tau_in = nc_depth(&rho_in, &grid, config.depth_tol)?;
            let tau_out = nc_depth(&outcome.conditional, &grid, config.depth_tol)?;
            let p_f1_out = outcome.p_succ * f1_out;
            Ok(LossyScanRecord {
                q,
                p_succ: outcome.p_succ,
                f1_in,
                f1_out,
                p_f1_out,
                tau_in_lower: tau_in.lower,
                tau_in_upper: tau_in.upper,
                tau_out_lower: tau_out.lower,
                tau_out_upper: tau_out.upper,
                sigma_dev: outcome.sigma_dev,
                bound_ok: p_f1_out <= f1_in + 1e-6,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    // q*: root of F₁(σ_out) − F₁(ρ_loss) in (1/2, 1), bisected on the
    // smooth difference.
    let diff = |q: f64| -> Result<f64> {
        let rho_in = make_lossy_photon_dim(q, config.dim)?;
        let outcome = run_protocol(q, config.dim, &u)?;
        Ok(metrological_power(&outcome.conditional)? - metrological_power(&rho_in)?)
    };
    let mut lo = 0.55f64;
    let mut hi = 0.95f64;
    if diff(lo)? >= 0.0 || diff(hi)? <= 0.0 {
        return Err(Error::Unsupported(
            "q* bracket [0.55, 0.95] does not straddle the threshold".into(),
        ));
    }
    while hi - lo > config.threshold_tol {
        let mid = 0.5 * (lo + hi);
        if diff(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    Ok(LossyScanReport {
        meta,
        config: config.clone(),
        records,
        q_star: 0.5 * (lo + hi),
    })
}
