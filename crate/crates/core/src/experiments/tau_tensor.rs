//! Tensorization of channel-output nonclassicality depth for loss-channel
//! pairs: τ̃_m(loss_{t₁} ⊗ loss_{t₂}) = max{t₁, t₂}.

use super::record::RunMeta;
use crate::channels::{output_nc_depth, single_mode_family, two_mode_family, ChannelDepthReport};
use crate::fock::KrausChannel;
use crate::measures::GridSpec;
use crate::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TauTensorConfig {
    pub t1: f64,
    pub t2: f64,
    /// Per-mode truncation (outputs have photon number ≤ inputs).
    pub dim: usize,
    pub grid_points: usize,
    pub depth_tol: f64,
}

impl Default for TauTensorConfig {
    fn default() -> Self {
        Self {
            t1: 0.8,
            t2: 0.3,
            dim: 4,
            grid_points: 41,
            depth_tol: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TauTensorRecord {
    pub t1: f64,
    pub t2: f64,
    pub single1_lower: f64,
    pub single1_upper: f64,
    pub single2_lower: f64,
    pub single2_upper: f64,
    pub joint_lower: f64,
    pub joint_upper: f64,
    pub joint_best_candidate: String,
    /// Joint bracket overlaps the max of the single brackets.
    pub tensorization_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TauTensorReport {
    pub meta: RunMeta,
    pub config: TauTensorConfig,
    pub record: TauTensorRecord,
}

fn single_depth(t: f64, dim: usize, grid: &GridSpec, tol: f64) -> Result<ChannelDepthReport> {
    let chan = KrausChannel::loss(t, dim)?;
    let family = single_mode_family(dim, 1)?;
    output_nc_depth(|rho| chan.apply(rho), &family, grid, tol)
}

pub fn tau_channel_tensorization(config: &TauTensorConfig, seed: u64) -> Result<TauTensorReport> {
    let meta = RunMeta::new("tau_channel_tensorization", seed, config);
    let grid = GridSpec {
        points_per_axis: config.grid_points,
        ..GridSpec::default()
    };

    let s1 = single_depth(config.t1, config.dim, &grid, config.depth_tol)?;
    let s2 = single_depth(config.t2, config.dim, &grid, config.depth_tol)?;

    let chan1 = KrausChannel::loss(config.t1, config.dim)?;
    let chan2 = KrausChannel::loss(config.t2, config.dim)?;
    let joint_chan = chan1.tensor(&chan2);
    let family = two_mode_family(config.dim)?;
    let joint = output_nc_depth(
        |rho| joint_chan.apply(rho),
        &family,
        &grid,
        config.depth_tol,
    )?;

    let max_lower = s1.lower.max(s2.lower);
    let max_upper = s1.upper.max(s2.upper);
    let tensorization_ok = joint.upper >= max_lower - 1e-9 && joint.lower <= max_upper + 1e-9;

    Ok(TauTensorReport {
        meta,
        config: config.clone(),
        record: TauTensorRecord {
            t1: config.t1,
            t2: config.t2,
            single1_lower: s1.lower,
            single1_upper: s1.upper,
            single2_lower: s2.lower,
            single2_upper: s2.upper,
            joint_lower: joint.lower,
            joint_upper: joint.upper,
            joint_best_candidate: joint.best_candidate,
            tensorization_ok,
        },
    })
}
