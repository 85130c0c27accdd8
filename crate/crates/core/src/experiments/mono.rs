//! Randomized monotonicity suites: τ_m and F₁ under the free-operation
//! menu on Fock states, κ measures under deterministic Gaussian free
//! operations. Any violation is reported with its reproducing (seed, trial).
//!
//! The Fock ensemble uses exact-support random states (Ginibre), for which
//! grid negativity detection measures the state itself rather than a
//! truncation proxy; displacements are applied through the closed-form
//! displacement matrix on a padded window so the operation matches the
//! ideal one to ~1e-12.

use super::record::RunMeta;
use super::rng::{random_density, random_gaussian_state, rng_for};
use crate::fock::{
    beam_splitter, displacement_matrix_exact, phase_shift, project_coherent, DensityOperator,
};
use crate::gaussian::{
    bs_symplectic, kappa_classical, kappa_separable_two_mode, rotation_symplectic,
    squeeze_symplectic,
};
use crate::measures::{metrological_power, nc_depth, DepthEstimate, GridSpec};
use crate::{CMatrix, RMatrix, Result, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonoConfig {
    pub trials: usize,
    pub depth_tol: f64,
    pub grid_points_single: usize,
    pub grid_points_two: usize,
    /// Slack for bracket-aware comparisons.
    pub slack: f64,
}

impl Default for MonoConfig {
    fn default() -> Self {
        Self {
            trials: 500,
            depth_tol: 2e-2,
            grid_points_single: 41,
            grid_points_two: 31,
            slack: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MonoViolation {
    pub trial: usize,
    pub domain: String,
    pub op: String,
    pub before: f64,
    pub after: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonoReport {
    pub meta: RunMeta,
    pub config: MonoConfig,
    pub fock_tau_trials: usize,
    pub fock_f1_trials: usize,
    pub gaussian_trials: usize,
    pub violations: Vec<MonoViolation>,
    pub pass: bool,
}

/// Pad a single-mode state into a larger window (zero-filled top levels).
fn pad_single_mode(rho: &DensityOperator, dim: usize) -> DensityOperator {
    let old = rho.total_dim();
    let mut m = CMatrix::zeros(dim, dim);
    m.view_mut((0, 0), (old, old)).copy_from(rho.matrix());
    DensityOperator::new(m, vec![dim]).expect("padding preserves validity")
}

/// Exact displacement on a padded window, renormalized for the ~1e-16
/// amplitude lost past the cutoff.
fn displace_exact(rho: &DensityOperator, gamma: C64, dim: usize) -> DensityOperator {
    let padded = pad_single_mode(rho, dim);
    let d = displacement_matrix_exact(gamma, dim);
    let mut out = &d * padded.matrix() * d.adjoint();
    let tr = crate::linalg::trace(&out).re;
    out /= C64::new(tr, 0.0);
    DensityOperator::new(out, vec![dim]).expect("displacement preserves validity")
}

struct TauCheck {
    op: String,
    before: DepthEstimate,
    after: DepthEstimate,
}

fn fock_tau_trial(rng: &mut ChaCha8Rng, config: &MonoConfig) -> Result<TauCheck> {
    let grid1 = GridSpec::with_points(config.grid_points_single);
    let grid2 = GridSpec::with_points(config.grid_points_two);
    let tol = config.depth_tol;
    let op_kind = rng.random_range(0..5u8);
    match op_kind {
        0 => {
            // single-mode passive: phase shift
            let rho = random_density(rng, &[5]);
            let u = phase_shift(rng.random::<f64>() * std::f64::consts::PI, 5);
            let out = rho.conjugate(&u)?;
            Ok(TauCheck {
                op: "phase_shift".into(),
                before: nc_depth(&rho, &grid1, tol)?,
                after: nc_depth(&out, &grid1, tol)?,
            })
        }
        1 => {
            // two-mode passive: beam splitter plus phases. The random state
            // is embedded in a window whose photon-number sectors are
            // complete over its support, so the truncated splitter acts as
            // the physical one.
            let rho = pad_two_mode(&random_density(rng, &[3, 3]), 6);
            let theta = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
            let u = beam_splitter(theta, 6, 6)?
                * phase_shift(rng.random::<f64>(), 6)
                    .kronecker(&phase_shift(rng.random::<f64>(), 6));
            let out = rho.conjugate(&u)?;
            Ok(TauCheck {
                op: "beam_splitter".into(),
                before: nc_depth(&rho, &grid2, tol)?,
                after: nc_depth(&out, &grid2, tol)?,
            })
        }
        2 => {
            // displacement (exact matrix on padded window)
            let rho = random_density(rng, &[4]);
            let gamma = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * 0.6;
            let padded = pad_single_mode(&rho, 14);
            let out = displace_exact(&rho, gamma, 14);
            Ok(TauCheck {
                op: "displacement".into(),
                before: nc_depth(&padded, &grid1, tol)?,
                after: nc_depth(&out, &grid1, tol)?,
            })
        }
        3 => {
            // classical ancilla: attach vacuum
            let rho = random_density(rng, &[4]);
            let vac = crate::fock::make_fock(0, 3)?.to_density();
            let joint = rho.tensor(&vac);
            Ok(TauCheck {
                op: "attach_vacuum".into(),
                before: nc_depth(&rho, &grid1, tol)?,
                after: nc_depth(&joint, &grid2, tol)?,
            })
        }
        _ => {
            // coherent projection on mode 2 of a two-mode state
            let rho = random_density(rng, &[3, 8]);
            let xi = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            let proj = project_coherent(&rho, 1, xi)?;
            let cond = match proj.conditional {
                Some(c) => c,
                None => {
                    // outcome weight vanished; trivially monotone
                    return Ok(TauCheck {
                        op: "project_coherent_null".into(),
                        before: nc_depth(&rho, &grid2, tol)?,
                        after: DepthEstimate {
                            lower: 0.0,
                            upper: 0.0,
                            grid: grid1,
                            extents: vec![],
                        },
                    });
                }
            };
            Ok(TauCheck {
                op: "project_coherent".into(),
                before: nc_depth(&rho, &grid2, tol)?,
                after: nc_depth(&cond, &grid1, tol)?,
            })
        }
    }
}

fn fock_mix_trial(rng: &mut ChaCha8Rng, config: &MonoConfig) -> Result<TauCheck> {
    let grid1 = GridSpec::with_points(config.grid_points_single);
    let tol = config.depth_tol;
    let a = random_density(rng, &[5]);
    let b = random_density(rng, &[5]);
    let p = rng.random::<f64>();
    let mix = DensityOperator::mix(&[(p, &a), (1.0 - p, &b)])?;
    let ea = nc_depth(&a, &grid1, tol)?;
    let eb = nc_depth(&b, &grid1, tol)?;
    let em = nc_depth(&mix, &grid1, tol)?;
    // classical mixing: τ_m(mix) ≤ max of parts
    Ok(TauCheck {
        op: "classical_mixing".into(),
        before: DepthEstimate {
            lower: ea.lower.max(eb.lower),
            upper: ea.upper.max(eb.upper),
            grid: grid1,
            extents: vec![],
        },
        after: em,
    })
}

fn fock_f1_trial(rng: &mut ChaCha8Rng) -> Result<(String, f64, f64)> {
    let op_kind = rng.random_range(0..4u8);
    match op_kind {
        0 => {
            // two-mode passive with QFI headroom
            let small = random_density(rng, &[4]).tensor(&random_density(rng, &[4]));
            let rho = pad_two_mode(&small, 9);
            let theta = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
            let u = beam_splitter(theta, 9, 9)?;
            let out = rho.conjugate(&u)?;
            Ok((
                "beam_splitter".into(),
                metrological_power(&rho)?,
                metrological_power(&out)?,
            ))
        }
        1 => {
            let rho = random_density(rng, &[4]);
            let gamma = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * 0.6;
            let padded = pad_single_mode(&rho, 14);
            let out = displace_exact(&rho, gamma, 14);
            Ok((
                "displacement".into(),
                metrological_power(&padded)?,
                metrological_power(&out)?,
            ))
        }
        2 => {
            let rho = random_density(rng, &[4]);
            let padded = pad_single_mode(&rho, 6);
            let vac = crate::fock::make_fock(0, 4)?.to_density();
            let joint = padded.tensor(&vac);
            Ok((
                "attach_vacuum".into(),
                metrological_power(&padded)?,
                metrological_power(&joint)?,
            ))
        }
        _ => {
            let a = random_density(rng, &[4]);
            let b = random_density(rng, &[4]);
            let p = rng.random::<f64>();
            let pa = pad_single_mode(&a, 6);
            let pb = pad_single_mode(&b, 6);
            let mix = DensityOperator::mix(&[(p, &pa), (1.0 - p, &pb)])?;
            Ok((
                "classical_mixing".into(),
                metrological_power(&pa)?.max(metrological_power(&pb)?),
                metrological_power(&mix)?,
            ))
        }
    }
}

fn pad_two_mode(rho: &DensityOperator, dim: usize) -> DensityOperator {
    let [d1, d2] = rho.dims() else {
        panic!("two-mode state expected")
    };
    let (d1, d2) = (*d1, *d2);
    let mut m = CMatrix::zeros(dim * dim, dim * dim);
    for i1 in 0..d1 {
        for i2 in 0..d2 {
            for j1 in 0..d1 {
                for j2 in 0..d2 {
                    m[(i1 * dim + i2, j1 * dim + j2)] = rho.matrix()[(i1 * d2 + i2, j1 * d2 + j2)];
                }
            }
        }
    }
    DensityOperator::new(m, vec![dim, dim]).expect("padding preserves validity")
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

struct GaussianCheck {
    op: String,
    /// κ against classical states (before, after), when the op is free
    /// for nonclassicality.
    classical: Option<(f64, f64)>,
    /// Two-mode separability κ (before, after), when the op is local.
    separable: Option<(f64, f64)>,
}

/// Gaussian trial. The free sets differ per measure: passive globals and
/// thermal noise are free for the classicality κ; local ops (including
/// local squeezing) are free for the separability κ, while a global beam
/// splitter can create entanglement and a squeezer can create
/// nonclassicality.
fn gaussian_trial(rng: &mut ChaCha8Rng) -> GaussianCheck {
    let two_mode = rng.random::<f64>() < 0.5;
    if !two_mode {
        let g = random_gaussian_state(rng, 1);
        let before = kappa_classical(&g);
        let (op, out) = match rng.random_range(0..3u8) {
            0 => (
                "rotation",
                g.apply_symplectic(&rotation_symplectic(rng.random::<f64>() * 3.0)),
            ),
            1 => (
                "displacement",
                g.displace(0, C64::new(rng.random::<f64>(), rng.random::<f64>()))
                    .expect("mode 0"),
            ),
            _ => (
                "add_thermal",
                g.add_thermal(rng.random::<f64>()).expect("δ ≥ 0"),
            ),
        };
        return GaussianCheck {
            op: op.into(),
            classical: Some((before, kappa_classical(&out))),
            separable: None,
        };
    }
    let g = random_gaussian_state(rng, 2);
    let before = kappa_classical(&g);
    let before_sep = kappa_separable_two_mode(&g).expect("two-mode state");
    match rng.random_range(0..4u8) {
        0 => {
            let out = g.apply_symplectic(&embed_single(
                &rotation_symplectic(rng.random::<f64>() * 3.0),
                rng.random_range(0..2),
                2,
            ));
            GaussianCheck {
                op: "local_rotation".into(),
                classical: Some((before, kappa_classical(&out))),
                separable: Some((
                    before_sep,
                    kappa_separable_two_mode(&out).expect("two-mode"),
                )),
            }
        }
        1 => {
            let out = g.add_thermal(rng.random::<f64>()).expect("δ ≥ 0");
            GaussianCheck {
                op: "add_thermal".into(),
                classical: Some((before, kappa_classical(&out))),
                separable: Some((
                    before_sep,
                    kappa_separable_two_mode(&out).expect("two-mode"),
                )),
            }
        }
        2 => {
            let out = g.apply_symplectic(&embed_single(
                &squeeze_symplectic(rng.random::<f64>(), rng.random::<f64>()),
                rng.random_range(0..2),
                2,
            ));
            GaussianCheck {
                op: "local_squeeze".into(),
                classical: None,
                separable: Some((
                    before_sep,
                    kappa_separable_two_mode(&out).expect("two-mode"),
                )),
            }
        }
        _ => {
            let out = g.apply_symplectic(&bs_symplectic(
                rng.random::<f64>() * std::f64::consts::FRAC_PI_2,
            ));
            GaussianCheck {
                op: "beam_splitter".into(),
                classical: Some((before, kappa_classical(&out))),
                separable: None,
            }
        }
    }
}

pub fn monotonicity_suite(config: &MonoConfig, seed: u64) -> Result<MonoReport> {
    let meta = RunMeta::new("monotonicity_suite", seed, config);

    let outcomes: Vec<(usize, Vec<MonoViolation>)> = (0..config.trials)
        .into_par_iter()
        .map(|trial| -> Result<(usize, Vec<MonoViolation>)> {
            let mut rng = rng_for(seed, trial as u64);
            let mut violations = Vec::new();
            let domain = trial % 5;
            match domain {
                0 | 1 => {
                    let check = if rng.random::<f64>() < 0.2 {
                        fock_mix_trial(&mut rng, config)?
                    } else {
                        fock_tau_trial(&mut rng, config)?
                    };
                    if check.after.lower > check.before.upper + config.slack {
                        violations.push(MonoViolation {
                            trial,
                            domain: "fock_tau".into(),
                            op: check.op,
                            before: check.before.upper,
                            after: check.after.lower,
                            seed,
                        });
                    }
                }
                2 => {
                    let (op, before, after) = fock_f1_trial(&mut rng)?;
                    if after > before + 1e-6 {
                        violations.push(MonoViolation {
                            trial,
                            domain: "fock_f1".into(),
                            op,
                            before,
                            after,
                            seed,
                        });
                    }
                }
                _ => {
                    let check = gaussian_trial(&mut rng);
                    if let Some((before, after)) = check.classical {
                        if after > before + 1e-8 {
                            violations.push(MonoViolation {
                                trial,
                                domain: "gaussian_kappa".into(),
                                op: check.op.clone(),
                                before,
                                after,
                                seed,
                            });
                        }
                    }
                    if let Some((before, after)) = check.separable {
                        if after > before + 1e-8 {
                            violations.push(MonoViolation {
                                trial,
                                domain: "gaussian_kappa_sep".into(),
                                op: check.op.clone(),
                                before,
                                after,
                                seed,
                            });
                        }
                    }
                }
            }
            Ok((domain, violations))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut violations = Vec::new();
    let mut counts = [0usize; 3];
    for (domain, mut v) in outcomes {
        violations.append(&mut v);
        match domain {
            0 | 1 => counts[0] += 1,
            2 => counts[1] += 1,
            _ => counts[2] += 1,
        }
    }
    let pass = violations.is_empty();
    Ok(MonoReport {
        meta,
        config: config.clone(),
        fock_tau_trials: counts[0],
        fock_f1_trials: counts[1],
        gaussian_trials: counts[2],
        violations,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_suite_has_no_violations() {
        let config = MonoConfig {
            trials: 60,
            ..MonoConfig::default()
        };
        let report = monotonicity_suite(&config, 11).unwrap();
        assert!(report.pass, "violations: {:?}", report.violations);
        assert!(report.fock_tau_trials > 0);
        assert!(report.fock_f1_trials > 0);
        assert!(report.gaussian_trials > 0);
    }

    #[test]
    fn displacement_leaves_depth_bracket_unchanged() {
        let mut rng = rng_for(3, 9);
        let rho = random_density(&mut rng, &[4]);
        let padded = pad_single_mode(&rho, 14);
        let out = displace_exact(&rho, C64::new(0.3, -0.2), 14);
        let grid = GridSpec::with_points(41);
        let a = nc_depth(&padded, &grid, 1e-2).unwrap();
        let b = nc_depth(&out, &grid, 1e-2).unwrap();
        assert!((a.lower - b.lower).abs() <= 1e-2 + 1e-9);
        assert!((a.upper - b.upper).abs() <= 1e-2 + 1e-9);
    }

    #[test]
    fn projection_of_product_vacuum_is_classical() {
        // coherent projection on one mode of a classical two-mode state
        let vac2 = crate::fock::make_fock(0, 3)
            .unwrap()
            .tensor(&crate::fock::make_fock(0, 3).unwrap())
            .to_density();
        let proj = project_coherent(&vac2, 1, C64::new(0.2, 0.1)).unwrap();
        let cond = proj.conditional.unwrap();
        let est = nc_depth(&cond, &GridSpec::with_points(41), 1e-3).unwrap();
        assert!(est.upper <= 1e-3 + 1e-12);
    }
}
