//! s-parametrized quasiprobability `W_ρ(α; τ)`, `s = 1 − 2τ`.
//!
//! `W_ρ(α; τ) = Tr[ρ · ⊗ᵢ T(αᵢ; τ)] / πⁿ` where `T(α; τ)` is the s-ordered
//! kernel `(2/(1−s)) D(α) Σₙ ((s+1)/(s−1))ⁿ |n⟩⟨n| D†(α)` with closed-form
//! matrix elements
//!
//! `⟨m|T|n⟩ = (1/τ) √(n!/m!) (α/τ)^{m−n} e^{−|α|²/τ} (−r̃)ⁿ L_n^{(m−n)}(y)`
//!
//! for `m ≥ n`, `r̃ = (1−τ)/τ`, `y = |α|²/(τ(1−τ))`. The product
//! `(−r̃)ⁿ L_n^{(a)}(y)` is generated by a single scaled recurrence that
//! stays finite across the whole range, including τ → 1 where `y` alone
//! diverges. Evaluating the dyad kernels in closed form sums the
//! displaced-number series exactly; summing it term by term loses all
//! precision to cancellation for τ < 1/2.

use super::state::DensityOperator;
use crate::linalg::sqrt_factorial_ratio_table;
use crate::{CMatrix, Error, Result, C64};
use rayon::prelude::*;

/// Per-mode dimension cap: kernel recurrences are overflow-safe below this
/// for bisection resolutions down to 1e-3.
pub const MAX_KERNEL_DIM: usize = 80;

/// Kernel magnitudes below e^{−400} contribute nothing at any detection
/// threshold in use; the whole kernel is skipped.
const LOG_SKIP: f64 = -400.0;

/// Build the single-mode kernel matrix `T(α; τ)` (Hermitian, d×d).
/// Returns `None` when every entry underflows.
pub(crate) fn kernel_matrix(
    alpha: C64,
    tau: f64,
    dim: usize,
    sqrt_ratio: &[Vec<f64>],
) -> Option<CMatrix> {
    let x = alpha.norm_sqr();
    let inv_tau = 1.0 / tau;
    let r_tilde = (1.0 - tau) / tau;
    let x_over_tau2 = x / (tau * tau);

    // prefactors cp[a] = (α/τ)^a e^{−x/τ}, computed in log form; skip the
    // kernel entirely when even the largest one is negligible.
    let log_mag_step = if x > 0.0 {
        (alpha.norm() * inv_tau).ln()
    } else {
        f64::NEG_INFINITY
    };
    let log_base = -x * inv_tau;
    let max_log = if x > 0.0 {
        log_base + (dim as f64 - 1.0) * log_mag_step.max(0.0)
    } else {
        0.0
    };
    if max_log < LOG_SKIP {
        return None;
    }
    let arg = if x > 0.0 { (alpha / tau).arg() } else { 0.0 };
    let mut cp = vec![C64::ZERO; dim];
    for a in 0..dim {
        let lm = if x > 0.0 {
            log_base + a as f64 * log_mag_step
        } else if a == 0 {
            0.0
        } else {
            f64::NEG_INFINITY
        };
        if lm > LOG_SKIP {
            cp[a] = C64::from_polar(lm.exp(), arg * a as f64);
        }
    }

    let mut t = CMatrix::zeros(dim, dim);
    for a in 0..dim {
        if cp[a] == C64::ZERO {
            continue;
        }
        // Q_n = (−r̃)^n L_n^{(a)}(y) through the scaled recurrence
        // (n+1) Q_{n+1} = (x/τ² − (2n+1+a) r̃) Q_n − r̃² (n+a) Q_{n−1}.
        let count = dim - a;
        let mut q_prev = 1.0f64;
        let mut q = x_over_tau2 - r_tilde * (1.0 + a as f64);
        for n in 0..count {
            let qn = if n == 0 { q_prev } else { q };
            let v = cp[a] * (inv_tau * sqrt_ratio[n][a] * qn);
            t[(n + a, n)] = v;
            if a > 0 {
                t[(n, n + a)] = v.conj();
            }
            if n >= 1 {
                let nf = n as f64;
                let next = ((x_over_tau2 - (2.0 * nf + 1.0 + a as f64) * r_tilde) * q
                    - r_tilde * r_tilde * (nf + a as f64) * q_prev)
                    / (nf + 1.0);
                q_prev = q;
                q = next;
            }
        }
    }
    Some(t)
}

/// `Tr[ρ T]` for Hermitian ρ, T — real by construction.
fn hermitian_pair_trace(rho: &CMatrix, t: &CMatrix) -> f64 {
    let n = rho.nrows();
    let mut acc = 0.0f64;
    for i in 0..n {
        acc += rho[(i, i)].re * t[(i, i)].re;
        for j in (i + 1)..n {
            // ρ_{ij} T_{ji} + ρ_{ji} T_{ij} = 2 Re(ρ_{ij} T_{ji})
            acc += 2.0 * (rho[(i, j)] * t[(j, i)]).re;
        }
    }
    acc
}

fn check_tau(tau: f64) -> Result<()> {
    if tau <= 0.0 {
        return Err(Error::OutOfRange {
            name: "tau",
            value: tau,
            range: "τ > 0",
        });
    }
    Ok(())
}

fn check_dims(rho: &DensityOperator) -> Result<()> {
    if rho.modes() > 2 {
        return Err(Error::Unsupported(
            "quasiprobability evaluation supports one or two modes".into(),
        ));
    }
    if rho.dims().iter().any(|&d| d > MAX_KERNEL_DIM) {
        return Err(Error::DimensionOverflow {
            dim: *rho.dims().iter().max().unwrap(),
            max: MAX_KERNEL_DIM,
        });
    }
    Ok(())
}

/// Point evaluation of `W_ρ(α; τ)` for one- or two-mode states.
/// The result is real by Hermiticity of state and kernel.
pub fn quasiprob(rho: &DensityOperator, alpha: &[C64], tau: f64) -> Result<f64> {
    check_tau(tau)?;
    check_dims(rho)?;
    if alpha.len() != rho.modes() {
        return Err(Error::DimensionMismatch(format!(
            "{} phase-space coordinates for {}-mode state",
            alpha.len(),
            rho.modes()
        )));
    }
    let dims = rho.dims();
    let pi = std::f64::consts::PI;
    match dims {
        [d] => {
            let table = sqrt_factorial_ratio_table(*d);
            let w = match kernel_matrix(alpha[0], tau, *d, &table) {
                Some(t) => hermitian_pair_trace(rho.matrix(), &t) / pi,
                None => 0.0,
            };
            finite(w)
        }
        [d1, d2] => {
            let t1 = sqrt_factorial_ratio_table(*d1);
            let t2 = sqrt_factorial_ratio_table(*d2);
            let k1 = kernel_matrix(alpha[0], tau, *d1, &t1);
            let k2 = kernel_matrix(alpha[1], tau, *d2, &t2);
            let w = match (k1, k2) {
                (Some(k1), Some(k2)) => {
                    let b = contract_mode2(rho, &k2);
                    trace_product(&b, &k1).re / (pi * pi)
                }
                _ => 0.0,
            };
            finite(w)
        }
        _ => unreachable!(),
    }
}

fn finite(w: f64) -> Result<f64> {
    if w.is_finite() {
        Ok(w)
    } else {
        Err(Error::Unsupported(
            "quasiprobability overflow: dimension too large for requested τ".into(),
        ))
    }
}

/// `B[m₁,n₁] = Σ_{m₂ n₂} ρ[(m₁m₂),(n₁n₂)] T2[n₂,m₂]`
fn contract_mode2(rho: &DensityOperator, t2: &CMatrix) -> CMatrix {
    let [d1, d2] = rho.dims() else { unreachable!() };
    let (d1, d2) = (*d1, *d2);
    let m = rho.matrix();
    let mut b = CMatrix::zeros(d1, d1);
    for m1 in 0..d1 {
        for n1 in 0..d1 {
            let mut acc = C64::ZERO;
            for m2 in 0..d2 {
                let row = m1 * d2 + m2;
                for n2 in 0..d2 {
                    acc += m[(row, n1 * d2 + n2)] * t2[(n2, m2)];
                }
            }
            b[(m1, n1)] = acc;
        }
    }
    b
}

/// `Tr[B·T1] = Σ B[m,n] T1[n,m]`
fn trace_product(b: &CMatrix, t1: &CMatrix) -> C64 {
    let d = b.nrows();
    let mut acc = C64::ZERO;
    for m in 0..d {
        for n in 0..d {
            acc += b[(m, n)] * t1[(n, m)];
        }
    }
    acc
}

/// Exact minimum of `W_ρ(·; τ)` over the grid points (full scan,
/// order-independent reduction).
pub fn min_on_grid(rho: &DensityOperator, axes: &[Vec<C64>], tau: f64) -> Result<f64> {
    scan_grid(rho, axes, tau, None)
}

/// Whether some grid point has `W < −threshold` (may stop at the first hit;
/// the verdict does not depend on scan order).
pub fn has_negativity(
    rho: &DensityOperator,
    axes: &[Vec<C64>],
    tau: f64,
    threshold: f64,
) -> Result<bool> {
    Ok(scan_grid(rho, axes, tau, Some(threshold))? < -threshold)
}

/// Scan the product grid. With `early_exit = Some(thr)` the scan may return
/// any value below `−thr` as soon as one is found.
fn scan_grid(
    rho: &DensityOperator,
    axes: &[Vec<C64>],
    tau: f64,
    early_exit: Option<f64>,
) -> Result<f64> {
    check_tau(tau)?;
    check_dims(rho)?;
    if axes.len() != rho.modes() {
        return Err(Error::DimensionMismatch(
            "one point list per mode required".into(),
        ));
    }
    let pi = std::f64::consts::PI;
    let min = match rho.dims() {
        [d] => {
            let d = *d;
            let table = sqrt_factorial_ratio_table(d);
            let m = rho.matrix();
            let eval = |alpha: &C64| -> f64 {
                match kernel_matrix(*alpha, tau, d, &table) {
                    Some(t) => hermitian_pair_trace(m, &t) / pi,
                    None => 0.0,
                }
            };
            match early_exit {
                Some(thr) => {
                    if axes[0].par_iter().any(|a| eval(a) < -thr) {
                        -thr * 2.0
                    } else {
                        0.0
                    }
                }
                None => axes[0]
                    .par_iter()
                    .map(eval)
                    .reduce(|| f64::INFINITY, f64::min),
            }
        }
        [d1, d2] => {
            let (d1, d2) = (*d1, *d2);
            let t1_table = sqrt_factorial_ratio_table(d1);
            let t2_table = sqrt_factorial_ratio_table(d2);
            // contract mode 2 against every kernel along its axis once
            let b_mats: Vec<Option<CMatrix>> = axes[1]
                .par_iter()
                .map(|a2| kernel_matrix(*a2, tau, d2, &t2_table).map(|k2| contract_mode2(rho, &k2)))
                .collect();
            let eval_row = |a1: &C64| -> f64 {
                let k1 = kernel_matrix(*a1, tau, d1, &t1_table);
                let mut row_min = f64::INFINITY;
                match k1 {
                    Some(k1) => {
                        for b in &b_mats {
                            let w = match b {
                                Some(b) => trace_product(b, &k1).re / (pi * pi),
                                None => 0.0,
                            };
                            row_min = row_min.min(w);
                            if let Some(thr) = early_exit {
                                if w < -thr {
                                    return row_min;
                                }
                            }
                        }
                    }
                    None => row_min = 0.0,
                }
                row_min
            };
            match early_exit {
                Some(thr) => {
                    if axes[0].par_iter().any(|a| eval_row(a) < -thr) {
                        -thr * 2.0
                    } else {
                        0.0
                    }
                }
                None => axes[0]
                    .par_iter()
                    .map(eval_row)
                    .reduce(|| f64::INFINITY, f64::min),
            }
        }
        _ => unreachable!(),
    };
    if min.is_finite() {
        Ok(min)
    } else {
        Err(Error::Unsupported(
            "quasiprobability overflow on grid".into(),
        ))
    }
}
