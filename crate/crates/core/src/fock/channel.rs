//! Noise channels on truncated Fock spaces.

use super::state::DensityOperator;
use super::unitary::displacement_poly_part;
use crate::linalg::{gauss_hermite, sandwich_one_mode, total_dim};
use crate::{CMatrix, Error, Result, C64};

/// Tolerance on `Σ K†K = I` for trace-preserving channels.
pub const KRAUS_TOL: f64 = 1e-8;

/// A channel in Kraus form. Trace-decreasing families (`Σ K†K ⪯ I`) are
/// admitted but flagged.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    ops: Vec<CMatrix>,
    dims_in: Vec<usize>,
    dims_out: Vec<usize>,
    trace_preserving: bool,
}

impl KrausChannel {
    pub fn new(ops: Vec<CMatrix>, dims_in: Vec<usize>, dims_out: Vec<usize>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::BadKraus("no Kraus operators".into()));
        }
        let din = total_dim(&dims_in);
        let dout = total_dim(&dims_out);
        if ops.iter().any(|k| k.nrows() != dout || k.ncols() != din) {
            return Err(Error::BadKraus(format!(
                "operators must be {dout}×{din} for the declared dims"
            )));
        }
        let mut acc = CMatrix::zeros(din, din);
        for k in &ops {
            acc += k.adjoint() * k;
        }
        let dev = (0..din)
            .flat_map(|i| (0..din).map(move |j| (i, j)))
            .map(|(i, j)| {
                let expect = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::ZERO
                };
                (acc[(i, j)] - expect).norm()
            })
            .fold(0.0f64, f64::max);
        let trace_preserving = dev <= KRAUS_TOL;
        if !trace_preserving {
            // admit only Σ K†K ⪯ I
            let gap = CMatrix::identity(din, din) - acc;
            let min_eig = crate::linalg::min_eigenvalue(&gap);
            if min_eig < -1e-10 {
                return Err(Error::BadKraus(format!(
                    "Σ K†K exceeds identity (completeness deviation {dev:.3e})"
                )));
            }
        }
        Ok(Self {
            ops,
            dims_in,
            dims_out,
            trace_preserving,
        })
    }

    pub fn ops(&self) -> &[CMatrix] {
        &self.ops
    }

    pub fn dims_in(&self) -> &[usize] {
        &self.dims_in
    }

    pub fn dims_out(&self) -> &[usize] {
        &self.dims_out
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// `ρ → Σ K ρ K†`. Requires a trace-preserving family.
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dims() != self.dims_in {
            return Err(Error::DimensionMismatch(format!(
                "channel expects dims {:?}, state has {:?}",
                self.dims_in,
                rho.dims()
            )));
        }
        if !self.trace_preserving {
            return Err(Error::BadKraus(
                "apply requires a trace-preserving channel".into(),
            ));
        }
        let dout = total_dim(&self.dims_out);
        let mut out = CMatrix::zeros(dout, dout);
        for k in &self.ops {
            out += k * rho.matrix() * k.adjoint();
        }
        Ok(DensityOperator::from_trusted(out, self.dims_out.clone()))
    }

    /// Single-mode pure-loss channel with transmissivity `t`.
    pub fn loss(t: f64, dim: usize) -> Result<Self> {
        Ok(Self {
            ops: loss_kraus_ops(t, dim)?,
            dims_in: vec![dim],
            dims_out: vec![dim],
            trace_preserving: true,
        })
    }

    /// Identity channel on the given dims.
    pub fn identity(dims: Vec<usize>) -> Self {
        let d = total_dim(&dims);
        Self {
            ops: vec![CMatrix::identity(d, d)],
            dims_in: dims.clone(),
            dims_out: dims,
            trace_preserving: true,
        }
    }

    /// Parallel composition: `self` acts on the leading modes.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut ops = Vec::with_capacity(self.ops.len() * other.ops.len());
        for a in &self.ops {
            for b in &other.ops {
                ops.push(a.kronecker(b));
            }
        }
        let mut dims_in = self.dims_in.clone();
        dims_in.extend_from_slice(&other.dims_in);
        let mut dims_out = self.dims_out.clone();
        dims_out.extend_from_slice(&other.dims_out);
        Self {
            ops,
            dims_in,
            dims_out,
            trace_preserving: self.trace_preserving && other.trace_preserving,
        }
    }
}

/// Kraus family of the pure-loss channel: losing `j` photons from `|n⟩`
/// carries amplitude `√(C(n,j) t^{n−j} (1−t)^j)`.
pub fn loss_kraus_ops(t: f64, dim: usize) -> Result<Vec<CMatrix>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            range: "[0, 1]",
        });
    }
    let mut ops = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut k = CMatrix::zeros(dim, dim);
        let mut nonzero = false;
        for n in j..dim {
            let mut binom = 1.0f64;
            for i in 0..j {
                binom *= (n - i) as f64 / (i + 1) as f64;
            }
            let amp = (binom * t.powi((n - j) as i32) * (1.0 - t).powi(j as i32)).sqrt();
            if amp != 0.0 {
                nonzero = true;
            }
            k[(n - j, n)] = C64::new(amp, 0.0);
        }
        if nonzero {
            ops.push(k);
        }
    }
    Ok(ops)
}

/// Apply a pure-loss channel with transmissivity `t` to one mode.
pub fn loss_channel(rho: &DensityOperator, t: f64, mode: usize) -> Result<DensityOperator> {
    if mode >= rho.modes() {
        return Err(Error::BadMode {
            mode,
            modes: rho.modes(),
        });
    }
    let dims = rho.dims().to_vec();
    let ops = loss_kraus_ops(t, dims[mode])?;
    let n = rho.total_dim();
    let mut out = CMatrix::zeros(n, n);
    for k in &ops {
        out += sandwich_one_mode(k, rho.matrix(), &dims, mode);
    }
    Ok(DensityOperator::from_trusted(out, dims))
}

/// Options for the additive thermal noise channel.
#[derive(Debug, Clone, Copy)]
pub struct ThermalOptions {
    /// Gauss–Hermite points per axis. The quadrature is exact for mode
    /// dimension `d` when `order ≥ 2d − 1`.
    pub quadrature_order: usize,
    /// Admissible trace leak before the result is rejected.
    pub max_trace_leak: f64,
}

impl Default for ThermalOptions {
    fn default() -> Self {
        Self {
            quadrature_order: 21,
            max_trace_leak: 1e-6,
        }
    }
}

/// Additive thermal noise `E_δ` applied to every mode: the Gaussian-weighted
/// displacement average, evaluated by 2D Gauss–Hermite quadrature with nodes
/// scaled so the full Gaussian weight (including the one inside the
/// displacement matrix elements) is handled by the rule.
pub fn thermal_noise_channel(rho: &DensityOperator, delta: f64) -> Result<DensityOperator> {
    thermal_noise_channel_with(rho, delta, ThermalOptions::default())
}

pub fn thermal_noise_channel_with(
    rho: &DensityOperator,
    delta: f64,
    opts: ThermalOptions,
) -> Result<DensityOperator> {
    if delta < 0.0 {
        return Err(Error::OutOfRange {
            name: "delta",
            value: delta,
            range: "δ ≥ 0",
        });
    }
    if delta == 0.0 {
        return Ok(rho.clone());
    }
    let dims = rho.dims().to_vec();
    // headroom precheck per mode
    for mode in 0..dims.len() {
        let d = dims[mode];
        let support = support_level(rho, mode);
        let needed = (4.0 * delta).ceil() as usize;
        if d.saturating_sub(support + 1) < needed {
            return Err(Error::Headroom(format!(
                "mode {mode}: support at level {support}, dim {d}, need {needed} extra levels for δ={delta}"
            )));
        }
    }

    let (nodes, weights) = gauss_hermite(opts.quadrature_order);
    let scale = (delta / (1.0 + delta)).sqrt();
    let norm = 1.0 / (std::f64::consts::PI * (1.0 + delta));

    let mut out = rho.matrix().clone();
    for mode in 0..dims.len() {
        let d = dims[mode];
        let n = out.nrows();
        let mut acc = CMatrix::zeros(n, n);
        for (i, &si) in nodes.iter().enumerate() {
            for (j, &sj) in nodes.iter().enumerate() {
                let gamma = C64::new(scale * si, scale * sj);
                let p = displacement_poly_part(gamma, d);
                let term = sandwich_one_mode(&p, &out, &dims, mode);
                acc += term.scale(weights[i] * weights[j] * norm);
            }
        }
        out = acc;
    }

    let tr = crate::linalg::trace(&out).re;
    let leak = (1.0 - tr).abs();
    if leak > opts.max_trace_leak {
        return Err(Error::Headroom(format!(
            "thermal noise leaked {leak:.3e} of trace (limit {:.1e}); increase dims or quadrature order",
            opts.max_trace_leak
        )));
    }
    out /= C64::new(tr, 0.0);
    Ok(DensityOperator::from_trusted(out, dims))
}

/// Effective support of `mode`: the smallest level above which the total
/// remaining population is ≤ 1e-8.
fn support_level(rho: &DensityOperator, mode: usize) -> usize {
    const SUPPORT_TAIL: f64 = 1e-8;
    let st = crate::linalg::strides(rho.dims())[mode];
    let d = rho.dims()[mode];
    let mut pops = vec![0.0f64; d];
    for idx in 0..rho.total_dim() {
        pops[(idx / st) % d] += rho.matrix()[(idx, idx)].re;
    }
    let mut tail = 0.0;
    for s in (0..d).rev() {
        if tail + pops[s] > SUPPORT_TAIL {
            return s;
        }
        tail += pops[s];
    }
    0
}
