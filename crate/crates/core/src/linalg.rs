//! Shared dense linear algebra helpers on complex matrices.

use crate::{CMatrix, CVector, Error, RMatrix, RVector, Result, C64};

/// Maximum elementwise deviation from Hermiticity, `max |M - M†|`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Replace `M` by `(M + M†)/2`, removing roundoff drift.
pub fn hermitize(m: &mut CMatrix) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

/// Eigendecomposition of a Hermitian matrix. Returns (eigenvalues, eigenvectors)
/// with eigenvalues ascending and eigenvectors as columns.
///
/// In-crate Householder tridiagonalization + implicitly shifted QL:
/// nalgebra 0.35's `SymmetricEigen` returns non-finite values on sparse
/// rank-deficient matrices with geometric amplitude decay (e.g. two-mode
/// squeezed vacuum projectors), which this library produces routinely.
pub fn hermitian_eig(m: &CMatrix) -> (RVector, CMatrix) {
    hermitian_eig_impl(m, true)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> RVector {
    hermitian_eig_impl(m, false).0
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
pub fn symmetric_eig(m: &RMatrix) -> (RVector, RMatrix) {
    let complex = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| C64::new(m[(i, j)], 0.0));
    let (vals, vecs) = hermitian_eig(&complex);
    let real_vecs = RMatrix::from_fn(m.nrows(), m.ncols(), |i, j| vecs[(i, j)].re);
    // columns of a real symmetric eigenbasis can pick up a complex phase
    // from the reduction; rotate each back to the real axis.
    let mut out = real_vecs;
    for k in 0..m.ncols() {
        // find the largest-magnitude entry of the complex column
        let mut best = 0usize;
        let mut mag = 0.0f64;
        for i in 0..m.nrows() {
            let v = vecs[(i, k)].norm();
            if v > mag {
                mag = v;
                best = i;
            }
        }
        if mag > 0.0 {
            let phase = vecs[(best, k)] / C64::new(mag, 0.0);
            for i in 0..m.nrows() {
                out[(i, k)] = (vecs[(i, k)] * phase.conj()).re;
            }
            // renormalize against rounding
            let norm = (0..m.nrows())
                .map(|i| out[(i, k)] * out[(i, k)])
                .sum::<f64>()
                .sqrt();
            if norm > 0.0 {
                for i in 0..m.nrows() {
                    out[(i, k)] /= norm;
                }
            }
        }
    }
    (vals, out)
}

/// Couplings below this are treated as exact zeros during the reduction:
/// far below any physically meaningful amplitude in this library, far above
/// the subnormal range where float arithmetic loses its precision.
const DEFLATION_FLOOR: f64 = 1e-250;

fn hermitian_eig_impl(m: &CMatrix, want_vectors: bool) -> (RVector, CMatrix) {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix required");
    if n == 0 {
        return (RVector::zeros(0), CMatrix::zeros(0, 0));
    }
    let mut a = m.clone();
    let mut q = CMatrix::identity(n, n);

    // Householder reduction to tridiagonal form with complex subdiagonals.
    let mut diag = vec![0.0f64; n];
    let mut sub = vec![C64::ZERO; n.saturating_sub(1)];
    for k in 0..n.saturating_sub(1) {
        // column below the diagonal, scaled by its 1-norm so the reflector
        // is computed in a healthy range even when the trailing block has
        // underflowed toward subnormals
        let len = n - k - 1;
        let mut scale = 0.0f64;
        for i in (k + 1)..n {
            scale += a[(i, k)].re.abs() + a[(i, k)].im.abs();
        }
        if scale < DEFLATION_FLOOR || !scale.is_finite() {
            sub[k] = C64::ZERO;
            continue;
        }
        let inv_scale = 1.0 / scale;
        let mut u = vec![C64::ZERO; len];
        let mut beta2 = 0.0f64;
        for i in 0..len {
            u[i] = a[(k + 1 + i, k)] * inv_scale;
            beta2 += u[i].norm_sqr();
        }
        let beta = beta2.sqrt();
        let x0 = u[0];
        let phase = if x0.norm() > 0.0 {
            x0 / C64::new(x0.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        // u = x/scale − α_y e₁ with α_y = −phase·β: no cancellation, and
        // ‖u‖² = 2β(β + |x₀|) stays well away from underflow.
        let alpha = -phase * (beta * scale);
        u[0] += phase * beta;
        let unorm = u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if unorm == 0.0 {
            sub[k] = alpha;
            continue;
        }
        for c in u.iter_mut() {
            *c /= unorm;
        }
        // apply H = I − 2uu† on the trailing block: rows then columns
        // A ← H A H on indices (k+1.., k+1..), and fix column k.
        // w = A[k+1.., k+1..] u
        let mut w = vec![C64::ZERO; len];
        for i in 0..len {
            let mut acc = C64::ZERO;
            for j in 0..len {
                acc += a[(k + 1 + i, k + 1 + j)] * u[j];
            }
            w[i] = acc;
        }
        // κ = u†w (real for Hermitian A)
        let kappa: C64 = u.iter().zip(&w).map(|(ui, wi)| ui.conj() * wi).sum();
        // v = w − κ u ;  A ← A − 2 u v† − 2 v u† + 0 (rank-2 update)
        let v: Vec<C64> = w.iter().zip(&u).map(|(wi, ui)| wi - kappa * ui).collect();
        for i in 0..len {
            for j in 0..len {
                let upd = u[i] * v[j].conj() + v[i] * u[j].conj();
                a[(k + 1 + i, k + 1 + j)] -= 2.0 * upd;
            }
        }
        // column k: becomes (…, α, 0, …)
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in (k + 2)..n {
            a[(i, k)] = C64::ZERO;
            a[(k, i)] = C64::ZERO;
        }
        sub[k] = alpha;
        if want_vectors {
            // Q ← Q H (apply reflector to columns k+1.. of Q)
            for row in 0..n {
                let mut acc = C64::ZERO;
                for j in 0..len {
                    acc += q[(row, k + 1 + j)] * u[j];
                }
                let acc2 = acc * 2.0;
                for j in 0..len {
                    q[(row, k + 1 + j)] -= acc2 * u[j].conj();
                }
            }
        }
    }
    for i in 0..n {
        diag[i] = a[(i, i)].re;
    }

    // Phase similarity D = diag(φ) making the subdiagonal real
    // non-negative: φ₀ = 1, φ_{k+1} = (s_k/|s_k|)·φ_k gives
    // conj(φ_{k+1}) s_k φ_k = |s_k|. Eigenvectors pick up Q ← Q·D.
    let mut e = vec![0.0f64; n.saturating_sub(1)];
    if n > 1 {
        let mut phi = C64::new(1.0, 0.0);
        for k in 0..(n - 1) {
            let s = sub[k];
            let mag = s.norm();
            e[k] = mag;
            if mag > 0.0 {
                phi *= s / C64::new(mag, 0.0);
            }
            if want_vectors && (phi - C64::new(1.0, 0.0)).norm() > 0.0 {
                for row in 0..n {
                    q[(row, k + 1)] *= phi;
                }
            }
        }
    }

    // Implicitly shifted QL on the real tridiagonal (d, e), rotations
    // accumulated into the complex columns of Q. Subdiagonals negligible
    // against the global tridiagonal norm are deflated: the local relative
    // test alone lets noise-scale entries glue the active block to long
    // numerically-zero stretches, stalling the sweep.
    let mut d = diag;
    let mut e_ext = e;
    e_ext.push(0.0);
    let anorm = (0..n)
        .map(|i| d[i].abs() + e_ext[i].abs())
        .fold(0.0f64, f64::max);
    let global_tol = (f64::EPSILON * anorm).max(DEFLATION_FLOOR);
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m_idx = l;
            while m_idx + 1 < n {
                let dd = d[m_idx].abs() + d[m_idx + 1].abs();
                if e_ext[m_idx].abs() <= f64::EPSILON * dd || e_ext[m_idx].abs() <= global_tol {
                    break;
                }
                m_idx += 1;
            }
            if m_idx == l {
                break;
            }
            iter += 1;
            assert!(
                iter <= 60,
                "tridiagonal QL failed to converge for eigenvalue {l} of {n}"
            );
            let mut g = (d[l + 1] - d[l]) / (2.0 * e_ext[l]);
            let mut r = g.hypot(1.0);
            g = d[m_idx] - d[l] + e_ext[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut i = m_idx;
            while i > l {
                let i0 = i - 1;
                let f = s * e_ext[i0];
                let b = c * e_ext[i0];
                r = f.hypot(g);
                e_ext[i] = r;
                if r == 0.0 {
                    d[i] -= p;
                    e_ext[m_idx] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i] - p;
                r = (d[i0] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i] = g + p;
                g = c * r - b;
                if want_vectors {
                    for row in 0..n {
                        let qi0 = q[(row, i0)];
                        let qi = q[(row, i)];
                        q[(row, i)] = qi * c + qi0 * s;
                        q[(row, i0)] = qi0 * c - qi * s;
                    }
                }
                i -= 1;
            }
            if r == 0.0 && i > l {
                continue;
            }
            d[l] -= p;
            e_ext[l] = g;
            e_ext[m_idx] = 0.0;
        }
    }

    // sort ascending
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| d[x].total_cmp(&d[y]));
    let mut vals = RVector::zeros(n);
    let mut vecs = CMatrix::zeros(n, n);
    for (k, &i) in idx.iter().enumerate() {
        vals[k] = d[i];
        if want_vectors {
            vecs.set_column(k, &q.column(i));
        }
    }
    (vals, vecs)
}

/// Complex trace.
pub fn trace(m: &CMatrix) -> C64 {
    (0..m.nrows()).map(|i| m[(i, i)]).sum()
}

/// Trace distance `½ Σ|λᵢ(A − B)|` between Hermitian matrices.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let diff = a - b;
    0.5 * hermitian_eigenvalues(&diff)
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
}

/// Unitarity deviation `max |U†U − I|`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let p = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j {
                C64::new(1.0, 0.0)
            } else {
                C64::ZERO
            };
            dev = dev.max((p[(i, j)] - expect).norm());
        }
    }
    dev
}

/// Validate that `m` is Hermitian within `tol`, returning the symmetrized copy.
pub fn checked_hermitian(m: &CMatrix, tol: f64) -> Result<CMatrix> {
    let dev = hermiticity_deviation(m);
    if dev > tol {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let mut out = m.clone();
    hermitize(&mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Mode-index machinery for multimode truncated spaces
// ---------------------------------------------------------------------------

/// Total dimension of a multimode space.
pub fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Row-major strides: mode 0 is the most significant index, matching the
/// Kronecker-product order `A ⊗ B` (A = mode 0).
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Apply a single-mode operator `op` (d×d) to mode `k` of `rho`:
/// `ρ ← (I ⊗ op ⊗ I) ρ (I ⊗ op ⊗ I)†` without materializing the lift.
pub fn sandwich_one_mode(op: &CMatrix, rho: &CMatrix, dims: &[usize], k: usize) -> CMatrix {
    let left = left_mul_one_mode(op, rho, dims, k);
    // right-multiply by op† = conjugate of left-multiplying the adjoint on rows
    // of the transpose; implemented directly for clarity.
    right_mul_one_mode_adjoint(op, &left, dims, k)
}

/// `(I ⊗ op ⊗ I) · m` acting on the row (ket) index of mode `k`.
pub fn left_mul_one_mode(op: &CMatrix, m: &CMatrix, dims: &[usize], k: usize) -> CMatrix {
    let d = dims[k];
    assert_eq!(op.nrows(), d);
    let total = total_dim(dims);
    let st = strides(dims)[k];
    let ncols = m.ncols();
    let mut out = CMatrix::zeros(total, ncols);
    // Rows group as (pre, a_k, post): row = base + a_k * st with base running
    // over all index combinations of the other modes.
    let outer = total / d;
    for o in 0..outer {
        let base = (o / st) * st * d + (o % st);
        for col in 0..ncols {
            for a in 0..d {
                let mut acc = C64::ZERO;
                for ap in 0..d {
                    let v = op[(a, ap)];
                    if v != C64::ZERO {
                        acc += v * m[(base + ap * st, col)];
                    }
                }
                out[(base + a * st, col)] = acc;
            }
        }
    }
    out
}

/// `m · (I ⊗ op ⊗ I)†` acting on the column (bra) index of mode `k`.
pub fn right_mul_one_mode_adjoint(op: &CMatrix, m: &CMatrix, dims: &[usize], k: usize) -> CMatrix {
    let d = dims[k];
    let total = total_dim(dims);
    let st = strides(dims)[k];
    let nrows = m.nrows();
    let mut out = CMatrix::zeros(nrows, total);
    let outer = total / d;
    for o in 0..outer {
        let base = (o / st) * st * d + (o % st);
        for row in 0..nrows {
            for b in 0..d {
                let mut acc = C64::ZERO;
                for bp in 0..d {
                    let v = op[(b, bp)].conj();
                    if v != C64::ZERO {
                        acc += m[(row, base + bp * st)] * v;
                    }
                }
                out[(row, base + b * st)] = acc;
            }
        }
    }
    out
}

/// Apply a single-mode operator to mode `k` of a state vector.
pub fn apply_one_mode_vec(op: &CMatrix, v: &CVector, dims: &[usize], k: usize) -> CVector {
    let d = dims[k];
    let total = total_dim(dims);
    let st = strides(dims)[k];
    let mut out = CVector::zeros(total);
    let outer = total / d;
    for o in 0..outer {
        let base = (o / st) * st * d + (o % st);
        for a in 0..d {
            let mut acc = C64::ZERO;
            for ap in 0..d {
                let w = op[(a, ap)];
                if w != C64::ZERO {
                    acc += w * v[base + ap * st];
                }
            }
            out[base + a * st] = acc;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Gauss–Hermite quadrature
// ---------------------------------------------------------------------------

/// Nodes and weights for Gauss–Hermite quadrature with weight `e^{-x²}`,
/// computed by the Golub–Welsch eigenvalue method.
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut jacobi = RMatrix::zeros(order, order);
    for k in 1..order {
        let beta = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = beta;
        jacobi[(k, k - 1)] = beta;
    }
    let (vals, vecs) = symmetric_eig(&jacobi);
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let nodes: Vec<f64> = vals.iter().copied().collect();
    let weights: Vec<f64> = (0..order)
        .map(|i| sqrt_pi * vecs[(0, i)] * vecs[(0, i)])
        .collect();
    (nodes, weights)
}

/// Table of `√(n!/(n+a)!)` for `n + a < dim`, indexed as `[n][a]`.
pub fn sqrt_factorial_ratio_table(dim: usize) -> Vec<Vec<f64>> {
    let mut table = Vec::with_capacity(dim);
    for n in 0..dim {
        let mut row = Vec::with_capacity(dim - n);
        let mut v = 1.0f64;
        row.push(v);
        for a in 1..(dim - n) {
            v /= ((n + a) as f64).sqrt();
            row.push(v);
        }
        table.push(row);
    }
    table
}
