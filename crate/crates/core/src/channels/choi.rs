//! Finite-dimensional channels as dynamical (Choi) matrices.
//!
//! Convention: unnormalized dynamical matrix `D = Σ_{ij} |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`
//! with composite index `(i, a) = i·d_out + a` (input factor first), so
//! trace preservation is the linear check `Tr_out D = I_in` and the channel
//! action is the contraction `Φ(ρ)_{ab} = Σ_{ij} ρ_{ij} D_{(i,a),(j,b)}`.

use crate::fock::DensityOperator;
use crate::linalg::{checked_hermitian, hermitian_eigenvalues};
use crate::{CMatrix, Error, Result, C64};
use serde::{Deserialize, Serialize};

/// Largest admitted `d_in·d_out` (guards accidental dimension blowups).
pub const MAX_CHOI_DIM: usize = 64;

#[derive(Debug, Clone)]
pub struct ChoiMatrix {
    matrix: CMatrix,
    d_in: usize,
    d_out: usize,
}

impl ChoiMatrix {
    /// Validate PSD (−1e-10 floor) and trace preservation
    /// (`Tr_out D = I` to 1e-8).
    pub fn new(matrix: CMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        Self::build(matrix, d_in, d_out, true)
    }

    fn build(matrix: CMatrix, d_in: usize, d_out: usize, check: bool) -> Result<Self> {
        let d = d_in * d_out;
        if d > MAX_CHOI_DIM {
            return Err(Error::DimensionOverflow {
                dim: d,
                max: MAX_CHOI_DIM,
            });
        }
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix must be {d}×{d} for d_in={d_in}, d_out={d_out}"
            )));
        }
        let matrix = checked_hermitian(&matrix, 1e-10)?;
        if check {
            let min_eig = hermitian_eigenvalues(&matrix)[0];
            if min_eig < -1e-10 {
                return Err(Error::NotPositive { min_eig });
            }
            let chan = Self {
                matrix,
                d_in,
                d_out,
            };
            let dev = chan.trace_preservation_deviation();
            if dev > 1e-8 {
                return Err(Error::BadKraus(format!(
                    "Tr_out(D) deviates from identity by {dev:.3e}"
                )));
            }
            return Ok(chan);
        }
        Ok(Self {
            matrix,
            d_in,
            d_out,
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// `max |Tr_out(D) − I|` elementwise.
    pub fn trace_preservation_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.d_in {
            for j in 0..self.d_in {
                let mut acc = C64::ZERO;
                for a in 0..self.d_out {
                    acc += self.matrix[(i * self.d_out + a, j * self.d_out + a)];
                }
                let expect = if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::ZERO
                };
                dev = dev.max((acc - expect).norm());
            }
        }
        dev
    }

    /// Choi matrix of a Kraus family.
    pub fn from_kraus(ops: &[CMatrix], d_in: usize, d_out: usize) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::BadKraus("no Kraus operators".into()));
        }
        let d = d_in * d_out;
        let mut m = CMatrix::zeros(d, d);
        for k in ops {
            if k.nrows() != d_out || k.ncols() != d_in {
                return Err(Error::BadKraus(format!(
                    "Kraus operator must be {d_out}×{d_in}"
                )));
            }
            for i in 0..d_in {
                for a in 0..d_out {
                    for j in 0..d_in {
                        for b in 0..d_out {
                            m[(i * d_out + a, j * d_out + b)] += k[(a, i)] * k[(b, j)].conj();
                        }
                    }
                }
            }
        }
        Self::new(m, d_in, d_out)
    }

    /// Identity channel.
    pub fn identity(d: usize) -> Self {
        let mut m = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                m[(i * d + i, j * d + j)] = C64::new(1.0, 0.0);
            }
        }
        Self {
            matrix: m,
            d_in: d,
            d_out: d,
        }
    }

    /// Completely dephasing channel (kills all off-diagonals).
    pub fn completely_dephasing(d: usize) -> Self {
        let mut m = CMatrix::zeros(d * d, d * d);
        for i in 0..d {
            m[(i * d + i, i * d + i)] = C64::new(1.0, 0.0);
        }
        Self {
            matrix: m,
            d_in: d,
            d_out: d,
        }
    }

    /// Choi matrix of unitary conjugation.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        let d = u.nrows();
        Self::from_kraus(std::slice::from_ref(u), d, d)
    }

    /// Raw channel action on a matrix (no validation of the output).
    pub fn apply_matrix(&self, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.d_out, self.d_out);
        for i in 0..self.d_in {
            for j in 0..self.d_in {
                let rij = rho[(i, j)];
                if rij == C64::ZERO {
                    continue;
                }
                for a in 0..self.d_out {
                    for b in 0..self.d_out {
                        out[(a, b)] += rij * self.matrix[(i * self.d_out + a, j * self.d_out + b)];
                    }
                }
            }
        }
        out
    }

    /// Validated channel action on a density operator (output is a
    /// single-mode system of dimension `d_out`).
    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.total_dim() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "channel expects input dim {}, state has {}",
                self.d_in,
                rho.total_dim()
            )));
        }
        DensityOperator::new(self.apply_matrix(rho.matrix()), vec![self.d_out])
    }

    /// Parallel composition `Φ_A ⊗ Φ_B`: Kronecker product of the Choi
    /// matrices followed by the input/output index interleaving.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let d_in = self.d_in * other.d_in;
        let d_out = self.d_out * other.d_out;
        let d = d_in * d_out;
        if d > MAX_CHOI_DIM {
            return Err(Error::DimensionOverflow {
                dim: d,
                max: MAX_CHOI_DIM,
            });
        }
        let mut m = CMatrix::zeros(d, d);
        let row = |ia: usize, ib: usize, aa: usize, ab: usize| -> usize {
            (ia * other.d_in + ib) * d_out + (aa * other.d_out + ab)
        };
        for ia in 0..self.d_in {
            for aa in 0..self.d_out {
                for ja in 0..self.d_in {
                    for ba in 0..self.d_out {
                        let va = self.matrix[(ia * self.d_out + aa, ja * self.d_out + ba)];
                        if va == C64::ZERO {
                            continue;
                        }
                        for ib in 0..other.d_in {
                            for ab in 0..other.d_out {
                                for jb in 0..other.d_in {
                                    for bb in 0..other.d_out {
                                        let vb = other.matrix
                                            [(ib * other.d_out + ab, jb * other.d_out + bb)];
                                        if vb == C64::ZERO {
                                            continue;
                                        }
                                        m[(row(ia, ib, aa, ab), row(ja, jb, ba, bb))] += va * vb;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        Self::build(m, d_in, d_out, false)
    }
}

/// JSON descriptor: `{"d_in":..,"d_out":..,"re":[[..]],"im":[[..]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChoiDescriptor {
    pub d_in: usize,
    pub d_out: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl ChoiDescriptor {
    pub fn to_choi(&self) -> Result<ChoiMatrix> {
        let d = self.d_in * self.d_out;
        if self.re.len() != d
            || self.im.len() != d
            || self.re.iter().any(|r| r.len() != d)
            || self.im.iter().any(|r| r.len() != d)
        {
            return Err(Error::Descriptor(format!("Choi matrix must be {d}×{d}")));
        }
        let m = CMatrix::from_fn(d, d, |i, j| C64::new(self.re[i][j], self.im[i][j]));
        ChoiMatrix::new(m, self.d_in, self.d_out)
    }

    pub fn from_choi(c: &ChoiMatrix) -> Self {
        let d = c.d_in * c.d_out;
        Self {
            d_in: c.d_in,
            d_out: c.d_out,
            re: (0..d)
                .map(|i| (0..d).map(|j| c.matrix[(i, j)].re).collect())
                .collect(),
            im: (0..d)
                .map(|i| (0..d).map(|j| c.matrix[(i, j)].im).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::rng::{random_density, random_unitary, rng_for};

    #[test]
    fn identity_channel_acts_trivially() {
        let id = ChoiMatrix::identity(2);
        let mut rng = rng_for(3, 1);
        let rho = random_density(&mut rng, &[2]);
        let out = id.apply(&rho).unwrap();
        assert!((out.matrix() - rho.matrix()).norm() < 1e-12);
        assert!(id.trace_preservation_deviation() < 1e-14);
    }

    #[test]
    fn dephasing_kills_off_diagonals() {
        let deph = ChoiMatrix::completely_dephasing(3);
        let mut rng = rng_for(4, 0);
        let rho = random_density(&mut rng, &[3]);
        let out = deph.apply(&rho).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert!((out.matrix()[(i, i)] - rho.matrix()[(i, i)]).norm() < 1e-12);
                } else {
                    assert!(out.matrix()[(i, j)].norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn unitary_choi_matches_direct_conjugation() {
        let mut rng = rng_for(5, 2);
        let u = random_unitary(&mut rng, 3);
        let chan = ChoiMatrix::from_unitary(&u).unwrap();
        let rho = random_density(&mut rng, &[3]);
        let via_choi = chan.apply(&rho).unwrap();
        let direct = &u * rho.matrix() * u.adjoint();
        assert!((via_choi.matrix() - direct).norm() < 1e-10);
    }

    #[test]
    fn tensor_factorizes_on_product_inputs() {
        let mut rng = rng_for(6, 0);
        let ua = random_unitary(&mut rng, 2);
        let ub = random_unitary(&mut rng, 3);
        let a = ChoiMatrix::from_unitary(&ua).unwrap();
        let b = ChoiMatrix::from_unitary(&ub).unwrap();
        let joint = a.tensor(&b).unwrap();
        let ra = random_density(&mut rng, &[2]);
        let rb = random_density(&mut rng, &[3]);
        let product = ra.tensor(&rb);
        let lhs = joint.apply_matrix(product.matrix());
        let rhs = a
            .apply_matrix(ra.matrix())
            .kronecker(&b.apply_matrix(rb.matrix()));
        assert!((lhs - rhs).norm() < 1e-10);
        // identity ⊗ identity = identity
        let ii = ChoiMatrix::identity(2)
            .tensor(&ChoiMatrix::identity(3))
            .unwrap();
        let out = ii.apply_matrix(product.matrix());
        assert!((out - product.matrix()).norm() < 1e-12);
    }

    #[test]
    fn descriptor_round_trip() {
        let mut rng = rng_for(7, 0);
        let u = random_unitary(&mut rng, 2);
        let chan = ChoiMatrix::from_unitary(&u).unwrap();
        let d = ChoiDescriptor::from_choi(&chan);
        let json = serde_json::to_string(&d).unwrap();
        let back: ChoiDescriptor = serde_json::from_str(&json).unwrap();
        let chan2 = back.to_choi().unwrap();
        assert!((chan.matrix() - chan2.matrix()).norm() < 1e-12);
    }

    #[test]
    fn dimension_guard() {
        assert!(matches!(
            ChoiMatrix::new(CMatrix::zeros(100, 100), 10, 10),
            Err(Error::DimensionOverflow { .. })
        ));
    }
}
