//! Random channel sampling via Stinespring dilation.

use super::choi::{ChoiMatrix, MAX_CHOI_DIM};
use crate::experiments::rng::random_isometry;
use crate::{CMatrix, Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Sample a Haar-random channel: a Haar isometry `V: d_in → d_out·rank`
/// (QR of a complex Ginibre matrix with the phase fix), environment traced
/// out, returned in Choi form. Deterministic given `seed`.
pub fn random_channel(
    d_in: usize,
    d_out: usize,
    kraus_rank: usize,
    seed: u64,
) -> Result<ChoiMatrix> {
    if kraus_rank == 0 {
        return Err(Error::OutOfRange {
            name: "kraus_rank",
            value: 0.0,
            range: "≥ 1",
        });
    }
    if d_in * d_out > MAX_CHOI_DIM {
        return Err(Error::DimensionOverflow {
            dim: d_in * d_out,
            max: MAX_CHOI_DIM,
        });
    }
    if d_out * kraus_rank < d_in {
        return Err(Error::DimensionMismatch(format!(
            "isometry needs d_out·rank ≥ d_in ({d_out}·{kraus_rank} < {d_in})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = random_isometry(&mut rng, d_out * kraus_rank, d_in);
    // Kraus operators are the environment slices: K_e[a, i] = V[(e, a), i]
    let kraus: Vec<CMatrix> = (0..kraus_rank)
        .map(|e| CMatrix::from_fn(d_out, d_in, |a, i| v[(e * d_out + a, i)]))
        .collect();
    ChoiMatrix::from_kraus(&kraus, d_in, d_out)
}
