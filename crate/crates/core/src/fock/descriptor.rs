//! JSON state descriptors consumed and produced by the CLI.

use super::build;
use super::state::DensityOperator;
use crate::{CMatrix, Error, Result, C64};
use serde::{Deserialize, Serialize};

/// Fock-space state descriptor. Unknown keys are rejected.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateDescriptor {
    Coherent {
        alpha: [f64; 2],
        dim: usize,
    },
    Cat {
        alpha: [f64; 2],
        dim: usize,
    },
    Fock {
        n: usize,
        dim: usize,
    },
    LossyPhoton {
        q: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Dm {
        dims: Vec<usize>,
        re: Vec<Vec<f64>>,
        im: Vec<Vec<f64>>,
    },
}

impl StateDescriptor {
    /// Materialize the described state.
    pub fn to_density(&self) -> Result<DensityOperator> {
        match self {
            Self::Coherent { alpha, dim } => {
                Ok(build::make_coherent(C64::new(alpha[0], alpha[1]), *dim)?.to_density())
            }
            Self::Cat { alpha, dim } => {
                Ok(build::make_cat(C64::new(alpha[0], alpha[1]), *dim)?.to_density())
            }
            Self::Fock { n, dim } => Ok(build::make_fock(*n, *dim)?.to_density()),
            Self::LossyPhoton { q, dim } => build::make_lossy_photon_dim(*q, dim.unwrap_or(3)),
            Self::Dm { dims, re, im } => {
                let n: usize = dims.iter().product();
                if re.len() != n
                    || im.len() != n
                    || re.iter().any(|r| r.len() != n)
                    || im.iter().any(|r| r.len() != n)
                {
                    return Err(Error::Descriptor(format!(
                        "dm matrix must be {n}×{n} for dims {dims:?}"
                    )));
                }
                let m = CMatrix::from_fn(n, n, |i, j| C64::new(re[i][j], im[i][j]));
                DensityOperator::new(m, dims.clone())
            }
        }
    }

    /// Raw-matrix descriptor of an existing state.
    pub fn from_density(rho: &DensityOperator) -> Self {
        let n = rho.total_dim();
        let re = (0..n)
            .map(|i| (0..n).map(|j| rho.matrix()[(i, j)].re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..n).map(|j| rho.matrix()[(i, j)].im).collect())
            .collect();
        Self::Dm {
            dims: rho.dims().to_vec(),
            re,
            im,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_spec_examples() {
        let c: StateDescriptor =
            serde_json::from_str(r#"{"kind":"coherent","alpha":[1.0,0.0],"dim":20}"#).unwrap();
        assert!(c.to_density().is_ok());
        let f: StateDescriptor = serde_json::from_str(r#"{"kind":"fock","n":1,"dim":4}"#).unwrap();
        assert!(f.to_density().is_ok());
        let l: StateDescriptor =
            serde_json::from_str(r#"{"kind":"lossy_photon","q":0.8}"#).unwrap();
        let rho = l.to_density().unwrap();
        assert!((rho.matrix()[(1, 1)].re - 0.8).abs() < 1e-15);
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = r#"{"kind":"fock","n":1,"dim":4,"oops":3}"#;
        assert!(serde_json::from_str::<StateDescriptor>(bad).is_err());
    }

    #[test]
    fn dm_round_trip_is_exact() {
        let rho = build::make_cat(C64::new(1.2, 0.3), 16)
            .unwrap()
            .to_density();
        let desc = StateDescriptor::from_density(&rho);
        let json = serde_json::to_string(&desc).unwrap();
        let back: StateDescriptor = serde_json::from_str(&json).unwrap();
        let rho2 = back.to_density().unwrap();
        assert!((rho.matrix() - rho2.matrix()).norm() < 1e-12);
    }
}
