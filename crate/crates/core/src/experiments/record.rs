//! Common reproduction-run metadata: every report carries the seed and the
//! hash of its fully-resolved configuration, which together regenerate the
//! run exactly.

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct RunMeta {
    pub experiment: String,
    pub version: String,
    pub seed: u64,
    pub config_hash: String,
    /// Wall-clock start (unix seconds). Not serialized into outputs so
    /// identical runs emit identical bytes.
    #[serde(skip)]
    pub started_unix: u64,
}

impl RunMeta {
    pub fn new<C: Serialize>(experiment: &str, seed: u64, config: &C) -> Self {
        Self {
            experiment: experiment.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config_hash: config_hash(config),
            started_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

/// First 16 hex chars of the SHA-256 of the canonical (serde_json) encoding.
pub fn config_hash<C: Serialize>(config: &C) -> String {
    let canon = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(canon.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}
