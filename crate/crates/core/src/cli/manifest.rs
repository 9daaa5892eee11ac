//! Provenance block attached to every output.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    /// Seconds since the epoch from `SOURCE_DATE_EPOCH`; `null` otherwise so
    /// that repeated runs are byte-identical.
    pub timestamp: Option<u64>,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: Value, seed: Option<u64>) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            config,
            seed,
            inputs: Vec::new(),
            timestamp: std::env::var("SOURCE_DATE_EPOCH")
                .ok()
                .and_then(|v| v.trim().parse().ok()),
        }
    }

    pub fn record(&mut self, path: &str, bytes: &[u8]) {
        let digest = Sha256::digest(bytes);
        self.inputs.push(InputDigest {
            path: path.to_string(),
            sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        });
    }

    /// Single-line JSON for `# manifest:` comment headers.
    pub fn to_comment(&self) -> String {
        format!(
            "# manifest: {}\n",
            serde_json::to_string(self).expect("manifest serializes")
        )
    }
}
