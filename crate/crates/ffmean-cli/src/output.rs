//! Deterministic output plumbing: every CSV starts with a comment line
//! recording the tool version, a hash of the full configuration, and the
//! tolerances in effect; files are written atomically (temp then rename).

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

pub(crate) struct OutputMeta {
    config_hash: String,
}

impl OutputMeta {
    pub fn new<C: Serialize>(command: &C) -> Self {
        let canonical = serde_json::to_string(command).unwrap_or_default();
        let digest = Sha256::digest(canonical.as_bytes());
        let mut hash = String::new();
        for b in digest.iter().take(6) {
            hash.push_str(&format!("{b:02x}"));
        }
        OutputMeta { config_hash: hash }
    }

    /// The `# ...` comment line carried by every CSV.
    pub fn comment(&self, tolerances: &str) -> String {
        format!(
            "# ffmean {} config={} {}\n",
            env!("CARGO_PKG_VERSION"),
            self.config_hash,
            tolerances
        )
    }
}

/// Writes to the path via a temporary file and rename, or to stdout.
pub(crate) fn emit(path: Option<&Path>, content: &str) -> Result<(), String> {
    match path {
        None => {
            print!("{content}");
            std::io::stdout().flush().map_err(|e| e.to_string())
        }
        Some(p) => {
            let tmp = p.with_extension("tmp");
            std::fs::write(&tmp, content).map_err(|e| format!("write {}: {e}", tmp.display()))?;
            std::fs::rename(&tmp, p).map_err(|e| format!("rename to {}: {e}", p.display()))
        }
    }
}
