//! Versioned checkpoint files: a config fingerprint, the last completed
//! block and the serialized accumulator. Resuming with a matching
//! fingerprint reproduces the identical final result as an uninterrupted
//! run; anything else is refused.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
pub struct Checkpoint<A> {
    pub version: u32,
    pub fingerprint: String,
    pub last_completed_block: u64,
    pub accumulator: A,
}

/// Stable hash of the scan-defining configuration.
pub fn fingerprint(parts: &[String]) -> String {
    let mut hasher = Sha256::new();
    for p in parts {
        hasher.update(p.as_bytes());
        hasher.update([0u8]);
    }
    hex(&hasher.finalize())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn save<A: Serialize>(path: &Path, cp: &Checkpoint<A>) -> Result<(), CliError> {
    let tmp = path.with_extension("tmp");
    let body = serde_json::to_vec_pretty(cp).map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(&tmp, body)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Serialize-by-reference variant for the per-block progress hook.
pub fn save_state<A: Serialize>(
    path: &Path,
    fingerprint: &str,
    last_completed_block: u64,
    accumulator: &A,
) -> Result<(), CliError> {
    #[derive(Serialize)]
    struct Borrowed<'a, A> {
        version: u32,
        fingerprint: &'a str,
        last_completed_block: u64,
        accumulator: &'a A,
    }
    let tmp = path.with_extension("tmp");
    let body = serde_json::to_vec_pretty(&Borrowed {
        version: CHECKPOINT_VERSION,
        fingerprint,
        last_completed_block,
        accumulator,
    })
    .map_err(|e| CliError::Io(e.to_string()))?;
    fs::write(&tmp, body)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Load a checkpoint for resuming. Missing file means a fresh start;
/// a corrupt file, a version bump or a fingerprint mismatch is refused
/// with a diagnostic rather than silently recomputed.
pub fn load<A: DeserializeOwned>(
    path: &Path,
    expected_fingerprint: &str,
) -> Result<Option<Checkpoint<A>>, CliError> {
    if !path.exists() {
        return Ok(None);
    }
    let body = fs::read(path)?;
    let cp: Checkpoint<A> = serde_json::from_slice(&body).map_err(|e| {
        CliError::Io(format!("corrupt checkpoint {}: {e}", path.display()))
    })?;
    if cp.version != CHECKPOINT_VERSION {
        return Err(CliError::Io(format!(
            "checkpoint {} has version {}, this build writes {}; refusing to resume",
            path.display(),
            cp.version,
            CHECKPOINT_VERSION
        )));
    }
    if cp.fingerprint != expected_fingerprint {
        return Err(CliError::Io(format!(
            "checkpoint {} was written by a different configuration; refusing to resume",
            path.display()
        )));
    }
    Ok(Some(cp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Acc {
        total: u64,
        items: Vec<u64>,
    }

    #[test]
    fn roundtrip_identity() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let fp = fingerprint(&["split".into(), "curve=E".into(), "xmax=100".into()]);
        let cp = Checkpoint {
            version: CHECKPOINT_VERSION,
            fingerprint: fp.clone(),
            last_completed_block: 7,
            accumulator: Acc { total: 42, items: vec![1, 2, 3] },
        };
        save(&path, &cp).unwrap();
        let back: Checkpoint<Acc> = load(&path, &fp).unwrap().unwrap();
        assert_eq!(back.version, cp.version);
        assert_eq!(back.fingerprint, cp.fingerprint);
        assert_eq!(back.last_completed_block, 7);
        assert_eq!(back.accumulator, cp.accumulator);
    }

    #[test]
    fn refusals() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let fp = fingerprint(&["a".into()]);
        let cp = Checkpoint {
            version: CHECKPOINT_VERSION,
            fingerprint: fp.clone(),
            last_completed_block: 0,
            accumulator: Acc { total: 0, items: vec![] },
        };
        save(&path, &cp).unwrap();
        // fingerprint mismatch refused
        let other = fingerprint(&["b".into()]);
        assert!(load::<Acc>(&path, &other).is_err());
        // corrupt file refused cleanly
        std::fs::write(&path, b"{ not json").unwrap();
        assert!(load::<Acc>(&path, &fp).is_err());
        // version bump refused
        let cp2 = Checkpoint { version: CHECKPOINT_VERSION + 1, ..cp };
        save(&path, &cp2).unwrap();
        assert!(load::<Acc>(&path, &fp).is_err());
        // missing file is a fresh start
        assert!(load::<Acc>(&dir.path().join("nope.json"), &fp).unwrap().is_none());
    }
}
