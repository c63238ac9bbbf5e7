use std::io::Write;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::result::{RunConfig, RESULT_FORMAT};

/// Environment variable naming the directory for content-addressed results.
pub const CACHE_DIR_VAR: &str = "QCONSTELL_CACHE_DIR";
/// Used when neither `--out` nor the environment variable is set.
pub const DEFAULT_CACHE_DIR: &str = ".qconstell";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn read_input(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

/// Parses an input file. A result file written by this tool stands in for
/// the object (or certificate, when `field` says so) it carries.
pub fn parse_input<T: DeserializeOwned>(bytes: &[u8], field: &str, what: &str) -> Result<T, CliError> {
    let mut v: Value =
        serde_json::from_slice(bytes).map_err(|e| CliError::Malformed(format!("input is not JSON: {e}")))?;
    if v.get("format").and_then(Value::as_str) == Some(RESULT_FORMAT) {
        v = v
            .get_mut(field)
            .map(Value::take)
            .ok_or_else(|| CliError::Malformed(format!("result file has no {field:?} field")))?;
    }
    serde_json::from_value(v).map_err(|e| CliError::Malformed(format!("expected {what}: {e}")))
}

/// `<dir>/<command>-<problem>-<hash>.json`, where the hash covers the whole
/// run configuration apart from the output path.
pub fn cache_path(run: &RunConfig) -> PathBuf {
    let dir = std::env::var_os(CACHE_DIR_VAR).map(PathBuf::from).unwrap_or_else(|| DEFAULT_CACHE_DIR.into());
    let mut keyed = run.clone();
    keyed.output.clear();
    let key = serde_json::to_vec(&keyed).expect("run configs serialize");
    let problem = run.problem.map_or("none", |p| p.name());
    dir.join(format!("{}-{}-{}.json", run.command.name(), problem, &sha256_hex(&key)[..16]))
}

/// Writes to a temporary file next to `path`, then renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(io)?;
    tmp.write_all(contents).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(io)?;
    }
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
