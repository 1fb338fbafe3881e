//! Report plumbing: run manifests, the JSON envelope, and atomic file
//! output.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::args::Cli;
use crate::commands::CliError;

/// Provenance block embedded in every report. All algorithms are
/// deterministic and seedless, so a manifest plus the tool version pins the
/// numeric content of the report exactly.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    /// The argv this run was invoked with.
    pub command_line: Vec<String>,
    /// True for every command: no RNG, no environment inputs.
    pub deterministic: bool,
    pub tool_version: String,
    /// Wall-clock start, RFC 3339 (informational; not part of the numeric
    /// content).
    pub timestamp: String,
    /// SHA-256 over the command line (the complete input of a run).
    pub input_digest: String,
    /// Files written by this run.
    pub output_paths: Vec<String>,
}

impl RunManifest {
    pub fn for_current_run() -> Self {
        let command_line: Vec<String> = std::env::args().collect();
        let mut h = Sha256::new();
        for a in &command_line {
            h.update(a.as_bytes());
            h.update([0u8]);
        }
        Self {
            command_line,
            deterministic: true,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339(),
            input_digest: format!("{:x}", h.finalize()),
            output_paths: Vec::new(),
        }
    }
}

/// JSON envelope: `{"manifest": …, "report": …}`.
#[derive(Debug, Serialize)]
pub struct Envelope {
    pub manifest: RunManifest,
    pub report: serde_json::Value,
}

/// Write `bytes` to `path` atomically (temp file in the same directory,
/// then rename).
pub fn atomic_write(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Emit a report: text lines (or the JSON envelope under `--json`) on
/// stdout, plus `<name>.json` under `--out` when given. Extra files written
/// by the command beforehand are recorded in the manifest.
pub fn emit(
    cli: &Cli,
    name: &str,
    report: serde_json::Value,
    text: &[String],
    extra_outputs: Vec<PathBuf>,
) -> Result<(), CliError> {
    let mut manifest = RunManifest::for_current_run();
    let mut outputs: Vec<PathBuf> = extra_outputs;
    if let Some(dir) = &cli.out {
        outputs.push(dir.join(format!("{name}.json")));
    }
    manifest.output_paths = outputs
        .iter()
        .map(|p| p.display().to_string())
        .collect();
    let envelope = Envelope { manifest, report };
    let json = serde_json::to_string_pretty(&envelope).expect("report serialization");
    if let Some(dir) = &cli.out {
        atomic_write(&dir.join(format!("{name}.json")), json.as_bytes())?;
    }
    if cli.json {
        println!("{json}");
    } else {
        for line in text {
            println!("{line}");
        }
    }
    Ok(())
}

/// Full round-trip float formatting for CSV cells.
pub fn fmt_f64(x: f64) -> String {
    let mut buf = ryu_like(x);
    if !buf.contains(['.', 'e', 'n', 'i']) {
        buf.push_str(".0");
    }
    buf
}

fn ryu_like(x: f64) -> String {
    // `{:?}` on f64 is the shortest representation that round-trips
    format!("{x:?}")
}
