//! Output emission: CSV with a commented config header, flat result JSON
//! with 17-significant-digit numbers (lossless double round-trip), and
//! minimal SVG plots.

use qres_core::experiments::RunMeta;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

use crate::CliError;

/// A float rendered with 17 significant digits.
pub fn f64_17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no literals for these; be explicit rather than silent
        format!("\"{x}\"")
    }
}

/// Flat results object: `{"name": value, …}` with 17-digit numbers, plus
/// run metadata and the fully resolved config.
pub fn result_json<C: Serialize>(
    meta: &RunMeta,
    config: &C,
    results: &[(&str, f64)],
    extras: &[(&str, String)],
) -> String {
    let mut out = String::from("{");
    let _ = write!(
        out,
        "\"experiment\":{},\"version\":{},\"seed\":{},\"config_hash\":{}",
        serde_json::to_string(&meta.experiment).expect("string"),
        serde_json::to_string(&meta.version).expect("string"),
        meta.seed,
        serde_json::to_string(&meta.config_hash).expect("string"),
    );
    let cfg = serde_json::to_string(config).expect("config serializes");
    let _ = write!(out, ",\"config\":{cfg}");
    for (k, v) in results {
        let _ = write!(out, ",\"{k}\":{}", f64_17(*v));
    }
    for (k, v) in extras {
        let _ = write!(out, ",\"{k}\":{v}");
    }
    out.push('}');
    out
}

/// CSV with `# key=value` header comments, then serde-serialized records.
/// `extras` adds run-level summary values to the header (e.g. a located
/// threshold).
pub fn write_csv<R: Serialize, C: Serialize>(
    path: &Path,
    meta: &RunMeta,
    config: &C,
    extras: &[(&str, String)],
    records: &[R],
) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::Usage("no records to emit".into()));
    }
    let mut buf = Vec::new();
    let mut header = format!(
        "# experiment={} version={} seed={} config_hash={}\n# config={}\n",
        meta.experiment,
        meta.version,
        meta.seed,
        meta.config_hash,
        serde_json::to_string(config).expect("config serializes"),
    );
    for (k, v) in extras {
        let _ = writeln!(header, "# {k}={v}");
    }
    buf.extend_from_slice(header.as_bytes());
    {
        let mut writer = csv::Writer::from_writer(&mut buf);
        for r in records {
            writer
                .serialize(r)
                .map_err(|e| CliError::Io(e.to_string()))?;
        }
        writer.flush().map_err(|e| CliError::Io(e.to_string()))?;
    }
    std::fs::write(path, buf).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

/// JSON array of records with the meta/config envelope.
pub fn write_json_records<R: Serialize, C: Serialize>(
    path: &Path,
    meta: &RunMeta,
    config: &C,
    records: &[R],
) -> Result<(), CliError> {
    if records.is_empty() {
        return Err(CliError::Usage("no records to emit".into()));
    }
    #[derive(Serialize)]
    struct Envelope<'a, R: Serialize, C: Serialize> {
        experiment: &'a str,
        version: &'a str,
        seed: u64,
        config_hash: &'a str,
        config: &'a C,
        records: &'a [R],
    }
    let env = Envelope {
        experiment: &meta.experiment,
        version: &meta.version,
        seed: meta.seed,
        config_hash: &meta.config_hash,
        config,
        records,
    };
    let text = serde_json::to_string_pretty(&env).expect("records serialize");
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
