use std::io::Write;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde_json::{Map, Value};
use tempfile::NamedTempFile;

use crate::CliError;

pub const SCHEMA: &str = "hyperzero/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Where and how a command writes its document.
#[derive(Clone, Debug)]
pub struct OutputSpec {
    pub format: Format,
    /// `None` writes to standard output.
    pub path: Option<PathBuf>,
    /// Significant decimal digits for CSV numbers.
    pub precision: usize,
}

impl OutputSpec {
    /// An explicit format wins; otherwise the file extension decides, then the command default.
    pub fn resolve(format: Option<Format>, path: Option<PathBuf>, precision: usize, default: Format) -> Self {
        let path = path.filter(|p| p.as_os_str() != "-");
        let from_ext = path
            .as_deref()
            .and_then(Path::extension)
            .and_then(|e| e.to_str())
            .and_then(|e| Format::from_str(e, true).ok());
        OutputSpec {
            format: format.or(from_ext).unwrap_or(default),
            path,
            precision: precision.max(1),
        }
    }

    pub fn require(&self, allowed: &[Format]) -> Result<(), CliError> {
        if allowed.contains(&self.format) {
            Ok(())
        } else {
            Err(CliError::Usage(format!("format {:?} is not available for this command", self.format)))
        }
    }

    pub fn num(&self, v: f64) -> String {
        format!("{:.*e}", self.precision - 1, v)
    }

    pub fn write(&self, bytes: &[u8]) -> Result<(), CliError> {
        match &self.path {
            Some(p) => write_atomic(p, bytes),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes).and_then(|_| out.flush()).map_err(CliError::io)
            }
        }
    }

    /// Companion file next to the main output, e.g. `plot.svg.json`.
    pub fn sidecar(&self, suffix: &str) -> Option<PathBuf> {
        self.path.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(suffix);
            PathBuf::from(s)
        })
    }
}

/// Write through a temporary file in the target directory, then rename over the target.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(CliError::io)?;
    tmp.write_all(bytes).map_err(CliError::io)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        let perms = std::fs::Permissions::from_mode(0o644);
        tmp.as_file().set_permissions(perms).map_err(CliError::io)?;
    }
    tmp.as_file().sync_all().map_err(CliError::io)?;
    tmp.persist(path).map_err(|e| CliError::io(e.error))?;
    Ok(())
}

/// A JSON document with the schema key first.
pub fn document(fields: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    m.insert("schema".into(), Value::from(SCHEMA));
    for (k, v) in fields {
        m.insert(k.to_string(), v);
    }
    Value::Object(m)
}

pub fn json_bytes(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("JSON values always serialize");
    s.push(b'\n');
    s
}

pub fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Usage(e.to_string()))?;
    for r in rows {
        w.write_record(&r).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Usage(e.to_string()))
}
