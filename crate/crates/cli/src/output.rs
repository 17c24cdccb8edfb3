use std::fmt;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// What a command produced.
pub struct Output {
    pub report: Value,
    pub csv: String,
    pub warnings: Vec<String>,
    /// Command-specific resolved parameters.
    pub params: Value,
}

#[derive(Debug)]
pub enum CliError {
    Core(rotlab_core::Error),
    Usage(String),
    Io(io::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut err = json!({ "kind": self.kind(), "message": self.to_string() });
        if let CliError::Core(rotlab_core::Error::BudgetExceeded(partial)) = self {
            err["partial"] = serde_json::to_value(partial).unwrap_or(Value::Null);
        }
        json!({ "schema_version": SCHEMA_VERSION, "error": err })
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Usage(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<rotlab_core::Error> for CliError {
    fn from(e: rotlab_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(io::Error::other(e))
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// `{schema_version, command, config, warnings, …report fields}`.
pub fn envelope(command: &str, config: Value, out: &Output) -> Value {
    let mut obj = Map::new();
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(command));
    obj.insert("config".into(), config);
    match &out.report {
        Value::Object(fields) => {
            for (k, v) in fields {
                obj.insert(k.clone(), v.clone());
            }
        }
        other => {
            obj.insert("report".into(), other.clone());
        }
    }
    obj.insert("warnings".into(), json!(out.warnings));
    Value::Object(obj)
}

/// Writes to `path` through a temporary file in the same directory, or to
/// stdout.
pub fn write_output(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
        }
        Some(p) => {
            let dir = match p.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(contents.as_bytes())?;
            tmp.flush()?;
            tmp.persist(p).map_err(|e| CliError::Io(e.error))?;
        }
    }
    Ok(())
}

/// CSV text from a header and rows of displayable cells.
pub fn csv_table<R, C>(header: &[&str], rows: R) -> CliResult<String>
where
    R: IntoIterator<Item = Vec<C>>,
    C: ToString,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|c| c.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
