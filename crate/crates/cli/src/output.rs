use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::cli::Format;
use crate::error::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cell::Int(x) => write!(f, "{x}"),
            Cell::Num(x) => write!(f, "{x}"),
            Cell::Text(s) => write!(f, "{s}"),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<i64> for Cell {
    fn from(x: i64) -> Self {
        Cell::Int(x)
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Column headers carry units in brackets, e.g. `mu [eigenvalue]`.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::to_string).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    fn to_json(&self) -> Value {
        json!({ "schema": SCHEMA, "columns": self.columns, "rows": self.rows })
    }
}

/// Single writer for everything a run produces.
pub struct Output {
    dir: PathBuf,
    format: Format,
    written: Vec<String>,
    summary: serde_json::Map<String, Value>,
}

impl Output {
    pub fn new(dir: &Path, format: Format) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            format,
            written: Vec::new(),
            summary: serde_json::Map::new(),
        })
    }

    pub fn format(&self) -> Format {
        self.format
    }

    /// `name` or `stem.<format extension>`.
    pub fn file_name(&self, name: Option<&str>, stem: &str) -> String {
        name.map_or_else(|| format!("{stem}.{}", self.format.extension()), str::to_owned)
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(&path, contents)?;
        self.written.push(name.to_owned());
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(value)?;
        s.push('\n');
        self.text(name, &s)
    }

    pub fn table(&mut self, name: &str, table: &Table) -> Result<(), CliError> {
        self.table_as(name, table, self.format)
    }

    pub fn table_as(&mut self, name: &str, table: &Table, format: Format) -> Result<(), CliError> {
        match format {
            Format::Csv => self.text(name, &table.to_csv()),
            Format::Json => self.json(name, &table.to_json()),
        }
    }

    /// Scalar results recorded in the manifest.
    pub fn note(&mut self, key: &str, value: impl Serialize) -> Result<(), CliError> {
        self.summary.insert(key.to_owned(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn finish(mut self, command: &str, config: &Value, wall_time: f64) -> Result<(), CliError> {
        let canonical = serde_json::to_string(config)?;
        let hash: String = Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let manifest = json!({
            "schema": SCHEMA,
            "command": command,
            "config": config,
            "config_sha256": hash,
            "version": env!("CARGO_PKG_VERSION"),
            "wall_time_s": wall_time,
            "timestamp": timestamp,
            "outputs": self.written,
            "results": self.summary,
        });
        let name = "manifest.json".to_owned();
        let mut s = serde_json::to_string_pretty(&manifest)?;
        s.push('\n');
        fs::write(self.dir.join(&name), s)?;
        self.written.push(name);
        Ok(())
    }
}
