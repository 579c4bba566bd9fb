//! CSV and JSON artifacts.
//!
//! Every CSV starts with one `#` metadata line (command, schema version,
//! generation time, and free-form notes), followed by a header whose first
//! column is `schema_version`. Only the metadata line varies between
//! identical runs.

use std::fmt::Display;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use stein_core::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// An in-memory table written as one CSV artifact.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Header and rows without the metadata line.
    pub fn body(&self) -> String {
        let mut out = String::new();
        out.push_str("schema_version");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&SCHEMA_VERSION.to_string());
            for cell in row {
                out.push(',');
                out.push_str(cell);
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path, command: &str, notes: &str) -> Result<()> {
        let mut out = BufWriter::new(fs::File::create(path)?);
        writeln!(out, "{}", metadata_line(command, notes))?;
        out.write_all(self.body().as_bytes())?;
        out.flush()?;
        Ok(())
    }
}

pub fn metadata_line(command: &str, notes: &str) -> String {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut line = format!("# stein-audit {command} schema_version={SCHEMA_VERSION} generated_unix={secs}");
    if !notes.is_empty() {
        line.push(' ');
        line.push_str(notes);
    }
    line
}

/// Shortest round-trip representation of a float; `nan` for missing values.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:?}")
    }
}

pub fn cell(x: impl Display) -> String {
    x.to_string()
}

/// Writes pretty JSON; objects gain a top-level `schema_version` field.
pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut json = serde_json::to_value(value)?;
    if let serde_json::Value::Object(fields) = &mut json {
        fields.insert("schema_version".into(), SCHEMA_VERSION.into());
    }
    let mut out = BufWriter::new(fs::File::create(path)?);
    serde_json::to_writer_pretty(&mut out, &json)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}
