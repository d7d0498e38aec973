//! Table files (JSON, CSV, aligned text) and database manifests.
//!
//! Table JSON:
//!
//! ```json
//! {
//!   "name": "tbl4",
//!   "labels": ["in", "out", "und", "lc"],
//!   "header": ["aE", "aF", "aG"],
//!   "rows": [
//!     ["in", "in", "out"]
//!   ]
//! }
//! ```
//!
//! Headers are written sorted by argument id and rows in canonical order, so
//! equal tables serialize to identical bytes. Manifests list table files
//! relative to the manifest's own directory:
//!
//! ```json
//! {"labels": ["in", "out", "und", "lc"], "tables": [{"name": "tbl4", "path": "tbl4.json"}]}
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::af::Argument;
use crate::db::Database;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::table::{ArgLabellingTable, Row};

#[derive(Debug, Deserialize)]
struct TableFile {
    name: String,
    #[serde(default)]
    labels: Option<Vec<Label>>,
    header: Vec<Argument>,
    rows: Vec<Vec<Label>>,
}

#[derive(Debug, Deserialize)]
struct ManifestFile {
    labels: Vec<Label>,
    tables: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
struct ManifestEntry {
    name: String,
    path: String,
}

/// A table read from a file, with the name and alphabet it declared.
#[derive(Debug, Clone)]
pub struct NamedTable {
    pub name: String,
    pub labels: Option<Vec<Label>>,
    pub table: ArgLabellingTable,
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("string serializes")
}

fn json_list<T: AsRef<str>>(items: impl IntoIterator<Item = T>) -> String {
    let items: Vec<String> = items.into_iter().map(|s| quote(s.as_ref())).collect();
    format!("[{}]", items.join(", "))
}

pub fn table_to_json(name: &str, labels: &[Label], table: &ArgLabellingTable) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    writeln!(out, "  \"name\": {},", quote(name)).unwrap();
    writeln!(out, "  \"labels\": {},", json_list(labels.iter().map(|l| l.as_str()))).unwrap();
    writeln!(out, "  \"header\": {},", json_list(table.header().iter().map(|a| a.id()))).unwrap();
    if table.is_empty() {
        out.push_str("  \"rows\": []\n");
    } else {
        out.push_str("  \"rows\": [\n");
        let rows: Vec<String> = table
            .raw_rows()
            .iter()
            .map(|r| format!("    {}", json_list(r.iter().map(|l| l.as_str()))))
            .collect();
        out.push_str(&rows.join(",\n"));
        out.push_str("\n  ]\n");
    }
    out.push_str("}\n");
    out
}

/// Reads a table; header order in the file may be arbitrary.
pub fn table_from_json(text: &str) -> Result<NamedTable> {
    let file: TableFile = serde_json::from_str(text)?;
    let table = table_from_columns(file.header, file.rows)?;
    if let Some(labels) = &file.labels {
        for row in table.raw_rows() {
            if let Some(l) = row.iter().find(|l| !labels.contains(l)) {
                return Err(Error::LabelNotInAlphabet(*l));
            }
        }
    }
    Ok(NamedTable {
        name: file.name,
        labels: file.labels,
        table,
    })
}

fn table_from_columns(header: Vec<Argument>, rows: Vec<Vec<Label>>) -> Result<ArgLabellingTable> {
    let sorted: BTreeSet<Argument> = header.iter().cloned().collect();
    if sorted.len() != header.len() {
        return Err(Error::DomainMismatch("duplicate argument in header".into()));
    }
    // Position of each sorted column in the file's column order.
    let order: Vec<usize> = sorted
        .iter()
        .map(|a| header.iter().position(|h| h == a).expect("present"))
        .collect();
    let mut out: Vec<Row> = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != header.len() {
            return Err(Error::DomainMismatch(format!(
                "row has {} labels, header has {} arguments",
                row.len(),
                header.len()
            )));
        }
        out.push(order.iter().map(|&i| row[i]).collect());
    }
    ArgLabellingTable::from_raw(sorted, out)
}

pub fn table_to_csv(table: &ArgLabellingTable) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
    writer.write_record(table.header().iter().map(|a| a.id()))?;
    for row in table.raw_rows() {
        writer.write_record(row.iter().map(|l| l.as_str()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn table_from_csv(text: &str) -> Result<ArgLabellingTable> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()?
        .iter()
        .map(Argument::new)
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for record in reader.records() {
        rows.push(record?.iter().map(str::parse).collect::<Result<Vec<Label>>>()?);
    }
    table_from_columns(header, rows)
}

/// Column-aligned rendering for terminals.
pub fn table_to_text(table: &ArgLabellingTable) -> String {
    let widths: Vec<usize> = table
        .header()
        .iter()
        .map(|a| a.id().chars().count().max(3))
        .collect();
    let line = |cells: Vec<&str>| -> String {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    out.push_str(&line(table.header().iter().map(|a| a.id()).collect()));
    out.push('\n');
    for row in table.raw_rows() {
        out.push_str(&line(row.iter().map(|l| l.as_str()).collect()));
        out.push('\n');
    }
    let n = table.len();
    writeln!(out, "({n} row{})", if n == 1 { "" } else { "s" }).unwrap();
    out
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a table file, choosing JSON or CSV by extension (JSON otherwise).
pub fn read_table(path: &Path) -> Result<NamedTable> {
    let text = read(path)?;
    if path.extension().and_then(|e| e.to_str()) == Some("csv") {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("table")
            .to_string();
        Ok(NamedTable {
            name,
            labels: None,
            table: table_from_csv(&text)?,
        })
    } else {
        table_from_json(&text)
    }
}

/// Builds a database from manifest text, fetching table files by path.
pub fn database_from_manifest(
    manifest: &str,
    mut load: impl FnMut(&str) -> Result<NamedTable>,
) -> Result<Database> {
    let file: ManifestFile = serde_json::from_str(manifest)?;
    let mut tables = Vec::with_capacity(file.tables.len());
    for entry in file.tables {
        let named = load(&entry.path)?;
        tables.push((entry.name, named.table));
    }
    Database::new(file.labels, tables)
}

pub fn load_manifest(path: &Path) -> Result<Database> {
    let text = read(path)?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    database_from_manifest(&text, |p| read_table(&dir.join(p)))
}
