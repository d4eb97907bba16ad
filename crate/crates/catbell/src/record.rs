//! Result records and their CSV and JSON renderings.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::format::sig12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Deterministic linear algebra on the simulated state.
    Exact,
    /// Monte Carlo estimate (shots or trajectories).
    Sampled,
    /// Closed-form reference value.
    Analytic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedResult {
    pub name: String,
    pub value: f64,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => sig12(*x),
                    Cell::Text(s) => csv_text(s),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub protocol: String,
    pub parameters: serde_json::Value,
    pub results: Vec<NamedResult>,
    pub table: Table,
    #[serde(default)]
    pub notes: Vec<String>,
    /// `null` unless `output.record_timing` is set.
    pub wall_clock_seconds: Option<f64>,
}

impl ResultRecord {
    pub fn new(protocol: &str, parameters: serde_json::Value) -> Self {
        ResultRecord {
            protocol: protocol.to_string(),
            parameters,
            results: Vec::new(),
            table: Table::default(),
            notes: Vec::new(),
            wall_clock_seconds: None,
        }
    }

    pub fn result(&mut self, name: &str, value: f64, provenance: Provenance) {
        self.results.push(NamedResult {
            name: name.to_string(),
            value,
            provenance,
        });
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.results
            .iter()
            .find(|r| r.name == name)
            .map(|r| r.value)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    /// The table, or `name,value,provenance` rows when the protocol has no
    /// table of its own.
    pub fn to_csv(&self) -> String {
        if !self.table.columns.is_empty() {
            return self.table.to_csv();
        }
        let mut t = Table::new(&["name", "value", "provenance"]);
        for r in &self.results {
            let prov = match r.provenance {
                Provenance::Exact => "exact",
                Provenance::Sampled => "sampled",
                Provenance::Analytic => "analytic",
            };
            t.push(vec![r.name.as_str().into(), r.value.into(), prov.into()]);
        }
        t.to_csv()
    }

    /// Short text for the terminal.
    pub fn summary(&self) -> String {
        let mut out = format!("{}\n", self.protocol);
        for r in &self.results {
            let _ = writeln!(
                out,
                "  {:<32} {:>20}  ({:?})",
                r.name,
                sig12(r.value),
                r.provenance
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    std::io::Write::write_all(&mut tmp, contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// `{dir}/{protocol}.{ext}`.
pub fn output_path(dir: &Path, protocol: &str, ext: &str) -> PathBuf {
    dir.join(format!("{protocol}.{ext}"))
}
