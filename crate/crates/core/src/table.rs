//! Tagged numeric tables with CSV emission.
//!
//! Every experiment produces one of these: a header row, numeric rows
//! serialized with 17 significant digits, and trailing `#`-prefixed
//! metadata lines (config echo, seed, version).

use crate::error::Result;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone)]
pub struct ResultTable {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Vec<(String, String)>,
}

impl ResultTable {
    pub fn new(name: impl Into<String>, columns: Vec<&str>) -> Self {
        ResultTable {
            name: name.into(),
            columns: columns.into_iter().map(String::from).collect(),
            rows: Vec::new(),
            metadata: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn tag(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Serialize to CSV: header, rows (17 significant digits), trailing
    /// metadata comments.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    out.push(',');
                }
                let _ = write!(out, "{}", format_float(*v));
                first = false;
            }
            out.push('\n');
        }
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k} = {v}");
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// 17 significant digits, the smallest count that round-trips any f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}
