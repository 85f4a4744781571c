//! CSV reports: fixed column sets, 12-significant-digit values, and
//! '#'-prefixed metadata lines. Emission is deterministic and parseable back
//! into an equal report.

use anyhow::{bail, ensure, Context, Result};

/// Formats a value with 12 significant digits, below quadrature tolerance
/// and above Monte Carlo noise.
pub fn fmt_sig(value: f64) -> String {
    if value.is_nan() {
        return "nan".into();
    }
    if value.is_infinite() {
        return if value > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{value:.11e}")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsvReport {
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
    meta: Vec<(String, String)>,
}

impl CsvReport {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        CsvReport {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
            meta: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: &str, value: impl std::fmt::Display) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push_row(&mut self, cells: Vec<String>) -> Result<()> {
        ensure!(
            cells.len() == self.columns.len(),
            "row has {} cells, report has {} columns",
            cells.len(),
            self.columns.len()
        );
        for cell in &cells {
            ensure!(
                !cell.contains(',') && !cell.contains('\n'),
                "cell {cell:?} would corrupt the CSV framing"
            );
        }
        ensure!(
            !cells[0].starts_with('#'),
            "leading cell must not look like a metadata line"
        );
        self.rows.push(cells);
        Ok(())
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn meta(&self) -> &[(String, String)] {
        &self.meta
    }

    /// Value of the named column in row `row`.
    pub fn cell(&self, row: usize, column: &str) -> Option<&str> {
        let at = self.columns.iter().position(|c| c == column)?;
        Some(self.rows.get(row)?[at].as_str())
    }

    pub fn emit(&self, include_meta: bool) -> String {
        let mut text = String::new();
        if include_meta {
            for (key, value) in &self.meta {
                text.push_str(&format!("# {key} = {value}\n"));
            }
        }
        text.push_str(&self.columns.join(","));
        text.push('\n');
        for row in &self.rows {
            text.push_str(&row.join(","));
            text.push('\n');
        }
        text
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut meta = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# ") {
                let (key, value) = rest
                    .split_once(" = ")
                    .with_context(|| format!("malformed metadata line {line:?}"))?;
                meta.push((key.to_string(), value.to_string()));
                continue;
            }
            let cells: Vec<String> = line.split(',').map(str::to_string).collect();
            match &columns {
                None => columns = Some(cells),
                Some(header) => {
                    ensure!(
                        cells.len() == header.len(),
                        "row {line:?} has {} cells, header has {}",
                        cells.len(),
                        header.len()
                    );
                    rows.push(cells);
                }
            }
        }
        let Some(columns) = columns else {
            bail!("report has no header row");
        };
        Ok(CsvReport {
            columns,
            rows,
            meta,
        })
    }
}
