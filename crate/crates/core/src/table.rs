//! String tables: rendering, CSV parsing and cell-level diffs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A rectangular table of rendered cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let header = rdr
            .headers()
            .map_err(|e| Error::Schema(format!("csv header: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        let rows = rdr
            .records()
            .map(|r| {
                r.map(|rec| rec.iter().map(str::to_string).collect())
                    .map_err(|e| Error::Schema(format!("csv row: {e}")))
            })
            .collect::<Result<_>>()?;
        Ok(Self { header, rows })
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("write to memory");
        for r in &self.rows {
            w.write_record(r).expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let line = |cells: &[String]| {
            let cells: Vec<String> = cells.iter().map(|c| c.replace('|', "\\|")).collect();
            format!("| {} |\n", cells.join(" | "))
        };
        out.push_str(&line(&self.header));
        out.push_str(&format!("|{}\n", "---|".repeat(self.header.len())));
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }

    /// Rows as JSON objects keyed by header names.
    pub fn to_json_rows(&self) -> serde_json::Value {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let obj = self
                    .header
                    .iter()
                    .zip(r)
                    .map(|(h, c)| (h.clone(), serde_json::Value::String(c.clone())))
                    .collect::<serde_json::Map<_, _>>();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

/// One difference between two tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CellDiff {
    Header {
        actual: Vec<String>,
        expected: Vec<String>,
    },
    RowCount {
        actual: usize,
        expected: usize,
    },
    Cell {
        row: usize,
        column: String,
        actual: String,
        expected: String,
    },
}

impl fmt::Display for CellDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellDiff::Header { actual, expected } => write!(f, "header {actual:?} != expected {expected:?}"),
            CellDiff::RowCount { actual, expected } => write!(f, "{actual} rows != expected {expected}"),
            CellDiff::Cell {
                row,
                column,
                actual,
                expected,
            } => write!(f, "row {row}, column {column}: {actual:?} != expected {expected:?}"),
        }
    }
}

/// Cell-level diff; an empty result means the tables agree.
pub fn diff_tables(actual: &Table, expected: &Table) -> Vec<CellDiff> {
    let mut out = Vec::new();
    if actual.header != expected.header {
        out.push(CellDiff::Header {
            actual: actual.header.clone(),
            expected: expected.header.clone(),
        });
        return out;
    }
    if actual.rows.len() != expected.rows.len() {
        out.push(CellDiff::RowCount {
            actual: actual.rows.len(),
            expected: expected.rows.len(),
        });
    }
    for (i, (a, e)) in actual.rows.iter().zip(&expected.rows).enumerate() {
        for ((col, x), y) in actual.header.iter().zip(a).zip(e) {
            if x != y {
                out.push(CellDiff::Cell {
                    row: i + 1,
                    column: col.clone(),
                    actual: x.clone(),
                    expected: y.clone(),
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), "(0,5)".into()]);
        t.push(vec!["2".into(), "—".into()]);
        t
    }

    #[test]
    fn identical_tables_have_no_diff() {
        assert!(diff_tables(&sample(), &sample()).is_empty());
    }

    #[test]
    fn one_perturbed_cell() {
        let mut t = sample();
        t.rows[1][0] = "3".into();
        let d = diff_tables(&t, &sample());
        assert_eq!(d.len(), 1);
        assert!(matches!(&d[0], CellDiff::Cell { row: 2, .. }));
    }

    #[test]
    fn row_count_mismatch() {
        let mut t = sample();
        t.rows.pop();
        assert!(matches!(
            diff_tables(&t, &sample())[0],
            CellDiff::RowCount { actual: 1, expected: 2 }
        ));
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        assert_eq!(Table::from_csv(&t.to_csv()).unwrap(), t);
    }
}
