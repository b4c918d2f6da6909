// Copyright 2026 Spinflop Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(into = "String")]
pub enum RowStatus {
    Ok,
    Clamped,
    Error(&'static str),
}

impl RowStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RowStatus::Ok)
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowStatus::Ok => f.write_str("ok"),
            RowStatus::Clamped => f.write_str("clamped"),
            RowStatus::Error(code) => write!(f, "error:{code}"),
        }
    }
}

impl From<RowStatus> for String {
    fn from(s: RowStatus) -> String {
        s.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableMetadata {
    /// Names of the swept columns, outermost first.
    pub axes: Vec<String>,
    pub params: BTreeMap<String, Value>,
    /// Seconds since the Unix epoch; 0 unless the caller sets it.
    pub timestamp: u64,
    pub tool_version: String,
}

/// Rectangular result set with one status per row.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    status: Vec<RowStatus>,
    pub metadata: TableMetadata,
}

impl SweepTable {
    pub fn new(columns: Vec<String>, axes: Vec<String>) -> Self {
        SweepTable {
            columns,
            rows: Vec::new(),
            status: Vec::new(),
            metadata: TableMetadata {
                axes,
                params: BTreeMap::new(),
                timestamp: 0,
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
            },
        }
    }

    pub fn push_row(&mut self, values: Vec<f64>, status: RowStatus) {
        assert_eq!(values.len(), self.columns.len(), "row width must match header");
        self.rows.push(values);
        self.status.push(status);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn status(&self) -> &[RowStatus] {
        &self.status
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Comma-separated, header first, `status` last. Numbers use the
    /// shortest form that round-trips to the same `f64`, switching to
    /// exponent notation for very small or large magnitudes.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{},status", self.columns.join(","))?;
        for (row, status) in self.rows.iter().zip(&self.status) {
            for v in row {
                write!(out, "{v:?},")?;
            }
            writeln!(out, "{status}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ASCII")
    }

    /// `{columns, rows, metadata}`; non-finite numbers become `null`.
    pub fn to_json(&self) -> Value {
        let mut columns: Vec<Value> = self.columns.iter().map(|c| json!(c)).collect();
        columns.push(json!("status"));
        let rows: Vec<Value> = self
            .rows
            .iter()
            .zip(&self.status)
            .map(|(row, status)| {
                let mut cells: Vec<Value> = row
                    .iter()
                    .map(|&v| if v.is_finite() { json!(v) } else { Value::Null })
                    .collect();
                cells.push(json!(status.to_string()));
                Value::Array(cells)
            })
            .collect();
        json!({
            "columns": columns,
            "rows": rows,
            "metadata": self.metadata,
        })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)
    }

    /// A gnuplot script plotting `phase_over_pi` from `data_file`, which is
    /// referenced verbatim (normally a path relative to the script).
    pub fn gnuplot_script(&self, data_file: &str) -> String {
        let col = |name: &str| self.column_index(name).map(|i| i + 1);
        let y = col("phase_over_pi").unwrap_or(self.columns.len());
        let mut s = String::new();
        s.push_str("set datafile separator comma\n");
        s.push_str("set key autotitle columnhead\n");
        s.push_str("set ylabel 'phase / pi'\n");
        let axes: Vec<usize> = self.metadata.axes.iter().filter_map(|a| col(a)).collect();
        match axes.as_slice() {
            [x, t, ..] => {
                s.push_str(&format!("set xlabel '{}'\n", self.columns[x - 1]));
                s.push_str(&format!("set ylabel '{}'\n", self.columns[t - 1]));
                s.push_str("set zlabel 'phase / pi'\n");
                s.push_str(&format!(
                    "splot '{data_file}' using {x}:{t}:{y} with points pointtype 7 pointsize 0.5 palette notitle\n"
                ));
            }
            [x] => {
                s.push_str(&format!("set xlabel '{}'\n", self.columns[x - 1]));
                match col("curve") {
                    Some(c) => {
                        let curves = self
                            .column("curve")
                            .map(|v| v.iter().fold(0.0f64, |m, &x| m.max(x)) as usize)
                            .unwrap_or(0);
                        s.push_str(&format!(
                            "plot for [c=0:{curves}] '{data_file}' using (${c}==c ? ${x} : 1/0):{y} with lines title sprintf('curve %d', c)\n"
                        ));
                    }
                    None => s.push_str(&format!(
                        "plot '{data_file}' using {x}:{y} with lines notitle\n"
                    )),
                }
            }
            [] => s.push_str(&format!("plot '{data_file}' using 0:{y} with lines notitle\n")),
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepTable {
        let mut t = SweepTable::new(vec!["field_b".into(), "phase".into()], vec!["field_b".into()]);
        t.push_row(vec![0.1, 0.1 + 0.2], RowStatus::Ok);
        t.push_row(vec![3.0, f64::NAN], RowStatus::Error("beyond_critical"));
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv_string();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "field_b,phase,status");
        assert_eq!(lines[1], "0.1,0.30000000000000004,ok");
        assert_eq!(lines[2], "3.0,NaN,error:beyond_critical");
        let back: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(back, 0.1 + 0.2);
    }

    #[test]
    fn json_layout() {
        let v = sample().to_json();
        assert_eq!(v["columns"][2], "status");
        assert_eq!(v["rows"][1][1], Value::Null);
        assert_eq!(v["rows"][1][2], "error:beyond_critical");
        assert!(v["metadata"]["tool_version"].is_string());
        assert_eq!(v["metadata"]["timestamp"], 0);
    }

    #[test]
    #[should_panic]
    fn ragged_rows_rejected() {
        sample().push_row(vec![1.0], RowStatus::Ok);
    }
}
