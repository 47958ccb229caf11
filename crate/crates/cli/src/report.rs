//! Result tables and their CSV / JSON renderings.

use std::io::Write;

use serde::Serialize;

use crate::error::{config_err, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            metadata: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn max_of(&self, name: &str) -> Option<f64> {
        self.column(name)
            .map(|c| c.into_iter().fold(f64::NEG_INFINITY, f64::max))
    }

    /// Keeps `step`, `t` and the requested observables, in request order.
    pub fn select(&self, outputs: &[String]) -> Result<Table> {
        if outputs.is_empty() {
            return Ok(self.clone());
        }
        let mut keep: Vec<usize> = Vec::new();
        for fixed in ["step", "t"] {
            if let Some(i) = self.columns.iter().position(|c| c == fixed) {
                keep.push(i);
            }
        }
        for name in outputs {
            match self.columns.iter().position(|c| c == name) {
                Some(i) if !keep.contains(&i) => keep.push(i),
                Some(_) => {}
                None => {
                    return Err(config_err(format!(
                        "unknown output '{name}' for table '{}'; available: {}",
                        self.name,
                        self.columns.join(", ")
                    )))
                }
            }
        }
        Ok(Table {
            name: self.name.clone(),
            metadata: self.metadata.clone(),
            columns: keep.iter().map(|&i| self.columns[i].clone()).collect(),
            rows: self.rows.iter().map(|r| keep.iter().map(|&i| r[i]).collect()).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub scenario: String,
    pub metadata: Vec<(String, String)>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            metadata: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.push((key.to_string(), value.to_string()));
        self
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn select(&self, outputs: &[String]) -> Result<Report> {
        Ok(Report {
            scenario: self.scenario.clone(),
            metadata: self.metadata.clone(),
            tables: self.tables.iter().map(|t| t.select(outputs)).collect::<Result<_>>()?,
        })
    }
}

/// 17 significant digits; integer columns are written without exponent.
fn format_cell(column: &str, v: f64) -> String {
    if column == "step" && v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.16e}")
    }
}

/// Metadata as `# key = value` lines, then one CSV block per table.
pub fn write_csv<W: Write>(report: &Report, mut out: W) -> Result<()> {
    writeln!(out, "# scenario = {}", report.scenario)?;
    for (k, v) in &report.metadata {
        writeln!(out, "# {k} = {v}")?;
    }
    for (i, table) in report.tables.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
        }
        writeln!(out, "# table = {}", table.name)?;
        for (k, v) in &table.metadata {
            writeln!(out, "# {k} = {v}")?;
        }
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row.iter().zip(&table.columns).map(|(v, c)| format_cell(c, *v)))?;
        }
        w.flush()?;
    }
    Ok(())
}

pub fn write_json<W: Write>(report: &Report, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, report)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut t = Table::new("tau=0.1", &["step", "t", "a", "b"]).meta("tau", 0.1);
        t.push(vec![0.0, 0.0, 1.0, 2.0]);
        t.push(vec![1.0, 0.1, 0.5, 1.0 / 3.0]);
        let mut r = Report::new("demo").meta("gamma", 1.0);
        r.tables.push(t);
        r
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        write_csv(&sample(), &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# scenario = demo");
        assert_eq!(lines[3], "# tau = 0.1");
        assert_eq!(lines[4], "step,t,a,b");
        assert_eq!(
            lines[6],
            "1,1.0000000000000001e-1,5.0000000000000000e-1,3.3333333333333331e-1"
        );
    }

    #[test]
    fn selecting_outputs() {
        let r = sample().select(&["b".into()]).unwrap();
        assert_eq!(r.tables[0].columns, vec!["step", "t", "b"]);
        assert!(sample().select(&["nope".into()]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut buf = Vec::new();
        write_json(&sample(), &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["tables"][0]["columns"][2], "a");
        assert_eq!(v["tables"][0]["rows"][1][3], 1.0 / 3.0);
    }
}
