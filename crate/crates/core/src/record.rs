//! Per-run metric logs and their CSV form.
//!
//! A CSV starts with `# key=value` comment lines echoing the configuration
//! that produced it, followed by one header line and one row per logging
//! interval. Missing values are empty fields.

use crate::error::{Error, Result};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

/// Largest parameter dimension logged in full; bigger runs log a norm.
pub const FULL_PARAM_LIMIT: usize = 8;

pub const BASE_COLUMNS: [&str; 7] = [
    "index",
    "steps",
    "episodes",
    "episode_return",
    "running_return",
    "value_error",
    "param_hash",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamColumns {
    /// Tabular runs: no parameter columns.
    None,
    /// `param_0 .. param_{k-1}` plus `diverged`.
    Full(usize),
    /// `param_norm` plus `diverged`.
    Norm,
}

impl ParamColumns {
    pub fn for_dimension(dim: usize) -> Self {
        if dim <= FULL_PARAM_LIMIT {
            ParamColumns::Full(dim)
        } else {
            ParamColumns::Norm
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricRow {
    pub index: u64,
    pub steps: u64,
    pub episodes: u64,
    pub episode_return: Option<f64>,
    pub running_return: Option<f64>,
    pub value_error: Option<f64>,
    pub param_hash: String,
    pub params: Vec<f64>,
    pub diverged: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub header: Vec<(String, String)>,
    pub param_columns: ParamColumns,
    pub rows: Vec<MetricRow>,
    /// `# key=value` lines written after the rows (run outcomes).
    pub trailer: Vec<(String, String)>,
    pub failure: Option<String>,
}

/// Short stable digest of a parameter vector.
pub fn param_hash(params: &[f64]) -> String {
    let mut h = Sha256::new();
    for x in params {
        h.update(x.to_le_bytes());
    }
    let digest = h.finalize();
    let mut s = String::with_capacity(16);
    for b in &digest[..8] {
        let _ = write!(s, "{b:02x}");
    }
    s
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl RunRecord {
    pub fn new(param_columns: ParamColumns) -> Self {
        Self {
            header: Vec::new(),
            param_columns,
            rows: Vec::new(),
            trailer: Vec::new(),
            failure: None,
        }
    }

    pub fn columns(&self) -> Vec<String> {
        let mut cols: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
        match self.param_columns {
            ParamColumns::None => {}
            ParamColumns::Full(k) => {
                cols.extend((0..k).map(|c| format!("param_{c}")));
                cols.push("diverged".into());
            }
            ParamColumns::Norm => {
                cols.push("param_norm".into());
                cols.push("diverged".into());
            }
        }
        cols
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str(&self.columns().join(","));
        out.push('\n');
        for r in &self.rows {
            let mut fields = vec![
                r.index.to_string(),
                r.steps.to_string(),
                r.episodes.to_string(),
                fmt_opt(r.episode_return),
                fmt_opt(r.running_return),
                fmt_opt(r.value_error),
                r.param_hash.clone(),
            ];
            match self.param_columns {
                ParamColumns::None => {}
                ParamColumns::Full(_) => {
                    fields.extend(r.params.iter().map(|x| x.to_string()));
                    fields.push(u8::from(r.diverged).to_string());
                }
                ParamColumns::Norm => {
                    let norm = r.params.iter().map(|x| x * x).sum::<f64>().sqrt();
                    fields.push(norm.to_string());
                    fields.push(u8::from(r.diverged).to_string());
                }
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        for (k, v) in &self.trailer {
            let _ = writeln!(out, "# {k}={v}");
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(out, "# failure={}", f.replace('\n', " "));
        }
        out
    }
}

/// A CSV read back as text: comment header pairs, column names, raw rows.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvTable {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut header = Vec::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some((k, v)) = rest.trim_start().split_once('=') {
                    header.push((k.trim().to_string(), v.to_string()));
                }
                continue;
            }
            let fields: Vec<String> = line.split(',').map(str::to_string).collect();
            match &columns {
                None => columns = Some(fields),
                Some(c) => {
                    if fields.len() != c.len() {
                        return Err(Error::parse(
                            ln + 1,
                            format!("expected {} fields, found {}", c.len(), fields.len()),
                        ));
                    }
                    rows.push(fields);
                }
            }
        }
        let columns = columns.ok_or_else(|| Error::parse(0, "missing column header"))?;
        Ok(Self {
            header,
            columns,
            rows,
        })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column; empty fields are `None`.
    pub fn numeric(&self, name: &str) -> Result<Vec<Option<f64>>> {
        let c = self
            .column(name)
            .ok_or_else(|| Error::Shape(format!("no column '{name}'")))?;
        self.rows
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let f = row[c].trim();
                if f.is_empty() {
                    Ok(None)
                } else {
                    f.parse::<f64>()
                        .map(Some)
                        .map_err(|_| Error::parse(r + 1, format!("'{f}' is not a number")))
                }
            })
            .collect()
    }

    pub fn header_value(&self, key: &str) -> Option<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(index: u64, params: Vec<f64>) -> MetricRow {
        MetricRow {
            index,
            steps: index * 10,
            episodes: index,
            episode_return: Some(-1.5),
            running_return: None,
            value_error: Some(0.25),
            param_hash: param_hash(&params),
            params,
            diverged: false,
        }
    }

    #[test]
    fn csv_layout() {
        let mut r = RunRecord::new(ParamColumns::Full(2));
        r.header.push(("algorithm".into(), "ac-fa".into()));
        r.rows.push(row(0, vec![0.5, -2.0]));
        let csv = r.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("# algorithm=ac-fa"));
        assert_eq!(
            lines.next(),
            Some("index,steps,episodes,episode_return,running_return,value_error,param_hash,param_0,param_1,diverged")
        );
        let data = lines.next().unwrap();
        assert!(data.starts_with("0,0,0,-1.5,,0.25,"));
        assert!(data.ends_with(",0.5,-2,0"));

        let t = CsvTable::parse(&csv).unwrap();
        assert_eq!(t.header_value("algorithm"), Some("ac-fa"));
        assert_eq!(t.numeric("running_return").unwrap(), vec![None]);
        assert_eq!(t.numeric("param_1").unwrap(), vec![Some(-2.0)]);
    }

    #[test]
    fn norm_columns_for_large_parameters() {
        assert_eq!(ParamColumns::for_dimension(8), ParamColumns::Full(8));
        assert_eq!(ParamColumns::for_dimension(9), ParamColumns::Norm);
        let mut r = RunRecord::new(ParamColumns::Norm);
        r.rows.push(row(1, vec![3.0, 4.0]));
        let t = CsvTable::parse(&r.to_csv()).unwrap();
        assert_eq!(t.numeric("param_norm").unwrap(), vec![Some(5.0)]);
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        assert_eq!(param_hash(&[1.0, 2.0]), param_hash(&[1.0, 2.0]));
        assert_ne!(param_hash(&[1.0, 2.0]), param_hash(&[2.0, 1.0]));
        assert_eq!(param_hash(&[]).len(), 16);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(CsvTable::parse("a,b\n1\n").is_err());
    }
}
