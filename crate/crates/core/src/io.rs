//! Deterministic CSV and JSON records.
//!
//! Numbers are rendered with 10 significant digits in a `%g`-like style, so a
//! value written, parsed and written again reproduces the same bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SIGNIFICANT_DIGITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    Table,
    CurveScan,
    Profile,
    TruncationRoots,
    VerifyReport,
}

impl RecordKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RecordKind::Table => "table",
            RecordKind::CurveScan => "curve_scan",
            RecordKind::Profile => "profile",
            RecordKind::TruncationRoots => "truncation_roots",
            RecordKind::VerifyReport => "verify_report",
        }
    }
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RecordKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "table" => RecordKind::Table,
            "curve_scan" => RecordKind::CurveScan,
            "profile" => RecordKind::Profile,
            "truncation_roots" => RecordKind::TruncationRoots,
            "verify_report" => RecordKind::VerifyReport,
            other => return Err(Error::Format(format!("unknown record kind {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_number(*x),
            Cell::Text(s) => s.clone(),
        }
    }

    /// Anything that reads as a number is a number.
    fn parse(s: &str) -> Cell {
        match s.parse::<f64>() {
            Ok(x) if !s.is_empty() => Cell::Num(x),
            _ => Cell::Text(s.to_string()),
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
        Cell::Num(x as f64)
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

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(if b { "true" } else { "false" }.to_string())
    }
}

/// `%.10g`: fixed notation for decimal exponents in `[-5, 10)`, scientific
/// otherwise, trailing zeros removed, `-0` written as `0`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// A table with free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub kind: RecordKind,
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl OutputRecord {
    /// A record stamped with the library version.
    pub fn new(kind: RecordKind, columns: &[&str]) -> Self {
        let mut metadata = BTreeMap::new();
        metadata.insert("tool_version".to_string(), env!("CARGO_PKG_VERSION").to_string());
        OutputRecord {
            kind,
            metadata,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl fmt::Display) -> &mut Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }

    pub fn meta_num(&mut self, key: &str, value: f64) -> &mut Self {
        self.meta(key, format_number(value))
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Format(format!(
                "row has {} cells, expected {}",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of one column; text cells are skipped.
    pub fn numeric_column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().filter_map(|r| r[k].as_f64()).collect())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut out = format!("# kind: {}\n", self.kind);
        for (k, v) in &self.metadata {
            out.push_str(&format!("# {}: {}\n", one_line(k), one_line(v)));
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Format(e.to_string());
        writer.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Cell::render))
                .map_err(csv_err)?;
        }
        let bytes = writer.into_inner().map_err(|e| Error::Format(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))?);
        Ok(out)
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut metadata = BTreeMap::new();
        let mut body = String::new();
        for line in text.split_inclusive('\n') {
            if body.is_empty() {
                if let Some(rest) = line.strip_prefix("# ") {
                    let (k, v) = rest
                        .trim_end_matches('\n')
                        .split_once(": ")
                        .ok_or_else(|| Error::Format(format!("bad metadata line {line:?}")))?;
                    if k == "kind" {
                        kind = Some(v.parse()?);
                    } else {
                        metadata.insert(k.to_string(), v.to_string());
                    }
                    continue;
                }
            }
            body.push_str(line);
        }
        let kind = kind.ok_or_else(|| Error::Format("missing kind line".into()))?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(body.as_bytes());
        let csv_err = |e: csv::Error| Error::Format(e.to_string());
        let columns = reader
            .headers()
            .map_err(csv_err)?
            .iter()
            .map(str::to_string)
            .collect::<Vec<_>>();
        let mut rows = Vec::new();
        for rec in reader.records() {
            rows.push(rec.map_err(csv_err)?.iter().map(Cell::parse).collect());
        }
        Ok(OutputRecord {
            kind,
            metadata,
            columns,
            rows,
        })
    }

    pub fn to_json_string(&self) -> Result<String> {
        let doc = JsonRecord {
            kind: self.kind.as_str().to_string(),
            metadata: self.metadata.clone(),
            columns: self.columns.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(Cell::render).collect())
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Format(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let doc: JsonRecord = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Ok(OutputRecord {
            kind: doc.kind.parse()?,
            metadata: doc.metadata,
            columns: doc.columns,
            rows: doc
                .rows
                .iter()
                .map(|r| r.iter().map(|s| Cell::parse(s)).collect())
                .collect(),
        })
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv_string(),
            Format::Json => self.to_json_string(),
        }
    }
}

fn one_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

#[derive(Serialize, Deserialize)]
struct JsonRecord {
    kind: String,
    metadata: BTreeMap<String, String>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::invalid(format!("unknown format {other:?}; expected csv or json"))),
        }
    }
}

fn write_text(text: &str, destination: &Path) -> Result<()> {
    fs::write(destination, text).map_err(|source| Error::Io {
        path: destination.to_path_buf(),
        source,
    })
}

pub fn write_csv(record: &OutputRecord, destination: &Path) -> Result<()> {
    write_text(&record.to_csv_string()?, destination)
}

pub fn write_json(record: &OutputRecord, destination: &Path) -> Result<()> {
    write_text(&record.to_json_string()?, destination)
}

pub fn read_record(path: &Path) -> Result<OutputRecord> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    if text.trim_start().starts_with('{') {
        OutputRecord::parse_json(&text)
    } else {
        OutputRecord::parse_csv(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table() -> OutputRecord {
        let mut r = OutputRecord::new(RecordKind::Table, &["a", "nu", "W"]);
        r.meta_num("gamma", 0.0).meta_num("b", 1.0);
        for (nu, w) in [-3.230518994, 4.510929109, 9.532275968].iter().enumerate() {
            r.push(vec![2.0.into(), nu.into(), (*w).into()]).unwrap();
        }
        r
    }

    #[test]
    fn number_formatting() {
        assert_eq!(format_number(-3.2305189941036), "-3.230518994");
        assert_eq!(format_number(5.75), "5.75");
        assert_eq!(format_number(-0.0), "0");
        assert_eq!(format_number(1e-12), "1e-12");
        assert_eq!(format_number(123456.0), "123456");
        assert_eq!(format_number(12345678901.0), "1.23456789e+10");
        assert_eq!(format_number(0.0001), "0.0001");
        assert_eq!(format_number(9.99999999999), "10");
        assert_eq!(format_number(f64::NAN), "nan");
    }

    #[test]
    fn csv_layout() {
        let s = table().to_csv_string().unwrap();
        assert!(s.starts_with("# kind: table\n# b: 1\n# gamma: 0\n# tool_version: "));
        assert!(s.contains("\na,nu,W\n2,0,-3.230518994\n"));
        assert!(!s.contains('\r'));
    }

    #[test]
    fn cell_parses_back() {
        let parsed = OutputRecord::parse_csv(&table().to_csv_string().unwrap()).unwrap();
        assert_eq!(parsed.numeric_column("W").unwrap()[0], -3.230518994);
        assert_eq!(parsed, table());
    }

    #[test]
    fn empty_payload_is_header_only() {
        let r = OutputRecord::new(RecordKind::Profile, &["xi", "density"]);
        let s = r.to_csv_string().unwrap();
        assert!(s.ends_with("xi,density\n"));
        assert_eq!(OutputRecord::parse_csv(&s).unwrap().rows.len(), 0);
    }

    #[test]
    fn json_layout_and_round_trip() {
        let mut r = OutputRecord::new(RecordKind::TruncationRoots, &["root_index", "a"]);
        for (i, a) in [-1.940551663, 1.190016441, 5.250535221].iter().enumerate() {
            r.push(vec![(i + 1).into(), (*a).into()]).unwrap();
        }
        let s = r.to_json_string().unwrap();
        let keys: Vec<usize> = ["\"kind\"", "\"metadata\"", "\"columns\"", "\"rows\""]
            .iter()
            .map(|k| s.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
        assert!(s.contains("\"-1.940551663\""));
        let back = OutputRecord::parse_json(&s).unwrap();
        assert_eq!(back.to_json_string().unwrap(), s);
    }

    #[test]
    fn csv_and_json_carry_the_same_numbers() {
        let r = table();
        let from_csv = OutputRecord::parse_csv(&r.to_csv_string().unwrap()).unwrap();
        let from_json = OutputRecord::parse_json(&r.to_json_string().unwrap()).unwrap();
        assert_eq!(from_csv, from_json);
    }

    #[test]
    fn text_cells_and_quoting() {
        let mut r = OutputRecord::new(RecordKind::VerifyReport, &["check", "status", "detail"]);
        r.push(vec!["C1".into(), "pass".into(), "a, b and \"c\"".into()]).unwrap();
        let s = r.to_csv_string().unwrap();
        assert_eq!(OutputRecord::parse_csv(&s).unwrap(), r);
    }

    #[test]
    fn wrong_width_rows_rejected() {
        let mut r = OutputRecord::new(RecordKind::Table, &["a"]);
        assert!(r.push(vec![1.0.into(), 2.0.into()]).is_err());
    }

    #[test]
    fn files_round_trip_byte_for_byte() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = OutputRecord::new(RecordKind::CurveScan, &["a", "nu", "W"]);
        for k in 0..300 {
            let a = -3.0 + 9.0 * k as f64 / 299.0;
            r.push(vec![a.into(), 0usize.into(), (-(a * a) / 3.0 + 1.0 / 7.0).into()]).unwrap();
        }
        let first = dir.path().join("scan.csv");
        write_csv(&r, &first).unwrap();
        let second = dir.path().join("again.csv");
        write_csv(&read_record(&first).unwrap(), &second).unwrap();
        assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());

        let first = dir.path().join("scan.json");
        write_json(&r, &first).unwrap();
        let second = dir.path().join("again.json");
        write_json(&read_record(&first).unwrap(), &second).unwrap();
        assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
    }

    #[test]
    fn io_errors_carry_the_path() {
        let err = write_csv(&table(), Path::new("/nonexistent/dir/x.csv")).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/dir/x.csv"));
    }

    proptest! {
        #[test]
        fn rendered_numbers_are_stable(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO) {
            let s = format_number(x);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(format_number(back), s.clone());
            let tol = x.abs() * 5e-10 * (1.0 + 1e-6);
            prop_assert!((back - x).abs() <= tol.max(f64::MIN_POSITIVE), "{} -> {}", x, s);
        }
    }
}
