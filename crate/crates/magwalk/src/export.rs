//! CSV and JSON tables of sweep records.
//!
//! CSV: a header of the sorted keys, then one row per record, every value
//! in scientific notation with 12 significant digits (`2.50000000000e3`),
//! each line newline-terminated. JSON: an array of flat objects carrying
//! the same rounded values; non-finite values become `null`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::sweep::SweepRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

pub fn format_value(v: f64) -> String {
    format!("{v:.11e}")
}

fn rounded(v: f64) -> f64 {
    format_value(v).parse().expect("formatted float parses")
}

fn check(records: &[SweepRecord]) -> Result<()> {
    let first = records.first().ok_or(Error::EmptyRecords)?;
    for (index, r) in records.iter().enumerate().skip(1) {
        if r.len() != first.len() || !r.keys().eq(first.keys()) {
            return Err(Error::KeyMismatch { index });
        }
    }
    Ok(())
}

fn write_csv<W: Write>(records: &[SweepRecord], mut out: W) -> std::io::Result<W> {
    let header: Vec<&str> = records[0].keys().map(String::as_str).collect();
    writeln!(out, "{}", header.join(","))?;
    for r in records {
        let row: Vec<String> = r.values().map(|v| format_value(*v)).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(out)
}

pub fn to_csv_string(records: &[SweepRecord]) -> Result<String> {
    check(records)?;
    let bytes = write_csv(records, Vec::new()).expect("writing to memory");
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

pub fn to_json_value(records: &[SweepRecord]) -> Result<Value> {
    check(records)?;
    let rows = records
        .iter()
        .map(|r| {
            let obj: Map<String, Value> = r
                .iter()
                .map(|(k, &v)| {
                    let v = Number::from_f64(rounded(v)).map_or(Value::Null, Value::Number);
                    (k.clone(), v)
                })
                .collect();
            Value::Object(obj)
        })
        .collect();
    Ok(Value::Array(rows))
}

pub fn to_json_string(records: &[SweepRecord]) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&to_json_value(records)?)?;
    s.push('\n');
    Ok(s)
}

pub fn render(records: &[SweepRecord], format: Format) -> Result<String> {
    match format {
        Format::Csv => to_csv_string(records),
        Format::Json => to_json_string(records),
    }
}

pub fn export(records: &[SweepRecord], path: &Path, format: Format) -> Result<()> {
    let text = render(records, format)?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn export_csv(records: &[SweepRecord], path: &Path) -> Result<()> {
    export(records, path, Format::Csv)
}

pub fn export_json(records: &[SweepRecord], path: &Path) -> Result<()> {
    export(records, path, Format::Json)
}

/// Reads back a table written by [`export_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().ok_or_else(|| Error::parse("csv", "", "missing header"))?.split(',').collect();
    lines
        .enumerate()
        .map(|(row, line)| {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != header.len() {
                return Err(Error::parse("csv", line, format!("row {row} has {} cells", cells.len())));
            }
            header
                .iter()
                .zip(cells)
                .map(|(k, c)| {
                    c.parse::<f64>().map(|v| ((*k).to_owned(), v)).map_err(|e| Error::parse("csv", c, e.to_string()))
                })
                .collect()
        })
        .collect()
}

/// Reads back a table written by [`export_json`]; `null` becomes `+inf`.
pub fn parse_json(text: &str) -> Result<Vec<SweepRecord>> {
    let rows: Vec<Map<String, Value>> = serde_json::from_str(text)?;
    rows.into_iter()
        .map(|row| {
            row.into_iter()
                .map(|(k, v)| match v {
                    Value::Null => Ok((k, f64::INFINITY)),
                    Value::Number(n) => Ok((k, n.as_f64().expect("json numbers are f64"))),
                    other => Err(Error::parse("json", &other.to_string(), "expected a number")),
                })
                .collect()
        })
        .collect()
}
