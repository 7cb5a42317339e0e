//! CSV and JSON writers for evaluated series.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// One row: a point on a curve or on a surface.
#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum Record {
    Curve { x: f64, value: f64, series: String },
    Surface { x1: f64, x2: f64, value: f64, series: String },
}

impl Record {
    pub fn value(&self) -> f64 {
        match self {
            Record::Curve { value, .. } | Record::Surface { value, .. } => *value,
        }
    }
}

/// Seventeen significant digits, independent of locale.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}

/// Writes records of one kind; curve and surface rows must not be mixed.
pub fn write_records<W: Write>(records: &[Record], format: Format, out: W) -> std::io::Result<()> {
    match format {
        Format::Json => write_json(records, out),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let surface = matches!(records.first(), Some(Record::Surface { .. }));
            if surface {
                w.write_record(["x1", "x2", "value", "series"]).map_err(csv_error)?;
            } else {
                w.write_record(["x", "value", "series"]).map_err(csv_error)?;
            }
            for r in records {
                match r {
                    Record::Curve { x, value, series } => {
                        w.write_record([fmt_f64(*x), fmt_f64(*value), series.clone()])
                    }
                    Record::Surface { x1, x2, value, series } => w.write_record([
                        fmt_f64(*x1),
                        fmt_f64(*x2),
                        fmt_f64(*value),
                        series.clone(),
                    ]),
                }
                .map_err(csv_error)?;
            }
            w.flush()
        }
    }
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)
}

/// Plain variates: a single `value` column, or `x1,x2` for bivariate draws.
pub fn write_samples<W: Write>(samples: &[Vec<f64>], format: Format, out: W) -> std::io::Result<()> {
    let dim = samples.first().map_or(1, Vec::len);
    match format {
        Format::Json => {
            if dim == 1 {
                let flat: Vec<f64> = samples.iter().map(|s| s[0]).collect();
                write_json(&flat, out)
            } else {
                write_json(samples, out)
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if dim == 1 {
                w.write_record(["value"]).map_err(csv_error)?;
            } else {
                let header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
                w.write_record(&header).map_err(csv_error)?;
            }
            for s in samples {
                w.write_record(s.iter().map(|v| fmt_f64(*v))).map_err(csv_error)?;
            }
            w.flush()
        }
    }
}

/// Any serializable rows with a header taken from the field names.
pub fn write_table<W: Write, T: Serialize>(rows: &[T], format: Format, out: W) -> std::io::Result<()> {
    match format {
        Format::Json => write_json(rows, out),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r).map_err(csv_error)?;
            }
            w.flush()
        }
    }
}
