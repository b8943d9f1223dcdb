//! CSV and JSON readers and writers.
//!
//! All numeric output goes through [`fmt_float`], which prints 17
//! significant digits so values survive a round trip exactly; runs are
//! byte-reproducible because nothing here depends on time, locale or
//! thread scheduling.

use std::fs;
use std::path::Path;

use chrono::NaiveDate;
use serde::Serialize;
use sha2::{Digest, Sha256};
use tda_core::landscape::PersistenceLandscape;
use tda_core::persistence::Diagram;
use tda_core::pipeline::SeriesMatrix;

use crate::error::{Error, Result};
use crate::series::{IndicatorSeries, MultiSeries, NormSeries, PriceSeries};

/// Floating point formatting for every numeric CSV cell: scientific
/// notation with 17 significant digits, enough to reproduce the exact bit
/// pattern when parsed back.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

const DATE_FMT: &str = "%Y-%m-%d";

/// Column names that clearly describe a price rather than naming the
/// series; files using one of these fall back to the file stem.
const GENERIC_PRICE_HEADERS: [&str; 5] = ["close", "adj_close", "adjclose", "price", "value"];

fn parse_date(path: &Path, line: u64, s: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(s.trim(), DATE_FMT).map_err(|_| {
        Error::parse(
            path,
            line,
            format!("invalid date '{s}', expected YYYY-MM-DD"),
        )
    })
}

fn parse_value(path: &Path, line: u64, header: &str, s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| {
        Error::parse(
            path,
            line,
            format!("invalid number '{s}' in column {header}"),
        )
    })?;
    if !v.is_finite() {
        return Err(Error::parse(
            path,
            line,
            format!("non-finite value in column {header}"),
        ));
    }
    Ok(v)
}

fn open_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file))
}

fn record_line(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

/// Data rows as (source line, date, remaining cells).
type RawRows = Vec<(u64, NaiveDate, Vec<String>)>;

fn read_rows(path: &Path) -> Result<(Vec<String>, RawRows)> {
    let mut reader = open_reader(path)?;
    let headers: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.len() < 2 {
        return Err(Error::parse(
            path,
            1,
            "expected a date column and at least one value column",
        ));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record_line(&record);
        if record.len() != headers.len() {
            return Err(Error::parse(
                path,
                line,
                format!("expected {} fields, got {}", headers.len(), record.len()),
            ));
        }
        let date = parse_date(path, line, &record[0])?;
        rows.push((
            line,
            date,
            record.iter().skip(1).map(str::to_string).collect(),
        ));
    }
    if rows.is_empty() {
        return Err(Error::parse(path, 1, "no data rows"));
    }
    Ok((headers, rows))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::parse(path, line, format!("{other:?}")),
    }
}

/// Reads a wide CSV `date,<name>,<name>,...` into a multivariate series.
pub fn read_multi_csv(path: &Path) -> Result<MultiSeries> {
    let (headers, rows) = read_rows(path)?;
    if headers.len() < 3 {
        return Err(Error::parse(
            path,
            1,
            "a multivariate series needs at least two value columns",
        ));
    }
    let labels: Vec<String> = headers[1..].to_vec();
    let mut dates = Vec::with_capacity(rows.len());
    let mut data = Vec::with_capacity(rows.len() * labels.len());
    for (line, date, cells) in &rows {
        dates.push(*date);
        for (h, cell) in labels.iter().zip(cells) {
            data.push(parse_value(path, *line, h, cell)?);
        }
    }
    let matrix = SeriesMatrix::new(data, labels.len())?;
    MultiSeries::new(labels, dates, matrix)
}

/// Reads one dated value column: the named one, or the first value column
/// when no name is given. Returns dates, values and the column's label.
pub fn read_dated_column(
    path: &Path,
    column: Option<&str>,
) -> Result<(Vec<NaiveDate>, Vec<f64>, String)> {
    let (headers, rows) = read_rows(path)?;
    let idx = match column {
        None => 0,
        Some(name) => headers[1..].iter().position(|h| h == name).ok_or_else(|| {
            Error::invalid(format!(
                "column '{name}' not found in {}; available: {}",
                path.display(),
                headers[1..].join(", ")
            ))
        })?,
    };
    let label = headers[idx + 1].clone();
    let mut dates = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for (line, date, cells) in &rows {
        dates.push(*date);
        values.push(parse_value(path, *line, &label, &cells[idx])?);
    }
    for w in dates.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::invalid(format!(
                "dates in {} must be strictly increasing, {} is not after {}",
                path.display(),
                w[1],
                w[0]
            )));
        }
    }
    Ok((dates, values, label))
}

/// Reads price files into named series. A two-column file holds one
/// series, named by its value header unless that header is a generic
/// price word, in which case the file stem names it. A wider file holds
/// one series per value column, named by the headers.
pub fn read_price_csvs(paths: &[impl AsRef<Path>]) -> Result<Vec<PriceSeries>> {
    let mut out: Vec<PriceSeries> = Vec::new();
    for path in paths {
        let path = path.as_ref();
        let (headers, rows) = read_rows(path)?;
        let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
        for (c, header) in headers[1..].iter().enumerate() {
            let name = if headers.len() == 2
                && GENERIC_PRICE_HEADERS.contains(&header.to_ascii_lowercase().as_str())
            {
                stem.clone().unwrap_or_else(|| header.clone())
            } else {
                header.clone()
            };
            if out.iter().any(|s| s.name() == name) {
                return Err(Error::invalid(format!("duplicate series name '{name}'")));
            }
            let mut pairs = Vec::with_capacity(rows.len());
            for (line, date, cells) in &rows {
                pairs.push((*date, parse_value(path, *line, header, &cells[c])?));
            }
            out.push(PriceSeries::from_pairs(name, pairs)?);
        }
    }
    Ok(out)
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(header)
        .map_err(|e| csv_error(path, e))?;
    for row in rows {
        writer.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::invalid(e.to_string()))?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

/// Writes `date,<label>,...` rows of a multivariate series.
pub fn write_multi_csv(path: &Path, series: &MultiSeries) -> Result<()> {
    let mut header = vec!["date"];
    header.extend(series.labels().iter().map(String::as_str));
    write_csv(
        path,
        &header,
        (0..series.n_rows()).map(|r| {
            let mut row = vec![series.dates()[r].format(DATE_FMT).to_string()];
            row.extend(series.matrix().row(r).iter().map(|v| fmt_float(*v)));
            row
        }),
    )
}

/// Writes a norm series as `date,<norm label>,...`.
pub fn write_norm_series_csv(path: &Path, series: &NormSeries) -> Result<()> {
    let mut header = vec!["date"];
    header.extend(series.labels.iter().map(String::as_str));
    write_csv(
        path,
        &header,
        series.dates.iter().zip(&series.values).map(|(d, vs)| {
            let mut row = vec![d.format(DATE_FMT).to_string()];
            row.extend(vs.iter().map(|v| fmt_float(*v)));
            row
        }),
    )
}

/// Writes rolling indicators as `date,variance,low_freq_power,acf1`.
pub fn write_indicator_csv(path: &Path, series: &IndicatorSeries) -> Result<()> {
    write_csv(
        path,
        &["date", "variance", "low_freq_power", "acf1"],
        (0..series.dates.len()).map(|i| {
            vec![
                series.dates[i].format(DATE_FMT).to_string(),
                fmt_float(series.variance[i]),
                fmt_float(series.low_freq_power[i]),
                fmt_float(series.acf1[i]),
            ]
        }),
    )
}

/// Writes a persistence diagram as `dim,birth,death,essential`.
pub fn write_diagram_csv(path: &Path, diagram: &Diagram) -> Result<()> {
    write_csv(
        path,
        &["dim", "birth", "death", "essential"],
        diagram.points().iter().map(|p| {
            vec![
                p.dim.to_string(),
                fmt_float(p.birth),
                fmt_float(p.death),
                p.essential.to_string(),
            ]
        }),
    )
}

/// Writes landscape vertices as `level,x,y` with levels numbered from 1.
pub fn write_landscape_csv(path: &Path, landscape: &PersistenceLandscape) -> Result<()> {
    let mut rows = Vec::new();
    for k in 0..landscape.levels() {
        for &(x, y) in landscape.level(k) {
            rows.push(vec![(k + 1).to_string(), fmt_float(x), fmt_float(y)]);
        }
    }
    write_csv(path, &["level", "x", "y"], rows.into_iter())
}

/// Writes a generic step-indexed table, used by the synthetic dataset
/// emitters.
pub fn write_table_csv(
    path: &Path,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    write_csv(path, header, rows)
}

/// Pretty-prints a JSON document with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::invalid(format!("cannot serialise {}: {e}", path.display())))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Hex SHA-256 digest of a file, recorded in run manifests.
pub fn sha256_hex(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}
