//! CSV and JSON writers and readers. Floats are written with Rust's shortest
//! round-trip formatting, so a file read back reproduces every value bit for bit.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use halfline_nls::{SolutionField, C64};
use serde::Serialize;

use crate::CliError;

/// Shortest representation that parses back to the same `f64`, in
/// exponent form outside `[1e-4, 1e15)`.
pub fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes rows of real columns under `header`.
pub fn write_table(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| io_err(path, e))?;
    w.write_record(header).map_err(|e| io_err(path, e))?;
    for row in rows {
        w.write_record(row.iter().map(|v| fmt_f64(*v))).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

/// Complex signal as `coord,re,im`.
pub fn write_signal_csv(path: &Path, coord: &str, coords: &[f64], values: &[C64]) -> Result<(), CliError> {
    let rows = coords.iter().zip(values).map(|(c, z)| vec![*c, z.re, z.im]);
    write_table(path, &[coord, "re", "im"], rows)
}

/// Reads a `coord,re,im` file with a header row.
pub fn read_signal_csv(path: &Path) -> Result<(Vec<f64>, Vec<C64>), CliError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    let mut coords = Vec::new();
    let mut values = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let row = parse_row(&rec, path, i + 2)?;
        if row.len() != 3 {
            return Err(io_err(path, format!("line {}: expected 3 columns, found {}", i + 2, row.len())));
        }
        coords.push(row[0]);
        values.push(C64::new(row[1], row[2]));
    }
    Ok((coords, values))
}

fn parse_row(rec: &csv::StringRecord, path: &Path, line: usize) -> Result<Vec<f64>, CliError> {
    rec.iter()
        .map(|s| s.trim().parse::<f64>().map_err(|_| io_err(path, format!("line {line}: bad number `{s}`"))))
        .collect()
}

/// The `x >= 0` part of a solution field as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldData {
    pub x0: f64,
    pub dx: f64,
    pub dt: f64,
    /// Time slices, each holding the values at `x0 + j dx`.
    pub slices: Vec<Vec<C64>>,
}

impl FieldData {
    pub fn from_field(u: &SolutionField) -> Self {
        let z = u.sgrid.zero_index();
        Self {
            x0: u.sgrid.x(z),
            dx: u.sgrid.dx(),
            dt: u.tgrid.dt(),
            slices: u.slices().map(|s| s[z..].to_vec()).collect(),
        }
    }

    pub fn nx(&self) -> usize {
        self.slices.first().map_or(0, Vec::len)
    }
}

/// Field CSV: a comment line declaring both grids, a column header, then one
/// row per time slice `t, re_0, im_0, re_1, im_1, ...`.
pub fn write_field_csv(path: &Path, field: &FieldData) -> Result<(), CliError> {
    let mut file = File::create(path).map_err(|e| io_err(path, e))?;
    writeln!(
        file,
        "# x0={} dx={} nx={} t0=0 dt={} nt={}",
        fmt_f64(field.x0),
        fmt_f64(field.dx),
        field.nx(),
        fmt_f64(field.dt),
        field.slices.len()
    )
    .map_err(|e| io_err(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let mut header = vec!["t".to_string()];
    for j in 0..field.nx() {
        header.push(format!("re_{j}"));
        header.push(format!("im_{j}"));
    }
    w.write_record(&header).map_err(|e| io_err(path, e))?;
    for (k, slice) in field.slices.iter().enumerate() {
        let mut row = Vec::with_capacity(1 + 2 * slice.len());
        row.push(fmt_f64(k as f64 * field.dt));
        for z in slice {
            row.push(fmt_f64(z.re));
            row.push(fmt_f64(z.im));
        }
        w.write_record(&row).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn read_field_csv(path: &Path) -> Result<FieldData, CliError> {
    let mut reader = BufReader::new(File::open(path).map_err(|e| io_err(path, e))?);
    let mut first = String::new();
    reader.read_line(&mut first).map_err(|e| io_err(path, e))?;
    let decl = first
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| io_err(path, "missing grid declaration line"))?;
    let get = |name: &str| -> Result<f64, CliError> {
        decl.split_whitespace()
            .find_map(|kv| kv.strip_prefix(name).and_then(|r| r.strip_prefix('=')))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| io_err(path, format!("grid declaration lacks `{name}`")))
    };
    let (x0, dx, dt) = (get("x0")?, get("dx")?, get("dt")?);
    let (nx, nt) = (get("nx")? as usize, get("nt")? as usize);
    let mut r = csv::Reader::from_reader(reader);
    let mut slices = Vec::with_capacity(nt);
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let row = parse_row(&rec, path, i + 3)?;
        if row.len() != 1 + 2 * nx {
            return Err(io_err(path, format!("line {}: expected {} columns, found {}", i + 3, 1 + 2 * nx, row.len())));
        }
        slices.push(row[1..].chunks(2).map(|c| C64::new(c[0], c[1])).collect());
    }
    if slices.len() != nt {
        return Err(io_err(path, format!("declared {nt} slices, found {}", slices.len())));
    }
    Ok(FieldData { x0, dx, dt, slices })
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| io_err(path, e))?;
    std::fs::write(path, text + "\n").map_err(|e| io_err(path, e))
}
