//! CSV ingestion and emission.
//!
//! Numbers are written with 9 significant digits: plain decimal notation when
//! the decimal exponent lies in `[-4, 9)`, scientific (`1.23456789e-7`)
//! otherwise. Missing values are empty fields.

use std::path::Path;

use crate::error::{Error, Result};
use crate::output::{Column, ModelOutput};
use crate::signal::{Signal, SignalKind};

/// Formats `x` with 9 significant digits.
pub fn fmt_sig9(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn parse_field(path: &Path, field: &str, row: usize) -> Result<f64> {
    let f = field.trim();
    if f.is_empty() {
        return Ok(f64::NAN);
    }
    f.parse()
        .map_err(|_| Error::format(path, format!("row {row}: `{f}` is not a number")))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::format(path, e.to_string())
}

/// Two-column signal file with header `t,<name>`.
pub fn read_signal_csv(path: &Path, name: &str, kind: SignalKind) -> Result<Signal> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::format(path, format!("cannot open: {e}")),
            _ => csv_err(path, e),
        })?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    if headers.len() != 2 || &headers[0] != "t" {
        return Err(Error::format(path, "expected header `t,<name>`"));
    }
    let (mut t, mut y) = (Vec::new(), Vec::new());
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        t.push(parse_field(path, &rec[0], i + 2)?);
        y.push(parse_field(path, &rec[1], i + 2)?);
    }
    Signal::new(name, kind, t, y).map_err(|e| Error::format(path, e.to_string()))
}

pub fn write_signal_csv(path: &Path, signal: &Signal, column: &str) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(["t", column]).map_err(|e| csv_err(path, e))?;
    for (t, y) in signal.times().iter().zip(signal.values()) {
        w.write_record([fmt_sig9(*t), fmt_sig9(*y)])
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_output<W: std::io::Write>(out: &ModelOutput, sink: W) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["t".to_string()];
    header.extend(out.columns.iter().map(|c| c.name.clone()));
    w.write_record(&header)?;
    for (k, t) in out.times.iter().enumerate() {
        let mut row = vec![fmt_sig9(*t)];
        row.extend(out.columns.iter().map(|c| fmt_sig9(c.values[k])));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `t,<columns…>` for a model output.
pub fn write_output_csv(path: &Path, out: &ModelOutput) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_output(out, std::io::BufWriter::new(file)).map_err(|e| csv_err(path, e))
}

pub fn read_output_csv(path: &Path, model: &str) -> Result<ModelOutput> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    if headers.is_empty() || &headers[0] != "t" {
        return Err(Error::format(path, "first column must be `t`"));
    }
    let mut out = ModelOutput::new(model, Vec::new());
    out.columns = headers
        .iter()
        .skip(1)
        .map(|h| Column {
            name: h.to_string(),
            values: Vec::new(),
        })
        .collect();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        out.times.push(parse_field(path, &rec[0], i + 2)?);
        for (c, field) in out.columns.iter_mut().zip(rec.iter().skip(1)) {
            c.values.push(parse_field(path, field, i + 2)?);
        }
    }
    Ok(out)
}

/// Raw rows of a measurement file `t,Tin,Tout,Tw_out,Tm_probe,v,Tamb`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MeasurementTable {
    pub t: Vec<f64>,
    pub t_in: Vec<f64>,
    pub t_out: Vec<f64>,
    pub t_wall: Vec<f64>,
    pub t_probe: Vec<f64>,
    pub v: Vec<f64>,
    pub t_amb: Vec<f64>,
}

pub const MEASUREMENT_HEADER: [&str; 7] = ["t", "Tin", "Tout", "Tw_out", "Tm_probe", "v", "Tamb"];

pub fn read_measurement_csv(path: &Path) -> Result<MeasurementTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_err(path, e))?.clone();
    let idx = |name: &str| headers.iter().position(|h| h == name);
    let mut cols = Vec::new();
    for name in MEASUREMENT_HEADER {
        cols.push(idx(name));
    }
    for required in [0, 1, 2, 5] {
        if cols[required].is_none() {
            return Err(Error::format(
                path,
                format!("missing required column `{}`", MEASUREMENT_HEADER[required]),
            ));
        }
    }
    let mut tab = MeasurementTable::default();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let get = |c: Option<usize>| -> Result<f64> {
            match c.and_then(|c| rec.get(c)) {
                Some(f) => parse_field(path, f, i + 2),
                None => Ok(f64::NAN),
            }
        };
        tab.t.push(get(cols[0])?);
        tab.t_in.push(get(cols[1])?);
        tab.t_out.push(get(cols[2])?);
        tab.t_wall.push(get(cols[3])?);
        tab.t_probe.push(get(cols[4])?);
        tab.v.push(get(cols[5])?);
        tab.t_amb.push(get(cols[6])?);
    }
    Ok(tab)
}

pub fn write_measurement_csv(path: &Path, tab: &MeasurementTable) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(MEASUREMENT_HEADER).map_err(|e| csv_err(path, e))?;
    for k in 0..tab.t.len() {
        let get = |v: &Vec<f64>| v.get(k).copied().map(fmt_sig9).unwrap_or_default();
        w.write_record([
            get(&tab.t),
            get(&tab.t_in),
            get(&tab.t_out),
            get(&tab.t_wall),
            get(&tab.t_probe),
            get(&tab.v),
            get(&tab.t_amb),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
