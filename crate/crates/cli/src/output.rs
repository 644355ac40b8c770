//! CSV emission with fixed 12-significant-digit formatting.

use std::fs;
use std::path::Path;

use h2cruise::mission::SweepPoint;

use crate::CliError;

pub const COLUMNS: [&str; 6] = ["cost_index", "v_mps", "v_kmh", "t_f_s", "fuel_kg", "doc"];

pub fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

/// km/h from the m/s value as printed, so the two columns agree exactly.
pub fn kmh_of_printed(v_mps: f64) -> f64 {
    sci(v_mps).parse::<f64>().expect("formatted float parses") * 3.6
}

/// One CSV row. Missing values are left empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub cost_index: f64,
    pub v_mps: Option<f64>,
    pub t_f: Option<f64>,
    pub fuel_kg: Option<f64>,
    pub doc: Option<f64>,
    pub error: Option<String>,
}

/// Which speed goes into the `v_*` columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpeedColumn {
    /// Optimal speed at departure weight.
    Initial,
    /// Time-averaged speed over the mission.
    Average,
}

pub fn sweep_rows(points: &[SweepPoint], speed: SpeedColumn) -> Vec<Row> {
    points
        .iter()
        .map(|p| {
            let ok = p.outcome.as_ref().ok();
            let v_mps = match speed {
                SpeedColumn::Initial => p.v_initial,
                SpeedColumn::Average => ok.map(|q| q.v_avg),
            };
            Row {
                cost_index: p.cost_index,
                v_mps,
                t_f: ok.map(|q| q.t_f),
                fuel_kg: ok.map(|q| q.fuel_burned),
                doc: ok.map(|q| q.doc),
                error: p.outcome.as_ref().err().map(|e| crate::CliError::from(e.clone()).kind().to_string()),
            }
        })
        .collect()
}

/// CSV text, header first, LF line ends. An `error` column is appended only
/// when some row carries one.
pub fn to_csv(rows: &[Row]) -> String {
    let with_errors = rows.iter().any(|r| r.error.is_some());
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if with_errors {
        header.push("error");
    }
    w.write_record(&header).expect("in-memory write");
    let opt = |x: Option<f64>| x.map(sci).unwrap_or_default();
    for r in rows {
        let mut rec = vec![
            sci(r.cost_index),
            opt(r.v_mps),
            opt(r.v_mps.map(kmh_of_printed)),
            opt(r.t_f),
            opt(r.fuel_kg),
            opt(r.doc),
        ];
        if with_errors {
            rec.push(r.error.clone().unwrap_or_default());
        }
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

/// Parse a file written by [`to_csv`] back into rows.
pub fn from_csv(text: &str) -> Result<Vec<Row>, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| e.to_string())?.clone();
    let names: Vec<&str> = header.iter().collect();
    if names[..names.len().min(6)] != COLUMNS || names.len() > 7 || (names.len() == 7 && names[6] != "error") {
        return Err(format!("unexpected header {names:?}"));
    }
    let num = |s: &str| -> Result<Option<f64>, String> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|e| format!("bad number `{s}`: {e}"))
        }
    };
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        rows.push(Row {
            cost_index: num(&rec[0])?.ok_or("missing cost_index")?,
            v_mps: num(&rec[1])?,
            t_f: num(&rec[3])?,
            fuel_kg: num(&rec[4])?,
            doc: num(&rec[5])?,
            error: rec.get(6).filter(|s| !s.is_empty()).map(str::to_string),
        });
    }
    Ok(rows)
}

pub fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: dir.join(name),
        source,
    };
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join(name), contents).map_err(io)?;
    log::info!("wrote {}", dir.join(name).display());
    Ok(())
}
