//! Reading and writing cubes in the three supported file layouts.
//!
//! * `long-csv`: header `location,dimension,timestamp`, one incidence per row.
//! * `wide-csv`: header `location,timestamp,<dim1>,...,<dimK>`; a cell of
//!   `1` or `c` marks presence, empty or `0` marks absence.
//! * `cube-json`: `{"locations": [...], "dimensions": [...], "timestamps":
//!   [...], "incidence": [[loc, dim, time], ...]}`.
//!
//! When no axis declaration is supplied, CSV axes are taken in order of first
//! appearance (wide-csv dimensions come from the header).

use std::collections::HashSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cube::{build_cube, Axis, AxisLabels, CubeError, DataCube};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputFormat {
    LongCsv,
    WideCsv,
    CubeJson,
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "long-csv" => Ok(InputFormat::LongCsv),
            "wide-csv" => Ok(InputFormat::WideCsv),
            "cube-json" => Ok(InputFormat::CubeJson),
            other => Err(format!("unknown input format `{other}`")),
        }
    }
}

impl fmt::Display for InputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputFormat::LongCsv => "long-csv",
            InputFormat::WideCsv => "wide-csv",
            InputFormat::CubeJson => "cube-json",
        })
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error("duplicate header column `{0}`")]
    DuplicateHeader(String),
}

fn parse_err(line: u64, reason: impl Into<String>) -> IngestError {
    IngestError::Parse {
        line,
        reason: reason.into(),
    }
}

/// Explicit axis declarations, e.g. from a sidecar JSON file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisDecl {
    pub locations: Vec<String>,
    pub dimensions: Vec<String>,
    pub timestamps: Vec<String>,
}

impl AxisDecl {
    pub fn from_labels(labels: &AxisLabels) -> Self {
        AxisDecl {
            locations: labels.locations().to_vec(),
            dimensions: labels.dimensions().to_vec(),
            timestamps: labels.timestamps().to_vec(),
        }
    }

    pub fn into_labels(self) -> Result<AxisLabels, CubeError> {
        AxisLabels::new(self.locations, self.dimensions, self.timestamps)
    }

    pub fn parse(text: &str) -> Result<Self, IngestError> {
        serde_json::from_str(text).map_err(|e| parse_err(e.line() as u64, e.to_string()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CubeJson {
    locations: Vec<String>,
    dimensions: Vec<String>,
    timestamps: Vec<String>,
    incidence: Vec<[String; 3]>,
}

fn read(path: &Path) -> Result<String, IngestError> {
    std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads a cube from `path`; `axes` optionally names a sidecar JSON with
/// explicit axis declarations.
pub fn ingest(
    path: &Path,
    format: InputFormat,
    axes: Option<&Path>,
) -> Result<DataCube, IngestError> {
    let decl = axes
        .map(|p| read(p).and_then(|t| AxisDecl::parse(&t)))
        .transpose()?;
    parse(&read(path)?, format, decl)
}

/// Parses cube text in the given layout.
pub fn parse(
    text: &str,
    format: InputFormat,
    axes: Option<AxisDecl>,
) -> Result<DataCube, IngestError> {
    match format {
        InputFormat::LongCsv => parse_long(text, axes),
        InputFormat::WideCsv => parse_wide(text, axes),
        InputFormat::CubeJson => parse_json(text, axes),
    }
}

/// Axis names in order of first appearance.
#[derive(Default)]
struct AxisCollector {
    names: Vec<String>,
    seen: HashSet<String>,
}

impl AxisCollector {
    fn add(&mut self, name: &str) {
        if !self.seen.contains(name) {
            self.seen.insert(name.to_string());
            self.names.push(name.to_string());
        }
    }
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn csv_err(e: csv::Error) -> IngestError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    parse_err(line, e.to_string())
}

fn check_header(header: &csv::StringRecord) -> Result<(), IngestError> {
    let mut seen = HashSet::new();
    for col in header.iter() {
        if !seen.insert(col) {
            return Err(IngestError::DuplicateHeader(col.to_string()));
        }
    }
    Ok(())
}

fn parse_long(text: &str, axes: Option<AxisDecl>) -> Result<DataCube, IngestError> {
    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(csv_err)?.clone();
    check_header(&header)?;
    let column = |name: &str| {
        header
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| parse_err(1, format!("missing `{name}` column")))
    };
    let (lc, jc, tc) = (
        column("location")?,
        column("dimension")?,
        column("timestamp")?,
    );
    if header.len() != 3 {
        return Err(parse_err(
            1,
            "expected exactly the columns location,dimension,timestamp",
        ));
    }
    let mut triples = Vec::new();
    let (mut locs, mut dims, mut times) =
        <(AxisCollector, AxisCollector, AxisCollector)>::default();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let field = |i: usize| -> Result<String, IngestError> {
            match record.get(i) {
                Some(v) if !v.is_empty() => Ok(v.to_string()),
                _ => Err(parse_err(line, "empty field")),
            }
        };
        let (l, j, t) = (field(lc)?, field(jc)?, field(tc)?);
        locs.add(&l);
        dims.add(&j);
        times.add(&t);
        triples.push((l, j, t));
    }
    let labels = match axes {
        Some(decl) => decl.into_labels()?,
        None => AxisLabels::new(locs.names, dims.names, times.names)?,
    };
    Ok(build_cube(labels, &triples)?)
}

fn parse_wide(text: &str, axes: Option<AxisDecl>) -> Result<DataCube, IngestError> {
    let mut reader = csv_reader(text);
    let header = reader.headers().map_err(csv_err)?.clone();
    check_header(&header)?;
    if header.get(0) != Some("location") || header.get(1) != Some("timestamp") {
        return Err(parse_err(1, "header must start with location,timestamp"));
    }
    let header_dims: Vec<String> = header.iter().skip(2).map(str::to_string).collect();
    let mut triples = Vec::new();
    let (mut locs, mut times) = (AxisCollector::default(), AxisCollector::default());
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let loc = record
            .get(0)
            .filter(|v| !v.is_empty())
            .ok_or_else(|| parse_err(line, "empty location"))?;
        let time = record
            .get(1)
            .filter(|v| !v.is_empty())
            .ok_or_else(|| parse_err(line, "empty timestamp"))?;
        locs.add(loc);
        times.add(time);
        for (dim, cell) in header_dims.iter().zip(record.iter().skip(2)) {
            match cell {
                "1" | "c" | "C" => triples.push((loc.to_string(), dim.clone(), time.to_string())),
                "" | "0" => {}
                other => {
                    return Err(parse_err(
                        line,
                        format!("invalid cell value `{other}` for {dim}"),
                    ))
                }
            }
        }
    }
    let labels = match axes {
        Some(decl) => {
            let labels = decl.into_labels()?;
            for dim in &header_dims {
                labels.index_of(Axis::Dimension, dim)?;
            }
            labels
        }
        None => AxisLabels::new(locs.names, header_dims, times.names)?,
    };
    Ok(build_cube(labels, &triples)?)
}

fn parse_json(text: &str, axes: Option<AxisDecl>) -> Result<DataCube, IngestError> {
    let doc: CubeJson =
        serde_json::from_str(text).map_err(|e| parse_err(e.line() as u64, e.to_string()))?;
    let labels = match axes {
        Some(decl) => decl.into_labels()?,
        None => AxisLabels::new(doc.locations, doc.dimensions, doc.timestamps)?,
    };
    let triples: Vec<(String, String, String)> = doc
        .incidence
        .into_iter()
        .map(|[l, j, t]| (l, j, t))
        .collect();
    Ok(build_cube(labels, &triples)?)
}

/// Serializes a cube in the given layout. Long-csv cannot carry axis members
/// without incidences; pair it with [`export_axes`] for an exact round trip.
pub fn export(cube: &DataCube, format: InputFormat) -> String {
    let labels = cube.labels();
    match format {
        InputFormat::LongCsv => {
            let mut out = String::from("location,dimension,timestamp\n");
            for (l, j, t) in cube.facts() {
                out.push_str(&csv_line(&[
                    &labels.locations()[l],
                    &labels.dimensions()[j],
                    &labels.timestamps()[t],
                ]));
            }
            out
        }
        InputFormat::WideCsv => {
            let mut head: Vec<&str> = vec!["location", "timestamp"];
            head.extend(labels.dimensions().iter().map(String::as_str));
            let mut out = csv_line(&head);
            for t in 0..cube.n_times() {
                for l in 0..cube.n_locs() {
                    let mut row: Vec<&str> = vec![&labels.locations()[l], &labels.timestamps()[t]];
                    row.extend((0..cube.n_dims()).map(|j| {
                        if cube.contains(l, j, t) {
                            "1"
                        } else {
                            "0"
                        }
                    }));
                    out.push_str(&csv_line(&row));
                }
            }
            out
        }
        InputFormat::CubeJson => {
            let doc = CubeJson {
                locations: labels.locations().to_vec(),
                dimensions: labels.dimensions().to_vec(),
                timestamps: labels.timestamps().to_vec(),
                incidence: cube
                    .facts()
                    .into_iter()
                    .map(|(l, j, t)| {
                        [
                            labels.locations()[l].clone(),
                            labels.dimensions()[j].clone(),
                            labels.timestamps()[t].clone(),
                        ]
                    })
                    .collect(),
            };
            let mut s = serde_json::to_string_pretty(&doc).expect("cube json serializes");
            s.push('\n');
            s
        }
    }
}

/// Axis declaration JSON for `cube`.
pub fn export_axes(cube: &DataCube) -> String {
    let mut s = serde_json::to_string_pretty(&AxisDecl::from_labels(cube.labels()))
        .expect("axes serialize");
    s.push('\n');
    s
}

/// One CSV line with RFC 4180 quoting where needed.
pub(crate) fn csv_line(fields: &[&str]) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(fields).expect("in-memory csv write");
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8 fields")
}
