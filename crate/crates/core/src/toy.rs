//! The bundled ten-location, six-dimension, four-timestamp toy cube.

use crate::cube::DataCube;
use crate::io::{parse, InputFormat};

/// Wide-csv transcription of the four toy tables (one row per location and
/// timestamp).
pub const TOY_WIDE_CSV: &str = include_str!("../data/toy.wide.csv");

pub fn cube() -> DataCube {
    parse(TOY_WIDE_CSV, InputFormat::WideCsv, None).expect("bundled toy fixture parses")
}
