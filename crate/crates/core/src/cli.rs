//! Configuration and dispatch shared by the command-line binary and tests.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Result};

use crate::concepts::enumerate_agro_triples;
use crate::conformance::conformance_report;
use crate::cube::{Axis, DataCube, DimSet, Orientation, TimeSet};
use crate::io::{ingest, InputFormat};
use crate::lattice::{build_lattice, build_lattice_with_bounds};
use crate::output::{lattice_dot, lattice_json, rules_csv, triples_file};
use crate::rules::{filter_rules, generate_rules, Fraction, RuleOptions, SupportDenominator};
use crate::toy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    Triples,
    LatticeDot,
    LatticeJson,
    Rules,
    Conformance,
}

impl FromStr for Emit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "triples" => Ok(Emit::Triples),
            "lattice-dot" => Ok(Emit::LatticeDot),
            "lattice-json" => Ok(Emit::LatticeJson),
            "rules" => Ok(Emit::Rules),
            "conformance" => Ok(Emit::Conformance),
            other => Err(format!(
                "unknown output `{other}` (expected triples, lattice-dot, lattice-json, rules or conformance)"
            )),
        }
    }
}

impl fmt::Display for Emit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Emit::Triples => "triples",
            Emit::LatticeDot => "lattice-dot",
            Emit::LatticeJson => "lattice-json",
            Emit::Rules => "rules",
            Emit::Conformance => "conformance",
        })
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Input file; the bundled toy cube when `None`.
    pub input: Option<PathBuf>,
    pub format: InputFormat,
    /// Optional JSON sidecar declaring the axis members and their order.
    pub axes: Option<PathBuf>,
    pub min_support: Fraction,
    pub min_confidence: Fraction,
    pub support_denominator: SupportDenominator,
    pub orientation: Orientation,
    pub artificial_bounds: bool,
    /// Consequent dimensions, by name; all when empty.
    pub target_dims: Vec<String>,
    /// Timestamps a rule's source triple must cover, by name; unrestricted when empty.
    pub target_times: Vec<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            input: None,
            format: InputFormat::WideCsv,
            axes: None,
            min_support: Fraction::new(7, 10),
            min_confidence: Fraction::new(8, 10),
            support_denominator: SupportDenominator::Locations,
            orientation: Orientation::ByTime,
            artificial_bounds: false,
            target_dims: Vec::new(),
            target_times: Vec::new(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("min-support", self.min_support),
            ("min-confidence", self.min_confidence),
        ] {
            if value > Fraction::ONE {
                bail!("{name} must lie in [0, 1], got {value}");
            }
        }
        Ok(())
    }

    pub fn load_cube(&self) -> Result<DataCube> {
        let cube = match &self.input {
            Some(path) => ingest(path, self.format, self.axes.as_deref())?,
            None => toy::cube(),
        };
        Ok(cube.reorient(self.orientation))
    }

    fn rule_options(&self, cube: &DataCube) -> Result<RuleOptions> {
        let labels = cube.labels();
        let resolve = |axis: Axis, names: &[String]| -> Result<Option<Vec<usize>>> {
            if names.is_empty() {
                return Ok(None);
            }
            names
                .iter()
                .map(|n| labels.index_of(axis, n).map_err(anyhow::Error::from))
                .collect::<Result<Vec<_>>>()
                .map(Some)
        };
        Ok(RuleOptions {
            target_dims: resolve(Axis::Dimension, &self.target_dims)?
                .map(|ix| DimSet::from_indices(cube.n_dims(), ix)),
            target_times: resolve(Axis::Timestamp, &self.target_times)?
                .map(|ix| TimeSet::from_indices(cube.n_times(), ix)),
            denominator: self.support_denominator,
        })
    }
}

/// Runs the pipeline up to the requested output and renders it.
pub fn run(cfg: &RunConfig, emit: Emit) -> Result<String> {
    cfg.validate()?;
    let cube = cfg.load_cube()?;
    if emit == Emit::Conformance {
        return Ok(conformance_report(&cube, cfg.min_support, cfg.min_confidence).to_json());
    }
    let triples = enumerate_agro_triples(&cube);
    Ok(match emit {
        Emit::Triples => triples_file(cube.labels(), &triples),
        Emit::LatticeDot | Emit::LatticeJson => {
            let lattice = if cfg.artificial_bounds {
                build_lattice_with_bounds(&triples, cube.labels())
            } else {
                build_lattice(&triples)
            };
            if emit == Emit::LatticeDot {
                lattice_dot(cube.labels(), &lattice)
            } else {
                lattice_json(cube.labels(), &lattice)
            }
        }
        Emit::Rules => {
            let rules = generate_rules(&cube, &triples, &cfg.rule_options(&cube)?);
            rules_csv(
                cube.labels(),
                &filter_rules(&rules, cfg.min_support, cfg.min_confidence),
            )
        }
        Emit::Conformance => unreachable!(),
    })
}
