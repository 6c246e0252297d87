//! Closed spatio-temporal concepts over Boolean data cubes.
//!
//! The pipeline reads a ternary relation between locations, dimensions and
//! timestamps ([`cube`]), enumerates its maximal full boxes ([`concepts`]),
//! orders them into a lattice with a Hasse diagram ([`lattice`]) and derives
//! temporal association rules with exact support and confidence
//! ([`rules`]).

pub mod bitset;
pub mod cli;
pub mod concepts;
pub mod conformance;
pub mod cube;
pub mod io;
pub mod lattice;
pub mod output;
pub mod rules;
pub mod toy;

pub use concepts::{
    enumerate_agro_triples, is_maximal_box, oracle_enumerate, AgroTriple, TripleSet,
};
pub use conformance::{conformance_report, ConformanceReport};
pub use cube::{build_cube, AxisLabels, DataCube, DimSet, LocSet, Orientation, TimeSet};
pub use lattice::{build_lattice, check_isomorphic, flatten_lattice, SpatioTemporalLattice};
pub use rules::{filter_rules, generate_rules, Fraction, RuleOptions, RuleSet, SupportDenominator};
