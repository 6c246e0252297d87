//! Side-by-side comparison of a mined cube against the published toy-dataset
//! results: triple and rule counts, the listed example triples, lattice size
//! and orientation invariance.
//!
//! Disagreements are data, recorded in the report with an explanation.

use serde::Serialize;

use crate::concepts::{
    enumerate_agro_triples, is_maximal_box, oracle_enumerate, AgroTriple, DEFAULT_ORACLE_BUDGET,
};
use crate::cube::{Axis, DataCube, DimSet, LocSet, Orientation, TimeSet};
use crate::lattice::{build_lattice, check_isomorphic, flatten_lattice};
use crate::output::member_names;
use crate::rules::{filter_rules, generate_rules, Fraction, RuleOptions, SupportDenominator};

/// Published number of triples for the toy cube.
pub const REFERENCE_TRIPLE_COUNT: usize = 76;
/// Published number of rules at support 0.7 and confidence 0.8.
pub const REFERENCE_RULE_COUNT: usize = 26;

/// A listed example triple, by member names.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceRow {
    pub id: &'static str,
    pub extent: &'static [&'static str],
    pub intent: &'static [&'static str],
    pub times: &'static [&'static str],
}

pub const REFERENCE_ROWS: [ReferenceRow; 5] = [
    ReferenceRow {
        id: "TS_1",
        extent: &["L1"],
        intent: &["J2", "J3", "J4", "J5"],
        times: &["T2", "T4"],
    },
    ReferenceRow {
        id: "TS_2",
        extent: &["L2"],
        intent: &["J1", "J2", "J3", "J5"],
        times: &["T2", "T3"],
    },
    ReferenceRow {
        id: "TS_3",
        extent: &["L1", "L7"],
        intent: &["J2", "J4", "J5"],
        times: &["T2", "T3"],
    },
    ReferenceRow {
        id: "TS_4",
        extent: &["L2", "L3"],
        intent: &["J3", "J5", "J6"],
        times: &["T1"],
    },
    ReferenceRow {
        id: "TS_76",
        extent: &["L1", "L3", "L5", "L8", "L9"],
        intent: &["J2", "J4"],
        times: &["T3"],
    },
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedTriple {
    pub extent: Vec<String>,
    pub intent: Vec<String>,
    pub times: Vec<String>,
}

impl NamedTriple {
    fn of(cube: &DataCube, t: &AgroTriple) -> Self {
        let labels = cube.labels();
        NamedTriple {
            extent: member_names(labels, Axis::Location, &t.extent),
            intent: member_names(labels, Axis::Dimension, &t.intent),
            times: member_names(labels, Axis::Timestamp, &t.times),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowVerdict {
    pub id: String,
    pub listed: NamedTriple,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explanation: Option<String>,
    /// The maximal box reached by extending locations, then dimensions, then timestamps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_triple: Option<NamedTriple>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleCounts {
    pub enumerated: usize,
    pub oracle: Option<usize>,
    pub oracle_agrees: Option<bool>,
    pub reference: usize,
    pub matches_reference: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DenominatorCount {
    pub denominator: SupportDenominator,
    pub count: usize,
    pub matches_reference: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleCounts {
    pub min_support: String,
    pub min_confidence: String,
    pub threshold_reading: &'static str,
    pub generated: usize,
    pub reference: usize,
    pub passing: Vec<DenominatorCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeCounts {
    pub nodes: usize,
    pub hasse_edges: usize,
    pub flattened_nodes: usize,
    pub flattened_hasse_edges: usize,
    pub flattened_complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationCheck {
    pub triples_identical: bool,
    pub lattices_isomorphic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConformanceReport {
    pub triples: TripleCounts,
    pub rules: RuleCounts,
    pub reference_rows: Vec<RowVerdict>,
    pub lattice: LatticeCounts,
    pub orientation: OrientationCheck,
    pub notes: Vec<&'static str>,
}

impl ConformanceReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn row(&self, id: &str) -> Option<&RowVerdict> {
        self.reference_rows.iter().find(|r| r.id == id)
    }
}

const NOTES: [&str; 4] = [
    "triples are maximal full boxes with non-empty components; the oracle count is authoritative",
    "support and confidence thresholds are minimums, compared as exact fractions",
    "join follows the super-triple direction (larger extents): its formula unions extents and intersects closed intents, meet does the converse",
    "the flattened lattice (locations against dimension-timestamp pairs) is the complete one; agro-triple bounds are reported as frontiers",
];

fn resolve(cube: &DataCube, row: &ReferenceRow) -> Result<AgroTriple, String> {
    let labels = cube.labels();
    let idx = |axis: Axis, names: &[&str]| -> Result<Vec<usize>, String> {
        names
            .iter()
            .map(|n| labels.index_of(axis, n).map_err(|e| e.to_string()))
            .collect()
    };
    Ok(AgroTriple::new(
        LocSet::from_indices(cube.n_locs(), idx(Axis::Location, row.extent)?),
        DimSet::from_indices(cube.n_dims(), idx(Axis::Dimension, row.intent)?),
        TimeSet::from_indices(cube.n_times(), idx(Axis::Timestamp, row.times)?),
    ))
}

/// Extends a box to a maximal one: locations first, then dimensions, then timestamps.
fn close_box(cube: &DataCube, t: &AgroTriple) -> AgroTriple {
    let extent = cube.locs_with_box(&t.intent, &t.times);
    let intent = cube.dims_with_box(&extent, &t.times);
    let times = cube.times_with_box(&extent, &intent);
    AgroTriple::new(extent, intent, times)
}

fn judge(cube: &DataCube, mined: &crate::concepts::TripleSet, row: &ReferenceRow) -> RowVerdict {
    let listed = NamedTriple {
        extent: row.extent.iter().map(|s| s.to_string()).collect(),
        intent: row.intent.iter().map(|s| s.to_string()).collect(),
        times: row.times.iter().map(|s| s.to_string()).collect(),
    };
    let mismatch = |explanation: String, closed_triple: Option<NamedTriple>| RowVerdict {
        id: row.id.to_string(),
        listed: listed.clone(),
        verdict: Verdict::Mismatch,
        explanation: Some(explanation),
        closed_triple,
    };
    let triple = match resolve(cube, row) {
        Ok(t) => t,
        Err(e) => return mismatch(e, None),
    };
    if mined.contains(&triple) {
        return RowVerdict {
            id: row.id.to_string(),
            listed,
            verdict: Verdict::Match,
            explanation: None,
            closed_triple: None,
        };
    }
    let labels = cube.labels();
    if !triple.is_box_of(cube) {
        let missing: Vec<String> = triple
            .extent
            .iter()
            .flat_map(|l| triple.intent.iter().map(move |j| (l, j)))
            .flat_map(|(l, j)| triple.times.iter().map(move |t| (l, j, t)))
            .filter(|&(l, j, t)| !cube.contains(l, j, t))
            .map(|(l, j, t)| {
                format!(
                    "({}, {}, {})",
                    labels.locations()[l],
                    labels.dimensions()[j],
                    labels.timestamps()[t]
                )
            })
            .collect();
        return mismatch(
            format!("not a full box: absent cells {}", missing.join(", ")),
            None,
        );
    }
    debug_assert!(!is_maximal_box(cube, &triple));
    let closed = close_box(cube, &triple);
    let names =
        |axis: Axis, extra: &crate::bitset::IndexSet| member_names(labels, axis, extra).join(", ");
    let mut reasons = Vec::new();
    let extra_locs = closed.extent.difference(&triple.extent);
    if !extra_locs.is_empty() {
        reasons.push(format!(
            "{} also carr{} every listed dimension at every listed timestamp",
            names(Axis::Location, &extra_locs),
            if extra_locs.len() == 1 { "ies" } else { "y" }
        ));
    }
    let extra_dims = closed.intent.difference(&triple.intent);
    if !extra_dims.is_empty() {
        reasons.push(format!(
            "dimensions {} can be added",
            names(Axis::Dimension, &extra_dims)
        ));
    }
    let extra_times = closed.times.difference(&triple.times);
    if !extra_times.is_empty() {
        reasons.push(format!(
            "timestamps {} can be added",
            names(Axis::Timestamp, &extra_times)
        ));
    }
    mismatch(
        format!("full box but not maximal: {}", reasons.join("; ")),
        Some(NamedTriple::of(cube, &closed)),
    )
}

/// Builds the report for `cube` at the given rule thresholds.
pub fn conformance_report(
    cube: &DataCube,
    min_support: Fraction,
    min_confidence: Fraction,
) -> ConformanceReport {
    let mined = enumerate_agro_triples(cube);
    let oracle = oracle_enumerate(cube, DEFAULT_ORACLE_BUDGET).ok();

    let counts = |denominator: SupportDenominator| {
        let opts = RuleOptions {
            denominator,
            ..Default::default()
        };
        let all = generate_rules(cube, &mined, &opts);
        (
            all.len(),
            filter_rules(&all, min_support, min_confidence).len(),
        )
    };
    let (generated, by_locations) = counts(SupportDenominator::Locations);
    let (_, by_dimensions) = counts(SupportDenominator::Dimensions);

    let lattice = build_lattice(&mined);
    let flat = flatten_lattice(cube);
    let flattened_complete = flat.nodes().iter().all(|a| {
        flat.nodes().iter().all(|b| {
            let join = flat.join(cube, a, b).expect("node of the lattice");
            let meet = flat.meet(cube, a, b).expect("node of the lattice");
            join.exact.is_some() && meet.exact.is_some()
        })
    });

    let rotated = cube.reorient(match cube.orientation() {
        Orientation::ByTime => Orientation::ByDimension,
        Orientation::ByDimension => Orientation::ByTime,
    });
    let rotated_triples = enumerate_agro_triples(&rotated);
    let rotated_lattice = build_lattice(&rotated_triples);

    ConformanceReport {
        triples: TripleCounts {
            enumerated: mined.len(),
            oracle: oracle.as_ref().map(|o| o.len()),
            oracle_agrees: oracle.as_ref().map(|o| *o == mined),
            reference: REFERENCE_TRIPLE_COUNT,
            matches_reference: mined.len() == REFERENCE_TRIPLE_COUNT,
        },
        rules: RuleCounts {
            min_support: min_support.to_string(),
            min_confidence: min_confidence.to_string(),
            threshold_reading: "minimum support and minimum confidence",
            generated,
            reference: REFERENCE_RULE_COUNT,
            passing: vec![
                DenominatorCount {
                    denominator: SupportDenominator::Locations,
                    count: by_locations,
                    matches_reference: by_locations == REFERENCE_RULE_COUNT,
                },
                DenominatorCount {
                    denominator: SupportDenominator::Dimensions,
                    count: by_dimensions,
                    matches_reference: by_dimensions == REFERENCE_RULE_COUNT,
                },
            ],
        },
        reference_rows: REFERENCE_ROWS
            .iter()
            .map(|row| judge(cube, &mined, row))
            .collect(),
        lattice: LatticeCounts {
            nodes: lattice.len(),
            hasse_edges: lattice.hasse_edges().len(),
            flattened_nodes: flat.len(),
            flattened_hasse_edges: flat.hasse_edges().len(),
            flattened_complete,
        },
        orientation: OrientationCheck {
            triples_identical: rotated_triples == mined,
            lattices_isomorphic: check_isomorphic(&lattice, &rotated_lattice),
        },
        notes: NOTES.to_vec(),
    }
}
