//! Enumeration of agro-triples: maximal full boxes `(locations, dimensions,
//! timestamps)` of a cube.
//!
//! Every maximal box has an extent that is closed in the flattened context
//! (locations against (dimension, timestamp) pairs). The enumerator walks
//! those extents with Close-by-One, views each extent's shared pairs as a
//! small two-axis table laid out in the cube's storage orientation, and
//! keeps the dyadic concepts of that table whose derived extent is exactly
//! the starting one.

use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::IndexSet;
use crate::cube::{DataCube, DimSet, LocSet, Orientation, SliceContext, TimeSet};

/// A closed spatio-temporal triple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgroTriple {
    pub extent: LocSet,
    pub intent: DimSet,
    pub times: TimeSet,
}

impl AgroTriple {
    pub fn new(extent: LocSet, intent: DimSet, times: TimeSet) -> Self {
        AgroTriple {
            extent,
            intent,
            times,
        }
    }

    /// Component sizes `(|extent|, |intent|, |times|)`.
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.extent.len(), self.intent.len(), self.times.len())
    }

    /// Whether every cell of `extent × intent × times` is incident.
    pub fn is_box_of(&self, cube: &DataCube) -> bool {
        self.extent.iter().all(|l| {
            self.intent
                .iter()
                .all(|j| self.times.iter().all(|t| cube.contains(l, j, t)))
        })
    }
}

/// Duplicate-free triples in canonical (extent, intent, times) order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TripleSet {
    triples: Vec<AgroTriple>,
}

impl TripleSet {
    pub fn from_unsorted(mut triples: Vec<AgroTriple>) -> Self {
        triples.sort_unstable();
        triples.dedup();
        TripleSet { triples }
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, AgroTriple> {
        self.triples.iter()
    }

    pub fn as_slice(&self) -> &[AgroTriple] {
        &self.triples
    }

    pub fn into_vec(self) -> Vec<AgroTriple> {
        self.triples
    }

    pub fn position(&self, triple: &AgroTriple) -> Option<usize> {
        self.triples.binary_search(triple).ok()
    }

    pub fn contains(&self, triple: &AgroTriple) -> bool {
        self.position(triple).is_some()
    }
}

impl<'a> IntoIterator for &'a TripleSet {
    type Item = &'a AgroTriple;
    type IntoIter = std::slice::Iter<'a, AgroTriple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

/// All formal concepts `(objects, attributes)` of a dyadic context given by
/// one attribute row per object, including those with an empty side.
/// Output order follows Close-by-One and is not canonical.
pub(crate) fn dyadic_concepts(rows: &[IndexSet], n_attrs: usize) -> Vec<(IndexSet, IndexSet)> {
    let n_objs = rows.len();
    let down = |attrs: &IndexSet| {
        IndexSet::from_indices(
            n_objs,
            rows.iter()
                .enumerate()
                .filter(|(_, r)| attrs.is_subset(r))
                .map(|(o, _)| o),
        )
    };
    let top_attrs = IndexSet::full(n_attrs);
    let top_objs = down(&top_attrs);
    let mut out = Vec::new();
    let mut stack = vec![(top_objs, top_attrs, 0usize)];
    while let Some((objs, attrs, start)) = stack.pop() {
        for o in (start..n_objs).rev() {
            if objs.contains(o) {
                continue;
            }
            let next_attrs = attrs.intersection(&rows[o]);
            let next_objs = down(&next_attrs);
            if next_objs.agrees_below(&objs, o) {
                stack.push((next_objs, next_attrs, o + 1));
            }
        }
        out.push((objs, attrs));
    }
    out
}

/// Dyadic concepts of a single timestamp with non-empty extent and intent,
/// in canonical order.
pub fn enumerate_slice_concepts(slice: &SliceContext) -> Vec<(LocSet, DimSet)> {
    let rows: Vec<IndexSet> = slice.rows().iter().map(|r| r.bits().clone()).collect();
    let mut out: Vec<(LocSet, DimSet)> = dyadic_concepts(&rows, slice.n_dims())
        .into_iter()
        .filter(|(e, i)| !e.is_empty() && !i.is_empty())
        .map(|(e, i)| (LocSet::from_bits(e), DimSet::from_bits(i)))
        .collect();
    out.sort_unstable();
    out
}

/// The cube viewed as locations against a `major × minor` grid of pairs,
/// where the grid follows the cube's storage orientation.
struct FlatView {
    major: usize,
    minor: usize,
    orientation: Orientation,
    rows: Vec<IndexSet>,
}

impl FlatView {
    fn new(cube: &DataCube) -> Self {
        let orientation = cube.orientation();
        let (major, minor) = match orientation {
            Orientation::ByTime => (cube.n_times(), cube.n_dims()),
            Orientation::ByDimension => (cube.n_dims(), cube.n_times()),
        };
        let rows = (0..cube.n_locs())
            .map(|l| {
                let mut row = IndexSet::empty(major * minor);
                for a in 0..major {
                    for b in 0..minor {
                        let (j, t) = Self::dim_time(orientation, a, b);
                        if cube.contains(l, j, t) {
                            row.insert(a * minor + b);
                        }
                    }
                }
                row
            })
            .collect();
        FlatView {
            major,
            minor,
            orientation,
            rows,
        }
    }

    fn dim_time(orientation: Orientation, a: usize, b: usize) -> (usize, usize) {
        match orientation {
            Orientation::ByTime => (b, a),
            Orientation::ByDimension => (a, b),
        }
    }

    fn locs_with(&self, pairs: &IndexSet) -> IndexSet {
        IndexSet::from_indices(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| pairs.is_subset(r))
                .map(|(l, _)| l),
        )
    }

    /// Maximal boxes whose extent is exactly `extent`, given its shared pairs.
    fn boxes_for_extent(&self, extent: &IndexSet, pairs: &IndexSet) -> Vec<AgroTriple> {
        let grid: Vec<IndexSet> = (0..self.major)
            .map(|a| {
                IndexSet::from_indices(
                    self.minor,
                    (0..self.minor).filter(|&b| pairs.contains(a * self.minor + b)),
                )
            })
            .collect();
        let mut out = Vec::new();
        for (majors, minors) in dyadic_concepts(&grid, self.minor) {
            if majors.is_empty() || minors.is_empty() {
                continue;
            }
            let mut cells = IndexSet::empty(self.major * self.minor);
            for a in majors.iter() {
                for b in minors.iter() {
                    cells.insert(a * self.minor + b);
                }
            }
            if self.locs_with(&cells) != *extent {
                continue;
            }
            let (intent, times) = match self.orientation {
                Orientation::ByTime => (minors, majors),
                Orientation::ByDimension => (majors, minors),
            };
            out.push(AgroTriple::new(
                LocSet::from_bits(extent.clone()),
                DimSet::from_bits(intent),
                TimeSet::from_bits(times),
            ));
        }
        out
    }
}

/// Closed location sets of the flattened context with their shared pairs.
fn flat_concepts(view: &FlatView) -> Vec<(IndexSet, IndexSet)> {
    dyadic_concepts(&view.rows, view.major * view.minor)
}

/// Every maximal full box with non-empty components, canonically ordered.
pub fn enumerate_agro_triples(cube: &DataCube) -> TripleSet {
    let view = FlatView::new(cube);
    let triples: Vec<AgroTriple> = flat_concepts(&view)
        .par_iter()
        .filter(|(extent, pairs)| !extent.is_empty() && !pairs.is_empty())
        .flat_map_iter(|(extent, pairs)| view.boxes_for_extent(extent, pairs))
        .collect();
    TripleSet::from_unsorted(triples)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive search needs {required} candidates, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
}

/// Default ceiling on `2^|J| * 2^|T|` candidate boxes for the oracle.
pub const DEFAULT_ORACLE_BUDGET: u128 = 1 << 24;

/// Exhaustive reference enumeration: tries every non-empty (dimensions,
/// timestamps) pair of subsets, takes all locations carrying that box and
/// keeps it when no single dimension or timestamp can be added.
pub fn oracle_enumerate(cube: &DataCube, budget: u128) -> Result<TripleSet, OracleError> {
    let (nl, nj, nt) = (cube.n_locs(), cube.n_dims(), cube.n_times());
    let required = 1u128
        .checked_shl((nj + nt) as u32)
        .filter(|_| nj + nt < 127)
        .unwrap_or(u128::MAX);
    if required > budget {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    let members =
        |mask: u64, n: usize| -> Vec<usize> { (0..n).filter(|i| mask >> i & 1 == 1).collect() };
    let mut out = Vec::new();
    for dmask in 1u64..(1 << nj) {
        let dims = members(dmask, nj);
        for tmask in 1u64..(1 << nt) {
            let times = members(tmask, nt);
            let holds = |l: usize, dims: &[usize], times: &[usize]| {
                dims.iter()
                    .all(|&j| times.iter().all(|&t| cube.contains(l, j, t)))
            };
            let locs: Vec<usize> = (0..nl).filter(|&l| holds(l, &dims, &times)).collect();
            if locs.is_empty() {
                continue;
            }
            let dim_extends = (0..nj)
                .filter(|j| dmask >> j & 1 == 0)
                .any(|j| locs.iter().all(|&l| holds(l, &[j], &times)));
            let time_extends = (0..nt)
                .filter(|t| tmask >> t & 1 == 0)
                .any(|t| locs.iter().all(|&l| holds(l, &dims, &[t])));
            if dim_extends || time_extends {
                continue;
            }
            out.push(AgroTriple::new(
                LocSet::from_indices(nl, locs),
                DimSet::from_indices(nj, dims.iter().copied()),
                TimeSet::from_indices(nt, times),
            ));
        }
    }
    Ok(TripleSet::from_unsorted(out))
}

/// Whether `triple` is a full box of `cube` that no single location,
/// dimension or timestamp can extend.
pub fn is_maximal_box(cube: &DataCube, triple: &AgroTriple) -> bool {
    if triple.extent.universe() != cube.n_locs()
        || triple.intent.universe() != cube.n_dims()
        || triple.times.universe() != cube.n_times()
    {
        return false;
    }
    if !triple.is_box_of(cube) {
        return false;
    }
    let AgroTriple {
        extent,
        intent,
        times,
    } = triple;
    let loc_extends = (0..cube.n_locs())
        .filter(|l| !extent.contains(*l))
        .any(|l| {
            intent
                .iter()
                .all(|j| times.iter().all(|t| cube.contains(l, j, t)))
        });
    let dim_extends = (0..cube.n_dims())
        .filter(|j| !intent.contains(*j))
        .any(|j| {
            extent
                .iter()
                .all(|l| times.iter().all(|t| cube.contains(l, j, t)))
        });
    let time_extends = (0..cube.n_times())
        .filter(|t| !times.contains(*t))
        .any(|t| {
            extent
                .iter()
                .all(|l| intent.iter().all(|j| cube.contains(l, j, t)))
        });
    !(loc_extends || dim_extends || time_extends)
}
