//! The ternary incidence relation over (location, dimension, timestamp) and
//! its derivation operators.
//!
//! A [`DataCube`] records which dimensions were observed at which location
//! for every timestamp. Every query is exact: the relation is a bitset over
//! `|L| * |J| * |T|` cells. The cube can be stored time-major (one
//! location × dimension table per timestamp) or dimension-major (one
//! location × timestamp table per dimension). Orientation changes the
//! storage layout and the iteration order used by enumeration, never the
//! set of facts.

use std::collections::HashMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::IndexSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Location,
    Dimension,
    Timestamp,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Location => "location",
            Axis::Dimension => "dimension",
            Axis::Timestamp => "timestamp",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubeError {
    #[error("unknown {axis} label `{name}`")]
    UnknownLabel { name: String, axis: Axis },
    #[error("{0} axis is empty")]
    EmptyAxis(Axis),
    #[error("duplicate {axis} label `{name}`")]
    DuplicateLabel { name: String, axis: Axis },
    #[error("{axis} index {index} out of bounds (axis has {len} members)")]
    IndexOutOfBounds {
        axis: Axis,
        index: usize,
        len: usize,
    },
}

/// Marker for location-axis sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Loc;
/// Marker for dimension-axis sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Dim;
/// Marker for timestamp-axis sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Time;

/// A subset of one axis, tagged with the axis it belongs to.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AxisSet<A> {
    bits: IndexSet,
    _axis: PhantomData<A>,
}

pub type LocSet = AxisSet<Loc>;
pub type DimSet = AxisSet<Dim>;
pub type TimeSet = AxisSet<Time>;

impl<A> AxisSet<A> {
    pub fn from_bits(bits: IndexSet) -> Self {
        AxisSet {
            bits,
            _axis: PhantomData,
        }
    }

    pub fn empty(universe: usize) -> Self {
        Self::from_bits(IndexSet::empty(universe))
    }

    pub fn full(universe: usize) -> Self {
        Self::from_bits(IndexSet::full(universe))
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        Self::from_bits(IndexSet::from_indices(universe, indices))
    }

    pub fn bits(&self) -> &IndexSet {
        &self.bits
    }

    pub fn into_bits(self) -> IndexSet {
        self.bits
    }

    pub fn insert(&mut self, index: usize) -> bool {
        self.bits.insert(index)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self::from_bits(self.bits.intersection(&other.bits))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_bits(self.bits.union(&other.bits))
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self::from_bits(self.bits.difference(&other.bits))
    }
}

impl<A> Deref for AxisSet<A> {
    type Target = IndexSet;

    fn deref(&self) -> &IndexSet {
        &self.bits
    }
}

impl<A> fmt::Debug for AxisSet<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.bits.fmt(f)
    }
}

/// A set of index pairs `(a, b)` with `b < width`, e.g. the (dimension,
/// timestamp) pairs shared by a set of locations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairSet {
    bits: IndexSet,
    width: usize,
}

impl PairSet {
    pub fn new(bits: IndexSet, width: usize) -> Self {
        debug_assert!(width > 0 && bits.universe().is_multiple_of(width));
        PairSet { bits, width }
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        b < self.width && self.bits.contains(a * self.width + b)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let width = self.width;
        self.bits.iter().map(move |i| (i / width, i % width))
    }

    pub fn bits(&self) -> &IndexSet {
        &self.bits
    }

    pub fn width(&self) -> usize {
        self.width
    }
}

impl fmt::Debug for PairSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Names for the three axes. Position in each list is the canonical index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisLabels {
    locations: Vec<String>,
    dimensions: Vec<String>,
    timestamps: Vec<String>,
}

impl AxisLabels {
    pub fn new(
        locations: Vec<String>,
        dimensions: Vec<String>,
        timestamps: Vec<String>,
    ) -> Result<Self, CubeError> {
        for (axis, names) in [
            (Axis::Location, &locations),
            (Axis::Dimension, &dimensions),
            (Axis::Timestamp, &timestamps),
        ] {
            if names.is_empty() {
                return Err(CubeError::EmptyAxis(axis));
            }
            let mut seen = std::collections::HashSet::new();
            for name in names {
                if !seen.insert(name.as_str()) {
                    return Err(CubeError::DuplicateLabel {
                        name: name.clone(),
                        axis,
                    });
                }
            }
        }
        Ok(AxisLabels {
            locations,
            dimensions,
            timestamps,
        })
    }

    /// Labels `prefix1..=prefixN` on each axis, e.g. `L1, L2, ...`.
    pub fn numbered(n_locs: usize, n_dims: usize, n_times: usize) -> Result<Self, CubeError> {
        let names = |p: &str, n: usize| (1..=n).map(|i| format!("{p}{i}")).collect();
        Self::new(names("L", n_locs), names("J", n_dims), names("T", n_times))
    }

    pub fn locations(&self) -> &[String] {
        &self.locations
    }

    pub fn dimensions(&self) -> &[String] {
        &self.dimensions
    }

    pub fn timestamps(&self) -> &[String] {
        &self.timestamps
    }

    pub fn axis(&self, axis: Axis) -> &[String] {
        match axis {
            Axis::Location => &self.locations,
            Axis::Dimension => &self.dimensions,
            Axis::Timestamp => &self.timestamps,
        }
    }

    pub fn len(&self, axis: Axis) -> usize {
        self.axis(axis).len()
    }

    pub fn index_of(&self, axis: Axis, name: &str) -> Result<usize, CubeError> {
        self.axis(axis)
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| CubeError::UnknownLabel {
                name: name.to_string(),
                axis,
            })
    }

    fn resolver(&self) -> LabelResolver<'_> {
        fn index(names: &[String]) -> HashMap<&str, usize> {
            names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.as_str(), i))
                .collect()
        }
        LabelResolver {
            locs: index(&self.locations),
            dims: index(&self.dimensions),
            times: index(&self.timestamps),
        }
    }
}

struct LabelResolver<'a> {
    locs: HashMap<&'a str, usize>,
    dims: HashMap<&'a str, usize>,
    times: HashMap<&'a str, usize>,
}

impl LabelResolver<'_> {
    fn resolve(&self, axis: Axis, name: &str) -> Result<usize, CubeError> {
        let map = match axis {
            Axis::Location => &self.locs,
            Axis::Dimension => &self.dims,
            Axis::Timestamp => &self.times,
        };
        map.get(name)
            .copied()
            .ok_or_else(|| CubeError::UnknownLabel {
                name: name.to_string(),
                axis,
            })
    }
}

/// Storage layout of a cube.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// One location × dimension table per timestamp.
    #[default]
    ByTime,
    /// One location × timestamp table per dimension.
    ByDimension,
}

impl std::str::FromStr for Orientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "by_time" | "by-time" => Ok(Orientation::ByTime),
            "by_dimension" | "by-dimension" => Ok(Orientation::ByDimension),
            other => Err(format!("unknown orientation `{other}`")),
        }
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Orientation::ByTime => "by_time",
            Orientation::ByDimension => "by_dimension",
        })
    }
}

/// The spatio-temporal incidence relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataCube {
    labels: AxisLabels,
    orientation: Orientation,
    cells: IndexSet,
}

/// One fact of the relation as `(location, dimension, timestamp)` indices.
pub type Fact = (usize, usize, usize);

/// Resolves named triples against `labels`. Duplicates collapse.
pub fn build_cube<S: AsRef<str>>(
    labels: AxisLabels,
    triples: &[(S, S, S)],
) -> Result<DataCube, CubeError> {
    let resolver = labels.resolver();
    let facts = triples
        .iter()
        .map(|(l, j, t)| {
            Ok((
                resolver.resolve(Axis::Location, l.as_ref())?,
                resolver.resolve(Axis::Dimension, j.as_ref())?,
                resolver.resolve(Axis::Timestamp, t.as_ref())?,
            ))
        })
        .collect::<Result<Vec<_>, CubeError>>()?;
    DataCube::from_facts(labels, facts)
}

impl DataCube {
    /// Builds a time-major cube from index triples.
    pub fn from_facts<I: IntoIterator<Item = Fact>>(
        labels: AxisLabels,
        facts: I,
    ) -> Result<Self, CubeError> {
        let mut cube = DataCube::empty(labels);
        for (l, j, t) in facts {
            cube.check(Axis::Location, l)?;
            cube.check(Axis::Dimension, j)?;
            cube.check(Axis::Timestamp, t)?;
            let idx = cube.cell(l, j, t);
            cube.cells.insert(idx);
        }
        Ok(cube)
    }

    pub fn empty(labels: AxisLabels) -> Self {
        let size = labels.locations.len() * labels.dimensions.len() * labels.timestamps.len();
        DataCube {
            labels,
            orientation: Orientation::ByTime,
            cells: IndexSet::empty(size),
        }
    }

    fn check(&self, axis: Axis, index: usize) -> Result<(), CubeError> {
        let len = self.labels.len(axis);
        if index < len {
            Ok(())
        } else {
            Err(CubeError::IndexOutOfBounds { axis, index, len })
        }
    }

    #[inline]
    fn cell(&self, l: usize, j: usize, t: usize) -> usize {
        let (nj, nt) = (self.n_dims(), self.n_times());
        match self.orientation {
            Orientation::ByTime => (l * nt + t) * nj + j,
            Orientation::ByDimension => (l * nj + j) * nt + t,
        }
    }

    pub fn labels(&self) -> &AxisLabels {
        &self.labels
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn n_locs(&self) -> usize {
        self.labels.locations.len()
    }

    pub fn n_dims(&self) -> usize {
        self.labels.dimensions.len()
    }

    pub fn n_times(&self) -> usize {
        self.labels.timestamps.len()
    }

    /// Number of incident cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn contains(&self, l: usize, j: usize, t: usize) -> bool {
        l < self.n_locs()
            && j < self.n_dims()
            && t < self.n_times()
            && self.cells.contains(self.cell(l, j, t))
    }

    /// All facts in ascending (location, dimension, timestamp) order,
    /// independent of orientation.
    pub fn facts(&self) -> Vec<Fact> {
        let (nj, nt) = (self.n_dims(), self.n_times());
        let mut out: Vec<Fact> = self
            .cells
            .iter()
            .map(|c| match self.orientation {
                Orientation::ByTime => (c / (nj * nt), c % nj, (c / nj) % nt),
                Orientation::ByDimension => (c / (nj * nt), (c / nt) % nj, c % nt),
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Same facts, stored in the requested layout.
    pub fn reorient(&self, orientation: Orientation) -> DataCube {
        if orientation == self.orientation {
            return self.clone();
        }
        let mut out = DataCube {
            labels: self.labels.clone(),
            orientation,
            cells: IndexSet::empty(self.cells.universe()),
        };
        for (l, j, t) in self.facts() {
            let idx = out.cell(l, j, t);
            out.cells.insert(idx);
        }
        out
    }

    pub fn slice_at(&self, time_idx: usize) -> Result<SliceContext, CubeError> {
        self.check(Axis::Timestamp, time_idx)?;
        let rows = (0..self.n_locs())
            .map(|l| {
                DimSet::from_indices(
                    self.n_dims(),
                    (0..self.n_dims()).filter(|&j| self.contains(l, j, time_idx)),
                )
            })
            .collect();
        Ok(SliceContext {
            time_idx,
            n_dims: self.n_dims(),
            rows,
        })
    }

    /// `(dimension, timestamp)` pairs incident at every location of `locs`.
    pub fn loc_friendly(&self, locs: &LocSet) -> PairSet {
        let (nj, nt) = (self.n_dims(), self.n_times());
        let bits = IndexSet::from_indices(
            nj * nt,
            (0..nj)
                .flat_map(|j| (0..nt).map(move |t| (j, t)))
                .filter(|&(j, t)| locs.iter().all(|l| self.contains(l, j, t)))
                .map(|(j, t)| j * nt + t),
        );
        PairSet::new(bits, nt)
    }

    /// `(location, timestamp)` pairs incident with every dimension of `dims`.
    pub fn dim_friendly(&self, dims: &DimSet) -> PairSet {
        let (nl, nt) = (self.n_locs(), self.n_times());
        let bits = IndexSet::from_indices(
            nl * nt,
            (0..nl)
                .flat_map(|l| (0..nt).map(move |t| (l, t)))
                .filter(|&(l, t)| dims.iter().all(|j| self.contains(l, j, t)))
                .map(|(l, t)| l * nt + t),
        );
        PairSet::new(bits, nt)
    }

    /// `(location, dimension)` pairs incident at every timestamp of `times`.
    pub fn time_friendly(&self, times: &TimeSet) -> PairSet {
        let (nl, nj) = (self.n_locs(), self.n_dims());
        let bits = IndexSet::from_indices(
            nl * nj,
            (0..nl)
                .flat_map(|l| (0..nj).map(move |j| (l, j)))
                .filter(|&(l, j)| times.iter().all(|t| self.contains(l, j, t)))
                .map(|(l, j)| l * nj + j),
        );
        PairSet::new(bits, nj)
    }

    /// Locations incident with every `(dimension, timestamp)` pair in `pairs`.
    pub fn locs_with_pairs(&self, pairs: &PairSet) -> LocSet {
        LocSet::from_indices(
            self.n_locs(),
            (0..self.n_locs()).filter(|&l| pairs.iter().all(|(j, t)| self.contains(l, j, t))),
        )
    }

    /// Dimensions incident with every `(location, timestamp)` pair in `pairs`.
    pub fn dims_with_pairs(&self, pairs: &PairSet) -> DimSet {
        DimSet::from_indices(
            self.n_dims(),
            (0..self.n_dims()).filter(|&j| pairs.iter().all(|(l, t)| self.contains(l, j, t))),
        )
    }

    /// Timestamps incident with every `(location, dimension)` pair in `pairs`.
    pub fn times_with_pairs(&self, pairs: &PairSet) -> TimeSet {
        TimeSet::from_indices(
            self.n_times(),
            (0..self.n_times()).filter(|&t| pairs.iter().all(|(l, j)| self.contains(l, j, t))),
        )
    }

    /// Locations carrying every dimension of `dims` at every time of `times`.
    pub fn locs_with_box(&self, dims: &DimSet, times: &TimeSet) -> LocSet {
        LocSet::from_indices(
            self.n_locs(),
            (0..self.n_locs()).filter(|&l| {
                dims.iter()
                    .all(|j| times.iter().all(|t| self.contains(l, j, t)))
            }),
        )
    }

    /// Dimensions present at every location of `locs` at every time of `times`.
    pub fn dims_with_box(&self, locs: &LocSet, times: &TimeSet) -> DimSet {
        DimSet::from_indices(
            self.n_dims(),
            (0..self.n_dims()).filter(|&j| {
                locs.iter()
                    .all(|l| times.iter().all(|t| self.contains(l, j, t)))
            }),
        )
    }

    /// Timestamps at which every location of `locs` carries every dimension of `dims`.
    pub fn times_with_box(&self, locs: &LocSet, dims: &DimSet) -> TimeSet {
        TimeSet::from_indices(
            self.n_times(),
            (0..self.n_times()).filter(|&t| {
                locs.iter()
                    .all(|l| dims.iter().all(|j| self.contains(l, j, t)))
            }),
        )
    }

    /// Closure of a location set in the flattened context (objects are
    /// locations, attributes are (dimension, timestamp) pairs).
    pub fn closure_locs_flat(&self, locs: &LocSet) -> LocSet {
        self.locs_with_pairs(&self.loc_friendly(locs))
    }

    /// Closure of a dimension set against (location, timestamp) pairs.
    pub fn closure_dims_flat(&self, dims: &DimSet) -> DimSet {
        self.dims_with_pairs(&self.dim_friendly(dims))
    }

    /// Closure of a timestamp set against (location, dimension) pairs.
    pub fn closure_times_flat(&self, times: &TimeSet) -> TimeSet {
        self.times_with_pairs(&self.time_friendly(times))
    }
}

/// The location × dimension table of a single timestamp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceContext {
    time_idx: usize,
    n_dims: usize,
    rows: Vec<DimSet>,
}

impl SliceContext {
    /// Builds a slice directly from per-location rows.
    pub fn from_rows(time_idx: usize, n_dims: usize, rows: Vec<DimSet>) -> Self {
        debug_assert!(rows.iter().all(|r| r.universe() == n_dims));
        SliceContext {
            time_idx,
            n_dims,
            rows,
        }
    }

    pub fn time_idx(&self) -> usize {
        self.time_idx
    }

    pub fn n_locs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_dims(&self) -> usize {
        self.n_dims
    }

    pub fn rows(&self) -> &[DimSet] {
        &self.rows
    }

    pub fn row(&self, loc: usize) -> &DimSet {
        &self.rows[loc]
    }

    /// Dimensions shared by all locations in `locs`; all dimensions for `∅`.
    pub fn up(&self, locs: &LocSet) -> DimSet {
        let mut out = DimSet::full(self.n_dims);
        for l in locs.iter() {
            out = out.intersection(&self.rows[l]);
        }
        out
    }

    /// Locations carrying every dimension in `dims`; all locations for `∅`.
    pub fn down(&self, dims: &DimSet) -> LocSet {
        LocSet::from_indices(
            self.n_locs(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, row)| dims.is_subset(row))
                .map(|(l, _)| l),
        )
    }

    pub fn closure_locs(&self, locs: &LocSet) -> LocSet {
        self.down(&self.up(locs))
    }

    pub fn closure_dims(&self, dims: &DimSet) -> DimSet {
        self.up(&self.down(dims))
    }
}
