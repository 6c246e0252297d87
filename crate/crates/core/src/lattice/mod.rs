//! Ordering agro-triples into a lattice-shaped DAG.
//!
//! A triple `b` sits above `a` (`a` precedes `b`) when `b` covers more
//! locations with fewer or equal dimensions and timestamps. The Hasse
//! diagram keeps only covering pairs. The same machinery orders the
//! concepts of the flattened context, whose lattice is complete.

mod iso;

use std::cmp::Reverse;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

pub use iso::{check_isomorphic, check_isomorphic_by};

use crate::bitset::IndexSet;
use crate::concepts::{dyadic_concepts, AgroTriple, TripleSet};
use crate::cube::{AxisLabels, DataCube, DimSet, LocSet, PairSet, TimeSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("triples range over different axes")]
    AxisMismatch,
    #[error("node is not part of the lattice")]
    NodeNotInLattice,
}

/// An element that can be placed in a [`SpatioTemporalLattice`].
pub trait LatticeNode: Clone + Ord + fmt::Debug + Send + Sync {
    /// Reflexive order: `self` lies below or equal to `other`.
    fn precedes(&self, other: &Self) -> bool;

    /// A key that strictly increases along the strict order.
    fn rank(&self) -> (usize, Reverse<usize>, Reverse<usize>);

    /// Upper-bound candidate built from the two nodes' components.
    fn join_formula(&self, other: &Self, cube: &DataCube) -> Self;

    /// Lower-bound candidate built from the two nodes' components.
    fn meet_formula(&self, other: &Self, cube: &DataCube) -> Self;
}

fn same_axes(a: &AgroTriple, b: &AgroTriple) -> bool {
    a.extent.universe() == b.extent.universe()
        && a.intent.universe() == b.intent.universe()
        && a.times.universe() == b.times.universe()
}

/// `a` precedes `b` when `b` is its super triple: `a.extent ⊆ b.extent`,
/// `b.intent ⊆ a.intent` and `b.times ⊆ a.times`.
pub fn precedes(a: &AgroTriple, b: &AgroTriple) -> Result<bool, LatticeError> {
    if !same_axes(a, b) {
        return Err(LatticeError::AxisMismatch);
    }
    Ok(a.precedes(b))
}

impl LatticeNode for AgroTriple {
    fn precedes(&self, other: &Self) -> bool {
        self.extent.is_subset(&other.extent)
            && other.intent.is_subset(&self.intent)
            && other.times.is_subset(&self.times)
    }

    fn rank(&self) -> (usize, Reverse<usize>, Reverse<usize>) {
        let (l, j, t) = self.sizes();
        (l, Reverse(j), Reverse(t))
    }

    /// `(∪ extents, ∩ closed intents, ∩ times)`.
    fn join_formula(&self, other: &Self, cube: &DataCube) -> Self {
        AgroTriple::new(
            self.extent.union(&other.extent),
            cube.closure_dims_flat(&self.intent)
                .intersection(&cube.closure_dims_flat(&other.intent)),
            self.times.intersection(&other.times),
        )
    }

    /// `(∩ closed extents, ∪ intents, ∪ times)`.
    fn meet_formula(&self, other: &Self, cube: &DataCube) -> Self {
        AgroTriple::new(
            cube.closure_locs_flat(&self.extent)
                .intersection(&cube.closure_locs_flat(&other.extent)),
            self.intent.union(&other.intent),
            self.times.union(&other.times),
        )
    }
}

/// A concept of the flattened context: locations against (dimension,
/// timestamp) pairs, with pairs indexed as `dim * |T| + time`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatConcept {
    pub extent: LocSet,
    pub pairs: PairSet,
}

impl LatticeNode for FlatConcept {
    fn precedes(&self, other: &Self) -> bool {
        self.extent.is_subset(&other.extent)
    }

    fn rank(&self) -> (usize, Reverse<usize>, Reverse<usize>) {
        (self.extent.len(), Reverse(self.pairs.len()), Reverse(0))
    }

    fn join_formula(&self, other: &Self, cube: &DataCube) -> Self {
        let pairs = PairSet::new(
            self.pairs.bits().intersection(other.pairs.bits()),
            cube.n_times(),
        );
        FlatConcept {
            extent: cube.locs_with_pairs(&pairs),
            pairs,
        }
    }

    fn meet_formula(&self, other: &Self, cube: &DataCube) -> Self {
        let extent = self.extent.intersection(&other.extent);
        FlatConcept {
            pairs: cube.loc_friendly(&extent),
            extent,
        }
    }
}

/// Least upper / greatest lower bound of two nodes, when it exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundResult<N> {
    /// The unique least upper (greatest lower) bound among the nodes.
    pub exact: Option<N>,
    /// Minimal upper (maximal lower) bounds among the nodes.
    pub frontier: Vec<N>,
    /// The closed-form candidate from the node components.
    pub formula_value: N,
}

/// Nodes in canonical order, the strict order as per-node upper and lower
/// sets, and the Hasse covering pairs.
#[derive(Debug, Clone)]
pub struct SpatioTemporalLattice<N> {
    nodes: Vec<N>,
    above: Vec<IndexSet>,
    below: Vec<IndexSet>,
    hasse: Vec<(usize, usize)>,
    artificial_top: Option<usize>,
    artificial_bottom: Option<usize>,
}

impl<N: LatticeNode> SpatioTemporalLattice<N> {
    /// Orders `nodes` (sorted and deduplicated first) and computes covers.
    pub fn from_nodes(mut nodes: Vec<N>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        let n = nodes.len();
        let above: Vec<IndexSet> = (0..n)
            .into_par_iter()
            .map(|i| {
                IndexSet::from_indices(
                    n,
                    (0..n).filter(|&k| k != i && nodes[i].precedes(&nodes[k])),
                )
            })
            .collect();
        let mut below = vec![IndexSet::empty(n); n];
        for (i, ups) in above.iter().enumerate() {
            for k in ups.iter() {
                below[k].insert(i);
            }
        }

        let mut by_rank: Vec<usize> = (0..n).collect();
        by_rank.sort_by_key(|&i| (nodes[i].rank(), i));
        let hasse_rows: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut dominated = IndexSet::empty(n);
                let mut covers = Vec::new();
                for &k in by_rank.iter().filter(|&&k| above[i].contains(k)) {
                    if !dominated.contains(k) {
                        covers.push(k);
                        dominated.union_with(&above[k]);
                    }
                }
                covers.sort_unstable();
                covers
            })
            .collect();
        let hasse = hasse_rows
            .into_iter()
            .enumerate()
            .flat_map(|(i, covers)| covers.into_iter().map(move |k| (i, k)))
            .collect();

        SpatioTemporalLattice {
            nodes,
            above,
            below,
            hasse,
            artificial_top: None,
            artificial_bottom: None,
        }
    }

    pub fn nodes(&self) -> &[N] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Covering pairs `(child, parent)` in ascending order.
    pub fn hasse_edges(&self) -> &[(usize, usize)] {
        &self.hasse
    }

    pub fn artificial_top(&self) -> Option<usize> {
        self.artificial_top
    }

    pub fn artificial_bottom(&self) -> Option<usize> {
        self.artificial_bottom
    }

    pub fn index_of(&self, node: &N) -> Option<usize> {
        self.nodes.binary_search(node).ok()
    }

    /// Strict order on node indices.
    pub fn strictly_below(&self, i: usize, k: usize) -> bool {
        self.above[i].contains(k)
    }

    /// Reflexive order on node indices.
    pub fn le(&self, i: usize, k: usize) -> bool {
        i == k || self.strictly_below(i, k)
    }

    pub fn upper_set(&self, i: usize) -> &IndexSet {
        &self.above[i]
    }

    pub fn lower_set(&self, i: usize) -> &IndexSet {
        &self.below[i]
    }

    fn locate(&self, node: &N) -> Result<usize, LatticeError> {
        self.index_of(node).ok_or(LatticeError::NodeNotInLattice)
    }

    fn bound(&self, a: usize, b: usize, upward: bool) -> (Option<N>, Vec<N>) {
        let cone = |i: usize| {
            let mut s = if upward {
                self.above[i].clone()
            } else {
                self.below[i].clone()
            };
            s.insert(i);
            s
        };
        let common = cone(a).intersection(&cone(b));
        // Minimal elements going up, maximal going down.
        let extreme: Vec<usize> = common
            .iter()
            .filter(|&k| {
                let beyond = if upward {
                    &self.below[k]
                } else {
                    &self.above[k]
                };
                beyond.is_disjoint(&common)
            })
            .collect();
        let frontier: Vec<N> = extreme.iter().map(|&k| self.nodes[k].clone()).collect();
        let exact = (frontier.len() == 1).then(|| frontier[0].clone());
        (exact, frontier)
    }

    /// Least upper bound of `a` and `b` (toward larger extents).
    pub fn join(&self, cube: &DataCube, a: &N, b: &N) -> Result<BoundResult<N>, LatticeError> {
        let (ia, ib) = (self.locate(a)?, self.locate(b)?);
        let (exact, frontier) = self.bound(ia, ib, true);
        Ok(BoundResult {
            exact,
            frontier,
            formula_value: a.join_formula(b, cube),
        })
    }

    /// Greatest lower bound of `a` and `b` (toward smaller extents).
    pub fn meet(&self, cube: &DataCube, a: &N, b: &N) -> Result<BoundResult<N>, LatticeError> {
        let (ia, ib) = (self.locate(a)?, self.locate(b)?);
        let (exact, frontier) = self.bound(ia, ib, false);
        Ok(BoundResult {
            exact,
            frontier,
            formula_value: a.meet_formula(b, cube),
        })
    }

    /// Reflexivity, antisymmetry and transitivity of `precedes` over every
    /// node pair and triple.
    pub fn partial_order_holds(&self) -> bool {
        let n = self.nodes.len();
        let le: Vec<Vec<bool>> = self
            .nodes
            .iter()
            .map(|a| self.nodes.iter().map(|b| a.precedes(b)).collect())
            .collect();
        for i in 0..n {
            if !le[i][i] {
                return false;
            }
            for k in 0..n {
                if i != k && le[i][k] && le[k][i] {
                    return false;
                }
                if le[i][k] && (0..n).any(|m| le[k][m] && !le[i][m]) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether reachability along Hasse edges reproduces the strict order
    /// exactly, with no self-loops.
    pub fn hasse_reachability_matches(&self) -> bool {
        let n = self.nodes.len();
        let mut parents = vec![Vec::new(); n];
        for &(c, p) in &self.hasse {
            if c == p {
                return false;
            }
            parents[c].push(p);
        }
        (0..n).all(|i| {
            let mut seen = IndexSet::empty(n);
            let mut stack = parents[i].clone();
            while let Some(k) = stack.pop() {
                if seen.insert(k) {
                    stack.extend(&parents[k]);
                }
            }
            seen == self.above[i]
        })
    }
}

/// Orders `triples` and computes the Hasse diagram.
pub fn build_lattice(triples: &TripleSet) -> SpatioTemporalLattice<AgroTriple> {
    SpatioTemporalLattice::from_nodes(triples.as_slice().to_vec())
}

/// Like [`build_lattice`], adding `(L, ∅, ∅)` on top and `(∅, J, T)` at
/// the bottom unless those triples are already present.
pub fn build_lattice_with_bounds(
    triples: &TripleSet,
    labels: &AxisLabels,
) -> SpatioTemporalLattice<AgroTriple> {
    use crate::cube::Axis;
    let (nl, nj, nt) = (
        labels.len(Axis::Location),
        labels.len(Axis::Dimension),
        labels.len(Axis::Timestamp),
    );
    let top = AgroTriple::new(LocSet::full(nl), DimSet::empty(nj), TimeSet::empty(nt));
    let bottom = AgroTriple::new(LocSet::empty(nl), DimSet::full(nj), TimeSet::full(nt));
    let mut nodes = triples.as_slice().to_vec();
    let add_top = !triples.contains(&top);
    let add_bottom = !triples.contains(&bottom);
    if add_top {
        nodes.push(top.clone());
    }
    if add_bottom {
        nodes.push(bottom.clone());
    }
    let mut lattice = SpatioTemporalLattice::from_nodes(nodes);
    lattice.artificial_top = add_top.then(|| lattice.index_of(&top)).flatten();
    lattice.artificial_bottom = add_bottom.then(|| lattice.index_of(&bottom)).flatten();
    lattice
}

/// All concepts of the flattened context (objects = locations,
/// attributes = (dimension, timestamp) pairs), ordered by extent inclusion.
pub fn flatten_lattice(cube: &DataCube) -> SpatioTemporalLattice<FlatConcept> {
    let (nj, nt) = (cube.n_dims(), cube.n_times());
    let rows: Vec<IndexSet> = (0..cube.n_locs())
        .map(|l| {
            cube.loc_friendly(&LocSet::from_indices(cube.n_locs(), [l]))
                .bits()
                .clone()
        })
        .collect();
    let nodes = dyadic_concepts(&rows, nj * nt)
        .into_iter()
        .map(|(extent, pairs)| FlatConcept {
            extent: LocSet::from_bits(extent),
            pairs: PairSet::new(pairs, nt),
        })
        .collect();
    SpatioTemporalLattice::from_nodes(nodes)
}
