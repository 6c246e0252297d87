//! Random cubes and brute-force reference computations shared by the
//! integration tests. Nothing here calls the closure or derivation code
//! under test; everything is recomputed from the list of facts.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stlattice::{AxisLabels, DataCube};

pub type Fact = (usize, usize, usize);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A cube with each axis of length `1..=max_axis` and a random density.
pub fn random_cube(rng: &mut ChaCha8Rng, max_axis: usize) -> DataCube {
    let (n, k, t) = (
        rng.gen_range(1..=max_axis),
        rng.gen_range(1..=max_axis),
        rng.gen_range(1..=max_axis),
    );
    let density = rng.gen_range(0.2..0.8);
    cube_with_density(rng, n, k, t, density)
}

pub fn cube_with_density(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
    t: usize,
    density: f64,
) -> DataCube {
    let mut facts = Vec::new();
    for l in 0..n {
        for j in 0..k {
            for s in 0..t {
                if rng.gen_bool(density) {
                    facts.push((l, j, s));
                }
            }
        }
    }
    DataCube::from_facts(AxisLabels::numbered(n, k, t).unwrap(), facts).unwrap()
}

pub fn random_subset(rng: &mut ChaCha8Rng, universe: usize) -> Vec<usize> {
    (0..universe).filter(|_| rng.gen_bool(0.5)).collect()
}

/// Locations carrying every given (dimension, timestamp) pair.
pub fn ref_locs_with_pairs(
    facts: &BTreeSet<Fact>,
    n_locs: usize,
    pairs: &[(usize, usize)],
) -> Vec<usize> {
    (0..n_locs)
        .filter(|&l| pairs.iter().all(|&(j, t)| facts.contains(&(l, j, t))))
        .collect()
}

/// (dimension, timestamp) pairs shared by every given location.
pub fn ref_pairs_of_locs(
    facts: &BTreeSet<Fact>,
    n_dims: usize,
    n_times: usize,
    locs: &[usize],
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for j in 0..n_dims {
        for t in 0..n_times {
            if locs.iter().all(|&l| facts.contains(&(l, j, t))) {
                out.push((j, t));
            }
        }
    }
    out
}

/// Closure of a location set in the locations × (dimension, timestamp) context.
pub fn ref_closure_locs(
    facts: &BTreeSet<Fact>,
    dims: (usize, usize, usize),
    locs: &[usize],
) -> Vec<usize> {
    let (n, k, t) = dims;
    ref_locs_with_pairs(facts, n, &ref_pairs_of_locs(facts, k, t, locs))
}

/// Closure of a dimension set in the dimensions × (location, timestamp) context.
pub fn ref_closure_dims(
    facts: &BTreeSet<Fact>,
    dims: (usize, usize, usize),
    ds: &[usize],
) -> Vec<usize> {
    let (n, k, t) = dims;
    let shared: Vec<(usize, usize)> = (0..n)
        .flat_map(|l| (0..t).map(move |s| (l, s)))
        .filter(|&(l, s)| ds.iter().all(|&j| facts.contains(&(l, j, s))))
        .collect();
    (0..k)
        .filter(|&j| shared.iter().all(|&(l, s)| facts.contains(&(l, j, s))))
        .collect()
}

/// Closure of a timestamp set in the timestamps × (location, dimension) context.
pub fn ref_closure_times(
    facts: &BTreeSet<Fact>,
    dims: (usize, usize, usize),
    ts: &[usize],
) -> Vec<usize> {
    let (n, k, t) = dims;
    let shared: Vec<(usize, usize)> = (0..n)
        .flat_map(|l| (0..k).map(move |j| (l, j)))
        .filter(|&(l, j)| ts.iter().all(|&s| facts.contains(&(l, j, s))))
        .collect();
    (0..t)
        .filter(|&s| shared.iter().all(|&(l, j)| facts.contains(&(l, j, s))))
        .collect()
}

pub fn fact_set(cube: &DataCube) -> BTreeSet<Fact> {
    cube.facts().into_iter().collect()
}

pub fn shape(cube: &DataCube) -> (usize, usize, usize) {
    (cube.n_locs(), cube.n_dims(), cube.n_times())
}

/// Number of locations holding all of `dims` at every timestamp in `times`,
/// counted straight from the fact list.
pub fn ref_holders(facts: &BTreeSet<Fact>, n_locs: usize, dims: &[usize], times: &[usize]) -> u64 {
    (0..n_locs)
        .filter(|&l| {
            dims.iter()
                .all(|&j| times.iter().all(|&t| facts.contains(&(l, j, t))))
        })
        .count() as u64
}
