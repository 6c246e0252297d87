//! Order-isomorphism of two lattices via their Hasse diagrams.
//!
//! Two finite posets are isomorphic exactly when their covering graphs are.
//! Both graphs are colored jointly (so colors are comparable), refined by
//! the multisets of parent and child colors until stable, and remaining
//! ties are resolved by individualizing one node pair at a time.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use super::{LatticeNode, SpatioTemporalLattice};

struct Dag {
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    edges: HashSet<(usize, usize)>,
}

impl Dag {
    fn of<N: LatticeNode>(lattice: &SpatioTemporalLattice<N>) -> Self {
        let n = lattice.len();
        let mut parents = vec![Vec::new(); n];
        let mut children = vec![Vec::new(); n];
        for &(c, p) in lattice.hasse_edges() {
            parents[c].push(p);
            children[p].push(c);
        }
        Dag {
            parents,
            children,
            edges: lattice.hasse_edges().iter().copied().collect(),
        }
    }

    fn len(&self) -> usize {
        self.parents.len()
    }
}

type Signature = (u32, Vec<u32>, Vec<u32>);

#[derive(Default)]
struct Palette {
    ids: HashMap<Signature, u32>,
    next: u32,
}

impl Palette {
    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next
    }

    fn color(&mut self, sig: Signature) -> u32 {
        if let Some(&c) = self.ids.get(&sig) {
            return c;
        }
        let c = self.fresh();
        self.ids.insert(sig, c);
        c
    }
}

fn class_count(a: &[u32], b: &[u32]) -> usize {
    a.iter().chain(b).collect::<HashSet<_>>().len()
}

fn histogram(colors: &[u32]) -> HashMap<u32, usize> {
    let mut h = HashMap::new();
    for &c in colors {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

fn signature(dag: &Dag, colors: &[u32], v: usize) -> Signature {
    let mut up: Vec<u32> = dag.parents[v].iter().map(|&p| colors[p]).collect();
    let mut down: Vec<u32> = dag.children[v].iter().map(|&c| colors[c]).collect();
    up.sort_unstable();
    down.sort_unstable();
    (colors[v], up, down)
}

/// Refines both colorings to a joint fixed point. Returns false as soon as
/// the color histograms diverge.
fn refine(ga: &Dag, gb: &Dag, ca: &mut Vec<u32>, cb: &mut Vec<u32>, palette: &mut Palette) -> bool {
    let mut classes = class_count(ca, cb);
    loop {
        if histogram(ca) != histogram(cb) {
            return false;
        }
        let na: Vec<u32> = (0..ga.len())
            .map(|v| palette.color(signature(ga, ca, v)))
            .collect();
        let nb: Vec<u32> = (0..gb.len())
            .map(|v| palette.color(signature(gb, cb, v)))
            .collect();
        *ca = na;
        *cb = nb;
        let next = class_count(ca, cb);
        if next == classes {
            return histogram(ca) == histogram(cb);
        }
        classes = next;
    }
}

fn search(ga: &Dag, gb: &Dag, ca: Vec<u32>, cb: Vec<u32>, palette: &mut Palette) -> bool {
    let hist = histogram(&ca);
    let pivot = (0..ga.len())
        .filter(|&v| hist[&ca[v]] > 1)
        .min_by_key(|&v| (hist[&ca[v]], v));
    let Some(v) = pivot else {
        let by_color: HashMap<u32, usize> = cb.iter().enumerate().map(|(w, &c)| (c, w)).collect();
        let map: Vec<usize> = ca.iter().map(|c| by_color[c]).collect();
        return ga
            .edges
            .iter()
            .all(|&(c, p)| gb.edges.contains(&(map[c], map[p])));
    };
    for w in (0..gb.len()).filter(|&w| cb[w] == ca[v]) {
        let (mut na, mut nb) = (ca.clone(), cb.clone());
        let marker = palette.fresh();
        na[v] = marker;
        nb[w] = marker;
        if refine(ga, gb, &mut na, &mut nb, palette) && search(ga, gb, na, nb, palette) {
            return true;
        }
    }
    false
}

/// Whether the two lattices are order-isomorphic.
pub fn check_isomorphic<N: LatticeNode, M: LatticeNode>(
    a: &SpatioTemporalLattice<N>,
    b: &SpatioTemporalLattice<M>,
) -> bool {
    isomorphic_with_keys(a, b, vec![0; a.len()], vec![0; b.len()])
}

/// Isomorphism that must also preserve `key` on every node, e.g. the
/// component sizes of each triple.
pub fn check_isomorphic_by<N: LatticeNode, K: Hash + Eq>(
    a: &SpatioTemporalLattice<N>,
    b: &SpatioTemporalLattice<N>,
    key: impl Fn(&N) -> K,
) -> bool {
    let mut ids: HashMap<K, u32> = HashMap::new();
    let mut label = |n: &N| {
        let next = ids.len() as u32;
        *ids.entry(key(n)).or_insert(next)
    };
    let ka: Vec<u32> = a.nodes().iter().map(&mut label).collect();
    let kb: Vec<u32> = b.nodes().iter().map(&mut label).collect();
    isomorphic_with_keys(a, b, ka, kb)
}

fn isomorphic_with_keys<N: LatticeNode, M: LatticeNode>(
    a: &SpatioTemporalLattice<N>,
    b: &SpatioTemporalLattice<M>,
    ka: Vec<u32>,
    kb: Vec<u32>,
) -> bool {
    if a.len() != b.len() || a.hasse_edges().len() != b.hasse_edges().len() {
        return false;
    }
    let (ga, gb) = (Dag::of(a), Dag::of(b));
    let mut palette = Palette::default();
    let mut ca: Vec<u32> = ka
        .into_iter()
        .map(|k| palette.color((k, vec![], vec![])))
        .collect();
    let mut cb: Vec<u32> = kb
        .into_iter()
        .map(|k| palette.color((k, vec![], vec![])))
        .collect();
    refine(&ga, &gb, &mut ca, &mut cb, &mut palette) && search(&ga, &gb, ca, cb, &mut palette)
}
