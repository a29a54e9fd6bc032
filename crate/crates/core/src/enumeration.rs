//! Exhaustive censuses of fatgraphs up to isomorphism.
//!
//! Trivalent graphs of a given type are found by a breadth-first search over
//! Whitehead moves from one seed graph; the moves connect every pair of
//! trivalent graphs of the same type, so the search is complete. Graphs of
//! higher valence are faces of trivalent ones and are reached by collapsing
//! edges.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fatgraph::{Fatgraph, GraphType, Permutation};
use crate::rational::{self, Rational};
use crate::surgery::{collapse_edge, expand_with, whitehead_neighbors};
use crate::symmetry::{canonical_data, CanonicalKey};

pub fn catalan(m: u64) -> BigInt {
    rational::binomial(2 * m, m) / BigInt::from(m + 1)
}

/// Rooted planar trees with `k` leaves, one 5-valent vertex and otherwise
/// trivalent: `binom(2k - 6, k - 5)`.
pub fn catalan5(k: u64) -> BigInt {
    assert!(k >= 5, "catalan5 needs k >= 5");
    rational::binomial(2 * k - 6, k - 5)
}

/// Size limits for exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_genus: usize,
    pub max_edges: usize,
    pub max_tree_leaves: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_genus: 3, max_edges: 15, max_tree_leaves: 13 }
    }
}

impl Caps {
    pub fn with_max_edges(self, max_edges: usize) -> Self {
        Caps { max_edges, ..self }
    }

    fn check_graph(&self, t: GraphType) -> Result<()> {
        if t.g > self.max_genus {
            return Err(Error::ResourceLimit(format!("genus {} exceeds cap {}", t.g, self.max_genus)));
        }
        if t.trivalent_edges() > self.max_edges {
            return Err(Error::ResourceLimit(format!(
                "type {t} needs {} edges, cap is {}",
                t.trivalent_edges(),
                self.max_edges
            )));
        }
        Ok(())
    }

    pub(crate) fn check_leaves(&self, leaves: usize) -> Result<()> {
        if leaves > self.max_tree_leaves {
            return Err(Error::ResourceLimit(format!("{leaves} leaves exceeds cap {}", self.max_tree_leaves)));
        }
        Ok(())
    }
}

/// Which vertex valences a census admits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ValenceFilter {
    Trivalent,
    /// Every valence at least three.
    All,
    /// Exactly one vertex of the given valence, the rest trivalent.
    OneVertex(usize),
}

impl std::fmt::Display for ValenceFilter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValenceFilter::Trivalent => write!(f, "trivalent"),
            ValenceFilter::All => write!(f, "all"),
            ValenceFilter::OneVertex(k) => write!(f, "one-{k}-valent"),
        }
    }
}

/// One isomorphism class.
#[derive(Clone, Debug)]
pub struct CensusEntry {
    pub key: CanonicalKey,
    pub graph: Fatgraph,
    pub aut_order: usize,
    /// For doubled trees: the tree the graph was built from.
    pub tree: Option<Fatgraph>,
    /// For doubled trees: the hyperelliptic involution.
    pub involution: Option<Permutation>,
}

impl CensusEntry {
    pub fn new(key: CanonicalKey, graph: Fatgraph, aut_order: usize) -> Self {
        CensusEntry { key, graph, aut_order, tree: None, involution: None }
    }
}

/// A set of isomorphism classes with automorphism orders, sorted by key.
#[derive(Clone, Debug)]
pub struct OrbifoldCensus {
    pub descriptor: String,
    pub entries: Vec<CensusEntry>,
}

impl OrbifoldCensus {
    /// Sorts by key; panics on duplicate keys.
    pub fn new(descriptor: impl Into<String>, mut entries: Vec<CensusEntry>) -> Self {
        entries.sort_by(|a, b| a.key.cmp(&b.key));
        assert!(entries.windows(2).all(|w| w[0].key != w[1].key), "duplicate classes in census");
        OrbifoldCensus { descriptor: descriptor.into(), entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CensusEntry> {
        self.entries.iter()
    }

    /// `sum 1/|Aut|`.
    pub fn mass(&self) -> Rational {
        orbifold_sum(self, |_| Rational::one())
    }
}

/// `sum weight(entry) / |Aut(entry)|`.
pub fn orbifold_sum(c: &OrbifoldCensus, weight: impl Fn(&CensusEntry) -> Rational) -> Rational {
    c.entries.iter().fold(Rational::zero(), |acc, e| acc + weight(e) / rational::int(e.aut_order as i64))
}

/// One-vertex graph of type `(g, n)`: `g` handles `a b a' b'` followed by
/// `n - 1` adjacent loops.
fn one_vertex_seed(t: GraphType) -> Result<Fatgraph> {
    let k = 2 * (2 * t.g + t.n - 1);
    let mut pairs = Vec::new();
    for i in 0..t.g {
        pairs.push((4 * i, 4 * i + 2));
        pairs.push((4 * i + 1, 4 * i + 3));
    }
    for j in 0..t.n - 1 {
        let h = 4 * t.g + 2 * j;
        pairs.push((h, h + 1));
    }
    let g = Fatgraph::from_cycles(&[(0..k).collect()], &pairs)?;
    debug_assert_eq!(g.graph_type()?, t);
    Ok(g)
}

/// Some trivalent graph of type `t`: the one-vertex seed, fan-triangulated.
pub fn trivalent_seed(t: GraphType) -> Result<Fatgraph> {
    let g = one_vertex_seed(t)?;
    let k = g.valence(0);
    if k == 3 {
        return Ok(g);
    }
    let fan: Vec<(usize, usize)> = (2..k - 1).map(|j| (0, j)).collect();
    Ok(expand_with(&g, 0, &fan)?.0)
}

fn unstable(t: GraphType) -> Error {
    Error::MalformedGraph(format!("type {t} is not stable"))
}

/// Breadth-first closure of `seeds` under `step`, keeping canonical
/// representatives. Deterministic regardless of thread count.
fn closure(
    seeds: Vec<Fatgraph>,
    step: impl Fn(&Fatgraph) -> Vec<Fatgraph> + Sync,
    keep: impl Fn(&Fatgraph) -> bool + Sync,
) -> Vec<CensusEntry> {
    let mut seen: HashMap<CanonicalKey, CensusEntry> = HashMap::new();
    let mut frontier = Vec::new();
    for s in seeds {
        let c = canonical_data(&s);
        if !seen.contains_key(&c.key) {
            seen.insert(c.key.clone(), CensusEntry::new(c.key, c.graph.clone(), c.aut_order));
            frontier.push(c.graph);
        }
    }
    while !frontier.is_empty() {
        let found: Vec<_> = frontier
            .par_iter()
            .flat_map_iter(|g| step(g).into_iter().filter(|x| keep(x)).map(|x| canonical_data(&x)))
            .collect();
        // process in key order so the next frontier does not depend on scheduling
        let mut fresh: BTreeMap<CanonicalKey, _> = BTreeMap::new();
        for c in found {
            if !seen.contains_key(&c.key) {
                fresh.entry(c.key.clone()).or_insert(c);
            }
        }
        frontier = Vec::with_capacity(fresh.len());
        for (key, c) in fresh {
            seen.insert(key.clone(), CensusEntry::new(key, c.graph.clone(), c.aut_order));
            frontier.push(c.graph);
        }
    }
    seen.into_values().collect()
}

fn is_oneish(g: &Fatgraph, k: usize) -> bool {
    let big: Vec<usize> = g.valences().into_iter().filter(|&v| v != 3).collect();
    big.len() <= 1 && big.iter().all(|&v| v <= k)
}

/// Collapses of edges touching the unique non-trivalent vertex (any
/// non-loop edge if there is none), keeping at most one such vertex.
fn grow_one_vertex(g: &Fatgraph) -> Vec<Fatgraph> {
    let big = (0..g.num_vertices()).find(|&v| g.valence(v) != 3);
    (0..g.num_edges())
        .filter(|&e| !g.is_loop(e))
        .filter(|&e| {
            let [a, b] = g.edges()[e];
            match big {
                None => true,
                Some(w) => g.vertex_of(a) == w || g.vertex_of(b) == w,
            }
        })
        .filter_map(|e| collapse_edge(g, e).ok())
        .collect()
}

fn all_collapses(g: &Fatgraph) -> Vec<Fatgraph> {
    (0..g.num_edges()).filter(|&e| !g.is_loop(e)).filter_map(|e| collapse_edge(g, e).ok()).collect()
}

/// Complete census of fatgraphs of type `(g, n)`. For `n > 1` the boundary
/// cycles are labeled `1..=n` and labelings count as distinct.
pub fn enumerate_fatgraphs(g: usize, n: usize, filter: ValenceFilter, caps: &Caps) -> Result<OrbifoldCensus> {
    let t = GraphType::new(g, n);
    if n == 0 || !t.is_stable() {
        return Err(unstable(t));
    }
    caps.check_graph(t)?;
    let trivalent = closure(vec![trivalent_seed(t)?], whitehead_neighbors, |_| true);
    let classes = match filter {
        ValenceFilter::Trivalent => trivalent,
        ValenceFilter::All => closure(trivalent.into_iter().map(|e| e.graph).collect(), all_collapses, |_| true),
        ValenceFilter::OneVertex(k) => {
            if k < 3 {
                return Err(Error::MalformedGraph(format!("valence {k} below three")));
            }
            closure(trivalent.into_iter().map(|e| e.graph).collect(), grow_one_vertex, |x| is_oneish(x, k))
                .into_iter()
                .filter(|e| e.graph.valences().contains(&k) || (k == 3 && e.graph.is_trivalent()))
                .collect()
        }
    };
    let entries = if n > 1 { label_boundaries(classes, n)? } else { classes };
    Ok(OrbifoldCensus::new(format!("fatgraphs g={g} n={n} {filter}"), entries))
}

fn permutations(n: usize) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n as u32);
            out.push(q);
        }
    }
    out
}

fn label_boundaries(classes: Vec<CensusEntry>, n: usize) -> Result<Vec<CensusEntry>> {
    let labelings = permutations(n);
    let labeled: Vec<Vec<CensusEntry>> = classes
        .par_iter()
        .map(|e| {
            let mut by_key = BTreeMap::new();
            for l in &labelings {
                let c = canonical_data(&e.graph.with_boundary_labels(l)?);
                by_key.entry(c.key.clone()).or_insert_with(|| CensusEntry::new(c.key, c.graph, c.aut_order));
            }
            Ok(by_key.into_values().collect())
        })
        .collect::<Result<_>>()?;
    Ok(labeled.into_iter().flatten().collect())
}

/// Orbifold Euler characteristic of the moduli space with one boundary:
/// the alternating sum over all cells, each of dimension `E - 1`, weighted
/// by `1/|Aut|`.
pub fn euler_characteristic(g: usize, caps: &Caps) -> Result<Rational> {
    let census = enumerate_fatgraphs(g, 1, ValenceFilter::All, caps)?;
    Ok(euler_characteristic_from(&census))
}

pub fn euler_characteristic_from(census: &OrbifoldCensus) -> Rational {
    orbifold_sum(census, |e| if e.graph.num_edges() % 2 == 1 { Rational::one() } else { -Rational::one() })
}

/// Bernoulli numbers `B_0 ..= B_n` with `B_1 = -1/2`, from
/// `sum_{k <= m} binom(m + 1, k) B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=n as u64 {
        let s = (0..m).fold(Rational::zero(), |acc, k| {
            acc + Rational::from_integer(rational::binomial(m + 1, k)) * &b[k as usize]
        });
        b.push(-s / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `zeta(1 - 2g) = -B_{2g} / (2g)`.
pub fn zeta_one_minus_two_g(g: usize) -> Rational {
    let b = bernoulli_numbers(2 * g);
    -b[2 * g].clone() / rational::int(2 * g as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::symmetry::canonical_form;

    #[test]
    fn catalan_values() {
        let got: Vec<BigInt> = (0..8).map(catalan).collect();
        let want: Vec<BigInt> = [1, 1, 2, 5, 14, 42, 132, 429].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(got, want);
        assert_eq!(catalan5(5), BigInt::from(1));
        assert_eq!(catalan5(6), BigInt::from(6));
        assert_eq!(catalan5(7), BigInt::from(28));
    }

    #[test]
    fn seeds_have_the_requested_type() {
        for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1), (3, 1), (2, 3)] {
            let t = GraphType::new(g, n);
            let s = trivalent_seed(t).unwrap();
            assert!(s.is_trivalent());
            assert_eq!(s.graph_type().unwrap(), t);
        }
    }

    #[test]
    fn genus_one_censuses() {
        let caps = Caps::default();
        let tri = enumerate_fatgraphs(1, 1, ValenceFilter::Trivalent, &caps).unwrap();
        assert_eq!(tri.len(), 1);
        assert_eq!(tri.entries[0].aut_order, 6);
        assert_eq!(tri.mass(), frac(1, 6));
        let all = enumerate_fatgraphs(1, 1, ValenceFilter::All, &caps).unwrap();
        let mut orders: Vec<(usize, usize)> = all.iter().map(|e| (e.graph.num_edges(), e.aut_order)).collect();
        orders.sort();
        assert_eq!(orders, vec![(2, 4), (3, 6)]);
    }

    #[test]
    fn genus_two_trivalent_mass() {
        let c = enumerate_fatgraphs(2, 1, ValenceFilter::Trivalent, &Caps::default()).unwrap();
        assert_eq!(c.mass(), frac(35, 6));
    }

    #[test]
    fn planar_three_boundaries() {
        let c = enumerate_fatgraphs(0, 3, ValenceFilter::Trivalent, &Caps::default()).unwrap();
        // theta and the dumbbell, each with labeled faces
        assert!(c.iter().all(|e| e.graph.has_boundary_labels()));
        // theta: one labeled class; dumbbell: three (choice of outer face)
        assert_eq!(c.len(), 4);
        assert_eq!(c.mass(), frac(4, 1));
        let unlabeled: std::collections::BTreeSet<_> =
            c.iter().map(|e| canonical_form(&e.graph.without_boundary_labels())).collect();
        assert_eq!(unlabeled.len(), 2);
    }

    #[test]
    fn one_vertex_filter() {
        let c = enumerate_fatgraphs(1, 1, ValenceFilter::OneVertex(4), &Caps::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.entries[0].graph.valences(), vec![4]);
        let c = enumerate_fatgraphs(2, 1, ValenceFilter::OneVertex(5), &Caps::default()).unwrap();
        assert!(c.iter().all(|e| {
            let mut v = e.graph.valences();
            v.sort();
            v.last() == Some(&5) && v[..v.len() - 1].iter().all(|&x| x == 3)
        }));
        assert!(!c.is_empty());
    }

    #[test]
    fn resource_limits() {
        let caps = Caps { max_genus: 1, ..Caps::default() };
        assert!(matches!(enumerate_fatgraphs(2, 1, ValenceFilter::Trivalent, &caps), Err(Error::ResourceLimit(_))));
        let caps = Caps::default().with_max_edges(2);
        assert!(matches!(enumerate_fatgraphs(1, 1, ValenceFilter::Trivalent, &caps), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn euler_genus_one() {
        assert_eq!(euler_characteristic(1, &Caps::default()).unwrap(), frac(-1, 12));
    }

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_numbers(8);
        assert_eq!(b[1], frac(-1, 2));
        assert_eq!(b[2], frac(1, 6));
        assert_eq!(b[4], frac(-1, 30));
        assert_eq!(b[8], frac(-1, 30));
        assert_eq!(zeta_one_minus_two_g(1), frac(-1, 12));
        assert_eq!(zeta_one_minus_two_g(2), frac(1, 120));
    }

    #[test]
    fn empty_sum_is_zero() {
        let c = OrbifoldCensus::new("empty", vec![]);
        assert_eq!(c.mass(), Rational::zero());
    }
}
