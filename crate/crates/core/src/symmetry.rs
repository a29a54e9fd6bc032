//! Canonical forms and automorphism groups.
//!
//! A connected map is rigid once a single half-edge is placed: an
//! isomorphism is determined by the image of any one half-edge. So for each
//! possible base half-edge we number the half-edges in breadth-first order
//! along `sigma` then `alpha`, and record the relabeled structure. The
//! canonical key is the least such record; the automorphisms are exactly the
//! base choices that reproduce it.

use crate::error::{Error, Result};
use crate::fatgraph::{Fatgraph, Permutation};

/// Total-order key identifying the isomorphism class of a decorated fatgraph
/// (vertex flags, boundary labels and any extra coloring are respected).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub Vec<u32>);

impl CanonicalKey {
    /// Short stable digest for display purposes.
    pub fn digest(&self) -> String {
        // FNV-1a over the words
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &w in &self.0 {
            for b in w.to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x0000_0100_0000_01b3);
            }
        }
        format!("{h:016x}")
    }
}

fn base_colors(g: &Fatgraph, extra: Option<&[u32]>) -> Vec<[u32; 3]> {
    (0..g.num_half_edges())
        .map(|h| {
            [
                g.flag_of_half_edge(h).code(),
                g.boundary_label(h).unwrap_or(0),
                extra.map_or(0, |e| e[h]),
            ]
        })
        .collect()
}

/// Numbers half-edges from `start`; returns the visiting order and, if it
/// does not exceed `best`, the record. Returns `None` as soon as the record
/// is known to be strictly greater than `best`.
fn traverse(
    g: &Fatgraph,
    colors: &[[u32; 3]],
    start: usize,
    best: Option<&[u32]>,
) -> Option<(Vec<usize>, Vec<u32>)> {
    let n = g.num_half_edges();
    let mut label = vec![u32::MAX; n];
    let mut order = Vec::with_capacity(n);
    label[start] = 0;
    order.push(start);
    let mut code = Vec::with_capacity(5 * n + 1);
    code.push(n as u32);
    // once strictly smaller than best, stop comparing
    let mut tied = best.is_some();
    let mut push = |code: &mut Vec<u32>, w: u32| -> bool {
        let idx = code.len();
        code.push(w);
        if tied {
            let b = best.expect("tied implies best")[idx];
            if w > b {
                return false;
            }
            if w < b {
                tied = false;
            }
        }
        true
    };
    if let Some(b) = best {
        if b[0] != n as u32 {
            return if (n as u32) < b[0] { traverse(g, colors, start, None) } else { None };
        }
    }
    let mut i = 0;
    while i < order.len() {
        let h = order[i];
        for next in [g.sigma(h), g.alpha(h)] {
            if label[next] == u32::MAX {
                label[next] = order.len() as u32;
                order.push(next);
            }
        }
        let c = colors[h];
        for w in [c[0], c[1], c[2], label[g.sigma(h)], label[g.alpha(h)]] {
            if !push(&mut code, w) {
                return None;
            }
        }
        i += 1;
    }
    Some((order, code))
}

struct Canon {
    key: CanonicalKey,
    /// Visiting order from the first minimal base.
    order: Vec<usize>,
    /// All bases that attain the minimum.
    minimal_bases: Vec<usize>,
}

fn canon(g: &Fatgraph, extra: Option<&[u32]>) -> Canon {
    let colors = base_colors(g, extra);
    let mut best: Option<(Vec<usize>, Vec<u32>)> = None;
    let mut bases = Vec::new();
    for start in 0..g.num_half_edges() {
        let attempt = traverse(g, &colors, start, best.as_ref().map(|b| b.1.as_slice()));
        if let Some((order, code)) = attempt {
            match &best {
                Some((_, b)) if *b == code => bases.push(start),
                _ => {
                    best = Some((order, code));
                    bases = vec![start];
                }
            }
        }
    }
    let (order, code) = best.expect("non-empty graph");
    Canon { key: CanonicalKey(code), order, minimal_bases: bases }
}

pub fn canonical_form(g: &Fatgraph) -> CanonicalKey {
    canon(g, None).key
}

/// Canonical key with an additional per-half-edge color that isomorphisms
/// must preserve (used for edge-colored and rooted variants).
pub fn canonical_form_colored(g: &Fatgraph, colors: &[u32]) -> CanonicalKey {
    canon(g, Some(colors)).key
}

/// The canonical representative: half-edges renumbered in canonical order.
pub fn canonical_graph(g: &Fatgraph) -> Fatgraph {
    let c = canon(g, None);
    let mut perm = vec![0; g.num_half_edges()];
    for (i, &h) in c.order.iter().enumerate() {
        perm[h] = i;
    }
    g.relabel(&perm)
}

/// Canonical key, representative and automorphism order computed together.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub key: CanonicalKey,
    /// The input renumbered into canonical order.
    pub graph: Fatgraph,
    pub aut_order: usize,
    /// `relabeling[h]` is the representative's name for input half-edge `h`.
    pub relabeling: Vec<usize>,
}

pub fn canonical_data(g: &Fatgraph) -> Canonical {
    canonical_data_impl(g, None)
}

/// As [`canonical_data`] with an extra per-half-edge coloring.
pub fn canonical_data_colored(g: &Fatgraph, colors: &[u32]) -> Canonical {
    canonical_data_impl(g, Some(colors))
}

fn canonical_data_impl(g: &Fatgraph, extra: Option<&[u32]>) -> Canonical {
    let c = canon(g, extra);
    let mut relabeling = vec![0; g.num_half_edges()];
    for (i, &h) in c.order.iter().enumerate() {
        relabeling[h] = i;
    }
    Canonical { key: c.key, graph: g.relabel(&relabeling), aut_order: c.minimal_bases.len(), relabeling }
}

/// The automorphism group with its order; the identity comes first and
/// the rest are sorted.
pub fn automorphisms(g: &Fatgraph) -> (Vec<Permutation>, usize) {
    automorphisms_impl(g, None)
}

/// Automorphisms that also preserve an extra per-half-edge coloring.
pub fn automorphisms_colored(g: &Fatgraph, colors: &[u32]) -> (Vec<Permutation>, usize) {
    automorphisms_impl(g, Some(colors))
}

fn automorphisms_impl(g: &Fatgraph, extra: Option<&[u32]>) -> (Vec<Permutation>, usize) {
    let c = canon(g, extra);
    let colors = base_colors(g, extra);
    let n = g.num_half_edges();
    let mut perms: Vec<Permutation> = c
        .minimal_bases
        .iter()
        .map(|&s| {
            let (order, _) = traverse(g, &colors, s, None).expect("unbounded traversal");
            let mut p = vec![0; n];
            for (a, b) in c.order.iter().zip(&order) {
                p[*a] = *b;
            }
            Permutation(p)
        })
        .collect();
    perms.sort();
    if let Some(pos) = perms.iter().position(Permutation::is_identity) {
        let id = perms.remove(pos);
        perms.insert(0, id);
    }
    let order = perms.len();
    (perms, order)
}

pub fn automorphism_order(g: &Fatgraph) -> usize {
    canon(g, None).minimal_bases.len()
}

pub fn are_isomorphic(a: &Fatgraph, b: &Fatgraph) -> bool {
    canonical_form(a) == canonical_form(b)
}

/// Setwise-fixed cells of an automorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedCells {
    pub vertices: usize,
    pub edges: usize,
    pub boundary_cycles: usize,
}

impl FixedCells {
    pub fn total(&self) -> usize {
        self.vertices + self.edges + self.boundary_cycles
    }
}

pub fn fixed_cells(g: &Fatgraph, a: &Permutation) -> Result<FixedCells> {
    if !g.is_automorphism(a) {
        return Err(Error::NotAnAutomorphism);
    }
    let vertices = g.vertices().iter().enumerate().filter(|(v, c)| g.vertex_of(a.apply(c[0])) == *v).count();
    let edges = g.edges().iter().enumerate().filter(|(e, pair)| g.edge_of(a.apply(pair[0])) == *e).count();
    let bc = g.boundary_cycles();
    let cycle_of = bc.cycle_of(g.num_half_edges());
    let boundary_cycles = bc.cycles.iter().enumerate().filter(|(i, c)| cycle_of[a.apply(c[0])] == *i).count();
    Ok(FixedCells { vertices, edges, boundary_cycles })
}

/// The least order-two automorphism with `2g + 2` fixed cells, if any.
pub fn is_hyperelliptic(g: &Fatgraph) -> Result<Option<Permutation>> {
    let t = g.graph_type()?;
    if t.n != 1 {
        return Err(Error::WrongType { expected: 1, found: t.n });
    }
    let (auts, _) = automorphisms(g);
    Ok(auts.into_iter().filter(|a| a.order() == 2).find(|a| {
        fixed_cells(g, a).map(|f| f.total() == 2 * t.g + 2).unwrap_or(false)
    }))
}
