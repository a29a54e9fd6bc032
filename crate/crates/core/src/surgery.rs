//! Edge collapse, vertex expansion and Whitehead moves.
//!
//! Expanding a `k`-valent vertex with cyclic half-edges `h_0 .. h_{k-1}` is
//! the same as choosing a set of non-crossing diagonals of a `k`-gon whose
//! side `i` carries `h_i`: each region of the dissection becomes a new vertex
//! and each diagonal a new edge. Collapsing the new edges recovers the
//! original vertex.

use crate::error::{Error, Result};
use crate::fatgraph::{Fatgraph, VertexFlag};

/// Result of collapsing: the new graph and where each old half-edge went.
pub struct Collapse {
    pub graph: Fatgraph,
    /// `map[h]` is the new index of old half-edge `h`, `None` if removed.
    pub map: Vec<Option<usize>>,
}

fn merged_flag(a: VertexFlag, b: VertexFlag) -> VertexFlag {
    use VertexFlag::*;
    match (a, b) {
        (Node, _) | (_, Node) => Node,
        (Delta, _) | (_, Delta) => Delta,
        _ => Ordinary,
    }
}

/// Contracts edge `e`, coalescing its endpoints.
pub fn collapse_edge(g: &Fatgraph, e: usize) -> Result<Fatgraph> {
    collapse_with_map(g, e).map(|c| c.graph)
}

pub fn collapse_with_map(g: &Fatgraph, e: usize) -> Result<Collapse> {
    if e >= g.num_edges() {
        return Err(Error::MalformedGraph(format!("no edge {e}")));
    }
    if g.is_loop(e) {
        return Err(Error::LoopCollapse(e));
    }
    let [a, b] = g.edges()[e];
    let n = g.num_half_edges();
    if n == 2 {
        return Err(Error::MalformedGraph("cannot collapse the only edge".into()));
    }
    let flag = merged_flag(g.flag_of_half_edge(a), g.flag_of_half_edge(b));
    let mut sigma: Vec<usize> = g.sigma_perm().to_vec();
    // cycles (a, x1..xp) and (b, y1..yq) become (x1..xp, y1..yq)
    let pred_a = g.sigma_inverse(a);
    let pred_b = g.sigma_inverse(b);
    let succ_a = g.sigma(a);
    let succ_b = g.sigma(b);
    let a_alone = succ_a == a;
    let b_alone = succ_b == b;
    match (a_alone, b_alone) {
        (true, true) => unreachable!("two-half-edge graphs handled above"),
        (true, false) => sigma[pred_b] = succ_b,
        (false, true) => sigma[pred_a] = succ_a,
        (false, false) => {
            sigma[pred_a] = succ_b;
            sigma[pred_b] = succ_a;
        }
    }
    let mut map = vec![None; n];
    let mut next = 0;
    for (h, slot) in map.iter_mut().enumerate() {
        if h != a && h != b {
            *slot = Some(next);
            next += 1;
        }
    }
    let m = n - 2;
    let mut new_sigma = vec![0; m];
    let mut new_alpha = vec![0; m];
    let mut flags = vec![VertexFlag::Ordinary; m];
    let mut labels = g.has_boundary_labels().then(|| vec![0; m]);
    let merged_vertices = [g.vertex_of(a), g.vertex_of(b)];
    for h in 0..n {
        let Some(nh) = map[h] else { continue };
        new_sigma[nh] = map[sigma[h]].expect("sigma skips removed half-edges");
        new_alpha[nh] = map[g.alpha(h)].expect("alpha of a kept half-edge is kept");
        flags[nh] = if merged_vertices.contains(&g.vertex_of(h)) { flag } else { g.flag_of_half_edge(h) };
        if let Some(l) = labels.as_mut() {
            l[nh] = g.boundary_label(h).expect("labels present");
        }
    }
    let graph = Fatgraph::from_parts(new_sigma, new_alpha, flags, labels)?;
    Ok(Collapse { graph, map })
}

/// Collapses a set of edges (indices into `g`), which must form a forest.
pub fn collapse_edges(g: &Fatgraph, edges: &[usize]) -> Result<Fatgraph> {
    let mut current = g.clone();
    // track each edge by one of its half-edges
    let mut pending: Vec<usize> = edges.iter().map(|&e| g.edges()[e][0]).collect();
    while let Some(h) = pending.pop() {
        let e = current.edge_of(h);
        let c = collapse_with_map(&current, e)?;
        pending = pending.iter().map(|&p| c.map[p].expect("distinct edges survive")).collect();
        current = c.graph;
    }
    Ok(current)
}

/// A non-crossing set of diagonals `(i, j)`, `i < j`, of a polygon whose
/// corners are `0..k`; side `i` joins corners `i` and `i + 1 (mod k)`.
pub type Dissection = Vec<(usize, usize)>;

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let inside = |x: usize, d: (usize, usize)| d.0 < x && x < d.1;
    (inside(b.0, a) && !inside(b.1, a) && b.1 != a.0 && b.1 != a.1)
        || (inside(b.1, a) && !inside(b.0, a) && b.0 != a.0 && b.0 != a.1)
}

/// All dissections of a `k`-gon, in order of increasing size, then
/// lexicographic.
pub fn dissections(k: usize) -> Vec<Dissection> {
    let diagonals: Vec<(usize, usize)> =
        (0..k).flat_map(|i| (i + 2..k).map(move |j| (i, j))).filter(|&(i, j)| !(i == 0 && j == k - 1)).collect();
    let mut out = Vec::new();
    fn rec(diagonals: &[(usize, usize)], from: usize, chosen: &mut Vec<(usize, usize)>, out: &mut Vec<Dissection>) {
        out.push(chosen.clone());
        for t in from..diagonals.len() {
            let d = diagonals[t];
            if chosen.iter().all(|&c| !crosses(c, d)) {
                chosen.push(d);
                rec(diagonals, t + 1, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(&diagonals, 0, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// One slot in the rotation of a region: a polygon side, or a diagonal
/// traversed upwards (`true`, from its smaller corner) or downwards.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Slot {
    Side(usize),
    Diagonal(usize, bool),
}

/// Regions of a dissection as rotations. Each region is traced by keeping
/// it on the left: at each corner the walk takes the neighboring corner with
/// the largest forward distance short of the corner it came from. Walks
/// start from every directed side and diagonal, since inner regions may
/// touch no side at all.
fn regions(k: usize, d: &Dissection) -> Vec<Vec<Slot>> {
    let mut neighbors: Vec<Vec<usize>> = (0..k).map(|c| vec![(c + 1) % k, (c + k - 1) % k]).collect();
    for &(i, j) in d {
        neighbors[i].push(j);
        neighbors[j].push(i);
    }
    let mut starts: Vec<(usize, usize)> = (0..k).map(|s| (s, (s + 1) % k)).collect();
    for &(i, j) in d {
        starts.push((i, j));
        starts.push((j, i));
    }
    let mut used = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (u, w) in starts {
        if used.contains(&(u, w)) {
            continue;
        }
        let mut corners = vec![u, w];
        loop {
            let cur = corners[corners.len() - 1];
            let prev = corners[corners.len() - 2];
            let dist = |x: usize| (x + k - cur) % k;
            let next = *neighbors[cur]
                .iter()
                .filter(|&&x| dist(x) < dist(prev))
                .max_by_key(|&&x| dist(x))
                .expect("the next side is always available");
            if next == u {
                break;
            }
            corners.push(next);
        }
        let slots = (0..corners.len())
            .map(|i| {
                let (x, y) = (corners[i], corners[(i + 1) % corners.len()]);
                used.insert((x, y));
                if y == (x + 1) % k {
                    Slot::Side(x)
                } else {
                    let t = d.iter().position(|&p| p == (x.min(y), x.max(y)));
                    Slot::Diagonal(t.expect("non-adjacent corners are joined by a diagonal"), x < y)
                }
            })
            .collect();
        out.push(slots);
    }
    out
}

/// An expansion of a vertex: the new graph and the indices (in it) of the
/// edges whose collapse recovers the original.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub graph: Fatgraph,
    pub new_edges: Vec<usize>,
    pub dissection: Dissection,
}

/// Every expansion of vertex `v` (one per dissection of the polygon, the
/// trivial one excluded), graded by number of new edges. Old half-edges
/// keep their indices; diagonal `t` adds half-edges `2E + 2t` and
/// `2E + 2t + 1`.
pub fn expansions(g: &Fatgraph, v: usize) -> Result<Vec<Expansion>> {
    let k = g.valence(v);
    if k < 4 {
        return Err(Error::NotExpandable(k));
    }
    dissections(k)
        .into_iter()
        .filter(|d| !d.is_empty())
        .map(|d| expand_with(g, v, &d).map(|(graph, new_edges)| Expansion { graph, new_edges, dissection: d }))
        .collect()
}

/// Expansions adding exactly one edge.
pub fn one_edge_expansions(g: &Fatgraph, v: usize) -> Result<Vec<Expansion>> {
    Ok(expansions(g, v)?.into_iter().filter(|x| x.new_edges.len() == 1).collect())
}

/// Expands vertex `v` according to dissection `d`.
pub fn expand_with(g: &Fatgraph, v: usize, d: &Dissection) -> Result<(Fatgraph, Vec<usize>)> {
    let cycle = g.vertices()[v].clone();
    let k = cycle.len();
    let n = g.num_half_edges();
    let m = n + 2 * d.len();
    let mut sigma: Vec<usize> = (0..m).collect();
    sigma[..n].copy_from_slice(g.sigma_perm());
    let mut alpha: Vec<usize> = vec![0; m];
    alpha[..n].copy_from_slice(g.alpha_perm());
    for region in regions(k, d) {
        let hs: Vec<usize> = region
            .iter()
            .map(|slot| match *slot {
                Slot::Side(i) => cycle[i],
                Slot::Diagonal(t, up) => n + 2 * t + usize::from(!up),
            })
            .collect();
        for (i, &h) in hs.iter().enumerate() {
            sigma[h] = hs[(i + 1) % hs.len()];
        }
    }
    for t in 0..d.len() {
        alpha[n + 2 * t] = n + 2 * t + 1;
        alpha[n + 2 * t + 1] = n + 2 * t;
    }
    let flag = g.vertex_flag(v);
    let flags: Vec<VertexFlag> =
        (0..m).map(|h| if h < n { g.flag_of_half_edge(h) } else { flag }).collect();
    let mut out = Fatgraph::from_parts(sigma, alpha, flags, None)?;
    if g.has_boundary_labels() {
        // every new boundary cycle contains an old half-edge
        let bc = out.boundary_cycles();
        let by_cycle: Vec<u32> = bc
            .cycles
            .iter()
            .map(|c| {
                let h = *c.iter().find(|&&h| h < n).expect("cycle meets an old half-edge");
                g.boundary_label(h).expect("labels present")
            })
            .collect();
        out = out.with_boundary_labels(&by_cycle)?;
    }
    let new_edges = (0..d.len()).map(|t| out.edge_of(n + 2 * t)).collect();
    Ok((out, new_edges))
}

/// Graphs reached from `g` by one Whitehead move: collapse a non-loop edge,
/// then take the other one-edge expansion of the 4-valent vertex. Only
/// meaningful for trivalent `g`; may contain isomorphic duplicates.
pub fn whitehead_neighbors(g: &Fatgraph) -> Vec<Fatgraph> {
    let mut out = Vec::new();
    for e in 0..g.num_edges() {
        if g.is_loop(e) {
            continue;
        }
        let Ok(c) = collapse_with_map(g, e) else { continue };
        let h = c.map[g.sigma(g.edges()[e][0])].expect("neighbor of the edge survives");
        let w = c.graph.vertex_of(h);
        if c.graph.valence(w) != 4 {
            continue;
        }
        if let Ok(xs) = one_edge_expansions(&c.graph, w) {
            out.extend(xs.into_iter().map(|x| x.graph));
        }
    }
    out
}
