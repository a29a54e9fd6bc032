//! Hyperelliptic fatgraphs as doubled planar trees.
//!
//! Doubling a tree `T` takes two copies `A`, `B` of every half-edge at an
//! internal vertex, keeps the rotation in both copies, and fuses the two
//! copies of each leaf edge into one edge. A delta-labeled internal vertex
//! `(x_0 .. x_{v-1})` becomes the single vertex
//! `(x_0A .. x_{v-1}A, x_0B .. x_{v-1}B)`. Swapping `A` and `B` is the
//! hyperelliptic involution. Fused leaf edges keep the tree length, the two
//! copies of an internal edge carry half of it each.

use std::collections::BTreeMap;

use num_traits::One;
use rayon::prelude::*;

use crate::enumeration::{catalan, catalan5, Caps, CensusEntry, OrbifoldCensus};
use crate::error::{Error, Result};
use crate::fatgraph::{Fatgraph, GraphType, Permutation, VertexFlag};
use crate::rational::{self, Rational};
use crate::surgery::{collapse_with_map, one_edge_expansions};
use crate::symmetry::{canonical_data, fixed_cells, is_hyperelliptic, CanonicalKey};
use crate::trees::{tree_classes, PlanarTree, Rooting, TreeProfile};

/// A doubled tree with its involution and edge-length map.
#[derive(Clone, Debug)]
pub struct HyperellipticCell {
    pub tree: PlanarTree,
    pub doubled: Fatgraph,
    pub involution: Permutation,
    /// For each edge of `doubled`: the tree edge it comes from and the factor
    /// relating the lengths, `l(e) = factor * l_T(tree edge)`.
    pub edge_map: Vec<(usize, Rational)>,
}

impl HyperellipticCell {
    pub fn genus(&self) -> usize {
        (self.doubled.num_edges() + 1 - self.doubled.num_vertices()) / 2
    }
}

/// Number of branch points of the double: leaves plus delta-labeled internal
/// vertices.
pub fn branch_points(t: &PlanarTree) -> usize {
    t.leaves + t.internal_vertices().iter().filter(|&&v| t.graph.vertex_flag(v) == VertexFlag::Delta).count()
}

pub fn double_tree(t: &PlanarTree) -> Result<HyperellipticCell> {
    let tg = &t.graph;
    let bp = branch_points(t);
    if bp < 3 || bp % 2 == 0 {
        return Err(Error::BadLeafCount(bp));
    }
    let is_leaf = |h: usize| tg.sigma(h) == h;
    let inner: Vec<usize> = (0..tg.num_half_edges()).filter(|&h| !is_leaf(h)).collect();
    let m = inner.len();
    let mut index = vec![usize::MAX; tg.num_half_edges()];
    for (i, &h) in inner.iter().enumerate() {
        index[h] = i;
    }
    let a = |h: usize| index[h];
    let b = |h: usize| index[h] + m;
    let mut sigma = vec![0; 2 * m];
    let mut alpha = vec![0; 2 * m];
    for v in t.internal_vertices() {
        let cycle = &tg.vertices()[v];
        let k = cycle.len();
        if tg.vertex_flag(v) == VertexFlag::Delta {
            let lifted: Vec<usize> = cycle.iter().map(|&h| a(h)).chain(cycle.iter().map(|&h| b(h))).collect();
            for i in 0..2 * k {
                sigma[lifted[i]] = lifted[(i + 1) % (2 * k)];
            }
        } else {
            for i in 0..k {
                sigma[a(cycle[i])] = a(cycle[(i + 1) % k]);
                sigma[b(cycle[i])] = b(cycle[(i + 1) % k]);
            }
        }
    }
    for &h in &inner {
        let y = tg.alpha(h);
        if is_leaf(y) {
            alpha[a(h)] = b(h);
            alpha[b(h)] = a(h);
        } else {
            alpha[a(h)] = a(y);
            alpha[b(h)] = b(y);
        }
    }
    let doubled = Fatgraph::new(sigma, alpha)?;
    let involution = Permutation((0..2 * m).map(|i| (i + m) % (2 * m)).collect());
    let t_type = doubled.graph_type()?;
    if t_type != GraphType::new((bp - 1) / 2, 1) {
        return Err(Error::NotSymmetric(format!("double has type {t_type}")));
    }
    let half = rational::frac(1, 2);
    let edge_map = doubled
        .edges()
        .iter()
        .map(|&[h, _]| {
            let orig = inner[h % m];
            let factor = if is_leaf(tg.alpha(orig)) { Rational::one() } else { half.clone() };
            (tg.edge_of(orig), factor)
        })
        .collect();
    Ok(HyperellipticCell { tree: t.clone(), doubled, involution, edge_map })
}

/// How a fixed vertex of valence `2v` is split when cutting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexSplit {
    /// Two delta-labeled vertices of valence `v`; inverts doubling exactly.
    Delta,
    /// Two ordinary vertices of valence `v + 1`, each gaining a new leaf.
    Leaf,
}

/// Cuts a graph along an involution with `2g + 2` fixed cells: fixed edges
/// are cut into two leaves, fixed vertices are split in half.
pub fn cut_along_involution(g: &Fatgraph, iota: &Permutation, split: VertexSplit) -> Result<(PlanarTree, PlanarTree)> {
    let t = g.graph_type()?;
    if t.n != 1 {
        return Err(Error::WrongType { expected: 1, found: t.n });
    }
    let fixed = fixed_cells(g, iota)?;
    if iota.order() != 2 {
        return Err(Error::NotSymmetric("involution does not have order two".into()));
    }
    if fixed.vertices + fixed.edges != 2 * t.g + 1 {
        return Err(Error::NotSymmetric(format!(
            "{} fixed non-boundary cells, expected {}",
            fixed.vertices + fixed.edges,
            2 * t.g + 1
        )));
    }
    let n = g.num_half_edges();
    let mut sigma: Vec<usize> = g.sigma_perm().to_vec();
    let mut alpha: Vec<usize> = g.alpha_perm().to_vec();
    let mut flags = vec![VertexFlag::Ordinary; n];
    let fresh_leaf = |sigma: &mut Vec<usize>, alpha: &mut Vec<usize>, flags: &mut Vec<VertexFlag>, to: usize| {
        let l = sigma.len();
        sigma.push(l);
        alpha.push(to);
        flags.push(VertexFlag::Delta);
        alpha[to] = l;
        l
    };
    for &[h, k] in g.edges() {
        if iota.apply(h) == k {
            fresh_leaf(&mut sigma, &mut alpha, &mut flags, h);
            fresh_leaf(&mut sigma, &mut alpha, &mut flags, k);
        }
    }
    for cycle in g.vertices() {
        if g.vertex_of(iota.apply(cycle[0])) != g.vertex_of(cycle[0]) {
            continue;
        }
        let k = cycle.len();
        let v = k / 2;
        for half in [&cycle[..v], &cycle[v..]] {
            let mut hs = half.to_vec();
            match split {
                VertexSplit::Delta => {
                    for &h in &hs {
                        flags[h] = VertexFlag::Delta;
                    }
                }
                VertexSplit::Leaf => {
                    // the new edge needs its own inner half-edge
                    let inner = sigma.len();
                    sigma.push(inner);
                    alpha.push(usize::MAX);
                    flags.push(VertexFlag::Ordinary);
                    fresh_leaf(&mut sigma, &mut alpha, &mut flags, inner);
                    hs.push(inner);
                }
            }
            for i in 0..hs.len() {
                sigma[hs[i]] = hs[(i + 1) % hs.len()];
            }
        }
    }
    // components of the cut graph
    let total = sigma.len();
    let mut comp = vec![usize::MAX; total];
    let mut count = 0;
    for s in 0..total {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        while let Some(h) = stack.pop() {
            for x in [sigma[h], alpha[h]] {
                if comp[x] == usize::MAX {
                    comp[x] = count;
                    stack.push(x);
                }
            }
        }
        count += 1;
    }
    if count != 2 {
        return Err(Error::NotSymmetric(format!("cut has {count} components")));
    }
    let mut trees = Vec::new();
    for c in 0..2 {
        let members: Vec<usize> = (0..total).filter(|&h| comp[h] == c).collect();
        let mut local = vec![usize::MAX; total];
        for (i, &h) in members.iter().enumerate() {
            local[h] = i;
        }
        let part = Fatgraph::from_parts(
            members.iter().map(|&h| local[sigma[h]]).collect(),
            members.iter().map(|&h| local[alpha[h]]).collect(),
            members.iter().map(|&h| flags[h]).collect(),
            None,
        )?;
        let profile = if part.vertex_flags().iter().zip(part.valences()).any(|(&f, v)| f == VertexFlag::Delta && v > 1) {
            TreeProfile::MarkedTrivalent
        } else {
            TreeProfile::Trivalent
        };
        let tree = PlanarTree::from_graph(part, profile).map_err(|e| Error::NotSymmetric(format!("{e}")))?;
        trees.push(tree);
    }
    let second = trees.pop().expect("two trees");
    let first = trees.pop().expect("two trees");
    Ok((first, second))
}

/// Cell of a doubled tree, relabeled to the double's canonical form.
fn canonical_cell_entry(cell: &HyperellipticCell) -> CensusEntry {
    let c = canonical_data(&cell.doubled);
    let n = cell.doubled.num_half_edges();
    let mut iota = vec![0; n];
    for h in 0..n {
        iota[c.relabeling[h]] = c.relabeling[cell.involution.apply(h)];
    }
    CensusEntry {
        key: c.key,
        graph: c.graph,
        aut_order: c.aut_order,
        tree: Some(cell.tree.graph.clone()),
        involution: Some(Permutation(iota)),
    }
}

fn doubled_census(descriptor: String, trees: Vec<PlanarTree>) -> Result<OrbifoldCensus> {
    let entries: Vec<CensusEntry> =
        trees.par_iter().map(|t| double_tree(t).map(|c| canonical_cell_entry(&c))).collect::<Result<_>>()?;
    Ok(OrbifoldCensus::new(descriptor, entries))
}

fn unrooted(leaves: usize, profile: TreeProfile, caps: &Caps) -> Result<Vec<PlanarTree>> {
    caps.check_leaves(leaves)?;
    Ok(tree_classes(leaves, profile, Rooting::Unrooted).into_iter().map(|(_, t)| t).collect())
}

/// Maximal cells of the hyperelliptic locus: doubles of the trivalent trees
/// with `2g + 1` leaves.
pub fn hyperelliptic_census(g: usize, caps: &Caps) -> Result<OrbifoldCensus> {
    if g == 0 {
        return Err(Error::BadLeafCount(1));
    }
    doubled_census(format!("hyperelliptic g={g}"), unrooted(2 * g + 1, TreeProfile::Trivalent, caps)?)
}

/// The two components of the intersection of the first Witten cycle with
/// the hyperelliptic locus, with their intersection multiplicities.
#[derive(Clone, Debug)]
pub struct W1HComponents {
    /// Doubles of trees with `2g + 1` leaves and one 5-valent vertex.
    pub component1: OrbifoldCensus,
    /// Doubles of trivalent trees with `2g` leaves and one marked vertex.
    pub component2: OrbifoldCensus,
    pub multiplicity1: u32,
    pub multiplicity2: u32,
}

/// Multiplicity of the component where two 5-valent vertices are swapped.
pub const W1_MULTIPLICITY_SWAPPED: u32 = 2;
/// Multiplicity of the component with a fixed 6-valent vertex.
pub const W1_MULTIPLICITY_FIXED: u32 = 3;

pub fn w1_intersection_census(g: usize, caps: &Caps) -> Result<W1HComponents> {
    if g < 2 {
        return Err(Error::BadLeafCount(2 * g + 1));
    }
    Ok(W1HComponents {
        component1: doubled_census(
            format!("w1h-swapped g={g}"),
            unrooted(2 * g + 1, TreeProfile::OneFiveValent, caps)?,
        )?,
        component2: doubled_census(format!("w1h-fixed g={g}"), unrooted(2 * g, TreeProfile::MarkedTrivalent, caps)?)?,
        multiplicity1: W1_MULTIPLICITY_SWAPPED,
        multiplicity2: W1_MULTIPLICITY_FIXED,
    })
}

/// `catalan5(2g + 1) / (2 (2g + 1))`.
pub fn count_t1(g: usize) -> Rational {
    let k = 2 * g as u64 + 1;
    Rational::new(catalan5(k), (2 * k).into())
}

/// `(g - 1) C_{2g-2} / (2g)`.
pub fn count_t2(g: usize) -> Rational {
    let g = g as u64;
    Rational::new(catalan(2 * g - 2) * (g - 1), (2 * g).into())
}

/// One vertex with `4g` half-edges, each glued to the opposite one.
pub fn gamma_h(g: usize) -> Fatgraph {
    let pairs: Vec<(usize, usize)> = (0..2 * g).map(|i| (i, i + 2 * g)).collect();
    Fatgraph::from_cycles(&[(0..4 * g).collect()], &pairs).expect("valid one-vertex graph")
}

/// Two `(2g + 1)`-valent vertices joined by `2g + 1` edges: the double of
/// the star with `2g + 1` leaves.
pub fn gamma_h_prime(g: usize) -> Fatgraph {
    double_tree(&crate::trees::star(2 * g + 1)).expect("stars with odd leaves double").doubled
}

/// Structure at an involution-fixed 6-valent vertex: its one-edge
/// expansions, those keeping a 5-valent vertex (in the Witten cycle), and
/// those to which the involution extends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SixValentSheets {
    pub one_edge: usize,
    pub in_w1: usize,
    pub symmetric: usize,
}

pub fn six_valent_sheets(cell: &HyperellipticCell) -> Result<SixValentSheets> {
    let g = &cell.doubled;
    let v = (0..g.num_vertices())
        .find(|&v| g.valence(v) == 6 && g.vertex_of(cell.involution.apply(g.vertices()[v][0])) == v)
        .ok_or_else(|| Error::NotSymmetric("no fixed 6-valent vertex".into()))?;
    let xs = one_edge_expansions(g, v)?;
    let in_w1 = xs.iter().filter(|x| x.graph.max_valence() >= 5).count();
    let mut symmetric = 0;
    for x in &xs {
        if is_hyperelliptic(&x.graph)?.is_some() {
            symmetric += 1;
        }
    }
    Ok(SixValentSheets { one_edge: xs.len(), in_w1, symmetric })
}

/// Faces of hyperelliptic cells: closure of the maximal cells under
/// involution-equivariant edge collapses, with the induced involution.
pub fn hyperelliptic_closure(g: usize, caps: &Caps) -> Result<Vec<(Fatgraph, Permutation)>> {
    let census = hyperelliptic_census(g, caps)?;
    let mut seen: BTreeMap<CanonicalKey, (Fatgraph, Permutation)> = BTreeMap::new();
    let mut frontier: Vec<(Fatgraph, Permutation)> = census
        .entries
        .into_iter()
        .map(|e| (e.graph, e.involution.expect("doubled cells carry their involution")))
        .collect();
    for (gr, i) in &frontier {
        seen.insert(canonical_data(gr).key, (gr.clone(), i.clone()));
    }
    while !frontier.is_empty() {
        let found: Vec<(Fatgraph, Permutation)> = frontier.par_iter().flat_map_iter(|(gr, i)| equivariant_collapses(gr, i)).collect();
        let mut next = Vec::new();
        for (gr, i) in found {
            let c = canonical_data(&gr);
            if seen.contains_key(&c.key) {
                continue;
            }
            let n = gr.num_half_edges();
            let mut iota = vec![0; n];
            for h in 0..n {
                iota[c.relabeling[h]] = c.relabeling[i.apply(h)];
            }
            let pair = (c.graph, Permutation(iota));
            seen.insert(c.key, pair.clone());
            next.push(pair);
        }
        next.sort_by_key(|(gr, _)| canonical_data(gr).key);
        frontier = next;
    }
    Ok(seen.into_values().collect())
}

fn equivariant_collapses(g: &Fatgraph, iota: &Permutation) -> Vec<(Fatgraph, Permutation)> {
    let mut out = Vec::new();
    for e in 0..g.num_edges() {
        let [h, _] = g.edges()[e];
        let e2 = g.edge_of(iota.apply(h));
        if e2 < e || g.is_loop(e) {
            continue;
        }
        let Ok(first) = collapse_with_map(g, e) else { continue };
        let mut map: Vec<Option<usize>> = first.map.clone();
        let mut graph = first.graph;
        if e2 != e {
            let h2 = map[g.edges()[e2][0]].expect("other edge survives");
            let e2_new = graph.edge_of(h2);
            if graph.is_loop(e2_new) {
                continue;
            }
            let Ok(second) = collapse_with_map(&graph, e2_new) else { continue };
            map = map.iter().map(|m| m.and_then(|x| second.map[x])).collect();
            graph = second.graph;
        }
        let mut induced = vec![usize::MAX; graph.num_half_edges()];
        for old in 0..g.num_half_edges() {
            if let (Some(a), Some(b)) = (map[old], map[iota.apply(old)]) {
                induced[a] = b;
            }
        }
        let induced = Permutation(induced);
        if graph.is_automorphism(&induced) {
            out.push((graph, induced));
        }
    }
    out
}

/// Cells in the closure all of whose edges are fixed by the involution,
/// with `2g + 2` fixed cells: the minimal hyperelliptic cells.
pub fn minimal_cells(g: usize, caps: &Caps) -> Result<Vec<(Fatgraph, Permutation)>> {
    Ok(hyperelliptic_closure(g, caps)?
        .into_iter()
        .filter(|(gr, i)| {
            let f = fixed_cells(gr, i).expect("induced involutions are automorphisms");
            f.edges == gr.num_edges() && f.total() == 2 * g + 2
        })
        .collect())
}
