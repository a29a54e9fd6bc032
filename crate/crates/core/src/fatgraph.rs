//! Fatgraphs as combinatorial maps.
//!
//! A fatgraph on the half-edge set `0..2E` is a pair of permutations: the
//! vertex rotation `sigma`, whose cycles are the vertices with their
//! counterclockwise cyclic order, and the fixed-point-free involution `alpha`
//! pairing the two halves of every edge. Boundary cycles are the orbits of
//! the face permutation `phi = sigma ∘ alpha`, i.e. `phi(h) = sigma(alpha(h))`:
//! cross the edge, then turn to the next half-edge at the far vertex.
//!
//! Values are immutable after construction. Derived data (vertex and edge
//! numbering) is computed once in the constructor. Vertices are numbered by
//! the smallest half-edge they contain, edges likewise.

use std::fmt;

use crate::error::{Error, Result};

/// Mark carried by a vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexFlag {
    #[default]
    Ordinary,
    /// A vertex standing in for a shrunken boundary (a marked point).
    Delta,
    /// One side of a node of a stable graph.
    Node,
}

impl VertexFlag {
    pub fn symbol(self) -> char {
        match self {
            VertexFlag::Ordinary => 'o',
            VertexFlag::Delta => 'd',
            VertexFlag::Node => 'n',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'o' => Some(VertexFlag::Ordinary),
            'd' => Some(VertexFlag::Delta),
            'n' => Some(VertexFlag::Node),
            _ => None,
        }
    }

    pub(crate) fn code(self) -> u32 {
        self as u32
    }
}

/// A permutation of half-edges, `image[h]` being the image of `h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn apply(&self, h: usize) -> usize {
        self.0[h]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&h| self.0[h]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.0.len()];
        let mut order = 1usize;
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                h = self.0[h];
                len += 1;
            }
            order = num_integer::lcm(order, len);
        }
        order
    }
}

/// Genus and number of boundary cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphType {
    pub g: usize,
    pub n: usize,
}

impl GraphType {
    pub fn new(g: usize, n: usize) -> Self {
        GraphType { g, n }
    }

    /// `2g - 2 + n > 0`.
    pub fn is_stable(&self) -> bool {
        2 * self.g + self.n > 2
    }

    /// Number of edges of a trivalent fatgraph of this type.
    pub fn trivalent_edges(&self) -> usize {
        6 * self.g + 3 * self.n - 6
    }
}

impl fmt::Display for GraphType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.g, self.n)
    }
}

/// The boundary cycles of a fatgraph, as cyclic half-edge sequences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryCycles {
    /// Each cycle starts at its smallest half-edge; cycles sorted by that.
    pub cycles: Vec<Vec<usize>>,
    /// Label of each cycle, in `1..=n`.
    pub labels: Vec<u32>,
}

impl BoundaryCycles {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Cycles as sequences of edge indices.
    pub fn edge_sequences(&self, graph: &Fatgraph) -> Vec<Vec<usize>> {
        self.cycles
            .iter()
            .map(|c| c.iter().map(|&h| graph.edge_of(h)).collect())
            .collect()
    }

    /// Index of the cycle containing each half-edge.
    pub fn cycle_of(&self, num_half_edges: usize) -> Vec<usize> {
        let mut of = vec![0; num_half_edges];
        for (i, c) in self.cycles.iter().enumerate() {
            for &h in c {
                of[h] = i;
            }
        }
        of
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fatgraph {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    /// Per half-edge, constant along vertices.
    flags: Vec<VertexFlag>,
    /// Per half-edge, constant along boundary cycles.
    boundary_labels: Option<Vec<u32>>,
    vertex_of: Vec<usize>,
    vertices: Vec<Vec<usize>>,
    edge_of: Vec<usize>,
    edges: Vec<[usize; 2]>,
}

fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut h = start;
        while !seen[h] {
            seen[h] = true;
            cycle.push(h);
            h = perm[h];
        }
        out.push(cycle);
    }
    out
}

fn check_permutation(name: &str, perm: &[usize]) -> Result<()> {
    let mut hit = vec![false; perm.len()];
    for &j in perm {
        if j >= perm.len() || hit[j] {
            return Err(Error::MalformedGraph(format!("{name} is not a permutation")));
        }
        hit[j] = true;
    }
    Ok(())
}

impl Fatgraph {
    /// Builds a fatgraph from its rotation and edge involution; every vertex
    /// is ordinary.
    pub fn new(sigma: Vec<usize>, alpha: Vec<usize>) -> Result<Self> {
        let n = sigma.len();
        Self::from_parts(sigma, alpha, vec![VertexFlag::Ordinary; n], None)
    }

    /// Builds a fatgraph from explicit vertex cycles and edge pairs.
    pub fn from_cycles(vertices: &[Vec<usize>], pairs: &[(usize, usize)]) -> Result<Self> {
        let n = 2 * pairs.len();
        let mut sigma = vec![usize::MAX; n];
        for cycle in vertices {
            for (i, &h) in cycle.iter().enumerate() {
                if h >= n || sigma[h] != usize::MAX {
                    return Err(Error::MalformedGraph(format!("half-edge {h} misplaced in vertex cycles")));
                }
                sigma[h] = cycle[(i + 1) % cycle.len()];
            }
        }
        if sigma.contains(&usize::MAX) {
            return Err(Error::MalformedGraph("vertex cycles do not cover every half-edge".into()));
        }
        let mut alpha = vec![usize::MAX; n];
        for &(a, b) in pairs {
            if a >= n || b >= n || alpha[a] != usize::MAX || alpha[b] != usize::MAX {
                return Err(Error::MalformedGraph(format!("bad edge pair ({a},{b})")));
            }
            alpha[a] = b;
            alpha[b] = a;
        }
        Self::new(sigma, alpha)
    }

    /// Full constructor: per-half-edge vertex flags and optional per-half-edge
    /// boundary labels.
    pub fn from_parts(
        sigma: Vec<usize>,
        alpha: Vec<usize>,
        flags: Vec<VertexFlag>,
        boundary_labels: Option<Vec<u32>>,
    ) -> Result<Self> {
        let n = sigma.len();
        if n == 0 || n % 2 != 0 {
            return Err(Error::MalformedGraph(format!("{n} half-edges; need a positive even count")));
        }
        if alpha.len() != n || flags.len() != n || boundary_labels.as_ref().is_some_and(|l| l.len() != n) {
            return Err(Error::MalformedGraph("component lengths differ".into()));
        }
        check_permutation("sigma", &sigma)?;
        check_permutation("alpha", &alpha)?;
        if (0..n).any(|h| alpha[h] == h || alpha[alpha[h]] != h) {
            return Err(Error::MalformedGraph("alpha is not a fixed-point-free involution".into()));
        }

        let vertices = cycles_of(&sigma);
        let mut vertex_of = vec![0; n];
        for (v, cycle) in vertices.iter().enumerate() {
            let flag = flags[cycle[0]];
            for &h in cycle {
                vertex_of[h] = v;
                if flags[h] != flag {
                    return Err(Error::MalformedGraph(format!("vertex {v} carries mixed flags")));
                }
            }
            if flag == VertexFlag::Ordinary && cycle.len() < 3 {
                return Err(Error::MalformedGraph(format!(
                    "ordinary vertex {v} has valence {} < 3",
                    cycle.len()
                )));
            }
        }

        let mut edge_of = vec![0; n];
        let mut edges = Vec::with_capacity(n / 2);
        for h in 0..n {
            if h < alpha[h] {
                edge_of[h] = edges.len();
                edge_of[alpha[h]] = edges.len();
                edges.push([h, alpha[h]]);
            }
        }

        // connectivity of <sigma, alpha>
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(h) = stack.pop() {
            for next in [sigma[h], alpha[h]] {
                if !seen[next] {
                    seen[next] = true;
                    count += 1;
                    stack.push(next);
                }
            }
        }
        if count != n {
            return Err(Error::MalformedGraph("graph is disconnected".into()));
        }

        let graph = Fatgraph { sigma, alpha, flags, boundary_labels, vertex_of, vertices, edge_of, edges };
        if let Some(labels) = &graph.boundary_labels {
            let bc = cycles_of(&(0..n).map(|h| graph.phi(h)).collect::<Vec<_>>());
            let mut used: Vec<u32> = Vec::new();
            for c in &bc {
                let l = labels[c[0]];
                if c.iter().any(|&h| labels[h] != l) {
                    return Err(Error::MalformedGraph("boundary label not constant on a cycle".into()));
                }
                used.push(l);
            }
            used.sort_unstable();
            if used != (1..=bc.len() as u32).collect::<Vec<_>>() {
                return Err(Error::MalformedGraph("boundary labels must be 1..=n, one per cycle".into()));
            }
        }
        Ok(graph)
    }

    /// Sets the flag of each vertex (indexed as in [`Fatgraph::vertices`]).
    pub fn with_vertex_flags(&self, by_vertex: &[VertexFlag]) -> Result<Self> {
        if by_vertex.len() != self.num_vertices() {
            return Err(Error::MalformedGraph("one flag per vertex required".into()));
        }
        let flags = (0..self.num_half_edges()).map(|h| by_vertex[self.vertex_of[h]]).collect();
        Self::from_parts(self.sigma.clone(), self.alpha.clone(), flags, self.boundary_labels.clone())
    }

    /// Labels the boundary cycles (indexed as in [`Fatgraph::boundary_cycles`]).
    pub fn with_boundary_labels(&self, by_cycle: &[u32]) -> Result<Self> {
        let bc = self.boundary_cycles();
        if by_cycle.len() != bc.len() {
            return Err(Error::MalformedGraph("one label per boundary cycle required".into()));
        }
        let mut labels = vec![0; self.num_half_edges()];
        for (c, &l) in bc.cycles.iter().zip(by_cycle) {
            for &h in c {
                labels[h] = l;
            }
        }
        Self::from_parts(self.sigma.clone(), self.alpha.clone(), self.flags.clone(), Some(labels))
    }

    pub fn without_boundary_labels(&self) -> Self {
        let mut g = self.clone();
        g.boundary_labels = None;
        g
    }

    pub fn num_half_edges(&self) -> usize {
        self.sigma.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn sigma(&self, h: usize) -> usize {
        self.sigma[h]
    }

    pub fn alpha(&self, h: usize) -> usize {
        self.alpha[h]
    }

    pub fn phi(&self, h: usize) -> usize {
        self.sigma[self.alpha[h]]
    }

    pub fn sigma_perm(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha_perm(&self) -> &[usize] {
        &self.alpha
    }

    pub fn sigma_inverse(&self, h: usize) -> usize {
        let cycle = &self.vertices[self.vertex_of[h]];
        let pos = cycle.iter().position(|&x| x == h).expect("half-edge in its vertex");
        cycle[(pos + cycle.len() - 1) % cycle.len()]
    }

    pub fn vertices(&self) -> &[Vec<usize>] {
        &self.vertices
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.vertex_of[h]
    }

    pub fn valence(&self, v: usize) -> usize {
        self.vertices[v].len()
    }

    pub fn valences(&self) -> Vec<usize> {
        self.vertices.iter().map(Vec::len).collect()
    }

    pub fn max_valence(&self) -> usize {
        self.vertices.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_trivalent(&self) -> bool {
        self.vertices.iter().all(|c| c.len() == 3)
    }

    pub fn vertex_flag(&self, v: usize) -> VertexFlag {
        self.flags[self.vertices[v][0]]
    }

    pub fn flag_of_half_edge(&self, h: usize) -> VertexFlag {
        self.flags[h]
    }

    pub fn vertex_flags(&self) -> Vec<VertexFlag> {
        (0..self.num_vertices()).map(|v| self.vertex_flag(v)).collect()
    }

    pub fn boundary_label(&self, h: usize) -> Option<u32> {
        self.boundary_labels.as_ref().map(|l| l[h])
    }

    pub fn has_boundary_labels(&self) -> bool {
        self.boundary_labels.is_some()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn edge_of(&self, h: usize) -> usize {
        self.edge_of[h]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let [a, b] = self.edges[e];
        self.vertex_of[a] == self.vertex_of[b]
    }

    pub fn boundary_cycles(&self) -> BoundaryCycles {
        let phi: Vec<usize> = (0..self.num_half_edges()).map(|h| self.phi(h)).collect();
        let cycles = cycles_of(&phi);
        let labels = match &self.boundary_labels {
            Some(l) => cycles.iter().map(|c| l[c[0]]).collect(),
            None => (1..=cycles.len() as u32).collect(),
        };
        BoundaryCycles { cycles, labels }
    }

    pub fn num_boundary_cycles(&self) -> usize {
        self.boundary_cycles().len()
    }

    /// Genus and boundary count from `V - E + n = 2 - 2g`.
    pub fn graph_type(&self) -> Result<GraphType> {
        let v = self.num_vertices() as i64;
        let e = self.num_edges() as i64;
        let n = self.num_boundary_cycles() as i64;
        let chi = v - e + n;
        if chi > 2 || (2 - chi) % 2 != 0 {
            return Err(Error::MalformedGraph(format!("Euler count {chi} gives no genus")));
        }
        Ok(GraphType { g: ((2 - chi) / 2) as usize, n: n as usize })
    }

    /// Renames half-edge `h` to `perm[h]`.
    pub fn relabel(&self, perm: &[usize]) -> Fatgraph {
        let n = self.num_half_edges();
        let mut sigma = vec![0; n];
        let mut alpha = vec![0; n];
        let mut flags = vec![VertexFlag::Ordinary; n];
        let mut labels = self.boundary_labels.as_ref().map(|_| vec![0; n]);
        for h in 0..n {
            sigma[perm[h]] = perm[self.sigma[h]];
            alpha[perm[h]] = perm[self.alpha[h]];
            flags[perm[h]] = self.flags[h];
            if let (Some(out), Some(src)) = (labels.as_mut(), self.boundary_labels.as_ref()) {
                out[perm[h]] = src[h];
            }
        }
        Fatgraph::from_parts(sigma, alpha, flags, labels).expect("relabeling preserves validity")
    }

    /// Whether `perm` commutes with sigma and alpha and preserves flags and
    /// boundary labels.
    pub fn is_automorphism(&self, perm: &Permutation) -> bool {
        let n = self.num_half_edges();
        if perm.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        for &j in &perm.0 {
            if j >= n || hit[j] {
                return false;
            }
            hit[j] = true;
        }
        (0..n).all(|h| {
            let p = perm.apply(h);
            perm.apply(self.sigma[h]) == self.sigma[p]
                && perm.apply(self.alpha[h]) == self.alpha[p]
                && self.flags[h] == self.flags[p]
                && self.boundary_label(h) == self.boundary_label(p)
        })
    }
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn figure_one_boundary_cycles() {
        let g = figure_one();
        let bc = g.boundary_cycles();
        assert_eq!(bc.len(), 2);
        // rename to the figure's e1..e5
        let name = [2, 1, 4, 3, 5];
        let mut seqs: Vec<Vec<usize>> =
            bc.edge_sequences(&g).into_iter().map(|s| s.into_iter().map(|e| name[e]).collect()).collect();
        seqs.sort_by_key(Vec::len);
        let rotations = |s: &Vec<usize>| (0..s.len()).map(|i| [&s[i..], &s[..i]].concat()).collect::<Vec<_>>();
        assert!(rotations(&seqs[0]).contains(&vec![1, 4, 3, 2]));
        assert!(rotations(&seqs[1]).contains(&vec![1, 5, 4, 3, 5, 2]));
        assert_eq!(g.graph_type().unwrap(), GraphType::new(1, 2));
    }

    #[test]
    fn single_edge_tree_has_one_cycle_through_both_halves() {
        let g = single_edge_tree();
        let bc = g.boundary_cycles();
        assert_eq!(bc.cycles, vec![vec![0, 1]]);
        assert_eq!(bc.edge_sequences(&g), vec![vec![0, 0]]);
        assert_eq!(g.graph_type().unwrap(), GraphType::new(0, 1));
    }

    #[test]
    fn trivalent_one_one_has_a_single_six_cycle() {
        let g = trivalent_one_one();
        let bc = g.boundary_cycles();
        assert_eq!(bc.len(), 1);
        assert_eq!(bc.cycles[0].len(), 6);
        assert_eq!(g.graph_type().unwrap(), GraphType::new(1, 1));
    }

    #[test]
    fn theta_types() {
        assert_eq!(planar_theta().graph_type().unwrap(), GraphType::new(0, 3));
        assert_eq!(trivalent_one_one().graph_type().unwrap(), GraphType::new(1, 1));
    }

    #[test]
    fn half_edge_count_is_sum_of_valences() {
        for g in [figure_one(), trivalent_one_one(), planar_theta(), single_edge_tree()] {
            assert_eq!(g.valences().iter().sum::<usize>(), g.num_half_edges());
            assert_eq!(g.num_half_edges(), 2 * g.num_edges());
        }
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(Fatgraph::new(vec![1, 0], vec![0, 1]).is_err());
        assert!(Fatgraph::new(vec![0, 0], vec![1, 0]).is_err());
        // disconnected: two single-edge pieces
        assert!(Fatgraph::from_parts(vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![VertexFlag::Delta; 4], None).is_err());
        // ordinary univalent vertex
        assert!(Fatgraph::new(vec![0, 1], vec![1, 0]).is_err());
        assert!(Fatgraph::new(vec![], vec![]).is_err());
    }

    #[test]
    fn boundary_labels_must_be_one_to_n() {
        let g = figure_one();
        assert!(g.with_boundary_labels(&[2, 1]).is_ok());
        assert!(g.with_boundary_labels(&[1, 1]).is_err());
        assert!(g.with_boundary_labels(&[1, 3]).is_err());
    }

    #[test]
    fn permutation_algebra() {
        let p = Permutation(vec![1, 2, 0, 4, 3]);
        assert_eq!(p.order(), 6);
        assert!(p.compose(&p.inverse()).is_identity());
    }
}
