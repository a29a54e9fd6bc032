//! Planar trees with delta-labeled leaves.
//!
//! Every tree has a leaf, so every tree arises by planting a shape on a root
//! leaf. A shape is a leaf or an internal vertex with an ordered list of
//! child shapes; the vertex's cyclic order is (parent, child 1, .., child m).
//! Distinct shapes give distinct rooted trees, and forgetting the root gives
//! every unrooted tree.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;

use crate::enumeration::{Caps, CensusEntry, OrbifoldCensus};
use crate::error::{Error, Result};
use crate::fatgraph::{Fatgraph, VertexFlag};
use crate::symmetry::{canonical_data, canonical_data_colored};

/// Internal-vertex profile of a family of trees.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeProfile {
    Trivalent,
    /// One 5-valent vertex, the rest trivalent.
    OneFiveValent,
    /// Trivalent with one marked (delta-labeled) internal vertex.
    MarkedTrivalent,
    /// Every internal vertex of odd valence.
    OddValence,
}

impl std::fmt::Display for TreeProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TreeProfile::Trivalent => "trivalent",
            TreeProfile::OneFiveValent => "one-5-valent",
            TreeProfile::MarkedTrivalent => "marked-trivalent",
            TreeProfile::OddValence => "odd-valence",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rooting {
    Rooted,
    Unrooted,
}

/// A fatgraph of type (0,1) whose leaves are delta-labeled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarTree {
    pub graph: Fatgraph,
    pub leaves: usize,
    pub profile: TreeProfile,
    /// Half-edge at the root leaf.
    pub root: Option<usize>,
    /// The marked internal vertex.
    pub marked: Option<usize>,
}

impl PlanarTree {
    /// Wraps a fatgraph, checking that it is a tree with delta leaves.
    pub fn from_graph(graph: Fatgraph, profile: TreeProfile) -> Result<Self> {
        if graph.num_edges() + 1 != graph.num_vertices() {
            return Err(Error::MalformedGraph("not a tree".into()));
        }
        let mut leaves = 0;
        let mut marked = None;
        for v in 0..graph.num_vertices() {
            let flag = graph.vertex_flag(v);
            match (graph.valence(v), flag) {
                (1, VertexFlag::Delta) => leaves += 1,
                (1, _) => return Err(Error::MalformedGraph("leaves must be delta-labeled".into())),
                (_, VertexFlag::Delta) if marked.is_none() => marked = Some(v),
                (_, VertexFlag::Delta) => return Err(Error::MalformedGraph("more than one marked vertex".into())),
                _ => {}
            }
        }
        Ok(PlanarTree { graph, leaves, profile, root: None, marked })
    }

    pub fn leaf_half_edges(&self) -> Vec<usize> {
        (0..self.graph.num_half_edges()).filter(|&h| self.graph.sigma(h) == h).collect()
    }

    pub fn internal_vertices(&self) -> Vec<usize> {
        (0..self.graph.num_vertices()).filter(|&v| self.graph.valence(v) > 1).collect()
    }

    /// Colors marking the root half-edge, for rooted isomorphism.
    fn root_colors(&self) -> Option<Vec<u32>> {
        self.root.map(|r| (0..self.graph.num_half_edges()).map(|h| u32::from(h == r)).collect())
    }
}

#[derive(Debug)]
enum Shape {
    Leaf,
    Node { children: Vec<Arc<Shape>>, marked: bool },
}

/// Planted shapes with `leaves` leaves above the root and `special` special
/// vertices still to place (0 or 1).
struct ShapeFactory {
    profile: TreeProfile,
    memo: HashMap<(usize, usize), Arc<Vec<Arc<Shape>>>>,
}

impl ShapeFactory {
    fn new(profile: TreeProfile) -> Self {
        ShapeFactory { profile, memo: HashMap::new() }
    }

    /// Child counts allowed at a node above `leaves` leaves, with whether
    /// the node is special.
    fn node_kinds(&self, leaves: usize) -> Vec<(usize, bool)> {
        match self.profile {
            TreeProfile::Trivalent => vec![(2, false)],
            TreeProfile::OneFiveValent => vec![(2, false), (4, true)],
            TreeProfile::MarkedTrivalent => vec![(2, false), (2, true)],
            TreeProfile::OddValence => (2..=leaves).step_by(2).map(|c| (c, false)).collect(),
        }
    }

    fn shapes(&mut self, leaves: usize, special: usize) -> Arc<Vec<Arc<Shape>>> {
        if let Some(s) = self.memo.get(&(leaves, special)) {
            return s.clone();
        }
        let mut out: Vec<Arc<Shape>> = Vec::new();
        if leaves == 1 && special == 0 {
            out.push(Arc::new(Shape::Leaf));
        }
        for (m, is_special) in self.node_kinds(leaves) {
            let here = usize::from(is_special);
            if here > special || m > leaves {
                continue;
            }
            let mut acc: Vec<Vec<Arc<Shape>>> = Vec::new();
            self.children(m, leaves, special - here, &mut Vec::new(), &mut acc);
            for children in acc {
                out.push(Arc::new(Shape::Node { children, marked: is_special && self.profile == TreeProfile::MarkedTrivalent }));
            }
        }
        let out = Arc::new(out);
        self.memo.insert((leaves, special), out.clone());
        out
    }

    /// All ordered lists of `m` child shapes using `leaves` leaves and
    /// `special` special vertices in total.
    fn children(
        &mut self,
        m: usize,
        leaves: usize,
        special: usize,
        prefix: &mut Vec<Arc<Shape>>,
        out: &mut Vec<Vec<Arc<Shape>>>,
    ) {
        if m == 0 {
            if leaves == 0 && special == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        for l in 1..=leaves - (m - 1) {
            for s in 0..=special {
                let options = self.shapes(l, s);
                for shape in options.iter() {
                    prefix.push(shape.clone());
                    self.children(m - 1, leaves - l, special - s, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
}

/// Builds the fatgraph of a shape planted on a root leaf; returns the root
/// half-edge.
fn plant(shape: &Shape) -> (Fatgraph, usize) {
    struct Builder {
        sigma: Vec<usize>,
        alpha: Vec<usize>,
        flags: Vec<VertexFlag>,
    }
    impl Builder {
        fn fresh(&mut self) -> usize {
            self.sigma.push(usize::MAX);
            self.alpha.push(usize::MAX);
            self.flags.push(VertexFlag::Ordinary);
            self.sigma.len() - 1
        }
        fn cycle(&mut self, hs: &[usize], flag: VertexFlag) {
            for (i, &h) in hs.iter().enumerate() {
                self.sigma[h] = hs[(i + 1) % hs.len()];
                self.flags[h] = flag;
            }
        }
        fn pair(&mut self, a: usize, b: usize) {
            self.alpha[a] = b;
            self.alpha[b] = a;
        }
        /// Returns the half-edge pointing up from the shape's top vertex.
        fn build(&mut self, shape: &Shape) -> usize {
            match shape {
                Shape::Leaf => {
                    let x = self.fresh();
                    self.cycle(&[x], VertexFlag::Delta);
                    x
                }
                Shape::Node { children, marked } => {
                    let up = self.fresh();
                    let mut hs = vec![up];
                    for child in children {
                        let down = self.fresh();
                        hs.push(down);
                        let top = self.build(child);
                        self.pair(down, top);
                    }
                    self.cycle(&hs, if *marked { VertexFlag::Delta } else { VertexFlag::Ordinary });
                    up
                }
            }
        }
    }
    let mut b = Builder { sigma: Vec::new(), alpha: Vec::new(), flags: Vec::new() };
    let root = b.fresh();
    b.cycle(&[root], VertexFlag::Delta);
    let top = b.build(shape);
    b.pair(root, top);
    let g = Fatgraph::from_parts(b.sigma, b.alpha, b.flags, None).expect("planted shapes are valid trees");
    (g, root)
}

fn planted_trees(leaves: usize, profile: TreeProfile) -> Vec<PlanarTree> {
    if leaves < 2 {
        return Vec::new();
    }
    let special = usize::from(matches!(profile, TreeProfile::OneFiveValent | TreeProfile::MarkedTrivalent));
    let mut factory = ShapeFactory::new(profile);
    let shapes = factory.shapes(leaves - 1, special);
    shapes
        .iter()
        .map(|s| {
            let (graph, root) = plant(s);
            let mut t = PlanarTree::from_graph(graph, profile).expect("planted shapes are trees");
            t.root = Some(root);
            t
        })
        .collect()
}

/// Census of planar trees with `leaves` delta-labeled leaves.
pub fn enumerate_trees(leaves: usize, profile: TreeProfile, rooting: Rooting, caps: &Caps) -> Result<OrbifoldCensus> {
    caps.check_leaves(leaves)?;
    Ok(OrbifoldCensus::new(
        tree_descriptor(leaves, profile, rooting),
        tree_classes(leaves, profile, rooting).into_iter().map(|(e, _)| e).collect(),
    ))
}

pub fn tree_descriptor(leaves: usize, profile: TreeProfile, rooting: Rooting) -> String {
    let r = match rooting {
        Rooting::Rooted => "rooted",
        Rooting::Unrooted => "unrooted",
    };
    format!("trees leaves={leaves} {profile} {r}")
}

/// Tree classes with their `PlanarTree` data (the root, when rooted, is
/// carried onto the canonical representative).
pub fn tree_classes(leaves: usize, profile: TreeProfile, rooting: Rooting) -> Vec<(CensusEntry, PlanarTree)> {
    let planted = planted_trees(leaves, profile);
    let canon: Vec<(CensusEntry, PlanarTree)> = planted
        .par_iter()
        .map(|t| {
            let c = match rooting {
                Rooting::Rooted => canonical_data_colored(&t.graph, &t.root_colors().expect("planted")),
                Rooting::Unrooted => canonical_data(&t.graph),
            };
            let mut tree = PlanarTree::from_graph(c.graph.clone(), profile).expect("relabeled tree");
            if rooting == Rooting::Rooted {
                tree.root = t.root.map(|r| c.relabeling[r]);
            }
            (CensusEntry::new(c.key, c.graph, c.aut_order), tree)
        })
        .collect();
    let mut by_key = BTreeMap::new();
    for (e, t) in canon {
        by_key.entry(e.key.clone()).or_insert((e, t));
    }
    by_key.into_values().collect()
}

/// The star with `k` leaves.
pub fn star(k: usize) -> PlanarTree {
    assert!(k >= 2, "a star needs two leaves");
    if k == 2 {
        let (graph, _) = plant(&Shape::Leaf);
        return PlanarTree::from_graph(graph, TreeProfile::OddValence).expect("single edge");
    }
    let shape = Shape::Node { children: (0..k - 1).map(|_| Arc::new(Shape::Leaf)).collect(), marked: false };
    let (graph, _) = plant(&shape);
    PlanarTree::from_graph(graph, TreeProfile::OddValence).expect("stars are trees")
}
