//! Memoized census access with an optional on-disk cache.
//!
//! A cache file holds one census:
//!
//! ```text
//! # fatmod-census v1
//! # <descriptor>
//! <aut> ; <graph line> [; <tree line> ; <involution>]
//! ```
//!
//! Graph and tree lines use the format of [`crate::io`]; an involution is
//! the space-separated image list. Files whose header, descriptor or version
//! differ are rejected, and every loaded entry is re-canonicalized so that a
//! damaged file cannot pass as a valid census.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::enumeration::{enumerate_fatgraphs, Caps, CensusEntry, OrbifoldCensus, ValenceFilter};
use crate::error::{Error, Result};
use crate::fatgraph::Permutation;
use crate::hyperelliptic::{hyperelliptic_census, w1_intersection_census};
use crate::io::{from_line, to_line};
use crate::symmetry::canonical_data;
use crate::trees::{enumerate_trees, Rooting, TreeProfile};

pub const CACHE_HEADER: &str = "# fatmod-census v1";

/// Where censuses come from.
pub struct CensusStore {
    caps: Caps,
    dir: Option<PathBuf>,
    build: bool,
    seed: Option<u64>,
    memo: Mutex<HashMap<String, Arc<OrbifoldCensus>>>,
}

impl CensusStore {
    pub fn in_memory(caps: Caps) -> Self {
        CensusStore { caps, dir: None, build: true, seed: None, memo: Mutex::new(HashMap::new()) }
    }

    /// Reads and writes cache files in `dir`. With `build = false` a missing
    /// file is an error instead of triggering enumeration.
    pub fn with_dir(caps: Caps, dir: impl Into<PathBuf>, build: bool) -> Self {
        CensusStore { caps, dir: Some(dir.into()), build, seed: None, memo: Mutex::new(HashMap::new()) }
    }

    /// Seed for choosing which edge length to eliminate in volume
    /// computations; without one the last edge is used.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn fatgraphs(&self, g: usize, n: usize, filter: ValenceFilter) -> Result<Arc<OrbifoldCensus>> {
        let descriptor = format!("fatgraphs g={g} n={n} {filter}");
        self.get(&descriptor, None, || enumerate_fatgraphs(g, n, filter, &self.caps))
    }

    pub fn hyperelliptic(&self, g: usize) -> Result<Arc<OrbifoldCensus>> {
        self.get(&format!("hyperelliptic g={g}"), Some(TreeProfile::Trivalent), || hyperelliptic_census(g, &self.caps))
    }

    /// The two components of the first Witten cycle on the hyperelliptic
    /// locus.
    pub fn w1h(&self, g: usize) -> Result<(Arc<OrbifoldCensus>, Arc<OrbifoldCensus>)> {
        let first = self.get(&format!("w1h-swapped g={g}"), Some(TreeProfile::OneFiveValent), || {
            w1_intersection_census(g, &self.caps).map(|c| c.component1)
        })?;
        let second = self.get(&format!("w1h-fixed g={g}"), Some(TreeProfile::MarkedTrivalent), || {
            w1_intersection_census(g, &self.caps).map(|c| c.component2)
        })?;
        Ok((first, second))
    }

    /// Unrooted trees; each entry's graph is the tree itself.
    pub fn trees(&self, leaves: usize, profile: TreeProfile) -> Result<Arc<OrbifoldCensus>> {
        let descriptor = crate::trees::tree_descriptor(leaves, profile, Rooting::Unrooted);
        self.get(&descriptor, None, || enumerate_trees(leaves, profile, Rooting::Unrooted, &self.caps))
    }

    fn get(
        &self,
        descriptor: &str,
        tree_profile: Option<TreeProfile>,
        build: impl FnOnce() -> Result<OrbifoldCensus>,
    ) -> Result<Arc<OrbifoldCensus>> {
        if let Some(c) = self.memo.lock().expect("memo lock").get(descriptor) {
            return Ok(c.clone());
        }
        let census = match &self.dir {
            Some(dir) => {
                let path = cache_path(dir, descriptor);
                if path.exists() {
                    read_cache(&path, descriptor, tree_profile)?
                } else if self.build {
                    let c = build()?;
                    write_cache(&path, &c)?;
                    c
                } else {
                    return Err(Error::Cache(format!("no cached census for {descriptor:?} in {}", dir.display())));
                }
            }
            None => build()?,
        };
        let census = Arc::new(census);
        self.memo.lock().expect("memo lock").insert(descriptor.to_string(), census.clone());
        Ok(census)
    }
}

/// File name for a descriptor: non-alphanumerics become `_`.
pub fn cache_path(dir: &Path, descriptor: &str) -> PathBuf {
    let stem: String = descriptor.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    dir.join(format!("{stem}.v1.census"))
}

pub fn census_to_text(c: &OrbifoldCensus) -> String {
    let mut out = format!("{CACHE_HEADER}\n# {}\n", c.descriptor);
    for e in c.iter() {
        out.push_str(&format!("{} ; {}", e.aut_order, to_line(&e.graph)));
        if let (Some(t), Some(i)) = (&e.tree, &e.involution) {
            let images: Vec<String> = i.0.iter().map(usize::to_string).collect();
            out.push_str(&format!(" ; {} ; {}", to_line(t), images.join(" ")));
        }
        out.push('\n');
    }
    out
}

pub fn write_cache(path: &Path, c: &OrbifoldCensus) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Cache(format!("{}: {e}", path.display()));
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io_err)?;
    }
    // write then rename, so readers never see a partial file
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, census_to_text(c)).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)
}

pub fn read_cache(path: &Path, descriptor: &str, tree_profile: Option<TreeProfile>) -> Result<OrbifoldCensus> {
    let text = fs::read_to_string(path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))?;
    census_from_text(&text, descriptor, tree_profile).map_err(|e| match e {
        Error::Cache(m) => Error::Cache(format!("{}: {m}", path.display())),
        other => Error::Cache(format!("{}: {other}", path.display())),
    })
}

pub fn census_from_text(text: &str, descriptor: &str, tree_profile: Option<TreeProfile>) -> Result<OrbifoldCensus> {
    let corrupt = |m: String| Error::Cache(m);
    let mut lines = text.lines();
    if lines.next() != Some(CACHE_HEADER) {
        return Err(corrupt("missing or unknown version header".into()));
    }
    let found = lines.next().and_then(|l| l.strip_prefix("# ")).unwrap_or("");
    if found != descriptor {
        return Err(corrupt(format!("descriptor {found:?}, expected {descriptor:?}")));
    }
    let mut entries = Vec::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let at = |m: String| corrupt(format!("entry {}: {m}", i + 1));
        let fields: Vec<&str> = line.split(';').map(str::trim).collect();
        if fields.len() != 2 && fields.len() != 4 {
            return Err(at(format!("{} fields", fields.len())));
        }
        let aut: usize = fields[0].parse().map_err(|_| at(format!("bad automorphism order {:?}", fields[0])))?;
        let graph = from_line(fields[1]).map_err(|e| at(e.to_string()))?;
        let c = canonical_data(&graph);
        if c.graph != graph {
            return Err(at("graph is not in canonical form".into()));
        }
        if c.aut_order != aut {
            return Err(at(format!("automorphism order {aut}, recomputed {}", c.aut_order)));
        }
        let mut entry = CensusEntry::new(c.key, graph, aut);
        if fields.len() == 4 {
            if tree_profile.is_none() {
                return Err(at("unexpected tree data".into()));
            }
            let tree = from_line(fields[2]).map_err(|e| at(e.to_string()))?;
            let images: Vec<usize> = fields[3]
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| at(format!("bad involution entry {s:?}"))))
                .collect::<Result<_>>()?;
            let iota = Permutation(images);
            if iota.len() != entry.graph.num_half_edges()
                || !entry.graph.is_automorphism(&iota)
                || iota.order() != 2
            {
                return Err(at("involution is not an order-2 automorphism".into()));
            }
            entry.tree = Some(tree);
            entry.involution = Some(iota);
        } else if tree_profile.is_some() {
            return Err(at("missing tree data".into()));
        }
        entries.push(entry);
    }
    entries.sort_by(|a, b| a.key.cmp(&b.key));
    if entries.windows(2).any(|w| w[0].key == w[1].key) {
        return Err(corrupt("duplicate classes".into()));
    }
    Ok(OrbifoldCensus::new(descriptor, entries))
}
