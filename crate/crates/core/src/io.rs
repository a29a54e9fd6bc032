//! One-line text form of a fatgraph:
//!
//! ```text
//! g n V E | sigma cycles | alpha pairs | flags [| boundary labels]
//! ```
//!
//! Cycles start at their least half-edge and are sorted; pairs are written
//! `a-b` with `a < b` in increasing order; flags are one symbol per vertex in
//! cycle order (`o` ordinary, `d` delta, `n` node); labels, when present,
//! give the label of each boundary cycle in order of least half-edge.
//! Example: `1 1 2 3 | 0 1 2, 3 4 5 | 0-3 1-4 2-5 | oo`.

use crate::error::{Error, Result};
use crate::fatgraph::{Fatgraph, VertexFlag};

fn sorted_cycles(perm: impl Fn(usize) -> usize, n: usize) -> Vec<Vec<usize>> {
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut c = Vec::new();
        let mut h = s;
        while !seen[h] {
            seen[h] = true;
            c.push(h);
            h = perm(h);
        }
        out.push(c);
    }
    out
}

pub fn to_line(g: &Fatgraph) -> String {
    let t = g.graph_type().expect("valid graphs have a type");
    let n = g.num_half_edges();
    let cycles = sorted_cycles(|h| g.sigma(h), n);
    let cycle_text: Vec<String> =
        cycles.iter().map(|c| c.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")).collect();
    let pairs: Vec<String> = (0..n).filter(|&h| h < g.alpha(h)).map(|h| format!("{}-{}", h, g.alpha(h))).collect();
    let flags: String = cycles.iter().map(|c| g.flag_of_half_edge(c[0]).symbol()).collect();
    let mut line = format!(
        "{} {} {} {} | {} | {} | {}",
        t.g,
        t.n,
        cycles.len(),
        g.num_edges(),
        cycle_text.join(", "),
        pairs.join(" "),
        flags
    );
    if g.has_boundary_labels() {
        let faces = sorted_cycles(|h| g.phi(h), n);
        let labels: Vec<String> =
            faces.iter().map(|c| g.boundary_label(c[0]).expect("labeled").to_string()).collect();
        line.push_str(" | ");
        line.push_str(&labels.join(" "));
    }
    line
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn num(s: &str) -> Result<usize> {
    s.parse().map_err(|_| bad(format!("not a number: {s:?}")))
}

pub fn from_line(line: &str) -> Result<Fatgraph> {
    let parts: Vec<&str> = line.trim().split('|').map(str::trim).collect();
    if parts.len() != 4 && parts.len() != 5 {
        return Err(bad(format!("expected 4 or 5 fields, found {}", parts.len())));
    }
    let header: Vec<usize> = parts[0].split_whitespace().map(num).collect::<Result<_>>()?;
    let [g, n, v, e] = header[..] else {
        return Err(bad("header must be `g n V E`"));
    };
    let cycles: Vec<Vec<usize>> = parts[1]
        .split(',')
        .map(|c| c.split_whitespace().map(num).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = parts[2]
        .split_whitespace()
        .map(|p| {
            let (a, b) = p.split_once('-').ok_or_else(|| bad(format!("bad pair {p:?}")))?;
            Ok((num(a)?, num(b)?))
        })
        .collect::<Result<_>>()?;
    let flags: Vec<VertexFlag> = parts[3]
        .chars()
        .map(|c| VertexFlag::from_symbol(c).ok_or_else(|| bad(format!("bad flag {c:?}"))))
        .collect::<Result<_>>()?;
    if cycles.len() != v || pairs.len() != e || flags.len() != v {
        return Err(bad("counts disagree with header"));
    }
    let mut graph = from_cycles_flagged(&cycles, &pairs, &flags)?;
    if let Some(text) = parts.get(4) {
        let labels: Vec<u32> =
            text.split_whitespace().map(|s| s.parse().map_err(|_| bad(format!("bad label {s:?}")))).collect::<Result<_>>()?;
        let faces = sorted_cycles(|h| graph.phi(h), graph.num_half_edges());
        let bc = graph.boundary_cycles();
        if labels.len() != faces.len() {
            return Err(bad("one label per boundary cycle required"));
        }
        let cycle_of = bc.cycle_of(graph.num_half_edges());
        let mut by_cycle = vec![0; bc.len()];
        for (f, l) in faces.iter().zip(&labels) {
            by_cycle[cycle_of[f[0]]] = *l;
        }
        graph = graph.with_boundary_labels(&by_cycle)?;
    }
    let t = graph.graph_type()?;
    if (t.g, t.n) != (g, n) {
        return Err(bad(format!("header type ({g},{n}) but graph has {t}")));
    }
    Ok(graph)
}

fn from_cycles_flagged(cycles: &[Vec<usize>], pairs: &[(usize, usize)], flags: &[VertexFlag]) -> Result<Fatgraph> {
    let n = 2 * pairs.len();
    let mut sigma = vec![usize::MAX; n];
    let mut flag_of = vec![VertexFlag::Ordinary; n];
    for (c, &f) in cycles.iter().zip(flags) {
        for (i, &h) in c.iter().enumerate() {
            if h >= n || sigma[h] != usize::MAX {
                return Err(bad(format!("half-edge {h} misplaced")));
            }
            sigma[h] = c[(i + 1) % c.len()];
            flag_of[h] = f;
        }
    }
    let mut alpha = vec![usize::MAX; n];
    for &(a, b) in pairs {
        if a >= n || b >= n || alpha[a] != usize::MAX || alpha[b] != usize::MAX {
            return Err(bad(format!("bad pair {a}-{b}")));
        }
        alpha[a] = b;
        alpha[b] = a;
    }
    if sigma.contains(&usize::MAX) || alpha.contains(&usize::MAX) {
        return Err(bad("half-edges not covered"));
    }
    Fatgraph::from_parts(sigma, alpha, flag_of, None)
}
