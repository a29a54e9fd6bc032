//! Kontsevich's 2-form on a cell and exact cell volumes.
//!
//! Along the single boundary cycle the half-edges give a sequence of edge
//! slots `s_1 .. s_{2E}`; the form is `sum_{i<j} dl_{s_i} ^ dl_{s_j}`. On the
//! slice where the total length is fixed, one edge length is eliminated and
//! the form becomes a skew matrix in the remaining `2d = E - 1` coordinates.
//! Then `omega^d = d! Pf(A) dl_1 ^ .. ^ dl_{2d}`, and the slice simplex
//! `{l > 0, sum l = 1/2}` has volume `1 / (2^{2d} (2d)!)` in those
//! coordinates.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::fatgraph::Fatgraph;
use crate::hyperelliptic::HyperellipticCell;
use crate::rational::{self, Rational};

/// Antisymmetric matrix of the form in slice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewForm {
    pub matrix: Vec<Vec<Rational>>,
    pub eliminated_edge: usize,
    /// Edge index of each coordinate.
    pub coordinates: Vec<usize>,
}

impl SkewForm {
    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    /// Checks antisymmetry.
    pub fn is_skew(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == -self.matrix[j][i].clone()))
    }
}

/// The form on edge variables, before elimination: `B[e][f]` is the
/// coefficient of `dl_e ^ dl_f`.
pub fn edge_form(g: &Fatgraph) -> Result<Vec<Vec<BigInt>>> {
    let bc = g.boundary_cycles();
    if bc.len() != 1 {
        return Err(Error::WrongBoundaryCount(bc.len()));
    }
    let slots: Vec<usize> = bc.cycles[0].iter().map(|&h| g.edge_of(h)).collect();
    let e = g.num_edges();
    let mut b = vec![vec![BigInt::zero(); e]; e];
    // running count of each edge among earlier slots
    let mut before = vec![0i64; e];
    for &s in &slots {
        for (f, &c) in before.iter().enumerate() {
            if c != 0 && f != s {
                b[f][s] += c;
                b[s][f] -= c;
            }
        }
        before[s] += 1;
    }
    Ok(b)
}

/// Restricts an edge form to the slice by eliminating edge `r`.
pub fn eliminate(b: &[Vec<Rational>], r: usize) -> SkewForm {
    let e = b.len();
    let coordinates: Vec<usize> = (0..e).filter(|&x| x != r).collect();
    let matrix = coordinates
        .iter()
        .map(|&k| {
            coordinates
                .iter()
                .map(|&l| b[k][l].clone() - b[r][l].clone() - b[k][r].clone() + b[r][r].clone())
                .collect()
        })
        .collect();
    SkewForm { matrix, eliminated_edge: r, coordinates }
}

fn to_rational(b: Vec<Vec<BigInt>>) -> Vec<Vec<Rational>> {
    b.into_iter().map(|row| row.into_iter().map(Rational::from_integer).collect()).collect()
}

/// Skew matrix of the form on a one-boundary graph, eliminating edge
/// `eliminated` (default: the last edge).
pub fn omega_matrix(g: &Fatgraph, eliminated: Option<usize>) -> Result<SkewForm> {
    let b = edge_form(g)?;
    let e = g.num_edges();
    if e % 2 == 0 {
        return Err(Error::MalformedGraph(format!("{e} edges leave an odd-dimensional slice")));
    }
    let r = eliminated.unwrap_or(e - 1);
    if r >= e {
        return Err(Error::MalformedGraph(format!("no edge {r}")));
    }
    Ok(eliminate(&to_rational(b), r))
}

/// Exact Pfaffian by skew Gaussian elimination.
pub fn pfaffian(a: &SkewForm) -> Rational {
    pfaffian_of(&a.matrix)
}

pub fn pfaffian_of(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n % 2 == 1 {
        return Rational::zero();
    }
    let mut c: Vec<Vec<Rational>> = m.to_vec();
    let mut result = rational::int(1);
    while !c.is_empty() {
        let size = c.len();
        let Some(j) = (1..size).find(|&j| !c[0][j].is_zero()) else {
            return Rational::zero();
        };
        if j != 1 {
            c.swap(1, j);
            for row in c.iter_mut() {
                row.swap(1, j);
            }
            result = -result;
        }
        let p = c[0][1].clone();
        result *= &p;
        let u: Vec<Rational> = c[0].clone();
        let v: Vec<Rational> = c[1].clone();
        let next: Vec<Vec<Rational>> = (2..size)
            .map(|i| {
                (2..size)
                    .map(|l| c[i][l].clone() + (v[i].clone() * &u[l] - u[i].clone() * &v[l]) / &p)
                    .collect()
            })
            .collect();
        c = next;
    }
    result
}

/// Volume of a cell: `d! |Pf| / (2^{2d} (2d)!)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellVolume {
    pub value: Rational,
    pub d: usize,
    /// Signed Pfaffian for the chosen coordinates.
    pub pfaffian: Rational,
}

pub fn simplex_factor(d: usize) -> Rational {
    Rational::new(rational::factorial(d as u64), rational::pow2(2 * d as u64) * rational::factorial(2 * d as u64))
}

pub fn volume_from_pfaffian(pf: Rational, d: usize) -> CellVolume {
    CellVolume { value: pf.abs() * simplex_factor(d), d, pfaffian: pf }
}

pub fn cell_volume(g: &Fatgraph) -> Result<CellVolume> {
    let a = omega_matrix(g, None)?;
    let d = a.dim() / 2;
    Ok(volume_from_pfaffian(pfaffian(&a), d))
}

/// Volume of a hyperelliptic cell in tree coordinates, computed twice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticVolume {
    pub value: Rational,
    pub d: usize,
    /// Pfaffian of the double's form pulled back along the edge map.
    pub pullback_pfaffian: Rational,
    /// Pfaffian of the tree's own form.
    pub tree_pfaffian: Rational,
}

/// Pulls the form of the double back to tree coordinates and integrates;
/// independently halves the tree's form. The two must agree.
pub fn hyperelliptic_cell_volume(cell: &HyperellipticCell) -> Result<HyperellipticVolume> {
    let tree = &cell.tree.graph;
    let et = tree.num_edges();
    let b = to_rational(edge_form(&cell.doubled)?);
    let mut pulled = vec![vec![Rational::zero(); et]; et];
    for (e, (te, fe)) in cell.edge_map.iter().enumerate() {
        for (f, (tf, ff)) in cell.edge_map.iter().enumerate() {
            if !b[e][f].is_zero() {
                pulled[*te][*tf] += b[e][f].clone() * fe * ff;
            }
        }
    }
    if et % 2 == 0 {
        return Err(Error::MalformedGraph(format!("tree with {et} edges")));
    }
    let d = (et - 1) / 2;
    let pull_pf = pfaffian(&eliminate(&pulled, et - 1));
    let tree_pf = pfaffian(&omega_matrix(tree, None)?);
    let via_pullback = volume_from_pfaffian(pull_pf.clone(), d).value;
    let half_d = Rational::new(1.into(), rational::pow2(d as u64));
    let via_half_form = half_d * volume_from_pfaffian(tree_pf.clone(), d).value;
    if via_pullback != via_half_form {
        return Err(Error::VolumeMismatch(format!(
            "pullback gives {}, halved tree form gives {}",
            rational::to_string(&via_pullback),
            rational::to_string(&via_half_form)
        )));
    }
    Ok(HyperellipticVolume { value: via_pullback, d, pullback_pfaffian: pull_pf, tree_pfaffian: tree_pf })
}

/// `d! / (2^d (2d)!)`.
pub fn hyperelliptic_volume_closed(d: usize) -> Rational {
    Rational::new(rational::factorial(d as u64), rational::pow2(d as u64) * rational::factorial(2 * d as u64))
}
