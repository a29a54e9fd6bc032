//! Intersection numbers on moduli spaces and on the hyperelliptic locus,
//! each evaluated twice: by a closed formula and by summing cell volumes
//! over a census. A report matches only when the two agree exactly.
//!
//! Every identity has a `*_from` variant that takes its censuses as
//! arguments, so a deliberately damaged census can be fed in.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::enumeration::{catalan, euler_characteristic_from, zeta_one_minus_two_g, OrbifoldCensus, ValenceFilter};
use crate::error::{Error, Result};
use crate::hyperelliptic::{count_t1, count_t2, double_tree, W1_MULTIPLICITY_FIXED, W1_MULTIPLICITY_SWAPPED};
use crate::kontsevich::{
    cell_volume, hyperelliptic_cell_volume, hyperelliptic_volume_closed, omega_matrix, pfaffian, volume_from_pfaffian,
};
use crate::rational::{self, factorial, frac, int, pow2, Rational};
use crate::store::CensusStore;
use crate::symmetry::automorphism_order;
use crate::trees::{star, tree_classes, PlanarTree, Rooting, TreeProfile};

/// Largest `n` for which the genus-zero integral is summed over trees.
pub const GENUS0_ASSEMBLY_MAX_N: usize = 9;
/// Largest genus for which hyperelliptic integrals are summed over cells.
pub const HYPERELLIPTIC_ASSEMBLY_MAX_GENUS: usize = 4;

/// Coefficient of the Witten cycle and boundary in the dual of `kappa_1`.
pub fn kappa1_coefficient() -> Rational {
    frac(1, 12)
}

/// `int_{boundary of M_{1,1}} 1`: one point with two automorphisms.
pub fn boundary_point_one_one() -> Rational {
    frac(1, 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identity {
    Genus0,
    PsiTop,
    Hevol,
    W1h,
    Boundary,
    MainTheorem,
    Corollary,
    Euler,
}

impl Identity {
    pub const ALL: [Identity; 8] = [
        Identity::Genus0,
        Identity::PsiTop,
        Identity::Hevol,
        Identity::W1h,
        Identity::Boundary,
        Identity::MainTheorem,
        Identity::Corollary,
        Identity::Euler,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Genus0 => "genus0",
            Identity::PsiTop => "psi-top",
            Identity::Hevol => "hevol",
            Identity::W1h => "w1h",
            Identity::Boundary => "boundary",
            Identity::MainTheorem => "main-theorem",
            Identity::Corollary => "corollary",
            Identity::Euler => "euler",
        }
    }

    /// `"n"` for the genus-zero identity, `"g"` otherwise.
    pub fn parameter(self) -> &'static str {
        match self {
            Identity::Genus0 => "n",
            _ => "g",
        }
    }

    /// Smallest admissible value of the parameter.
    pub fn min_index(self) -> usize {
        match self {
            Identity::Genus0 => 3,
            Identity::W1h | Identity::Boundary | Identity::Corollary => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

/// How the assembled value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Summed over an enumerated census.
    Assembled,
    /// Closed-form ingredients substituted into the assembly formula; no
    /// census was enumerated.
    Substitution,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Assembled => "assembled",
            Provenance::Substitution => "substitution",
        })
    }
}

/// Serde adapter writing rationals as `p/q` strings.
pub mod rational_text {
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::rational::{self, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        rational::parse(&s).map_err(D::Error::custom)
    }
}

/// A further independent evaluation that must equal the closed value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub path: String,
    #[serde(with = "rational_text")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub identity: Identity,
    pub parameter: String,
    pub index: usize,
    #[serde(with = "rational_text")]
    pub value_closed: Rational,
    #[serde(with = "rational_text")]
    pub value_assembled: Rational,
    #[serde(rename = "match")]
    pub matched: bool,
    pub provenance: Provenance,
    pub sources: Vec<String>,
    pub cross_checks: Vec<CrossCheck>,
}

impl IntegralReport {
    fn new(
        identity: Identity,
        index: usize,
        closed: Rational,
        assembled: Rational,
        provenance: Provenance,
        sources: Vec<String>,
        cross_checks: Vec<CrossCheck>,
    ) -> Self {
        let matched = closed == assembled && cross_checks.iter().all(|c| c.value == closed);
        IntegralReport {
            identity,
            parameter: identity.parameter().to_string(),
            index,
            value_closed: closed,
            value_assembled: assembled,
            matched,
            provenance,
            sources,
            cross_checks,
        }
    }
}

fn check(path: impl Into<String>, value: Rational) -> CrossCheck {
    CrossCheck { path: path.into(), value }
}

fn source(c: &OrbifoldCensus) -> String {
    format!("{} ({} classes, mass {})", c.descriptor, c.len(), rational::to_string(&c.mass()))
}

fn big(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn fact(n: u64) -> Rational {
    Rational::from_integer(factorial(n))
}

fn two_pow(n: u64) -> Rational {
    Rational::from_integer(pow2(n))
}

fn below(identity: Identity, index: usize) -> Result<()> {
    if index < identity.min_index() {
        return Err(Error::MalformedGraph(format!(
            "{identity} needs {} >= {}",
            identity.parameter(),
            identity.min_index()
        )));
    }
    Ok(())
}

/// `sum weight / |Aut|`, with weights evaluated in parallel.
fn weighted_sum(c: &OrbifoldCensus, weight: impl Fn(&crate::enumeration::CensusEntry) -> Result<Rational> + Sync) -> Result<Rational> {
    let terms: Vec<Rational> = c
        .entries
        .par_iter()
        .map(|e| weight(e).map(|w| w / int(e.aut_order as i64)))
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().fold(Rational::zero(), |a, b| a + b))
}

fn doubled_volume(e: &crate::enumeration::CensusEntry, profile: TreeProfile) -> Result<Rational> {
    let tree = e.tree.clone().ok_or_else(|| Error::MalformedGraph("census entry without its tree".into()))?;
    let cell = double_tree(&PlanarTree::from_graph(tree, profile)?)?;
    Ok(hyperelliptic_cell_volume(&cell)?.value)
}

// ---- genus zero ----

/// `(n-2)! C_{n-3} (n-3)! / (2n-6)!`.
pub fn genus0_formula(n: usize) -> Rational {
    let m = n as u64 - 3;
    fact(m + 1) * Rational::from_integer(catalan(m)) * fact(m) / fact(2 * m)
}

/// `int_{M_{0,n}} psi_1^{n-3} = 1`, assembled over trivalent trees with
/// `n - 1` labeled leaves.
pub fn psi_top_genus0(n: usize, store: &CensusStore) -> Result<IntegralReport> {
    below(Identity::Genus0, n)?;
    if n > GENUS0_ASSEMBLY_MAX_N {
        return Ok(IntegralReport::new(
            Identity::Genus0,
            n,
            Rational::one(),
            genus0_formula(n),
            Provenance::Substitution,
            vec!["tree count and volume formulas".into()],
            vec![],
        ));
    }
    let labelings = fact(n as u64 - 1);
    let (assembled, sources) = if n == 3 {
        let edge = star(2).graph;
        let v = cell_volume(&edge)?.value;
        (labelings * v / int(automorphism_order(&edge) as i64), vec!["single edge".to_string()])
    } else {
        let trees = store.trees(n - 1, TreeProfile::Trivalent)?;
        let s = weighted_sum(&trees, |e| Ok(labelings.clone() * cell_volume(&e.graph)?.value))?;
        (s, vec![source(&trees)])
    };
    Ok(IntegralReport::new(
        Identity::Genus0,
        n,
        Rational::one(),
        assembled,
        Provenance::Assembled,
        sources,
        vec![check("tree count and volume formulas", genus0_formula(n))],
    ))
}

// ---- top psi power on M_{g,1} ----

/// `1 / (24^g g!)`.
pub fn psi_top_closed(g: usize) -> Rational {
    Rational::one() / (Rational::from_integer(BigInt::from(24).pow(g as u32)) * fact(g as u64))
}

pub fn psi_top_moduli(g: usize, store: &CensusStore) -> Result<IntegralReport> {
    below(Identity::PsiTop, g)?;
    let census = store.fatgraphs(g, 1, ValenceFilter::Trivalent)?;
    psi_top_moduli_seeded(g, &census, store.seed())
}

pub fn psi_top_moduli_from(g: usize, census: &OrbifoldCensus) -> Result<IntegralReport> {
    psi_top_moduli_seeded(g, census, None)
}

/// With a seed, entry `i` eliminates an edge drawn from a generator seeded
/// by `(seed, i)`; the volume does not depend on that choice.
pub fn psi_top_moduli_seeded(g: usize, census: &OrbifoldCensus, seed: Option<u64>) -> Result<IntegralReport> {
    let volumes: Vec<Rational> = census
        .entries
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            let edges = e.graph.num_edges();
            let r = match seed {
                Some(s) => ChaCha8Rng::seed_from_u64(s.wrapping_add(i as u64)).gen_range(0..edges),
                None => edges - 1,
            };
            let a = omega_matrix(&e.graph, Some(r))?;
            Ok(volume_from_pfaffian(pfaffian(&a), a.dim() / 2).value / int(e.aut_order as i64))
        })
        .collect::<Result<_>>()?;
    let assembled = volumes.into_iter().fold(Rational::zero(), |a, b| a + b);
    let d = 3 * g as u64 - 2;
    let uniform = fact(d) / (two_pow(g as u64) * fact(2 * d)) * census.mass();
    Ok(IntegralReport::new(
        Identity::PsiTop,
        g,
        psi_top_closed(g),
        assembled,
        Provenance::Assembled,
        vec![source(census)],
        vec![check("uniform cell volume times mass", uniform)],
    ))
}

// ---- hyperelliptic locus ----

/// `1 / (2^{2g} (2g+1)!)`.
pub fn hevol_closed(g: usize) -> Rational {
    let g = g as u64;
    Rational::one() / (two_pow(2 * g) * fact(2 * g + 1))
}

/// `C_{2g-1} / (2(2g+1)) * (2g-1)! / (2^{2g-1} (4g-2)!)`.
pub fn hevol_substituted(g: usize) -> Rational {
    let g = g as u64;
    Rational::from_integer(catalan(2 * g - 1)) / big(2 * (2 * g + 1)) * hyperelliptic_volume_closed(2 * g as usize - 1)
}

pub fn psi_top_hyperelliptic(g: usize, store: &CensusStore) -> Result<IntegralReport> {
    below(Identity::Hevol, g)?;
    if g > HYPERELLIPTIC_ASSEMBLY_MAX_GENUS {
        return Ok(IntegralReport::new(
            Identity::Hevol,
            g,
            hevol_closed(g),
            hevol_substituted(g),
            Provenance::Substitution,
            vec!["tree count and cell volume formulas".into()],
            vec![],
        ));
    }
    psi_top_hyperelliptic_from(g, &*store.hyperelliptic(g)?)
}

pub fn psi_top_hyperelliptic_from(g: usize, census: &OrbifoldCensus) -> Result<IntegralReport> {
    let assembled = weighted_sum(census, |e| doubled_volume(e, TreeProfile::Trivalent))?;
    Ok(IntegralReport::new(
        Identity::Hevol,
        g,
        hevol_closed(g),
        assembled,
        Provenance::Assembled,
        vec![source(census)],
        vec![check("tree count and cell volume formulas", hevol_substituted(g))],
    ))
}

// ---- Witten cycle on the hyperelliptic locus ----

/// `(10g^2 - 13g + 3) / (2^{2g-2} (2g+1)!)`.
pub fn w1h_closed(g: usize) -> Rational {
    let g = g as u64;
    big(10 * g * g - 13 * g + 3) / (two_pow(2 * g - 2) * fact(2 * g + 1))
}

/// Common cell volume `(2g-2)! / (2^{2g-2} (4g-4)!)` times the weighted
/// closed-form counts.
pub fn w1h_substituted(g: usize) -> Rational {
    let vol = hyperelliptic_volume_closed(2 * g - 2);
    vol * (big(W1_MULTIPLICITY_SWAPPED as u64) * count_t1(g) + big(W1_MULTIPLICITY_FIXED as u64) * count_t2(g))
}

pub fn w1_h_integral(g: usize, store: &CensusStore) -> Result<IntegralReport> {
    below(Identity::W1h, g)?;
    if g > HYPERELLIPTIC_ASSEMBLY_MAX_GENUS {
        return Ok(IntegralReport::new(
            Identity::W1h,
            g,
            w1h_closed(g),
            w1h_substituted(g),
            Provenance::Substitution,
            vec!["component count and cell volume formulas".into()],
            vec![],
        ));
    }
    let (swapped, fixed) = store.w1h(g)?;
    w1_h_integral_from(g, &swapped, &fixed)
}

pub fn w1_h_integral_from(g: usize, swapped: &OrbifoldCensus, fixed: &OrbifoldCensus) -> Result<IntegralReport> {
    let m1 = big(W1_MULTIPLICITY_SWAPPED as u64);
    let m2 = big(W1_MULTIPLICITY_FIXED as u64);
    let first = weighted_sum(swapped, |e| doubled_volume(e, TreeProfile::OneFiveValent))?;
    let second = weighted_sum(fixed, |e| doubled_volume(e, TreeProfile::MarkedTrivalent))?;
    Ok(IntegralReport::new(
        Identity::W1h,
        g,
        w1h_closed(g),
        m1 * first + m2 * second,
        Provenance::Assembled,
        vec![source(swapped), source(fixed)],
        vec![check("component count and cell volume formulas", w1h_substituted(g))],
    ))
}

// ---- boundary of the hyperelliptic locus ----

/// `1 / (2^{2g-1} (2g-1)!)`.
pub fn boundary_closed(g: usize) -> Rational {
    let g = g as u64;
    Rational::one() / (two_pow(2 * g - 1) * fact(2 * g - 1))
}

/// Rooted trivalent trees with `2g` leaves, the root leaf being the node:
/// half of the sum of their halved tree volumes.
pub fn boundary_from_rooted_trees(g: usize) -> Result<Rational> {
    let classes = tree_classes(2 * g, TreeProfile::Trivalent, Rooting::Rooted);
    let terms: Vec<Rational> = classes
        .par_iter()
        .map(|(e, t)| {
            let v = cell_volume(&t.graph)?;
            Ok(v.value / two_pow(v.d as u64) / int(e.aut_order as i64))
        })
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().fold(Rational::zero(), |a, b| a + b) / int(2))
}

pub fn boundary_integral(g: usize, store: &CensusStore) -> Result<IntegralReport> {
    below(Identity::Boundary, g)?;
    if g - 1 > HYPERELLIPTIC_ASSEMBLY_MAX_GENUS {
        return Ok(IntegralReport::new(
            Identity::Boundary,
            g,
            boundary_closed(g),
            hevol_substituted(g - 1) / int(2),
            Provenance::Substitution,
            vec!["half the hyperelliptic integral one genus down".into()],
            vec![],
        ));
    }
    boundary_integral_from(g, &*store.hyperelliptic(g - 1)?)
}

/// `census` is the hyperelliptic census one genus down.
pub fn boundary_integral_from(g: usize, census: &OrbifoldCensus) -> Result<IntegralReport> {
    let lower = psi_top_hyperelliptic_from(g - 1, census)?;
    let rooted = boundary_from_rooted_trees(g)?;
    Ok(IntegralReport::new(
        Identity::Boundary,
        g,
        boundary_closed(g),
        lower.value_assembled / int(2),
        Provenance::Assembled,
        vec![source(census), format!("rooted trivalent trees with {} leaves", 2 * g)],
        vec![check("rooted trees", rooted)],
    ))
}

// ---- the main identity ----

/// `(2g-1)^2 / (2^{2g} (2g+1)!)`.
pub fn main_theorem_closed(g: usize) -> Rational {
    let g = g as u64;
    big((2 * g - 1) * (2 * g - 1)) / (two_pow(2 * g) * fact(2 * g + 1))
}

pub fn main_theorem(g: usize, store: &CensusStore) -> Result<IntegralReport> {
    below(Identity::MainTheorem, g)?;
    if g == 1 {
        return main_theorem_genus_one(&*store.fatgraphs(1, 1, ValenceFilter::All)?);
    }
    let w1h = w1_h_integral(g, store)?;
    let boundary = boundary_integral(g, store)?;
    Ok(main_from_parts(g, &w1h, &boundary))
}

/// `census` is the full census of `(1,1)` fatgraphs; its cells with a
/// vertex of valence at least five form the Witten cycle.
pub fn main_theorem_genus_one(census: &OrbifoldCensus) -> Result<IntegralReport> {
    let witten = weighted_sum(census, |e| Ok(if e.graph.max_valence() >= 5 { Rational::one() } else { Rational::zero() }))?;
    let assembled = kappa1_coefficient() * (witten + boundary_point_one_one());
    Ok(IntegralReport::new(
        Identity::MainTheorem,
        1,
        main_theorem_closed(1),
        assembled,
        Provenance::Assembled,
        vec![source(census)],
        vec![],
    ))
}

/// `(1/12)(w1h + boundary)` from already computed reports.
pub fn main_from_parts(g: usize, w1h: &IntegralReport, boundary: &IntegralReport) -> IntegralReport {
    let assembled = kappa1_coefficient() * (w1h.value_assembled.clone() + &boundary.value_assembled);
    let closed_parts = kappa1_coefficient() * (w1h_closed(g) + boundary_closed(g));
    let provenance = if w1h.provenance == Provenance::Assembled && boundary.provenance == Provenance::Assembled {
        Provenance::Assembled
    } else {
        Provenance::Substitution
    };
    let mut sources = w1h.sources.clone();
    sources.extend(boundary.sources.iter().cloned());
    let mut checks = vec![check("closed witten and boundary terms", closed_parts)];
    if !(w1h.matched && boundary.matched) {
        // a failed ingredient must fail the whole report
        checks.push(check("ingredient reports", Rational::zero() - main_theorem_closed(g)));
    }
    IntegralReport::new(Identity::MainTheorem, g, main_theorem_closed(g), assembled, provenance, sources, checks)
}

/// `10g^2 - 13g + 3 + g(2g+1) = 3(2g-1)^2` and
/// `6(2g-1)^2 + 2g(2g+1) = 2(14g^2 - 11g + 3)`.
pub fn polynomial_identities_hold(g: usize) -> bool {
    let g = BigInt::from(g);
    let one = BigInt::one();
    let two_g_minus_1 = BigInt::from(2) * &g - &one;
    let a = BigInt::from(10) * &g * &g - BigInt::from(13) * &g + 3 + &g * (BigInt::from(2) * &g + &one);
    let b = BigInt::from(3) * &two_g_minus_1 * &two_g_minus_1;
    let c = BigInt::from(6) * &two_g_minus_1 * &two_g_minus_1 + BigInt::from(2) * &g * (BigInt::from(2) * &g + &one);
    let d = BigInt::from(2) * (BigInt::from(14) * &g * &g - BigInt::from(11) * &g + 3);
    a == b && c == d
}

// ---- corollary ----

/// `(14g^2 - 11g + 3) / (3 * 2^{2g} (2g+1)!)`.
pub fn corollary_closed(g: usize) -> Rational {
    let g = g as u64;
    big(14 * g * g - 11 * g + 3) / (big(3) * two_pow(2 * g) * fact(2 * g + 1))
}

/// Elliptic-tail term `(1/24) / (2^{2g-2} (2g-1)!)`.
pub fn elliptic_tail_closed(g: usize) -> Rational {
    frac(1, 24) * boundary_closed(g) * int(2)
}

pub fn hodge_corollary(g: usize, store: &CensusStore) -> Result<IntegralReport> {
    below(Identity::Corollary, g)?;
    let main = main_theorem(g, store)?;
    let genus_one = main_theorem(1, store)?;
    let boundary = boundary_integral(g, store)?;
    Ok(corollary_from_parts(g, &main, &genus_one, &boundary))
}

pub fn corollary_from_parts(
    g: usize,
    main: &IntegralReport,
    genus_one: &IntegralReport,
    boundary: &IntegralReport,
) -> IntegralReport {
    // the tail integral over the one-pointed locus one genus down is twice
    // the boundary integral
    let tail = genus_one.value_assembled.clone() * &boundary.value_assembled * int(2);
    let assembled = main.value_assembled.clone() + tail;
    let provenance =
        if main.provenance == Provenance::Assembled && boundary.provenance == Provenance::Assembled {
            Provenance::Assembled
        } else {
            Provenance::Substitution
        };
    let mut sources = main.sources.clone();
    sources.extend(genus_one.sources.iter().cloned());
    let mut checks = vec![check("closed main value and tail", main_theorem_closed(g) + elliptic_tail_closed(g))];
    if !(main.matched && genus_one.matched && boundary.matched) {
        checks.push(check("ingredient reports", Rational::zero() - corollary_closed(g)));
    }
    IntegralReport::new(Identity::Corollary, g, corollary_closed(g), assembled, provenance, sources, checks)
}

// ---- Euler characteristic ----

pub fn euler(g: usize, store: &CensusStore) -> Result<IntegralReport> {
    below(Identity::Euler, g)?;
    euler_from(g, &*store.fatgraphs(g, 1, ValenceFilter::All)?)
}

pub fn euler_from(g: usize, census: &OrbifoldCensus) -> Result<IntegralReport> {
    Ok(IntegralReport::new(
        Identity::Euler,
        g,
        zeta_one_minus_two_g(g),
        euler_characteristic_from(census),
        Provenance::Assembled,
        vec![source(census)],
        vec![],
    ))
}

/// Dispatches on the identity.
pub fn report(identity: Identity, index: usize, store: &CensusStore) -> Result<IntegralReport> {
    match identity {
        Identity::Genus0 => psi_top_genus0(index, store),
        Identity::PsiTop => psi_top_moduli(index, store),
        Identity::Hevol => psi_top_hyperelliptic(index, store),
        Identity::W1h => w1_h_integral(index, store),
        Identity::Boundary => boundary_integral(index, store),
        Identity::MainTheorem => main_theorem(index, store),
        Identity::Corollary => hodge_corollary(index, store),
        Identity::Euler => euler(index, store),
    }
}

/// Reports for every index in `indices`, in order.
pub fn sweep(identity: Identity, indices: &[usize], store: &CensusStore) -> Result<Vec<IntegralReport>> {
    indices.par_iter().map(|&i| report(identity, i, store)).collect()
}
