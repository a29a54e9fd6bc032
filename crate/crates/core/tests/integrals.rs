use fatmod::enumeration::{zeta_one_minus_two_g, Caps, ValenceFilter};
use fatmod::integrals::*;
use fatmod::rational::{frac, int};
use fatmod::store::{cache_path, CensusStore};
use fatmod::{Error, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

fn store() -> CensusStore {
    CensusStore::in_memory(Caps::default())
}

/// Bernoulli numbers by the Akiyama-Tanigawa algorithm; this yields
/// `B_1 = +1/2`, irrelevant for even indices.
fn akiyama_tanigawa(n: usize) -> Rational {
    let mut a: Vec<Rational> = Vec::new();
    for m in 0..=n {
        a.push(frac(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = int(j as i64) * (a[j - 1].clone() - &a[j]);
        }
    }
    a[0].clone()
}

#[test]
fn zeta_values_against_independent_bernoulli() {
    assert_eq!(akiyama_tanigawa(2), frac(1, 6));
    assert_eq!(akiyama_tanigawa(12), frac(-691, 2730));
    for g in 1..=12 {
        let want = -akiyama_tanigawa(2 * g) / int(2 * g as i64);
        assert_eq!(zeta_one_minus_two_g(g), want);
    }
}

#[test]
fn euler_characteristics() {
    let s = store();
    let one = euler(1, &s).unwrap();
    assert_eq!(one.value_assembled, frac(-1, 12));
    let two = euler(2, &s).unwrap();
    assert_eq!(two.value_assembled, frac(1, 120));
    assert!(one.matched && two.matched);
    assert_eq!(two.value_closed, -akiyama_tanigawa(4) / int(4));
}

#[test]
fn genus_zero() {
    let s = store();
    for n in 3..=9 {
        let r = psi_top_genus0(n, &s).unwrap();
        assert!(r.matched, "n = {n}");
        assert_eq!(r.value_assembled, int(1));
    }
    for n in 4..=30 {
        assert_eq!(genus0_formula(n), int(1));
    }
}

#[test]
fn hyperelliptic_reports() {
    let s = store();
    for g in 1..=4 {
        let r = psi_top_hyperelliptic(g, &s).unwrap();
        assert!(r.matched && r.provenance == Provenance::Assembled, "genus {g}");
    }
    assert_eq!(psi_top_hyperelliptic(2, &s).unwrap().value_assembled, frac(1, 1920));
    for g in 1..=200 {
        assert_eq!(hevol_substituted(g), hevol_closed(g));
    }
}

#[test]
fn main_theorem_and_corollary() {
    let s = store();
    let want = [(2, frac(3, 640)), (3, frac(25, 322560))];
    for (g, v) in want {
        let r = main_theorem(g, &s).unwrap();
        assert!(r.matched);
        assert_eq!(r.value_assembled, v);
    }
    let r = main_theorem(4, &s).unwrap();
    assert!(r.matched && r.provenance == Provenance::Assembled);
    assert_eq!(hodge_corollary(2, &s).unwrap().value_assembled, frac(37, 5760));
    assert_eq!(hodge_corollary(3, &s).unwrap().value_assembled, frac(1, 10080));
    for g in 2..=200 {
        assert!(polynomial_identities_hold(g));
        assert_eq!(kappa1_coefficient() * (w1h_closed(g) + boundary_closed(g)), main_theorem_closed(g));
        assert_eq!(main_theorem_closed(g) + elliptic_tail_closed(g), corollary_closed(g));
        assert_eq!(w1h_substituted(g), w1h_closed(g));
    }
}

#[test]
fn main_theorem_decreases() {
    let values: Vec<Rational> = (2..=60).map(main_theorem_closed).collect();
    assert!(values.iter().all(|v| *v > Rational::zero()));
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn boundary_paths_agree() {
    for g in 2..=4 {
        assert_eq!(boundary_from_rooted_trees(g).unwrap(), boundary_closed(g));
    }
    assert_eq!(boundary_from_rooted_trees(2).unwrap(), frac(1, 48));
}

#[test]
fn census_faults_are_detected() {
    let s = store();
    let hyp = s.hyperelliptic(3).unwrap();
    for i in 0..hyp.len() {
        let mut bad = (*hyp).clone();
        bad.entries.remove(i);
        assert!(!psi_top_hyperelliptic_from(3, &bad).unwrap().matched);
        let mut bad = (*hyp).clone();
        bad.entries[i].aut_order += 1;
        assert!(!psi_top_hyperelliptic_from(3, &bad).unwrap().matched);
    }
    let (a, b) = s.w1h(3).unwrap();
    for i in 0..b.len() {
        let mut bad = (*b).clone();
        bad.entries[i].aut_order *= 2;
        assert!(!w1_h_integral_from(3, &a, &bad).unwrap().matched);
    }
    let full = s.fatgraphs(2, 1, ValenceFilter::All).unwrap();
    for i in 0..full.len() {
        let mut bad = (*full).clone();
        bad.entries.remove(i);
        assert!(!euler_from(2, &bad).unwrap().matched);
    }
    let lower = s.hyperelliptic(1).unwrap();
    let mut bad = (*lower).clone();
    bad.entries[0].aut_order = 3;
    assert!(!boundary_integral_from(2, &bad).unwrap().matched);
}

#[test]
fn cache_round_trip_gives_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let first: Vec<IntegralReport> = {
        let s = CensusStore::with_dir(Caps::default(), dir.path(), true);
        [main_theorem(2, &s), psi_top_moduli(2, &s), euler(2, &s)].into_iter().map(Result::unwrap).collect()
    };
    let s = CensusStore::with_dir(Caps::default(), dir.path(), false);
    let second: Vec<IntegralReport> =
        [main_theorem(2, &s), psi_top_moduli(2, &s), euler(2, &s)].into_iter().map(Result::unwrap).collect();
    assert_eq!(first, second);
    assert_eq!(serde_json::to_string(&first).unwrap(), serde_json::to_string(&second).unwrap());
}

#[test]
fn missing_or_damaged_cache() {
    let dir = tempfile::tempdir().unwrap();
    let s = CensusStore::with_dir(Caps::default(), dir.path(), false);
    assert!(matches!(psi_top_moduli(1, &s), Err(Error::Cache(_))));

    let s = CensusStore::with_dir(Caps::default(), dir.path(), true);
    psi_top_moduli(1, &s).unwrap();
    let path = cache_path(dir.path(), "fatgraphs g=1 n=1 trivalent");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replace("6 ;", "3 ;")).unwrap();
    let s = CensusStore::with_dir(Caps::default(), dir.path(), true);
    assert!(matches!(psi_top_moduli(1, &s), Err(Error::Cache(_))));
}

#[test]
fn big_closed_values() {
    let v = hevol_closed(50);
    assert_eq!(*v.denom(), fatmod::rational::pow2(100) * fatmod::rational::factorial(101));
    assert_eq!(*v.numer(), BigInt::from(1));
}
