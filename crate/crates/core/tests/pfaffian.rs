use std::collections::HashMap;

use fatmod::enumeration::{enumerate_fatgraphs, Caps, ValenceFilter};
use fatmod::hyperelliptic::{double_tree, hyperelliptic_census};
use fatmod::kontsevich::{cell_volume, hyperelliptic_cell_volume, omega_matrix, pfaffian, pfaffian_of, simplex_factor};
use fatmod::rational::{frac, int};
use fatmod::trees::{enumerate_trees, tree_classes, PlanarTree, Rooting, TreeProfile};
use fatmod::Rational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Pfaffian by expansion along the first remaining index, memoized on the
/// set of remaining indices.
fn laplace_pfaffian(m: &[Vec<Rational>]) -> Rational {
    fn rec(m: &[Vec<Rational>], mask: u32, memo: &mut HashMap<u32, Rational>) -> Rational {
        if mask == 0 {
            return int(1);
        }
        if let Some(v) = memo.get(&mask) {
            return v.clone();
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut sign = 1;
        let mut total = int(0);
        for j in 0..m.len() {
            if rest & (1 << j) == 0 {
                continue;
            }
            if !m[i][j].is_zero() {
                let sub = rec(m, rest & !(1 << j), memo);
                total += int(sign) * &m[i][j] * sub;
            }
            sign = -sign;
        }
        memo.insert(mask, total.clone());
        total
    }
    if m.len() % 2 == 1 {
        return int(0);
    }
    rec(m, (1u32 << m.len()) - 1, &mut HashMap::new())
}

fn determinant(m: &[Vec<Rational>]) -> Rational {
    let mut a = m.to_vec();
    let n = a.len();
    let mut det = int(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return int(0);
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            let f = a[r][c].clone() / &pivot;
            for k in c..n {
                let d = f.clone() * &a[c][k];
                a[r][k] -= d;
            }
        }
    }
    det
}

fn skew(n: usize, entries: &[i64]) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![int(0); n]; n];
    let mut it = entries.iter();
    for i in 0..n {
        for j in i + 1..n {
            let x = *it.next().unwrap();
            m[i][j] = int(x);
            m[j][i] = int(-x);
        }
    }
    m
}

proptest! {
    #[test]
    fn elimination_pfaffian_agrees_with_expansion(half in 1usize..5, entries in prop::collection::vec(-3i64..=3, 28)) {
        let m = skew(2 * half, &entries);
        let pf = pfaffian_of(&m);
        prop_assert_eq!(pf.clone(), laplace_pfaffian(&m));
        prop_assert_eq!(pf.clone() * &pf, determinant(&m));
    }
}

#[test]
fn pfaffian_squared_is_determinant_on_census_forms() {
    let census = enumerate_fatgraphs(2, 1, ValenceFilter::All, &Caps::default()).unwrap();
    for e in census.iter().filter(|e| e.graph.num_edges() % 2 == 1) {
        let a = omega_matrix(&e.graph, None).unwrap();
        assert!(a.is_skew());
        let pf = pfaffian(&a);
        assert_eq!(pf.clone() * &pf, determinant(&a.matrix));
        assert_eq!(pf, laplace_pfaffian(&a.matrix));
    }
}

#[test]
fn trivalent_pfaffian_law_and_elimination_invariance() {
    for g in 1..=2usize {
        let want = int(4).pow(3 * g as i32 - 2) / int(2).pow(g as i32);
        let census = enumerate_fatgraphs(g, 1, ValenceFilter::Trivalent, &Caps::default()).unwrap();
        for e in census.iter() {
            for r in 0..e.graph.num_edges() {
                let pf = pfaffian(&omega_matrix(&e.graph, Some(r)).unwrap());
                assert_eq!(pf.abs(), want, "genus {g}, eliminating edge {r}");
            }
        }
    }
}

#[test]
fn odd_valence_trees_have_pfaffian_power_of_four() {
    for leaves in 3..=7 {
        let census = enumerate_trees(leaves, TreeProfile::OddValence, Rooting::Unrooted, &Caps::default()).unwrap();
        for e in census.iter() {
            let edges = e.graph.num_edges();
            let m = (edges - 1) / 2;
            let v = cell_volume(&e.graph).unwrap();
            assert_eq!(v.pfaffian.abs(), int(4).pow(m as i32));
            assert_eq!(v.value, Rational::from_integer(fatmod::rational::factorial(m as u64)) / Rational::from_integer(fatmod::rational::factorial(2 * m as u64)));
        }
    }
}

#[test]
fn hyperelliptic_cells_are_nondegenerate() {
    for g in 1..=3 {
        let census = hyperelliptic_census(g, &Caps::default()).unwrap();
        for e in census.iter() {
            let tree = PlanarTree::from_graph(e.tree.clone().unwrap(), TreeProfile::Trivalent).unwrap();
            let v = hyperelliptic_cell_volume(&double_tree(&tree).unwrap()).unwrap();
            assert!(!v.pullback_pfaffian.is_zero());
            assert_eq!(v.pullback_pfaffian.abs() * int(2).pow(v.d as i32), v.tree_pfaffian.abs());
        }
    }
    let one = hyperelliptic_census(1, &Caps::default()).unwrap();
    let tree = PlanarTree::from_graph(one.entries[0].tree.clone().unwrap(), TreeProfile::Trivalent).unwrap();
    assert_eq!(hyperelliptic_cell_volume(&double_tree(&tree).unwrap()).unwrap().value, frac(1, 4));
}

#[test]
fn monte_carlo_volume_of_a_tree_cell() {
    // four leaves, five edges: d = 2
    let (_, tree) = tree_classes(4, TreeProfile::Trivalent, Rooting::Unrooted).into_iter().next().unwrap();
    let v = cell_volume(&tree.graph).unwrap();
    assert_eq!(v.d, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let samples = 400_000;
    let mut inside = 0u64;
    for _ in 0..samples {
        let s: f64 = (0..4).map(|_| rng.gen_range(0.0..0.5)).sum();
        if s < 0.5 {
            inside += 1;
        }
    }
    // cube [0, 1/2]^4 has volume 1/16
    let simplex = inside as f64 / samples as f64 / 16.0;
    // {x > 0, sum x < 1/2} in four dimensions
    let exact_simplex = 1.0 / 384.0;
    assert_eq!(simplex_factor(2), frac(2, 384));
    let estimate = 2.0 * v.pfaffian.abs().to_f64().unwrap() * simplex;
    let exact = v.value.to_f64().unwrap();
    assert!((simplex - exact_simplex).abs() / exact_simplex < 0.01);
    assert!((estimate - exact).abs() / exact < 0.01, "{estimate} vs {exact}");
}
