//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness.

use std::process::Command;
use std::time::{Duration, Instant};

use fatmod::enumeration::{enumerate_fatgraphs, zeta_one_minus_two_g, Caps, OrbifoldCensus, ValenceFilter};
use fatmod::hyperelliptic::{
    count_t1, count_t2, cut_along_involution, double_tree, gamma_h, gamma_h_prime, w1_intersection_census, VertexSplit,
};
use fatmod::integrals::*;
use fatmod::kontsevich::{cell_volume, omega_matrix, pfaffian};
use fatmod::rational::{abs, frac, int};
use fatmod::store::CensusStore;
use fatmod::surgery::expansions;
use fatmod::symmetry::{automorphism_order, canonical_form, fixed_cells, is_hyperelliptic};
use fatmod::trees::{enumerate_trees, tree_classes, Rooting, TreeProfile};
use fatmod::{Fatgraph, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: fatmod::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn store() -> CensusStore {
    CensusStore::in_memory(Caps::default())
}

fn report_ok(r: &IntegralReport, want: Option<Rational>, provenance: Provenance) -> Outcome {
    ensure(r.matched, || format!("{} {}={}: closed {} assembled {}", r.identity, r.parameter, r.index, r.value_closed, r.value_assembled))?;
    ensure(r.provenance == provenance, || format!("{} {}: provenance {}", r.identity, r.index, r.provenance))?;
    if let Some(w) = want {
        ensure(r.value_assembled == w, || format!("{} {}: got {}, want {w}", r.identity, r.index, r.value_assembled))?;
    }
    Ok(())
}

fn c1_six_valent_facets() -> Outcome {
    let g = ok(Fatgraph::from_cycles(&[(0..6).collect()], &[(0, 3), (1, 4), (2, 5)]))?;
    let xs = ok(expansions(&g, 0))?;
    let by_size = |k: usize| xs.iter().filter(|x| x.new_edges.len() == k).count();
    let pentagon = xs.iter().filter(|x| x.new_edges.len() == 1 && x.graph.max_valence() == 5).count();
    let got = (by_size(3), by_size(2), by_size(1), pentagon);
    ensure(got == (14, 21, 9, 6), || format!("maximal, two-edge, one-edge, pentagon = {got:?}"))
}

fn c2_one_one() -> Outcome {
    let s = store();
    let c = ok(s.fatgraphs(1, 1, ValenceFilter::Trivalent))?;
    ensure(c.len() == 1 && c.entries[0].aut_order == 6, || format!("{} classes", c.len()))?;
    report_ok(&ok(psi_top_moduli(1, &s))?, Some(frac(1, 24)), Provenance::Assembled)
}

fn c3_pfaffian_law() -> Outcome {
    for g in 1..=3usize {
        let want = int(4).pow(3 * g as i32 - 2) / int(2).pow(g as i32);
        let c = ok(enumerate_fatgraphs(g, 1, ValenceFilter::Trivalent, &Caps::default()))?;
        for e in c.iter() {
            let pf = pfaffian(&ok(omega_matrix(&e.graph, None))?);
            ensure(abs(&pf) == want, || format!("genus {g}: |Pf| = {pf}, want {want}"))?;
        }
    }
    let mut trees = 0;
    for leaves in 3..=13 {
        let c = ok(enumerate_trees(leaves, TreeProfile::OddValence, Rooting::Unrooted, &Caps::default()))?;
        for e in c.iter().filter(|e| e.graph.num_edges() <= 13) {
            let m = (e.graph.num_edges() - 1) / 2;
            let v = ok(cell_volume(&e.graph))?;
            ensure(abs(&v.pfaffian) == int(4).pow(m as i32), || format!("tree with {} edges: |Pf| = {}", 2 * m + 1, v.pfaffian))?;
            trees += 1;
        }
    }
    ensure(trees > 0, || "no trees".into())
}

fn c4_elimination_invariance() -> Outcome {
    let mut pool: Vec<Fatgraph> = Vec::new();
    for g in 1..=3 {
        let c = ok(enumerate_fatgraphs(g, 1, ValenceFilter::Trivalent, &Caps::default()))?;
        pool.extend(c.iter().map(|e| e.graph.clone()));
    }
    let all = ok(enumerate_fatgraphs(2, 1, ValenceFilter::All, &Caps::default()))?;
    pool.extend(all.iter().filter(|e| e.graph.num_edges() % 2 == 1).map(|e| e.graph.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let g = &pool[rng.gen_range(0..pool.len())];
        let first = abs(&pfaffian(&ok(omega_matrix(g, Some(0)))?));
        for r in 1..g.num_edges() {
            let pf = abs(&pfaffian(&ok(omega_matrix(g, Some(r)))?));
            ensure(pf == first, || format!("eliminating edge {r} gives {pf}, edge 0 gives {first}"))?;
        }
    }
    Ok(())
}

fn c5_genus_zero() -> Outcome {
    for n in 4..=30 {
        ensure(genus0_formula(n) == int(1), || format!("closed formula at n = {n}"))?;
    }
    let s = store();
    for n in 4..=9 {
        report_ok(&ok(psi_top_genus0(n, &s))?, Some(int(1)), Provenance::Assembled)?;
    }
    Ok(())
}

fn c6_hyperelliptic_volume() -> Outcome {
    let s = store();
    for g in 1..=4 {
        report_ok(&ok(psi_top_hyperelliptic(g, &s))?, Some(hevol_closed(g)), Provenance::Assembled)?;
    }
    ensure(hevol_closed(2) == frac(1, 1920), || "g = 2 value".into())?;
    for g in 5..=200 {
        report_ok(&ok(psi_top_hyperelliptic(g, &s))?, None, Provenance::Substitution)?;
    }
    Ok(())
}

fn c7_component_counts() -> Outcome {
    for g in 2..=4 {
        let w = ok(w1_intersection_census(g, &Caps::default()))?;
        ensure(w.component1.mass() == count_t1(g), || format!("first component at genus {g}: {}", w.component1.mass()))?;
        ensure(w.component2.mass() == count_t2(g), || format!("second component at genus {g}: {}", w.component2.mass()))?;
    }
    ensure(count_t1(2) == frac(1, 10) && count_t2(2) == frac(1, 2), || "genus two counts".into())
}

fn c8_main_theorem() -> Outcome {
    let s = store();
    report_ok(&ok(main_theorem(1, &s))?, Some(frac(1, 24)), Provenance::Assembled)?;
    for g in 2..=4 {
        report_ok(&ok(main_theorem(g, &s))?, Some(main_theorem_closed(g)), Provenance::Assembled)?;
    }
    ensure(main_theorem_closed(2) == frac(3, 640), || "g = 2 value".into())?;
    for g in 5..=200 {
        report_ok(&ok(main_theorem(g, &s))?, None, Provenance::Substitution)?;
        ensure(polynomial_identities_hold(g), || format!("polynomial identities at g = {g}"))?;
    }
    Ok(())
}

fn c9_corollary() -> Outcome {
    let s = store();
    for g in 2..=200 {
        let r = ok(hodge_corollary(g, &s))?;
        let p = if g <= 4 { Provenance::Assembled } else { Provenance::Substitution };
        report_ok(&r, Some(corollary_closed(g)), p)?;
    }
    ensure(corollary_closed(2) == frac(37, 5760), || "g = 2 value".into())
}

fn c10_hyperelliptic_structure() -> Outcome {
    for leaves in [3, 5, 7, 9] {
        for (_, t) in tree_classes(leaves, TreeProfile::Trivalent, Rooting::Unrooted) {
            let c = ok(double_tree(&t))?;
            let (a, b) = ok(cut_along_involution(&c.doubled, &c.involution, VertexSplit::Delta))?;
            let key = canonical_form(&t.graph);
            ensure(canonical_form(&a.graph) == key && canonical_form(&b.graph) == key, || format!("round trip with {leaves} leaves"))?;
            let iota = ok(is_hyperelliptic(&c.doubled))?.ok_or("double not recognized as hyperelliptic")?;
            let fixed = ok(fixed_cells(&c.doubled, &iota))?.total();
            ensure(fixed == 2 * c.genus() + 2, || format!("{fixed} fixed cells at genus {}", c.genus()))?;
        }
    }
    for g in 2..=6 {
        ensure(automorphism_order(&gamma_h(g)) == 4 * g, || format!("one-vertex minimal cell at genus {g}"))?;
        ensure(automorphism_order(&gamma_h_prime(g)) == 2 * (2 * g + 1), || format!("two-vertex minimal cell at genus {g}"))?;
    }
    Ok(())
}

/// Akiyama-Tanigawa; independent of the library's Bernoulli recurrence.
fn bernoulli(n: usize) -> Rational {
    let mut a: Vec<Rational> = Vec::new();
    for m in 0..=n {
        a.push(frac(1, m as i64 + 1));
        for j in (1..=m).rev() {
            a[j - 1] = int(j as i64) * (a[j - 1].clone() - &a[j]);
        }
    }
    a[0].clone()
}

fn c11_euler() -> Outcome {
    let s = store();
    for (g, want) in [(1usize, frac(-1, 12)), (2, frac(1, 120))] {
        let oracle = -bernoulli(2 * g) / int(2 * g as i64);
        ensure(oracle == want, || format!("oracle at g = {g}: {oracle}"))?;
        ensure(zeta_one_minus_two_g(g) == oracle, || format!("library zeta at g = {g}"))?;
        let r = ok(euler(g, &s))?;
        report_ok(&r, Some(want), Provenance::Assembled)?;
    }
    Ok(())
}

fn faults(c: &OrbifoldCensus) -> Vec<OrbifoldCensus> {
    let mut out = Vec::new();
    for i in 0..c.len() {
        let mut dropped = c.clone();
        dropped.entries.remove(i);
        out.push(dropped);
        let mut bumped = c.clone();
        bumped.entries[i].aut_order += 1;
        out.push(bumped);
    }
    out
}

fn c12_determinism_and_mutation() -> Outcome {
    let args = ["report", "--g", "1..2", "--n", "3..6", "--format", "json"];
    let run = || Command::new(env!("CARGO_BIN_EXE_fatmod")).env_remove("FATMOD_CACHE").args(args).output();
    let (a, b) = (run().map_err(|e| e.to_string())?, run().map_err(|e| e.to_string())?);
    ensure(a.status.success() && a.stdout == b.stdout, || "two report runs differ".into())?;
    let in_process = || -> Result<String, String> {
        let s = store();
        let mut all = Vec::new();
        for id in [Identity::MainTheorem, Identity::Hevol, Identity::PsiTop] {
            all.extend(ok(sweep(id, &[1, 2], &s))?);
        }
        serde_json::to_string(&all).map_err(|e| e.to_string())
    };
    ensure(in_process()? == in_process()?, || "in-process reports differ".into())?;

    let s = store();
    let mut injected = 0;
    for bad in faults(&*ok(s.fatgraphs(2, 1, ValenceFilter::Trivalent))?) {
        ensure(!ok(psi_top_moduli_from(2, &bad))?.matched, || "psi-top fault unnoticed".into())?;
        injected += 1;
    }
    for bad in faults(&*ok(s.hyperelliptic(3))?) {
        ensure(!ok(psi_top_hyperelliptic_from(3, &bad))?.matched, || "hevol fault unnoticed".into())?;
        ensure(!ok(boundary_integral_from(4, &bad))?.matched, || "boundary fault unnoticed".into())?;
        injected += 1;
    }
    let (x, y) = ok(s.w1h(3))?;
    for bad in faults(&x) {
        ensure(!ok(w1_h_integral_from(3, &bad, &y))?.matched, || "w1h fault unnoticed".into())?;
        injected += 1;
    }
    for bad in faults(&y) {
        ensure(!ok(w1_h_integral_from(3, &x, &bad))?.matched, || "w1h fault unnoticed".into())?;
        injected += 1;
    }
    for bad in faults(&*ok(s.fatgraphs(2, 1, ValenceFilter::All))?) {
        ensure(!ok(euler_from(2, &bad))?.matched, || "euler fault unnoticed".into())?;
        injected += 1;
    }
    ensure(injected > 0, || "no faults injected".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 12] = [
        ("six-valent expansion facets", c1_six_valent_facets, Some(Duration::from_secs(1))),
        ("trivalent (1,1) census and psi integral", c2_one_one, Some(Duration::from_secs(1))),
        ("Pfaffian law on graphs and odd trees", c3_pfaffian_law, Some(Duration::from_secs(120))),
        ("elimination invariance", c4_elimination_invariance, None),
        ("genus zero", c5_genus_zero, Some(Duration::from_secs(60))),
        ("hyperelliptic volume", c6_hyperelliptic_volume, Some(Duration::from_secs(120))),
        ("Witten cycle component counts", c7_component_counts, None),
        ("main theorem", c8_main_theorem, None),
        ("corollary identity", c9_corollary, None),
        ("hyperelliptic structure", c10_hyperelliptic_structure, None),
        ("Euler characteristics", c11_euler, Some(Duration::from_secs(300))),
        ("determinism and mutation", c12_determinism_and_mutation, None),
    ];
    let mut failed = 0;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = f();
        let took = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, limit) {
            if took > *limit {
                outcome = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
