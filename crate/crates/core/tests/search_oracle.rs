mod common;

use std::collections::{BTreeMap, BTreeSet};

use cayley_factor::cyclic::{dstar, dstar_witness_ok};
use cayley_factor::group::{automorphisms, FiniteGroup};
use cayley_factor::notation::report_json;
use cayley_factor::search::{enumerate_triples, find_factor_pairs, near_factorization_census, SearchOptions};
use cayley_factor::set::ElementSet;
use common::*;

type Pairs = BTreeSet<(ElementSet, ElementSet)>;

/// Factor pairs of every `U`, from all pairs of subsets of `G ∖ {e}`.
fn brute_force_pairs(g: &FiniteGroup) -> BTreeMap<ElementSet, Pairs> {
    let n = g.order();
    let others: Vec<usize> = g.elements().filter(|&x| x != g.identity()).collect();
    let subsets: Vec<Vec<usize>> = (1u32..1 << others.len())
        .map(|m| (0..others.len()).filter(|&k| m >> k & 1 == 1).map(|k| others[k]).collect())
        .collect();
    let mut out: BTreeMap<ElementSet, Pairs> = BTreeMap::new();
    for s in &subsets {
        for t in &subsets {
            let mut counts = vec![0u8; n];
            let mut clash = false;
            'outer: for &a in s {
                for &b in t {
                    let c = g.mul(a, b);
                    counts[c] += 1;
                    if counts[c] > 1 {
                        clash = true;
                        break 'outer;
                    }
                }
            }
            if clash {
                continue;
            }
            let u: Vec<usize> = (0..n).filter(|&x| counts[x] == 1).collect();
            if oracle_factorable(g, s, t, &u) {
                out.entry(g.set(u)).or_default().insert((g.set(s.iter().copied()), g.set(t.iter().copied())));
            }
        }
    }
    out
}

fn small_groups(max: usize) -> Vec<FiniteGroup> {
    supported_groups(2, max)
}

#[test]
fn factor_pairs_match_brute_force() {
    for g in small_groups(10) {
        let oracle = brute_force_pairs(&g);
        for u in symmetric_sets(&g, g.order()).into_iter().filter(|u| !u.is_empty()) {
            let report = find_factor_pairs(&g, &u, &SearchOptions::default()).unwrap();
            assert!(report.exhaustive);
            let found: Pairs = report.triples.iter().map(|t| (t.s().clone(), t.t().clone())).collect();
            assert_eq!(found.len(), report.triples.len(), "{g}: duplicate pairs");
            assert_eq!(found, oracle.get(&u).cloned().unwrap_or_default(), "{g} U={u:?}");
        }
    }
}

#[test]
fn deduplicated_pairs_keep_the_target() {
    let dedup = SearchOptions {
        dedup: true,
        ..SearchOptions::default()
    };
    for g in [cyclic(10), dihedral(5), dihedral(6), product(&cyclic(2), &cyclic(4))] {
        let auts = automorphisms(&g).unwrap();
        for u in symmetric_sets(&g, g.order()).into_iter().filter(|u| !u.is_empty()) {
            let all = find_factor_pairs(&g, &u, &SearchOptions::default()).unwrap();
            let reps = find_factor_pairs(&g, &u, &dedup).unwrap();
            assert!(reps.triples.iter().all(|t| t.u() == &u), "{g} U={u:?}");
            assert!(reps.triples.iter().all(|t| all.triples.contains(t)));
            let stabilizer: Vec<_> = auts.iter().filter(|a| a.apply_set(&u) == u).collect();
            let mut orbits: Vec<BTreeSet<(ElementSet, ElementSet)>> = Vec::new();
            for t in &all.triples {
                let orbit: BTreeSet<_> = stabilizer.iter().map(|a| (a.apply_set(t.s()), a.apply_set(t.t()))).collect();
                if !orbits.contains(&orbit) {
                    orbits.push(orbit);
                }
            }
            assert_eq!(reps.orbits, Some(orbits.len()), "{g} U={u:?}");
            for orbit in &orbits {
                let hits = reps.triples.iter().filter(|t| orbit.contains(&(t.s().clone(), t.t().clone()))).count();
                assert_eq!(hits, 1, "{g} U={u:?}");
            }
        }
    }
}

#[test]
fn enumeration_matches_brute_force() {
    for g in small_groups(12) {
        let oracle = oracle_triples(&g, g.order());
        let report = enumerate_triples(&g, &SearchOptions::default()).unwrap();
        let found: BTreeSet<_> = report.triples.iter().map(|t| t.clone().into_sets()).collect();
        assert_eq!(found, oracle, "{g}");
        assert!(report.triples.iter().all(|t| t.is_verified()));
        let keys: Vec<_> = report.triples.iter().map(|t| t.sort_key()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "{g}: not sorted");
    }
}

#[test]
fn pruned_branches_hold_no_triples() {
    let audit = SearchOptions {
        audit_prunes: true,
        ..SearchOptions::default()
    };
    for g in small_groups(8) {
        let report = enumerate_triples(&g, &audit).unwrap();
        assert_eq!(report.stats.audit_violations, 0, "{g}");
        for u in symmetric_sets(&g, g.order()).into_iter().filter(|u| !u.is_empty()) {
            let report = find_factor_pairs(&g, &u, &audit).unwrap();
            assert_eq!(report.stats.audit_violations, 0, "{g} U={u:?}");
        }
    }
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    for g in [cyclic(12), dihedral(6), product(&cyclic(2), &dihedral(3)), cyclic(13)] {
        for dedup in [false, true] {
            let run = |threads| {
                let opts = SearchOptions {
                    threads: Some(threads),
                    dedup,
                    ..SearchOptions::default()
                };
                let triples = report_json(&enumerate_triples(&g, &opts).unwrap());
                let census = report_json(&near_factorization_census(&g, &opts).unwrap());
                (triples.to_string(), census.to_string())
            };
            let one = run(1);
            assert_eq!(one, run(2), "{g}");
            assert_eq!(one, run(4), "{g}");
        }
    }
}

#[test]
fn connected_filter_matches_generated_subgroup() {
    for g in small_groups(10) {
        let all = enumerate_triples(&g, &SearchOptions::default()).unwrap();
        let connected = enumerate_triples(
            &g,
            &SearchOptions {
                require_connected: true,
                ..SearchOptions::default()
            },
        )
        .unwrap();
        let expected: Vec<_> = all
            .triples
            .iter()
            .filter(|t| g.subgroup_generated(t.u()).order() == g.order())
            .cloned()
            .collect();
        assert_eq!(connected.triples, expected, "{g}");
    }
}

#[test]
fn budget_exhaustion_is_flagged() {
    let g = cyclic(16);
    let opts = SearchOptions {
        node_budget: Some(10),
        ..SearchOptions::default()
    };
    let report = enumerate_triples(&g, &opts).unwrap();
    assert!(!report.exhaustive);
    assert!(report.triples.iter().all(|t| t.is_verified()));
}

/// Largest `d` with symmetric `S, T ⊆ Z_n ∖ {0}`, `|S| = |T| = d` and all
/// sums distinct, by trying every pair of equal-size symmetric sets.
fn brute_dstar(n: usize) -> usize {
    let g = cyclic(n);
    let mut by_size: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for x in symmetric_sets(&g, n) {
        by_size.entry(x.len()).or_default().push(x.to_vec());
    }
    let mut best = 0;
    for (&d, sets) in &by_size {
        let found = sets.iter().any(|s| {
            sets.iter().any(|t| {
                let mut seen = vec![false; n];
                s.iter().all(|&a| t.iter().all(|&b| !std::mem::replace(&mut seen[(a + b) % n], true)))
            })
        });
        if found {
            best = best.max(d);
        }
    }
    best
}

#[test]
fn dstar_matches_brute_force_and_bounds() {
    for n in 3..=24 {
        let d = dstar(n, None).unwrap();
        assert_eq!(d.value, brute_dstar(n), "n={n}");
        assert!(d.value * d.value <= n);
        assert!(dstar_witness_ok(&d));
        // Z_n ≅ Z_h × Z_k for coprime h, k ≥ 2
        for h in 2..n {
            let k = n / h;
            if h * k == n && k >= 2 && num_integer::gcd(h, k) == 1 {
                assert!(d.value + 1 >= h.min(k), "n={n} h={h} k={k}");
            }
        }
    }
}
