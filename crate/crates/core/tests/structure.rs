mod common;

use cayley_factor::dihedral::{is_strongly_symmetric, pullback_predicate, ur_um_decomposition, PecherCorrespondence};
use cayley_factor::equivalence::are_equivalent;
use cayley_factor::factor::FactorTriple;
use cayley_factor::group::{automorphisms, find_isomorphism, FiniteGroup};
use common::*;

fn every_group_upto(max: usize) -> Vec<FiniteGroup> {
    supported_groups(1, max)
}

#[test]
fn group_laws_hold_exhaustively() {
    for g in every_group_upto(64) {
        let (n, e) = (g.order(), g.identity());
        for a in 0..n {
            assert_eq!(g.mul(e, a), a);
            assert_eq!(g.mul(a, e), a);
            assert_eq!(g.mul(a, g.inv(a)), e);
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for b in 0..n {
                row[g.mul(a, b)] = true;
                col[g.mul(b, a)] = true;
            }
            assert!(row.iter().chain(&col).all(|&x| x), "{g}: not a Latin square");
        }
        if n <= 32 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        assert_eq!(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c)), "{g}");
                    }
                }
            }
        }
    }
}

#[test]
fn conjugacy_classes_partition_the_group() {
    for g in every_group_upto(40) {
        let mut seen = vec![0u32; g.order()];
        for class in g.conjugacy_classes() {
            assert_eq!(g.order() % class.len(), 0, "{g}");
            for &x in class {
                seen[x] += 1;
                for y in g.elements() {
                    assert!(class.contains(&g.conjugate(y, x)), "{g}");
                }
            }
        }
        assert!(seen.iter().all(|&c| c == 1), "{g}");
        let mins: Vec<usize> = g.conjugacy_classes().iter().map(|c| *c.iter().min().unwrap()).collect();
        assert!(mins.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn automorphisms_are_homomorphisms() {
    let mut groups: Vec<FiniteGroup> = (1..=30).map(cyclic).collect();
    groups.extend([3, 5, 7, 9, 11].map(dihedral));
    groups.extend(every_group_upto(12));
    for g in groups {
        let auts = automorphisms(&g).unwrap();
        assert!(auts.iter().any(|a| a.is_identity()));
        for a in &auts {
            assert_eq!(a.homomorphism_violation(&g), None, "{g}");
        }
        let mut perms: Vec<&[usize]> = auts.iter().map(|a| a.permutation()).collect();
        perms.dedup();
        assert_eq!(perms.len(), auts.len(), "{g}: repeated automorphism");
    }
    assert_eq!(automorphisms(&dihedral(7)).unwrap().len(), 42);
    assert!(automorphisms(&dihedral(8)).is_err());
}

#[test]
fn rotations_and_reflections_multiply_by_parity() {
    for n in 1..=20 {
        let g = dihedral(n);
        for a in 0..2 * n {
            for b in 0..2 * n {
                let expected = (a >= n) != (b >= n);
                assert_eq!(g.mul(a, b) >= n, expected, "D_{}", 2 * n);
            }
        }
    }
}

#[test]
fn small_products_of_coprime_cyclics_are_cyclic() {
    for (a, b) in [(2, 3), (2, 5), (3, 4), (3, 5)] {
        let p = product(&cyclic(a), &cyclic(b));
        assert!(find_isomorphism(&p, &cyclic(a * b)).unwrap().is_some());
    }
    assert!(find_isomorphism(&product(&cyclic(2), &cyclic(2)), &cyclic(4)).unwrap().is_none());
}

#[test]
fn ur_um_identities_hold_for_dihedral_triples() {
    for n in 3..=6 {
        let g = dihedral(n);
        for (s, t, u) in oracle_triples(&g, 3) {
            let triple = FactorTriple::new(&g, s, t, u);
            let d = ur_um_decomposition(&triple).unwrap();
            let rotations = g.set(0..n);
            let (ur, um) = (triple.u().intersection(&rotations), triple.u().difference(&rotations));
            assert_eq!(d.rr.union(&d.mm), ur);
            assert!(d.rr.is_disjoint(&d.mm));
            assert_eq!(d.rm.union(&d.mr), um);
            assert!(d.rm.is_disjoint(&d.mr));
        }
    }
}

/// `|U| = |S||T|` is even in `D_{2n}` for odd `n`, so `|S|` and `|T|`
/// are never both odd and the gcd predicate never holds.
#[test]
fn gcd_predicate_is_never_met() {
    for n in [3, 5] {
        let g = dihedral(n);
        for (s, t, u) in oracle_triples(&g, 2 * n) {
            assert!(s.len() % 2 == 0 || t.len() % 2 == 0);
            assert!(!pullback_predicate(n, &FactorTriple::new(&g, s, t, u)));
        }
    }
}

/// Strongly symmetric verified triples of `D_{2n}`, pulled back along every
/// automorphism image that is again strongly symmetric, give triples of
/// `Z_{2n}` related by a multiplier.
#[test]
fn pullbacks_of_equivalent_triples_are_equivalent() {
    let mut checked = 0;
    for (n, max) in [(3, 6), (5, 10), (7, 4)] {
        let p = PecherCorrespondence::new(n).unwrap();
        let g = p.dihedral().clone();
        let auts = automorphisms(&g).unwrap();
        for (s, t, u) in oracle_triples(&g, max) {
            if ![&s, &t, &u].iter().all(|x| is_strongly_symmetric(n, x)) {
                continue;
            }
            let triple = FactorTriple::new(&g, s.clone(), t.clone(), u.clone());
            let back = p.transfer_backward(&triple).unwrap();
            for f in &auts {
                let image = FactorTriple::new(&g, f.apply_set(&s), f.apply_set(&t), f.apply_set(&u));
                let (a, b, c) = image.sets();
                if ![a, b, c].iter().all(|x| is_strongly_symmetric(n, x)) {
                    continue;
                }
                let image_back = p.transfer_backward(&image).unwrap();
                assert!(are_equivalent(&back, &image_back).unwrap(), "n={n} {triple:?} {f:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 1000);
}
