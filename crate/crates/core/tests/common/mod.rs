#![allow(dead_code)]

use std::collections::BTreeSet;

use cayley_factor::group::{direct_product, make_cyclic, make_dihedral, FiniteGroup};
use cayley_factor::set::ElementSet;

/// Factorability decided from the raw multiplication only: symmetry and
/// identity exclusion checked element by element, then every product
/// `st` counted.
pub fn oracle_factorable(g: &FiniteGroup, s: &[usize], t: &[usize], u: &[usize]) -> bool {
    let e = g.identity();
    let symmetric = |x: &[usize]| x.iter().all(|&a| x.contains(&g.inv(a)));
    if [s, t, u].iter().any(|x| x.contains(&e) || !symmetric(x)) {
        return false;
    }
    let mut counts = vec![0u32; g.order()];
    for &a in s {
        for &b in t {
            counts[g.mul(a, b)] += 1;
        }
    }
    (0..g.order()).all(|x| counts[x] == u32::from(u.contains(&x)))
}

/// Same decision for `Z_n` using plain modular arithmetic.
pub fn oracle_cyclic(n: usize, s: &[usize], t: &[usize], u: &[usize]) -> bool {
    let neg = |a: usize| (n - a) % n;
    let symmetric = |x: &[usize]| x.iter().all(|&a| x.contains(&neg(a)));
    if [s, t, u].iter().any(|x| x.contains(&0) || !symmetric(x)) {
        return false;
    }
    let mut counts = vec![0u32; n];
    for &a in s {
        for &b in t {
            counts[(a + b) % n] += 1;
        }
    }
    (0..n).all(|x| counts[x] == u32::from(u.contains(&x)))
}

/// Atoms of `G ∖ {e}` found by pairing each element with its inverse.
pub fn oracle_atoms(g: &FiniteGroup) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for x in 0..g.order() {
        if x == g.identity() || seen[x] {
            continue;
        }
        let y = g.inv(x);
        seen[x] = true;
        seen[y] = true;
        out.push(if x == y { vec![x] } else { vec![x, y] });
    }
    out
}

/// Every symmetric identity-free subset with at most `max` elements.
pub fn symmetric_sets(g: &FiniteGroup, max: usize) -> Vec<ElementSet> {
    let atoms = oracle_atoms(g);
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << atoms.len()) {
        let elems: Vec<usize> = (0..atoms.len())
            .filter(|&k| mask >> k & 1 == 1)
            .flat_map(|k| atoms[k].iter().copied())
            .collect();
        if elems.len() <= max {
            out.push(g.set(elems));
        }
    }
    out.sort();
    out
}

/// Symmetric identity-free unions of conjugacy classes.
pub fn class_closed_symmetric_sets(g: &FiniteGroup) -> Vec<ElementSet> {
    let classes: Vec<Vec<usize>> = g
        .conjugacy_classes()
        .iter()
        .filter(|c| !c.contains(&g.identity()))
        .cloned()
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << classes.len()) {
        let x = g.set((0..classes.len()).filter(|&k| mask >> k & 1 == 1).flat_map(|k| classes[k].clone()));
        if g.is_symmetric(&x) {
            out.push(x);
        }
    }
    out
}

/// All factorable `(S, T, U)` with nonempty `S`, `T` of size at most
/// `max`, by trying every pair of symmetric sets.
pub fn oracle_triples(g: &FiniteGroup, max: usize) -> BTreeSet<(ElementSet, ElementSet, ElementSet)> {
    let sets: Vec<ElementSet> = symmetric_sets(g, max).into_iter().filter(|x| !x.is_empty()).collect();
    let mut out = BTreeSet::new();
    for s in &sets {
        for t in &sets {
            let u = g.product_set(s, t);
            if oracle_factorable(g, &s.to_vec(), &t.to_vec(), &u.to_vec()) {
                out.insert((s.clone(), t.clone(), u));
            }
        }
    }
    out
}

pub fn cyclic(n: usize) -> FiniteGroup {
    make_cyclic(n).unwrap()
}

pub fn dihedral(n: usize) -> FiniteGroup {
    make_dihedral(n).unwrap()
}

pub fn product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    direct_product(a, b).unwrap()
}

/// Every group the library supports with order in `lo..=hi`: cyclic,
/// dihedral and products of two nontrivial cyclic or dihedral factors.
pub fn supported_groups(lo: usize, hi: usize) -> Vec<FiniteGroup> {
    let mut out = Vec::new();
    for n in lo..=hi {
        out.push(cyclic(n));
        if n % 2 == 0 && n >= 4 {
            out.push(dihedral(n / 2));
        }
    }
    for a in 2..=hi {
        for b in a..=hi / a {
            if a * b >= lo {
                out.push(product(&cyclic(a), &cyclic(b)));
            }
        }
    }
    for a in 2..=hi / 6 {
        for m in 3..=hi / (2 * a) {
            if 2 * m * a >= lo {
                out.push(product(&cyclic(a), &dihedral(m)));
            }
        }
    }
    out
}
