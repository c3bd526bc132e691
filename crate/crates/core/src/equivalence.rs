//! Equivalence of triples under `Aut(G)` applied componentwise.

use std::collections::BTreeMap;

use crate::factor::FactorTriple;
use crate::group::{automorphisms, Automorphism, GroupError};
use crate::set::ElementSet;

pub type SetTriple = (ElementSet, ElementSet, ElementSet);

/// Lexicographically least image `(φ(S), φ(T), φ(U))` over `auts`.
pub fn canonical_form(t: &FactorTriple, auts: &[Automorphism]) -> SetTriple {
    let (s, tt, u) = t.sets();
    auts.iter()
        .map(|a| (a.apply_set(s), a.apply_set(tt), a.apply_set(u)))
        .min()
        .unwrap_or_else(|| (s.clone(), tt.clone(), u.clone()))
}

/// Whether some automorphism in `auts` maps `a` onto `b` componentwise.
pub fn are_equivalent_under(a: &FactorTriple, b: &FactorTriple, auts: &[Automorphism]) -> bool {
    a.group() == b.group() && canonical_form(a, auts) == canonical_form(b, auts)
}

pub fn are_equivalent(a: &FactorTriple, b: &FactorTriple) -> Result<bool, GroupError> {
    if a.group() != b.group() {
        return Ok(false);
    }
    let auts = automorphisms(a.group())?;
    Ok(are_equivalent_under(a, b, &auts))
}

/// Partition of `triples` into `Aut(G)`-orbits.
///
/// Classes are ordered by canonical representative and each class keeps
/// its members in input order. All triples must share one group.
pub fn equivalence_classes(triples: &[FactorTriple]) -> Result<Vec<Vec<FactorTriple>>, GroupError> {
    let Some(first) = triples.first() else {
        return Ok(Vec::new());
    };
    let auts = automorphisms(first.group())?;
    Ok(classes_under(triples, &auts))
}

pub fn classes_under(triples: &[FactorTriple], auts: &[Automorphism]) -> Vec<Vec<FactorTriple>> {
    let mut classes: BTreeMap<SetTriple, Vec<FactorTriple>> = BTreeMap::new();
    for t in triples {
        classes.entry(canonical_form(t, auts)).or_default().push(t.clone());
    }
    classes.into_values().collect()
}
