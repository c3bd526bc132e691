//! Verification of Cayley-graph factorizations `A(G;U) = A(G;S)·A(G;T)`.
//!
//! Three routes decide the same predicate for symmetric identity-free sets:
//! representation counts (`N_{S,T}(g)` equals the indicator of `U`), exact
//! adjacency-matrix multiplication, and, on cyclic groups, mask polynomials
//! (see [`crate::cyclic`]). Everything here is exact integer arithmetic.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::group::{Automorphism, FiniteGroup, Subgroup};
use crate::set::ElementSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("triple is not verified: {0}")]
    NotVerified(Violation),
    #[error("element sets do not belong to the group")]
    WrongGroup,
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("coset count mismatch at y = {y}: |U ∩ Hy| = {lhs}, coset sum = {rhs}")]
    CosetMismatch { y: usize, lhs: usize, rhs: usize },
}

/// Which member of a triple a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Role {
    S,
    T,
    U,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::S => "S",
            Role::T => "T",
            Role::U => "U",
        })
    }
}

/// First reason a triple fails to be factorable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongUniverse(Role),
    NotSymmetric { set: Role, element: usize },
    ContainsIdentity(Role),
    /// Some `s·t` equals the identity.
    IdentityInProduct,
    /// `element` has `count ≥ 2` representations `s·t`.
    RepeatedProduct { element: usize, count: u32 },
    /// `element ∈ U` has no representation.
    MissingProduct { element: usize },
    /// `element ∉ U` has a representation.
    UnexpectedProduct { element: usize },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::WrongUniverse(_) => "wrong universe",
            Violation::NotSymmetric { .. } => "not symmetric",
            Violation::ContainsIdentity(_) => "contains identity",
            Violation::IdentityInProduct => "identity in ST",
            Violation::RepeatedProduct { .. } => "repeated product",
            Violation::MissingProduct { .. } => "missing from ST",
            Violation::UnexpectedProduct { .. } => "outside U",
        }
    }

    /// Element the violation refers to, if any.
    pub fn element(&self) -> Option<usize> {
        match *self {
            Violation::NotSymmetric { element, .. }
            | Violation::RepeatedProduct { element, .. }
            | Violation::MissingProduct { element }
            | Violation::UnexpectedProduct { element } => Some(element),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongUniverse(r) => write!(f, "{r} is over a different universe"),
            Violation::NotSymmetric { set, element } => {
                write!(f, "{set} not symmetric: inverse of element {element} missing")
            }
            Violation::ContainsIdentity(r) => write!(f, "{r} contains the identity"),
            Violation::IdentityInProduct => f.write_str("identity in ST"),
            Violation::RepeatedProduct { element, count } => {
                write!(f, "element {element} has {count} representations st")
            }
            Violation::MissingProduct { element } => {
                write!(f, "element {element} of U is not in ST")
            }
            Violation::UnexpectedProduct { element } => {
                write!(f, "element {element} is in ST but not in U")
            }
        }
    }
}

/// Outcome of [`verify_triple`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub verified: bool,
    pub violation: Option<Violation>,
}

impl VerificationReport {
    fn ok() -> Self {
        VerificationReport {
            verified: true,
            violation: None,
        }
    }

    fn fail(v: Violation) -> Self {
        VerificationReport {
            verified: false,
            violation: Some(v),
        }
    }
}

/// The function `g ↦ N_{S,T}(g) = |{(s,t) ∈ S×T : st = g}|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepCountVector {
    counts: Vec<u32>,
}

impl RepCountVector {
    pub fn from_counts(counts: Vec<u32>) -> Self {
        RepCountVector { counts }
    }

    pub fn get(&self, g: usize) -> u32 {
        self.counts[g]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn max(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Support of the vector.
    pub fn support(&self) -> ElementSet {
        ElementSet::from_indices(
            self.counts.len(),
            self.counts
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(g, _)| g),
        )
    }

    pub fn is_indicator_of(&self, x: &ElementSet) -> bool {
        x.universe() == self.counts.len()
            && self
                .counts
                .iter()
                .enumerate()
                .all(|(g, &c)| c == u32::from(x.contains(g)))
    }
}

/// Exact representation counts by a double loop over `S×T`.
pub fn rep_counts(g: &FiniteGroup, s: &ElementSet, t: &ElementSet) -> RepCountVector {
    let mut counts = vec![0u32; g.order()];
    for a in s {
        for b in t {
            counts[g.mul(a, b)] += 1;
        }
    }
    RepCountVector { counts }
}

/// First failure of symmetry or identity exclusion, or a universe mismatch.
pub fn hypothesis_violation(
    g: &FiniteGroup,
    s: &ElementSet,
    t: &ElementSet,
    u: &ElementSet,
) -> Option<Violation> {
    let roles = [(Role::S, s), (Role::T, t), (Role::U, u)];
    for (role, x) in roles {
        if x.universe() != g.order() {
            return Some(Violation::WrongUniverse(role));
        }
    }
    for (role, x) in roles {
        if let Some(element) = x.iter().find(|&y| !x.contains(g.inv(y))) {
            return Some(Violation::NotSymmetric { set: role, element });
        }
    }
    for (role, x) in roles {
        if x.contains(g.identity()) {
            return Some(Violation::ContainsIdentity(role));
        }
    }
    None
}

/// Decides whether `(S, T, U)` is factorable in `G`.
///
/// Checks symmetry and identity exclusion of all three sets, then compares
/// `N_{S,T}` with the indicator of `U`, reporting the first failure.
pub fn verify_triple(
    g: &FiniteGroup,
    s: &ElementSet,
    t: &ElementSet,
    u: &ElementSet,
) -> VerificationReport {
    if let Some(v) = hypothesis_violation(g, s, t, u) {
        return VerificationReport::fail(v);
    }
    let counts = rep_counts(g, s, t);
    let e = g.identity();
    if counts.get(e) > 0 {
        return VerificationReport::fail(Violation::IdentityInProduct);
    }
    for x in g.elements() {
        let c = counts.get(x);
        let v = match (c, u.contains(x)) {
            (0, true) => Some(Violation::MissingProduct { element: x }),
            (1, false) => Some(Violation::UnexpectedProduct { element: x }),
            (c, _) if c > 1 => Some(Violation::RepeatedProduct { element: x, count: c }),
            _ => None,
        };
        if let Some(v) = v {
            return VerificationReport::fail(v);
        }
    }
    assert_eq!(u.len(), s.len() * t.len(), "size law failed on a verified triple");
    assert!(s.is_disjoint(t), "S and T intersect in a verified triple");
    VerificationReport::ok()
}

/// `ST` when every product is represented at most once and the identity is
/// not represented. Assumes `S` and `T` are symmetric and identity-free; the
/// returned set need not be symmetric in non-abelian groups.
pub fn product_if_unique(g: &FiniteGroup, s: &ElementSet, t: &ElementSet) -> Option<ElementSet> {
    let counts = rep_counts(g, s, t);
    if counts.get(g.identity()) > 0 || counts.max() > 1 {
        return None;
    }
    Some(counts.support())
}

/// `|G|×|G|` matrix of nonnegative integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<u32>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Exact product; panics on overflow.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let cell = &mut out.data[i * n + j];
                    *cell = cell
                        .checked_add(a.checked_mul(other.get(k, j)).expect("overflow"))
                        .expect("overflow");
                }
            }
        }
        out
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks(self.n.max(1))
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

/// `A(G;X)` with entry `(i, j) = 1` iff `i^{-1} j ∈ X`.
pub fn adjacency(g: &FiniteGroup, x: &ElementSet) -> IntMatrix {
    let n = g.order();
    let mut m = IntMatrix::zeros(n);
    for i in 0..n {
        let ii = g.inv(i);
        for j in 0..n {
            if x.contains(g.mul(ii, j)) {
                m.set(i, j, 1);
            }
        }
    }
    m
}

/// Factorability via explicit matrix multiplication: the same hypotheses as
/// [`verify_triple`] plus `A(G;S)·A(G;T) = A(G;U)`.
pub fn matrix_cross_check(g: &FiniteGroup, s: &ElementSet, t: &ElementSet, u: &ElementSet) -> bool {
    if hypothesis_violation(g, s, t, u).is_some() {
        return false;
    }
    adjacency(g, s).mul(&adjacency(g, t)) == adjacency(g, u)
}

/// A triple `(S, T, U)` together with its verification status.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorTriple {
    group: FiniteGroup,
    s: ElementSet,
    t: ElementSet,
    u: ElementSet,
    verified: bool,
}

impl FactorTriple {
    /// Builds the triple and records whether it verifies.
    pub fn new(group: &FiniteGroup, s: ElementSet, t: ElementSet, u: ElementSet) -> Self {
        let verified = verify_triple(group, &s, &t, &u).verified;
        FactorTriple {
            group: group.clone(),
            s,
            t,
            u,
            verified,
        }
    }

    /// Builds the triple, failing unless it verifies.
    pub fn verified(
        group: &FiniteGroup,
        s: ElementSet,
        t: ElementSet,
        u: ElementSet,
    ) -> Result<Self, FactorError> {
        let report = verify_triple(group, &s, &t, &u);
        match report.violation {
            Some(v) => Err(FactorError::NotVerified(v)),
            None => Ok(FactorTriple {
                group: group.clone(),
                s,
                t,
                u,
                verified: true,
            }),
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn s(&self) -> &ElementSet {
        &self.s
    }

    pub fn t(&self) -> &ElementSet {
        &self.t
    }

    pub fn u(&self) -> &ElementSet {
        &self.u
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn report(&self) -> VerificationReport {
        verify_triple(&self.group, &self.s, &self.t, &self.u)
    }

    pub fn sets(&self) -> (&ElementSet, &ElementSet, &ElementSet) {
        (&self.s, &self.t, &self.u)
    }

    /// Canonical listing order: `(|S|, S, T, U)`.
    pub fn sort_key(&self) -> (usize, &ElementSet, &ElementSet, &ElementSet) {
        (self.s.len(), &self.s, &self.t, &self.u)
    }

    pub fn into_sets(self) -> (ElementSet, ElementSet, ElementSet) {
        (self.s, self.t, self.u)
    }
}

/// Relabeling applied componentwise by [`transform_triple`].
#[derive(Clone, Copy, Debug)]
pub enum Transform<'a> {
    Automorphism(&'a Automorphism),
    /// `X ↦ gXg^{-1}`.
    Conjugate(usize),
}

impl Transform<'_> {
    pub fn apply(&self, g: &FiniteGroup, x: &ElementSet) -> ElementSet {
        match *self {
            Transform::Automorphism(a) => a.apply_set(x),
            Transform::Conjugate(c) => g.conjugate_set(c, x),
        }
    }
}

/// Image of a verified triple under an automorphism or a conjugation. The
/// image is re-verified rather than assumed.
pub fn transform_triple(t: &FactorTriple, map: Transform<'_>) -> Result<FactorTriple, FactorError> {
    let g = t.group();
    if !t.is_verified() {
        return Err(FactorError::NotVerified(t.report().violation.unwrap()));
    }
    let image = FactorTriple::new(g, map.apply(g, &t.s), map.apply(g, &t.t), map.apply(g, &t.u));
    if !image.is_verified() {
        return Err(FactorError::TheoremViolation(format!(
            "image under {map:?} does not verify: {}",
            image.report().violation.unwrap()
        )));
    }
    Ok(image)
}

/// Coset-counting identity for a verified triple and a subgroup `H`: for
/// every right coset `Hy`,
///
/// `|U ∩ Hy| = Σ_{Hx ∈ H\G} |S ∩ Hx| · |T ∩ x^{-1}Hy|`.
///
/// The set `x^{-1}Hy` does not depend on the representative `x` of `Hx`.
/// Grouping by left cosets `yH` instead only works when `H` is normal.
pub fn transversal_identity(
    g: &FiniteGroup,
    h: &Subgroup,
    s: &ElementSet,
    t: &ElementSet,
    u: &ElementSet,
) -> Result<(), FactorError> {
    let report = verify_triple(g, s, t, u);
    if let Some(v) = report.violation {
        return Err(FactorError::NotVerified(v));
    }
    let s_counts: Vec<usize> = h
        .right_coset_reps
        .iter()
        .map(|&x| h.right_coset(g, x).intersection(s).len())
        .collect();
    for &y in &h.right_coset_reps {
        let hy = h.right_coset(g, y);
        let lhs = hy.intersection(u).len();
        let rhs: usize = h
            .right_coset_reps
            .iter()
            .zip(&s_counts)
            .filter(|(_, &c)| c > 0)
            .map(|(&x, &c)| c * g.left_translate(g.inv(x), &hy).intersection(t).len())
            .sum();
        if lhs != rhs {
            return Err(FactorError::CosetMismatch { y, lhs, rhs });
        }
    }
    Ok(())
}

pub fn involution_count(g: &FiniteGroup, x: &ElementSet) -> usize {
    x.iter().filter(|&y| g.is_involution(y)).count()
}

/// For `|G| ≡ 2 (mod 4)`: whether `U` holds an even number of involutions,
/// which every factorable triple satisfies. `None` for other orders.
pub fn parity_check(t: &FactorTriple) -> Option<bool> {
    let g = t.group();
    (g.order() % 4 == 2).then(|| involution_count(g, t.u()).is_multiple_of(2))
}

/// `ST = G ∖ {e}` with unique representations.
pub fn is_near_factorization(g: &FiniteGroup, s: &ElementSet, t: &ElementSet) -> bool {
    match product_if_unique(g, s, t) {
        Some(u) => g.order() > 1 && u == g.non_identity(),
        None => false,
    }
}
