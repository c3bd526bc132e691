//! Finite groups on dense element indices.
//!
//! Every group has elements `0..n`. Structured families use fixed index
//! conventions:
//!
//! * `Z_n`: element `i` is the residue `i`.
//! * `D_{2n}`: element `s^i r^j` (`i ∈ {0,1}`, `j ∈ Z_n`) has index `i·n + j`.
//! * products: `(a, b)` has index `a·|H| + b` (mixed radix over all parts).
//!
//! Multiplication tables are materialized up to order [`TABLE_LIMIT`]; larger
//! structured groups compute products from their tag.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_integer::gcd;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::set::ElementSet;

/// Largest order for which the full multiplication table is stored.
pub const TABLE_LIMIT: usize = 4096;
/// Largest order for which associativity is checked on every triple.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 256;
/// Largest order handled by the generic automorphism search.
pub const GENERIC_AUTOMORPHISM_LIMIT: usize = 12;
/// Largest order accepted by the isomorphism helper.
pub const ISOMORPHISM_LIMIT: usize = 16;
/// Hard cap on group order.
pub const MAX_ORDER: usize = 1 << 24;

const ASSOCIATIVITY_SAMPLES: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("group order {0} exceeds the supported maximum {MAX_ORDER}")]
    TooLarge(usize),
    #[error("multiplication table is not square")]
    NotSquare,
    #[error("multiplication table entry {0} out of range")]
    EntryOutOfRange(usize),
    #[error("multiplication table is not a Latin square (row or column {0})")]
    NotLatin(usize),
    #[error("multiplication table has no two-sided identity")]
    NoIdentity,
    #[error("multiplication is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("product needs at least one factor")]
    EmptyProduct,
    #[error("automorphism enumeration unsupported for {0}")]
    AutomorphismsUnsupported(String),
    #[error("isomorphism search unsupported above order {ISOMORPHISM_LIMIT}")]
    IsomorphismUnsupported,
    #[error("element {0} is not in a group of order {1}")]
    ElementOutOfRange(usize, usize),
    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),
}

/// Structural tag of a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupTag {
    Cyclic(usize),
    /// `D_{2n}`, carrying `n`; the order is `2n`.
    Dihedral(usize),
    /// Direct product of the listed parts (never nested).
    Product(Vec<FiniteGroup>),
    Table,
}

/// JSON group descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupDescriptor {
    Cyclic { n: usize },
    Dihedral { n: usize },
    Product { parts: Vec<GroupDescriptor> },
    Table { mul: Vec<Vec<usize>> },
}

struct GroupData {
    order: usize,
    identity: usize,
    tag: GroupTag,
    table: Option<Vec<u32>>,
    inverses: Vec<u32>,
    classes: OnceLock<ConjugacyClasses>,
}

struct ConjugacyClasses {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

/// An immutable finite group. Cloning is cheap.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

pub fn make_cyclic(n: usize) -> Result<FiniteGroup, GroupError> {
    FiniteGroup::build(n, GroupTag::Cyclic(n))
}

/// `D_{2n} = ⟨r, s | r^n, s^2, srs = r^{-1}⟩`, of order `2n`.
pub fn make_dihedral(n: usize) -> Result<FiniteGroup, GroupError> {
    if n == 0 {
        return Err(GroupError::ZeroOrder);
    }
    FiniteGroup::build(2 * n, GroupTag::Dihedral(n))
}

pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup, GroupError> {
    product_of(&[g.clone(), h.clone()])
}

/// Direct product of several groups; nested products are flattened.
pub fn product_of(groups: &[FiniteGroup]) -> Result<FiniteGroup, GroupError> {
    if groups.is_empty() {
        return Err(GroupError::EmptyProduct);
    }
    let mut parts = Vec::new();
    for g in groups {
        match g.tag() {
            GroupTag::Product(inner) => parts.extend(inner.iter().cloned()),
            _ => parts.push(g.clone()),
        }
    }
    let mut order: usize = 1;
    for p in &parts {
        order = order
            .checked_mul(p.order())
            .filter(|&o| o <= MAX_ORDER)
            .ok_or(GroupError::TooLarge(usize::MAX))?;
    }
    FiniteGroup::build(order, GroupTag::Product(parts))
}

/// Group from an explicit multiplication table (`mul[a][b] = a·b`).
pub fn from_table(mul: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    let n = mul.len();
    if n == 0 {
        return Err(GroupError::ZeroOrder);
    }
    if n > TABLE_LIMIT {
        return Err(GroupError::TooLarge(n));
    }
    let mut table = Vec::with_capacity(n * n);
    for row in mul {
        if row.len() != n {
            return Err(GroupError::NotSquare);
        }
        for &x in row {
            if x >= n {
                return Err(GroupError::EntryOutOfRange(x));
            }
            table.push(x as u32);
        }
    }
    check_latin(n, &table)?;
    let identity = (0..n)
        .find(|&e| (0..n).all(|g| table[e * n + g] as usize == g && table[g * n + e] as usize == g))
        .ok_or(GroupError::NoIdentity)?;
    let inverses = (0..n)
        .map(|g| {
            (0..n)
                .find(|&h| table[g * n + h] as usize == identity)
                .map(|h| h as u32)
                .ok_or(GroupError::NoIdentity)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let group = FiniteGroup(Arc::new(GroupData {
        order: n,
        identity,
        tag: GroupTag::Table,
        table: Some(table),
        inverses,
        classes: OnceLock::new(),
    }));
    group.check_axioms()?;
    Ok(group)
}

fn check_latin(n: usize, table: &[u32]) -> Result<(), GroupError> {
    let mut seen = vec![0usize; n];
    let mut stamp = 0;
    for a in 0..n {
        stamp += 1;
        for b in 0..n {
            let x = table[a * n + b] as usize;
            if seen[x] == stamp {
                return Err(GroupError::NotLatin(a));
            }
            seen[x] = stamp;
        }
        stamp += 1;
        for b in 0..n {
            let x = table[b * n + a] as usize;
            if seen[x] == stamp {
                return Err(GroupError::NotLatin(a));
            }
            seen[x] = stamp;
        }
    }
    Ok(())
}

impl FiniteGroup {
    fn build(order: usize, tag: GroupTag) -> Result<Self, GroupError> {
        if order == 0 {
            return Err(GroupError::ZeroOrder);
        }
        if order > MAX_ORDER {
            return Err(GroupError::TooLarge(order));
        }
        let mut data = GroupData {
            order,
            identity: 0,
            tag,
            table: None,
            inverses: Vec::new(),
            classes: OnceLock::new(),
        };
        data.inverses = (0..order)
            .map(|g| structured_inv(&data.tag, order, g) as u32)
            .collect();
        if order <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(order * order);
            for a in 0..order {
                for b in 0..order {
                    table.push(structured_mul(&data.tag, order, a, b) as u32);
                }
            }
            check_latin(order, &table)?;
            data.table = Some(table);
        }
        let group = FiniteGroup(Arc::new(data));
        group.check_axioms()?;
        Ok(group)
    }

    /// Identity, inverse and associativity laws; exhaustive up to
    /// [`EXHAUSTIVE_CHECK_LIMIT`], sampled above.
    fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order();
        let e = self.identity();
        for g in 0..n {
            if self.mul(e, g) != g || self.mul(g, e) != g {
                return Err(GroupError::NoIdentity);
            }
            if self.mul(g, self.inv(g)) != e || self.mul(self.inv(g), g) != e {
                return Err(GroupError::NoIdentity);
            }
        }
        if n <= EXHAUSTIVE_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return Err(GroupError::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = StdRng::seed_from_u64(n as u64);
            for _ in 0..ASSOCIATIVITY_SAMPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return Err(GroupError::NotAssociative(a, b, c));
                }
            }
        }
        Ok(())
    }

    pub fn from_descriptor(desc: &GroupDescriptor) -> Result<Self, GroupError> {
        match desc {
            GroupDescriptor::Cyclic { n } => make_cyclic(*n),
            GroupDescriptor::Dihedral { n } => make_dihedral(*n),
            GroupDescriptor::Product { parts } => {
                let parts = parts
                    .iter()
                    .map(FiniteGroup::from_descriptor)
                    .collect::<Result<Vec<_>, _>>()?;
                product_of(&parts)
            }
            GroupDescriptor::Table { mul } => from_table(mul),
        }
    }

    pub fn descriptor(&self) -> GroupDescriptor {
        match self.tag() {
            GroupTag::Cyclic(n) => GroupDescriptor::Cyclic { n: *n },
            GroupTag::Dihedral(n) => GroupDescriptor::Dihedral { n: *n },
            GroupTag::Product(parts) => GroupDescriptor::Product {
                parts: parts.iter().map(FiniteGroup::descriptor).collect(),
            },
            GroupTag::Table => {
                let n = self.order();
                GroupDescriptor::Table {
                    mul: (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect(),
                }
            }
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.0.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.0.identity
    }

    pub fn tag(&self) -> &GroupTag {
        &self.0.tag
    }

    /// `n` when this is `D_{2n}`.
    pub fn dihedral_n(&self) -> Option<usize> {
        match self.tag() {
            GroupTag::Dihedral(n) => Some(*n),
            _ => None,
        }
    }

    pub fn is_cyclic_tag(&self) -> bool {
        matches!(self.tag(), GroupTag::Cyclic(_))
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match &self.0.table {
            Some(t) => t[a * self.0.order + b] as usize,
            None => structured_mul(&self.0.tag, self.0.order, a, b),
        }
    }

    #[inline]
    pub fn inv(&self, g: usize) -> usize {
        self.0.inverses[g] as usize
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.identity(), |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let e = self.identity();
        let mut x = g;
        let mut k = 1;
        while x != e {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_involution(&self, g: usize) -> bool {
        g != self.identity() && self.inv(g) == g
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.order())
    }

    /// Set from indices; panics on out-of-range indices.
    pub fn set<I: IntoIterator<Item = usize>>(&self, elems: I) -> ElementSet {
        ElementSet::from_indices(self.order(), elems)
    }

    /// `G ∖ {e}`.
    pub fn non_identity(&self) -> ElementSet {
        let mut s = ElementSet::full(self.order());
        s.remove(self.identity());
        s
    }

    pub fn inverse_set(&self, x: &ElementSet) -> ElementSet {
        x.map(self.order(), |g| self.inv(g))
    }

    /// Closed under inverses.
    pub fn is_symmetric(&self, x: &ElementSet) -> bool {
        x.iter().all(|g| x.contains(self.inv(g)))
    }

    /// Union of conjugacy classes.
    pub fn is_class_closed(&self, x: &ElementSet) -> bool {
        self.first_class_violation(x).is_none()
    }

    /// An element of `x` whose conjugacy class leaves `x`.
    pub fn first_class_violation(&self, x: &ElementSet) -> Option<usize> {
        let cc = self.class_data();
        x.iter()
            .find(|&g| !cc.classes[cc.class_of[g]].iter().all(|&h| x.contains(h)))
    }

    /// `{g x g^{-1} : x ∈ X}`.
    pub fn conjugate_set(&self, g: usize, x: &ElementSet) -> ElementSet {
        x.map(self.order(), |y| self.conjugate(g, y))
    }

    /// The product set `XY` (without multiplicities).
    pub fn product_set(&self, x: &ElementSet, y: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for a in x {
            for b in y {
                out.insert(self.mul(a, b));
            }
        }
        out
    }

    /// `{g x : x ∈ X}`.
    pub fn left_translate(&self, g: usize, x: &ElementSet) -> ElementSet {
        x.map(self.order(), |y| self.mul(g, y))
    }

    /// `{x g : x ∈ X}`.
    pub fn right_translate(&self, x: &ElementSet, g: usize) -> ElementSet {
        x.map(self.order(), |y| self.mul(y, g))
    }

    /// Conjugacy classes, ordered by minimal element; each class ascending.
    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.class_data().classes
    }

    pub fn class_index(&self, g: usize) -> usize {
        self.class_data().class_of[g]
    }

    fn class_data(&self) -> &ConjugacyClasses {
        self.0.classes.get_or_init(|| {
            let n = self.order();
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for g in 0..n {
                if class_of[g] != usize::MAX {
                    continue;
                }
                let mut class: Vec<usize> = (0..n).map(|h| self.conjugate(h, g)).collect();
                class.sort_unstable();
                class.dedup();
                for &x in &class {
                    class_of[x] = classes.len();
                }
                classes.push(class);
            }
            ConjugacyClasses { classes, class_of }
        })
    }

    /// Symmetric building blocks of `G ∖ {e}`: each involution alone and each
    /// pair `{g, g^{-1}}`, ordered by smallest element.
    pub fn atoms(&self) -> Vec<Atom> {
        let e = self.identity();
        (0..self.order())
            .filter(|&g| g != e && g <= self.inv(g))
            .map(|g| {
                let h = self.inv(g);
                if h == g {
                    Atom::Single(g)
                } else {
                    Atom::Pair(g, h)
                }
            })
            .collect()
    }

    pub fn subgroup_generated(&self, x: &ElementSet) -> Subgroup {
        let mut elems = self.set([self.identity()]);
        let mut frontier = vec![self.identity()];
        let gens: Vec<usize> = x.iter().collect();
        while let Some(a) = frontier.pop() {
            for &g in &gens {
                for b in [self.mul(a, g), self.mul(a, self.inv(g))] {
                    if elems.insert(b) {
                        frontier.push(b);
                    }
                }
            }
        }
        Subgroup::from_elements(self, elems)
    }

    /// Every subgroup, in a deterministic order (by size, then elements).
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found: Vec<ElementSet> = vec![self.set([self.identity()])];
        let mut i = 0;
        while i < found.len() {
            let h = found[i].clone();
            for g in self.elements() {
                if h.contains(g) {
                    continue;
                }
                let mut gens = h.clone();
                gens.insert(g);
                let k = self.subgroup_generated(&gens).elements;
                if !found.contains(&k) {
                    found.push(k);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        found
            .into_iter()
            .map(|h| Subgroup::from_elements(self, h))
            .collect()
    }

    /// Greedy generating set: repeatedly add the smallest element outside the
    /// subgroup generated so far.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = self.set([self.identity()]);
        while span.len() < self.order() {
            let g = (0..self.order()).find(|&g| !span.contains(g)).unwrap();
            gens.push(g);
            span = self
                .subgroup_generated(&self.set(gens.iter().copied()))
                .elements;
        }
        gens
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.order() == other.order() && self.descriptor() == other.descriptor()
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tag() {
            GroupTag::Cyclic(n) => write!(f, "Z_{n}"),
            GroupTag::Dihedral(n) => write!(f, "D_{}", 2 * n),
            GroupTag::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            GroupTag::Table => write!(f, "Table({})", self.order()),
        }
    }
}

fn structured_mul(tag: &GroupTag, order: usize, a: usize, b: usize) -> usize {
    match tag {
        GroupTag::Cyclic(n) => (a + b) % n,
        GroupTag::Dihedral(n) => {
            let n = *n;
            let (i, j) = (a / n, a % n);
            let (i2, j2) = (b / n, b % n);
            let j = if i2 == 1 { (n - j) % n } else { j };
            ((i + i2) % 2) * n + (j + j2) % n
        }
        GroupTag::Product(parts) => {
            let mut out = 0;
            let mut radix = order;
            let (mut a, mut b) = (a, b);
            for p in parts {
                radix /= p.order();
                let (x, y) = (a / radix, b / radix);
                a %= radix;
                b %= radix;
                out += p.mul(x, y) * radix;
            }
            out
        }
        GroupTag::Table => unreachable!("table groups always store their table"),
    }
}

fn structured_inv(tag: &GroupTag, order: usize, g: usize) -> usize {
    match tag {
        GroupTag::Cyclic(n) => (n - g) % n,
        GroupTag::Dihedral(n) => {
            if g < *n {
                (n - g) % n
            } else {
                g
            }
        }
        GroupTag::Product(parts) => {
            let mut out = 0;
            let mut radix = order;
            let mut g = g;
            for p in parts {
                radix /= p.order();
                out += p.inv(g / radix) * radix;
                g %= radix;
            }
            out
        }
        GroupTag::Table => unreachable!("table groups compute inverses from the table"),
    }
}

/// Mixed-radix coordinates of a product-group element.
pub fn product_coordinates(parts: &[FiniteGroup], g: usize) -> Vec<usize> {
    let mut radix: usize = parts.iter().map(FiniteGroup::order).product();
    let mut g = g;
    parts
        .iter()
        .map(|p| {
            radix /= p.order();
            let c = g / radix;
            g %= radix;
            c
        })
        .collect()
}

/// Inverse of [`product_coordinates`].
pub fn product_index(parts: &[FiniteGroup], coords: &[usize]) -> usize {
    parts
        .iter()
        .zip(coords)
        .fold(0, |acc, (p, &c)| acc * p.order() + c)
}

/// Symmetric building block of identity-free symmetric sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Atom {
    Single(usize),
    Pair(usize, usize),
}

impl Atom {
    pub fn size(&self) -> usize {
        match self {
            Atom::Single(_) => 1,
            Atom::Pair(..) => 2,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Atom::Single(a) => (a, None),
            Atom::Pair(a, b) => (a, Some(b)),
        };
        std::iter::once(a).chain(b)
    }
}

/// A subgroup with its right-coset transversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: ElementSet,
    /// Minimal-index representative of each right coset `Hx`, ascending.
    pub right_coset_reps: Vec<usize>,
}

impl Subgroup {
    fn from_elements(g: &FiniteGroup, elements: ElementSet) -> Self {
        let mut covered = g.empty_set();
        let mut reps = Vec::new();
        for x in g.elements() {
            if covered.contains(x) {
                continue;
            }
            reps.push(x);
            for h in &elements {
                covered.insert(g.mul(h, x));
            }
        }
        Subgroup {
            elements,
            right_coset_reps: reps,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.right_coset_reps.len()
    }

    /// `Hx`.
    pub fn right_coset(&self, g: &FiniteGroup, x: usize) -> ElementSet {
        self.elements.map(g.order(), |h| g.mul(h, x))
    }

    /// `yH`.
    pub fn left_coset(&self, g: &FiniteGroup, y: usize) -> ElementSet {
        self.elements.map(g.order(), |h| g.mul(y, h))
    }

    pub fn is_normal(&self, g: &FiniteGroup) -> bool {
        g.elements()
            .all(|x| g.conjugate_set(x, &self.elements) == self.elements)
    }
}

/// A group automorphism stored as an index permutation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Automorphism {
    perm: Vec<usize>,
}

impl Automorphism {
    pub fn identity(n: usize) -> Self {
        Automorphism {
            perm: (0..n).collect(),
        }
    }

    /// Checks the homomorphism property on all pairs.
    pub fn from_permutation(g: &FiniteGroup, perm: Vec<usize>) -> Result<Self, GroupError> {
        let n = g.order();
        if perm.len() != n {
            return Err(GroupError::NotAutomorphism("wrong length".into()));
        }
        let mut seen = g.empty_set();
        for &p in &perm {
            if p >= n || !seen.insert(p) {
                return Err(GroupError::NotAutomorphism("not a permutation".into()));
            }
        }
        let a = Automorphism { perm };
        if let Some((x, y)) = a.homomorphism_violation(g) {
            return Err(GroupError::NotAutomorphism(format!(
                "fails on the pair ({x}, {y})"
            )));
        }
        Ok(a)
    }

    /// `x ↦ u·x` on `Z_n`.
    pub fn multiplier(n: usize, u: usize) -> Self {
        Automorphism {
            perm: (0..n).map(|x| (u * x) % n).collect(),
        }
    }

    /// `f_{u,v}` on `D_{2n}`: `r ↦ r^u`, `s ↦ s r^v`, i.e. `s^i r^j ↦ s^i r^{uj + iv}`.
    pub fn dihedral(n: usize, u: usize, v: usize) -> Self {
        Automorphism {
            perm: (0..2 * n)
                .map(|x| {
                    let (i, j) = (x / n, x % n);
                    i * n + (u * j + i * v) % n
                })
                .collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.perm[x]
    }

    pub fn apply_set(&self, x: &ElementSet) -> ElementSet {
        x.map(self.perm.len(), |y| self.perm[y])
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// First pair `(a, b)` with `φ(ab) ≠ φ(a)φ(b)`.
    pub fn homomorphism_violation(&self, g: &FiniteGroup) -> Option<(usize, usize)> {
        let n = g.order();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.apply(g.mul(a, b)) != g.mul(self.apply(a), self.apply(b)))
    }
}

/// Units of `Z_n`, ascending. `Z_1` has the single unit `0`.
pub fn units_mod(n: usize) -> Vec<usize> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|&u| gcd(u, n) == 1).collect()
}

/// `Aut(G)`, sorted by permutation.
///
/// Closed forms for cyclic groups and odd dihedral groups; a generator-image
/// backtracking search for any group of order at most
/// [`GENERIC_AUTOMORPHISM_LIMIT`].
pub fn automorphisms(g: &FiniteGroup) -> Result<Vec<Automorphism>, GroupError> {
    let mut out = match g.tag() {
        GroupTag::Cyclic(n) => units_mod(*n)
            .into_iter()
            .map(|u| Automorphism::multiplier(*n, u))
            .collect(),
        GroupTag::Dihedral(n) if n % 2 == 1 => {
            let mut v = Vec::new();
            for u in units_mod(*n) {
                for shift in 0..*n {
                    v.push(Automorphism::dihedral(*n, u, shift));
                }
            }
            v
        }
        _ if g.order() <= GENERIC_AUTOMORPHISM_LIMIT => isomorphism_search(g, g),
        _ => return Err(GroupError::AutomorphismsUnsupported(g.to_string())),
    };
    out.sort();
    Ok(out)
}

/// An isomorphism `g → h` as an index map, for orders up to
/// [`ISOMORPHISM_LIMIT`].
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Result<Option<Vec<usize>>, GroupError> {
    if g.order() > ISOMORPHISM_LIMIT || h.order() > ISOMORPHISM_LIMIT {
        return Err(GroupError::IsomorphismUnsupported);
    }
    if g.order() != h.order() {
        return Ok(None);
    }
    Ok(isomorphism_search(g, h).into_iter().next().map(|a| a.perm))
}

/// All isomorphisms `g → h`, by assigning images to a generating set and
/// extending along a spanning tree of the Cayley graph.
fn isomorphism_search(g: &FiniteGroup, h: &FiniteGroup) -> Vec<Automorphism> {
    let n = g.order();
    let gens = g.generators();
    // spanning tree: element -> (parent, generator index)
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut order = vec![g.identity()];
    let mut seen = g.set([g.identity()]);
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for (k, &gen) in gens.iter().enumerate() {
            let y = g.mul(x, gen);
            if seen.insert(y) {
                parent[y] = Some((x, k));
                order.push(y);
            }
        }
        i += 1;
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&gen| {
            let o = g.element_order(gen);
            h.elements().filter(|&y| h.element_order(y) == o).collect()
        })
        .collect();

    let mut results = Vec::new();
    let mut images = vec![0; gens.len()];
    fn rec(
        k: usize,
        images: &mut Vec<usize>,
        candidates: &[Vec<usize>],
        finish: &mut dyn FnMut(&[usize]),
    ) {
        if k == candidates.len() {
            finish(images);
            return;
        }
        for &c in &candidates[k] {
            images[k] = c;
            rec(k + 1, images, candidates, finish);
        }
    }
    let mut finish = |imgs: &[usize]| {
        let mut perm = vec![usize::MAX; n];
        perm[g.identity()] = h.identity();
        for &x in &order[1..] {
            let (p, k) = parent[x].unwrap();
            perm[x] = h.mul(perm[p], imgs[k]);
        }
        let mut hit = h.empty_set();
        if !perm.iter().all(|&y| hit.insert(y)) {
            return;
        }
        let hom = (0..n).all(|a| (0..n).all(|b| perm[g.mul(a, b)] == h.mul(perm[a], perm[b])));
        if hom {
            results.push(Automorphism { perm });
        }
    };
    rec(0, &mut images, &candidates, &mut finish);
    results
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, i: usize, j: usize) -> usize {
        i * n + j
    }

    #[test]
    fn cyclic_basics() {
        let z1 = make_cyclic(1).unwrap();
        assert_eq!(z1.order(), 1);
        assert_eq!(z1.identity(), 0);
        let z5 = make_cyclic(5).unwrap();
        assert_eq!(z5.mul(2, 4), 1);
        assert_eq!(z5.inv(2), 3);
        let z10 = make_cyclic(10).unwrap();
        assert_eq!(z10.inv(5), 5);
        let involutions: Vec<_> = z10.elements().filter(|&g| z10.is_involution(g)).collect();
        assert_eq!(involutions, vec![5]);
        assert_eq!(make_cyclic(0).unwrap_err(), GroupError::ZeroOrder);
    }

    #[test]
    fn dihedral_relations() {
        let d10 = make_dihedral(5).unwrap();
        assert_eq!(d10.order(), 10);
        // r·s = s r^{-1}
        assert_eq!(d10.mul(d(5, 0, 1), d(5, 1, 0)), d(5, 1, 4));
        let d8 = make_dihedral(4).unwrap();
        // r·(sr) = s
        assert_eq!(d8.mul(d(4, 0, 1), d(4, 1, 1)), d(4, 1, 0));
        for j in 0..5 {
            assert_eq!(d10.inv(d(5, 1, j)), d(5, 1, j));
        }
        assert_eq!(make_dihedral(0).unwrap_err(), GroupError::ZeroOrder);
    }

    #[test]
    fn dihedral_rotation_reflection_closure() {
        for n in 1..=12 {
            let g = make_dihedral(n).unwrap();
            for a in g.elements() {
                for b in g.elements() {
                    let refl = |x: usize| x >= n;
                    assert_eq!(refl(g.mul(a, b)), refl(a) ^ refl(b));
                }
            }
        }
    }

    #[test]
    fn products() {
        let z2 = make_cyclic(2).unwrap();
        let klein = direct_product(&z2, &z2).unwrap();
        assert_eq!(klein.order(), 4);
        assert_eq!(klein.elements().filter(|&g| klein.is_involution(g)).count(), 3);

        let z3 = make_cyclic(3).unwrap();
        let z5 = make_cyclic(5).unwrap();
        let p = direct_product(&z3, &z5).unwrap();
        let parts = match p.tag() {
            GroupTag::Product(parts) => parts.clone(),
            _ => unreachable!(),
        };
        let a = product_index(&parts, &[1, 2]);
        let b = product_index(&parts, &[2, 4]);
        assert_eq!(product_coordinates(&parts, p.mul(a, b)), vec![0, 1]);

        // nested products flatten
        let z2xz2xz2 = direct_product(&klein, &z2).unwrap();
        assert!(matches!(z2xz2xz2.tag(), GroupTag::Product(p) if p.len() == 3));
    }

    #[test]
    fn crt_isomorphism_small() {
        let z2 = make_cyclic(2).unwrap();
        let z5 = make_cyclic(5).unwrap();
        let z10 = make_cyclic(10).unwrap();
        let p = direct_product(&z2, &z5).unwrap();
        assert!(find_isomorphism(&p, &z10).unwrap().is_some());
        let z4 = make_cyclic(4).unwrap();
        let klein = direct_product(&z2, &z2).unwrap();
        assert!(find_isomorphism(&klein, &z4).unwrap().is_none());
        assert!(find_isomorphism(&make_dihedral(3).unwrap(), &make_cyclic(6).unwrap())
            .unwrap()
            .is_none());
    }

    #[test]
    fn table_groups() {
        let z3 = make_cyclic(3).unwrap();
        let g = FiniteGroup::from_descriptor(&z3.descriptor()).unwrap();
        assert_eq!(g, z3);
        let desc = GroupDescriptor::Table {
            mul: vec![vec![1, 0], vec![0, 1]],
        };
        let g = FiniteGroup::from_descriptor(&desc).unwrap();
        assert_eq!(g.identity(), 1);
        assert_eq!(g.inv(0), 0);

        let bad = vec![vec![0, 1], vec![0, 1]];
        assert!(matches!(from_table(&bad), Err(GroupError::NotLatin(_))));
        // Latin square with identity but not associative (order-5 loop)
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            from_table(&loop5),
            Err(GroupError::NotAssociative(..))
        ));
    }

    #[test]
    fn descriptor_json() {
        let desc: GroupDescriptor = serde_json::from_str(
            r#"{"kind":"product","parts":[{"kind":"cyclic","n":2},{"kind":"dihedral","n":3}]}"#,
        )
        .unwrap();
        let g = FiniteGroup::from_descriptor(&desc).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.to_string(), "Z_2 x D_6");
        assert_eq!(
            serde_json::to_string(&GroupDescriptor::Cyclic { n: 10 }).unwrap(),
            r#"{"kind":"cyclic","n":10}"#
        );
    }

    #[test]
    fn conjugacy_classes_examples() {
        let z7 = make_cyclic(7).unwrap();
        assert!(z7.conjugacy_classes().iter().all(|c| c.len() == 1));

        let d10 = make_dihedral(5).unwrap();
        let classes = d10.conjugacy_classes();
        assert_eq!(
            classes,
            &[vec![0], vec![1, 4], vec![2, 3], vec![5, 6, 7, 8, 9]]
        );

        let d8 = make_dihedral(4).unwrap();
        let classes = d8.conjugacy_classes();
        assert!(classes.contains(&vec![2]));
        assert!(classes.contains(&vec![d(4, 1, 0), d(4, 1, 2)]));
        assert!(classes.contains(&vec![d(4, 1, 1), d(4, 1, 3)]));
    }

    #[test]
    fn class_sizes_divide_order() {
        for g in small_groups() {
            let classes = g.conjugacy_classes();
            let total: usize = classes.iter().map(Vec::len).sum();
            assert_eq!(total, g.order());
            for c in classes {
                assert_eq!(g.order() % c.len(), 0, "{g}");
            }
        }
    }

    #[test]
    fn symmetric_and_class_closed() {
        let z5 = make_cyclic(5).unwrap();
        assert!(z5.is_symmetric(&z5.set([1, 4])));
        let d10 = make_dihedral(5).unwrap();
        assert!(!d10.is_symmetric(&d10.set([1])));
        assert!(d10.is_class_closed(&d10.set([1, 4])));
        assert_eq!(d10.first_class_violation(&d10.set([1, 4, 5])), Some(5));
    }

    #[test]
    fn generated_subgroups() {
        let z10 = make_cyclic(10).unwrap();
        let h = z10.subgroup_generated(&z10.set([2]));
        assert_eq!(h.elements.to_vec(), vec![0, 2, 4, 6, 8]);
        assert_eq!(h.right_coset_reps, vec![0, 1]);
        let d8 = make_dihedral(4).unwrap();
        let h = d8.subgroup_generated(&d8.set([d(4, 1, 0), d(4, 1, 1)]));
        assert_eq!(h.order(), 8);
        let triv = d8.subgroup_generated(&d8.empty_set());
        assert_eq!(triv.elements.to_vec(), vec![0]);
        assert_eq!(triv.index(), 8);
    }

    #[test]
    fn subgroup_enumeration() {
        // S_3 has 6 subgroups, D_8 has 10, Z_12 has 6.
        assert_eq!(make_dihedral(3).unwrap().all_subgroups().len(), 6);
        assert_eq!(make_dihedral(4).unwrap().all_subgroups().len(), 10);
        assert_eq!(make_cyclic(12).unwrap().all_subgroups().len(), 6);
        let d6 = make_dihedral(3).unwrap();
        let normal = d6
            .all_subgroups()
            .iter()
            .filter(|h| h.is_normal(&d6))
            .count();
        assert_eq!(normal, 3);
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&make_cyclic(5).unwrap()).unwrap().len(), 4);
        assert_eq!(automorphisms(&make_dihedral(5).unwrap()).unwrap().len(), 20);
        let z2 = make_cyclic(2).unwrap();
        let klein = direct_product(&z2, &z2).unwrap();
        assert_eq!(automorphisms(&klein).unwrap().len(), 6);
        assert_eq!(automorphisms(&make_dihedral(4).unwrap()).unwrap().len(), 8);
        assert_eq!(automorphisms(&make_dihedral(6).unwrap()).unwrap().len(), 12);
        assert!(matches!(
            automorphisms(&make_dihedral(8).unwrap()),
            Err(GroupError::AutomorphismsUnsupported(_))
        ));
    }

    #[test]
    fn automorphisms_are_homomorphisms() {
        for g in small_groups() {
            let Ok(auts) = automorphisms(&g) else { continue };
            assert!(auts[0].is_identity());
            for a in &auts {
                assert_eq!(a.homomorphism_violation(&g), None, "{g}");
                assert_eq!(a.apply(g.identity()), g.identity());
            }
        }
        // odd dihedral closed form agrees with the generic search
        let d6 = make_dihedral(3).unwrap();
        assert_eq!(automorphisms(&d6).unwrap(), {
            let mut v = isomorphism_search(&d6, &d6);
            v.sort();
            v
        });
    }

    #[test]
    fn apply_and_conjugate() {
        let z5 = make_cyclic(5).unwrap();
        let id = Automorphism::identity(5);
        let x = z5.set([1, 4]);
        assert_eq!(id.apply_set(&x), x);
        assert_eq!(Automorphism::multiplier(5, 2).apply_set(&x).to_vec(), vec![2, 3]);
        let d10 = make_dihedral(5).unwrap();
        let s = d(5, 1, 0);
        assert_eq!(d10.conjugate_set(s, &d10.set([1, 4])).to_vec(), vec![1, 4]);
        assert!(Automorphism::from_permutation(&z5, vec![0, 2, 1, 3, 4]).is_err());
    }

    #[test]
    fn axioms_hold_for_constructed_groups() {
        for g in small_groups() {
            let n = g.order();
            for a in 0..n {
                assert_eq!(g.mul(g.identity(), a), a);
                assert_eq!(g.mul(a, g.inv(a)), g.identity());
            }
        }
    }

    #[test]
    fn large_groups_compute_on_the_fly() {
        let g = make_cyclic(5000).unwrap();
        assert_eq!(g.mul(4999, 2), 1);
        let d = make_dihedral(2500).unwrap();
        assert_eq!(d.mul(1, 2500), 2500 + 2499);
    }

    fn small_groups() -> Vec<FiniteGroup> {
        let mut v = Vec::new();
        for n in 1..=16 {
            v.push(make_cyclic(n).unwrap());
            v.push(make_dihedral(n).unwrap());
        }
        let z2 = make_cyclic(2).unwrap();
        let z4 = make_cyclic(4).unwrap();
        v.push(direct_product(&z2, &z2).unwrap());
        v.push(direct_product(&z2, &z4).unwrap());
        v.push(direct_product(&z2, &make_dihedral(3).unwrap()).unwrap());
        v
    }
}
