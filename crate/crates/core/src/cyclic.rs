//! Cyclic and abelian specializations: convolution, Sidon pairs, mask
//! polynomials, CRT composition, the standard circulant families, antipode
//! augmentation and the exact value of `d*(Z_n)`.
//!
//! Sets are [`ElementSet`]s over the universe `0..n` of residues.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_integer::{gcd, Integer};
use rayon::prelude::*;
use thiserror::Error;

use crate::factor::{rep_counts, verify_triple, FactorTriple, RepCountVector, Violation};
use crate::group::{make_cyclic, Automorphism, GroupError};
use crate::set::ElementSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CyclicError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("sets must be subsets of Z_{expected}, got universe {got}")]
    Universe { expected: usize, got: usize },
    #[error("{0} must be nonempty")]
    EmptySet(&'static str),
    #[error("n = {0} must be even")]
    OddModulus(usize),
    #[error("modulus must be at least {min}, got {n}")]
    ModulusTooSmall { n: usize, min: usize },
    #[error("antipode {0} already lies in S0")]
    AntipodeInS(usize),
    #[error("antipode {0} lies in T")]
    AntipodeInT(usize),
    #[error("{g} is not a unit modulo {n}")]
    NotAUnit { g: usize, n: usize },
    #[error("side condition failed at element {element}: {reason}")]
    SideCondition { element: usize, reason: String },
    #[error("triple does not verify: {0}")]
    NotVerified(Violation),
    #[error("base triple must live on a cyclic group")]
    NotCyclic,
    #[error("expected {expected} CRT components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("component {index} lives on Z_{got}, expected Z_{expected}")]
    ComponentModulus { index: usize, expected: usize, got: usize },
    #[error("component {index} has an empty set or a set containing 0")]
    DegenerateComponent { index: usize },
    #[error("search budget of {0} nodes exceeded")]
    BudgetExceeded(u64),
}

fn check_universe(n: usize, sets: &[&ElementSet]) -> Result<(), CyclicError> {
    match sets.iter().find(|x| x.universe() != n) {
        Some(x) => Err(CyclicError::Universe {
            expected: n,
            got: x.universe(),
        }),
        None => Ok(()),
    }
}

/// `(1_S * 1_T)(u) = Σ_x 1_S(x)·1_T(u − x)`, by the naive loop.
pub fn convolution(n: usize, s: &ElementSet, t: &ElementSet) -> RepCountVector {
    let counts = (0..n)
        .map(|u| s.iter().filter(|&x| t.contains((u + n - x) % n)).count() as u32)
        .collect();
    RepCountVector::from_counts(counts)
}

/// `X − X` in `Z_n`.
pub fn difference_set(n: usize, x: &ElementSet) -> ElementSet {
    let mut out = ElementSet::empty(n);
    for a in x {
        for b in x {
            out.insert((a + n - b) % n);
        }
    }
    out
}

/// Whether `(S − S) ∩ (T − T) = {0}`.
pub fn sidon_pair(n: usize, s: &ElementSet, t: &ElementSet) -> Result<bool, CyclicError> {
    check_universe(n, &[s, t])?;
    if s.is_empty() {
        return Err(CyclicError::EmptySet("S"));
    }
    if t.is_empty() {
        return Err(CyclicError::EmptySet("T"));
    }
    let common = difference_set(n, s).intersection(&difference_set(n, t));
    Ok(common.len() == 1)
}

/// Element of `Z[X]/(X^n − 1)` with nonnegative coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MaskPolynomial {
    n: usize,
    coeffs: Vec<u64>,
}

impl MaskPolynomial {
    /// `F_X(X) = Σ_{x ∈ X} X^x`.
    pub fn of_set(n: usize, x: &ElementSet) -> Self {
        let mut coeffs = vec![0; n];
        for a in x {
            coeffs[a % n] = 1;
        }
        MaskPolynomial { n, coeffs }
    }

    pub fn modulus(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Product reduced modulo `X^n − 1`; `None` on coefficient overflow.
    pub fn checked_mul(&self, other: &Self) -> Option<Self> {
        assert_eq!(self.n, other.n, "mask polynomials over different moduli");
        let n = self.n;
        let mut coeffs = vec![0u64; n];
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            for (j, &b) in other.coeffs.iter().enumerate().filter(|(_, &b)| b != 0) {
                let k = (i + j) % n;
                coeffs[k] = coeffs[k].checked_add(a.checked_mul(b)?)?;
            }
        }
        Some(MaskPolynomial { n, coeffs })
    }

    /// The set whose mask this is, when all coefficients are 0 or 1.
    pub fn as_set(&self) -> Option<ElementSet> {
        if self.coeffs.iter().any(|&c| c > 1) {
            return None;
        }
        Some(ElementSet::from_indices(
            self.n,
            (0..self.n).filter(|&k| self.coeffs[k] == 1),
        ))
    }
}

impl fmt::Display for MaskPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c != 1 {
                write!(f, "{c}")?;
            }
            write!(f, "X^{k}")?;
        }
        Ok(())
    }
}

/// Factorability in `Z_n` via `F_U ≡ F_S·F_T (mod X^n − 1)`. Sets that are
/// not symmetric or contain `0` are rejected, as in [`verify_triple`].
pub fn verify_via_mask(n: usize, s: &ElementSet, t: &ElementSet, u: &ElementSet) -> bool {
    let ok = |x: &ElementSet| {
        x.universe() == n && !x.contains(0) && x.iter().all(|a| x.contains((n - a) % n))
    };
    if !(ok(s) && ok(t) && ok(u)) {
        return false;
    }
    MaskPolynomial::of_set(n, s)
        .checked_mul(&MaskPolynomial::of_set(n, t))
        .is_some_and(|p| p == MaskPolynomial::of_set(n, u))
}

/// The isomorphism `Z_n → ∏ Z_{p_i^{e_i}}`, `x ↦ (x mod p_i^{e_i})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtIso {
    n: usize,
    moduli: Vec<usize>,
    /// `e_i ≡ 1 (mod m_i)`, `e_i ≡ 0 (mod m_j)` for `j ≠ i`.
    idempotents: Vec<usize>,
}

impl CrtIso {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Prime-power moduli in increasing order of the prime.
    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    pub fn forward(&self, x: usize) -> Vec<usize> {
        self.moduli.iter().map(|&m| x % m).collect()
    }

    pub fn inverse(&self, coords: &[usize]) -> usize {
        assert_eq!(coords.len(), self.moduli.len());
        coords
            .iter()
            .zip(&self.idempotents)
            .fold(0u128, |acc, (&c, &e)| {
                (acc + c as u128 * e as u128) % self.n as u128
            }) as usize
    }

    /// `φ^{-1}(X_1 × … × X_k)`.
    pub fn compose_sets(&self, parts: &[ElementSet]) -> ElementSet {
        assert_eq!(parts.len(), self.moduli.len());
        let mut out = ElementSet::empty(self.n);
        let lists: Vec<Vec<usize>> = parts.iter().map(|p| p.to_vec()).collect();
        if lists.iter().any(|l| l.is_empty()) {
            return out;
        }
        let mut idx = vec![0usize; lists.len()];
        loop {
            let coords: Vec<usize> = idx.iter().zip(&lists).map(|(&i, l)| l[i]).collect();
            out.insert(self.inverse(&coords));
            let mut k = 0;
            loop {
                if k == idx.len() {
                    return out;
                }
                idx[k] += 1;
                if idx[k] < lists[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    /// Coordinate projections of `X`.
    pub fn project(&self, x: &ElementSet) -> Vec<ElementSet> {
        self.moduli
            .iter()
            .map(|&m| ElementSet::from_indices(m, x.iter().map(|a| a % m)))
            .collect()
    }
}

/// Prime-power factorization `[(p, p^e)]` by trial division.
fn prime_powers(mut n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

pub fn crt_split(n: usize) -> Result<CrtIso, CyclicError> {
    if n < 2 {
        return Err(CyclicError::ModulusTooSmall { n, min: 2 });
    }
    let moduli: Vec<usize> = prime_powers(n).into_iter().map(|(_, q)| q).collect();
    let idempotents = moduli
        .iter()
        .map(|&m| {
            let rest = n / m;
            let inv = (rest as i64).extended_gcd(&(m as i64)).x.rem_euclid(m as i64) as usize;
            (rest as u128 * inv as u128 % n as u128) as usize
        })
        .collect();
    Ok(CrtIso {
        n,
        moduli,
        idempotents,
    })
}

/// Triple in `Z_n` of product form built from one triple per prime-power
/// component, in the order of [`CrtIso::moduli`].
///
/// The result is verified exactly when every component is. Components with
/// an empty set or a set containing `0` are rejected: for those the product
/// form can verify while a component does not.
pub fn crt_compose(n: usize, components: &[FactorTriple]) -> Result<FactorTriple, CyclicError> {
    let iso = crt_split(n)?;
    if components.len() != iso.moduli.len() {
        return Err(CyclicError::ComponentCount {
            expected: iso.moduli.len(),
            got: components.len(),
        });
    }
    for (index, (c, &m)) in components.iter().zip(&iso.moduli).enumerate() {
        if !c.group().is_cyclic_tag() || c.group().order() != m {
            return Err(CyclicError::ComponentModulus {
                index,
                expected: m,
                got: c.group().order(),
            });
        }
        let (s, t, u) = c.sets();
        if [s, t, u].iter().any(|x| x.is_empty() || x.contains(0)) {
            return Err(CyclicError::DegenerateComponent { index });
        }
    }
    let pick = |f: fn(&FactorTriple) -> &ElementSet| {
        let parts: Vec<ElementSet> = components.iter().map(|c| f(c).clone()).collect();
        iso.compose_sets(&parts)
    };
    let g = make_cyclic(n)?;
    Ok(FactorTriple::new(
        &g,
        pick(FactorTriple::s),
        pick(FactorTriple::t),
        pick(FactorTriple::u),
    ))
}

/// Component sets `X_i` with `X = φ^{-1}(∏ X_i)`, or `None` when `X` is
/// not of product form. The empty set is not treated as a product.
pub fn product_form_components(n: usize, x: &ElementSet) -> Option<Vec<ElementSet>> {
    let iso = crt_split(n).ok()?;
    if x.universe() != n || x.is_empty() {
        return None;
    }
    let parts = iso.project(x);
    let size: usize = parts.iter().map(ElementSet::len).product();
    (size == x.len()).then_some(parts)
}

/// Adds the antipode `a = n/2` to `S0`, when `a + T` misses `U0`.
///
/// Returns `Ok(None)` when `(a + T) ∩ U0 ≠ ∅`.
pub fn antipode_augment(
    n: usize,
    s0: &ElementSet,
    t: &ElementSet,
    u0: &ElementSet,
) -> Result<Option<FactorTriple>, CyclicError> {
    if n % 2 == 1 {
        return Err(CyclicError::OddModulus(n));
    }
    check_universe(n, &[s0, t, u0])?;
    let g = make_cyclic(n)?;
    if let Some(v) = verify_triple(&g, s0, t, u0).violation {
        return Err(CyclicError::NotVerified(v));
    }
    let a = n / 2;
    if s0.contains(a) {
        return Err(CyclicError::AntipodeInS(a));
    }
    if t.contains(a) {
        return Err(CyclicError::AntipodeInT(a));
    }
    let shifted = g.left_translate(a, t);
    if !shifted.is_disjoint(u0) {
        return Ok(None);
    }
    let mut s = s0.clone();
    s.insert(a);
    FactorTriple::verified(&g, s, t.clone(), u0.union(&shifted))
        .map(Some)
        .map_err(|e| match e {
            crate::factor::FactorError::NotVerified(v) => CyclicError::NotVerified(v),
            other => unreachable!("{other}"),
        })
}

/// Rows of the table of standard circulant factorizations.
#[derive(Clone, Debug)]
pub enum Table1Row {
    /// `(gS, gT, gU)` for a unit `g` and a verified base triple on `Z_n`.
    Multiplier { g: usize, base: FactorTriple },
    /// `({n/2}, U − n/2, U)` for symmetric `U ⊆ Z_n ∖ {0, n/2}`.
    HalfShift { n: usize, u: ElementSet },
    /// `({±d}, {±2d}, {±d, ±3d})` for `ord(d) ≥ 5`.
    PmD { n: usize, d: usize },
    /// `({±i}, {±j}, {±(i ± j)})` over `i ∈ I`, `j ∈ J`.
    IndexSets { n: usize, i: Vec<usize>, j: Vec<usize> },
}

fn side(element: usize, reason: impl Into<String>) -> CyclicError {
    CyclicError::SideCondition {
        element,
        reason: reason.into(),
    }
}

fn pm(n: usize, xs: impl IntoIterator<Item = usize>) -> ElementSet {
    let mut out = ElementSet::empty(n);
    for x in xs {
        out.insert(x % n);
        out.insert((n - x % n) % n);
    }
    out
}

/// Builds the row's triple after checking its side condition, then
/// verifies it.
pub fn table1_family(row: &Table1Row) -> Result<FactorTriple, CyclicError> {
    let (g, s, t, u) = match row {
        Table1Row::Multiplier { g: k, base } => {
            let g = base.group().clone();
            if !g.is_cyclic_tag() {
                return Err(CyclicError::NotCyclic);
            }
            if let Some(v) = base.report().violation {
                return Err(CyclicError::NotVerified(v));
            }
            let n = g.order();
            if gcd(*k, n) != 1 {
                return Err(CyclicError::NotAUnit { g: *k, n });
            }
            let m = Automorphism::multiplier(n, k % n);
            let (s, t, u) = base.sets();
            (g, m.apply_set(s), m.apply_set(t), m.apply_set(u))
        }
        Table1Row::HalfShift { n, u } => {
            let n = *n;
            if n % 2 == 1 {
                return Err(CyclicError::OddModulus(n));
            }
            check_universe(n, &[u])?;
            let a = n / 2;
            if let Some(x) = u.iter().find(|&x| x == 0 || x == a) {
                return Err(side(x, "U must avoid 0 and n/2"));
            }
            if let Some(x) = u.iter().find(|&x| !u.contains((n - x) % n)) {
                return Err(side(x, "U must be symmetric"));
            }
            let g = make_cyclic(n)?;
            let t = g.left_translate(a, u);
            (g.clone(), g.set([a]), t, u.clone())
        }
        Table1Row::PmD { n, d } => {
            let (n, d) = (*n, *d % *n);
            let ord = n / gcd(n, d);
            if ord < 5 {
                return Err(side(d, format!("ord(d) = {ord} is below 5")));
            }
            let g = make_cyclic(n)?;
            (g, pm(n, [d]), pm(n, [2 * d]), pm(n, [d, 3 * d]))
        }
        Table1Row::IndexSets { n, i, j } => {
            let n = *n;
            let bound = (n.saturating_sub(1)) / 2;
            if let Some(&x) = i.iter().chain(j).find(|&&x| x == 0 || x > bound) {
                return Err(side(x, format!("indices must lie in 1..={bound}")));
            }
            let mut counts = vec![0usize; n];
            for &a in i {
                for &b in j {
                    for v in [a + b, n + a - b, n + b - a, 2 * n - a - b] {
                        counts[v % n] += 1;
                    }
                }
            }
            if counts[0] > 0 {
                return Err(side(0, "the multiset ±(i ± j) contains 0"));
            }
            if n % 2 == 0 && counts[n / 2] > 0 {
                return Err(side(n / 2, "the multiset ±(i ± j) contains n/2"));
            }
            if let Some(v) = (0..n).find(|&v| counts[v] > 1) {
                return Err(side(v, "the multiset ±(i ± j) repeats this value"));
            }
            let g = make_cyclic(n)?;
            let u = ElementSet::from_indices(n, (0..n).filter(|&v| counts[v] == 1));
            (g, pm(n, i.iter().copied()), pm(n, j.iter().copied()), u)
        }
    };
    // Standing assumption for every row: (S − S) ∩ (T − T) = {0}.
    let n = g.order();
    if let Some(x) = difference_set(n, &s)
        .intersection(&difference_set(n, &t))
        .iter()
        .find(|&x| x != 0)
    {
        return Err(side(x, "(S - S) and (T - T) share this nonzero difference"));
    }
    let report = verify_triple(&g, &s, &t, &u);
    match report.violation {
        Some(v) => Err(CyclicError::NotVerified(v)),
        None => Ok(FactorTriple::new(&g, s, t, u)),
    }
}

/// Result of [`dstar`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DStar {
    pub n: usize,
    pub value: usize,
    pub s: ElementSet,
    pub t: ElementSet,
    pub nodes: u64,
}

/// Symmetric atoms of `Z_n ∖ {0}`: `{x, −x}` for `x < n/2`, and `{n/2}`.
fn cyclic_atoms(n: usize) -> Vec<Vec<usize>> {
    (1..=n / 2)
        .map(|x| if 2 * x == n { vec![x] } else { vec![x, n - x] })
        .collect()
}

struct DStarSearch<'a> {
    n: usize,
    atoms: &'a [Vec<usize>],
    nodes: &'a AtomicU64,
    budget: u64,
    aborted: &'a AtomicBool,
}

impl DStarSearch<'_> {
    fn tick(&self) -> bool {
        let used = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if used > self.budget {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    /// Extends `s` (atoms from `next` on) to size `d`, then looks for `T`.
    fn search_s(&self, d: usize, next: usize, s: &mut Vec<usize>) -> Option<(Vec<usize>, Vec<usize>)> {
        if !self.tick() {
            return None;
        }
        if s.len() == d {
            let mut counts = vec![0u8; self.n];
            let mut t = Vec::new();
            return self.search_t(d, 0, s, &mut t, &mut counts).map(|t| (s.clone(), t));
        }
        for k in next..self.atoms.len() {
            let atom = &self.atoms[k];
            if s.len() + atom.len() > d {
                continue;
            }
            s.extend(atom);
            if let Some(found) = self.search_s(d, k + 1, s) {
                return Some(found);
            }
            s.truncate(s.len() - atom.len());
        }
        None
    }

    fn search_t(
        &self,
        d: usize,
        next: usize,
        s: &[usize],
        t: &mut Vec<usize>,
        counts: &mut [u8],
    ) -> Option<Vec<usize>> {
        if !self.tick() {
            return None;
        }
        if t.len() == d {
            return Some(t.clone());
        }
        for k in next..self.atoms.len() {
            let atom = &self.atoms[k];
            if t.len() + atom.len() > d {
                continue;
            }
            let mut added = Vec::new();
            let mut clash = false;
            'outer: for &b in atom {
                for &a in s {
                    let c = (a + b) % self.n;
                    if counts[c] > 0 {
                        clash = true;
                        break 'outer;
                    }
                    counts[c] = 1;
                    added.push(c);
                }
            }
            if !clash {
                t.extend(atom);
                if let Some(found) = self.search_t(d, k + 1, s, t, counts) {
                    return Some(found);
                }
                t.truncate(t.len() - atom.len());
            }
            for c in added {
                counts[c] = 0;
            }
        }
        None
    }
}

/// Exact `d*(Z_n)`: the largest `d` with symmetric `S, T ⊆ Z_n ∖ {0}`,
/// `|S| = |T| = d` and every sum `s + t` represented at most once.
///
/// Sizes are tried downward from `⌊√n⌋`. For each size the search is split
/// by the smallest atom of `S`; the witness comes from the first split that
/// has one, so the answer does not depend on the thread count.
pub fn dstar(n: usize, budget: Option<u64>) -> Result<DStar, CyclicError> {
    if n < 3 {
        return Err(CyclicError::ModulusTooSmall { n, min: 3 });
    }
    let atoms = cyclic_atoms(n);
    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let budget = budget.unwrap_or(u64::MAX);
    let search = DStarSearch {
        n,
        atoms: &atoms,
        nodes: &nodes,
        budget,
        aborted: &aborted,
    };
    for d in (1..=n.isqrt()).rev() {
        let found: Vec<Option<(Vec<usize>, Vec<usize>)>> = (0..atoms.len())
            .into_par_iter()
            .map(|k| {
                let atom = &atoms[k];
                if atom.len() > d {
                    return None;
                }
                let mut s = atom.clone();
                search.search_s(d, k + 1, &mut s)
            })
            .collect();
        if aborted.load(Ordering::Relaxed) {
            return Err(CyclicError::BudgetExceeded(budget));
        }
        if let Some((s, t)) = found.into_iter().flatten().next() {
            let s = ElementSet::from_indices(n, s);
            let t = ElementSet::from_indices(n, t);
            assert!(d * d <= n);
            return Ok(DStar {
                n,
                value: d,
                s,
                t,
                nodes: nodes.load(Ordering::Relaxed),
            });
        }
    }
    Ok(DStar {
        n,
        value: 0,
        s: ElementSet::empty(n),
        t: ElementSet::empty(n),
        nodes: nodes.load(Ordering::Relaxed),
    })
}

/// Checks that a [`DStar`] witness has the claimed sizes and unique sums.
pub fn dstar_witness_ok(w: &DStar) -> bool {
    let Ok(g) = make_cyclic(w.n) else {
        return false;
    };
    let sym = |x: &ElementSet| !x.contains(0) && g.is_symmetric(x);
    sym(&w.s)
        && sym(&w.t)
        && w.s.len() == w.value
        && w.t.len() == w.value
        && rep_counts(&g, &w.s, &w.t).max() <= 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn convolution_examples() {
        assert_eq!(convolution(5, &set(5, &[1, 4]), &set(5, &[2, 3])).as_slice(), &[0, 1, 1, 1, 1]);
        assert_eq!(convolution(5, &set(5, &[]), &set(5, &[2, 3])).as_slice(), &[0; 5]);
        let c = convolution(8, &set(8, &[1, 7]), &set(8, &[2, 6]));
        assert!(c.is_indicator_of(&set(8, &[1, 3, 5, 7])));
    }

    #[test]
    fn sidon_examples() {
        assert!(sidon_pair(5, &set(5, &[1, 4]), &set(5, &[2, 3])).unwrap());
        assert!(!sidon_pair(5, &set(5, &[1, 2]), &set(5, &[1, 2])).unwrap());
        for a in 0..7 {
            for b in 0..7 {
                assert!(sidon_pair(7, &set(7, &[a]), &set(7, &[b])).unwrap());
            }
        }
        assert_eq!(
            sidon_pair(5, &set(5, &[]), &set(5, &[1])),
            Err(CyclicError::EmptySet("S"))
        );
    }

    #[test]
    fn mask_examples() {
        let p = MaskPolynomial::of_set(5, &set(5, &[1, 4]))
            .checked_mul(&MaskPolynomial::of_set(5, &set(5, &[2, 3])))
            .unwrap();
        assert_eq!(p.to_string(), "X^1 + X^2 + X^3 + X^4");
        assert_eq!(MaskPolynomial::of_set(5, &set(5, &[])).to_string(), "0");
        assert!(MaskPolynomial::of_set(5, &set(5, &[])).is_zero());
        let q = MaskPolynomial::of_set(8, &set(8, &[1, 7]))
            .checked_mul(&MaskPolynomial::of_set(8, &set(8, &[2, 6])))
            .unwrap();
        assert_eq!(q.to_string(), "X^1 + X^3 + X^5 + X^7");
        let sq = MaskPolynomial::of_set(5, &set(5, &[1, 4]))
            .checked_mul(&MaskPolynomial::of_set(5, &set(5, &[1, 4])))
            .unwrap();
        assert_eq!(sq.to_string(), "2X^0 + X^2 + X^3");
        assert_eq!(sq.as_set(), None);
        assert!(verify_via_mask(8, &set(8, &[1, 7]), &set(8, &[2, 6]), &set(8, &[1, 3, 5, 7])));
        assert!(!verify_via_mask(8, &set(8, &[1]), &set(8, &[2, 6]), &set(8, &[3, 7])));
    }

    #[test]
    fn crt_roundtrip() {
        for n in 2..200 {
            let iso = crt_split(n).unwrap();
            assert_eq!(iso.moduli().iter().product::<usize>(), n);
            for x in 0..n {
                assert_eq!(iso.inverse(&iso.forward(x)), x);
            }
        }
        assert_eq!(crt_split(20).unwrap().moduli(), &[4, 5]);
        assert!(crt_split(1).is_err());
    }

    #[test]
    fn crt_examples() {
        let z4 = make_cyclic(4).unwrap();
        let z5 = make_cyclic(5).unwrap();
        let z7 = make_cyclic(7).unwrap();
        let a = FactorTriple::new(&z4, z4.set([2]), z4.set([1, 3]), z4.set([1, 3]));
        let b = FactorTriple::new(&z5, z5.set([1, 4]), z5.set([2, 3]), z5.set([1, 2, 3, 4]));
        assert!(a.is_verified() && b.is_verified());
        let c = crt_compose(20, &[a.clone(), b.clone()]).unwrap();
        assert!(c.is_verified());
        assert_eq!((c.s().len(), c.t().len(), c.u().len()), (2, 4, 8));

        let d = FactorTriple::new(&z7, z7.set([1, 6]), z7.set([2, 5]), z7.set([1, 3, 4, 6]));
        assert!(d.is_verified());
        let e = crt_compose(35, &[b.clone(), d]).unwrap();
        assert!(e.is_verified());
        assert_eq!(e.u().len(), 16);

        let x = crt_split(20).unwrap().compose_sets(&[z4.set([2]), z5.set([1, 4])]);
        let parts = product_form_components(20, &x).unwrap();
        assert_eq!(parts, vec![z4.set([2]), z5.set([1, 4])]);
        assert_eq!(product_form_components(20, &set(20, &[1, 2])), None);

        assert!(matches!(
            crt_compose(20, std::slice::from_ref(&a)),
            Err(CyclicError::ComponentCount { expected: 2, got: 1 })
        ));
        assert!(matches!(
            crt_compose(20, &[b, a]),
            Err(CyclicError::ComponentModulus { index: 0, .. })
        ));
    }

    #[test]
    fn crt_rejects_components_containing_zero() {
        let z4 = make_cyclic(4).unwrap();
        let z5 = make_cyclic(5).unwrap();
        let bad = FactorTriple::new(&z4, z4.set([0]), z4.set([2]), z4.set([2]));
        let good = FactorTriple::new(&z5, z5.set([1, 4]), z5.set([2, 3]), z5.set([1, 2, 3, 4]));
        assert!(matches!(
            crt_compose(20, &[bad, good]),
            Err(CyclicError::DegenerateComponent { index: 0 })
        ));
    }

    #[test]
    fn antipode_examples() {
        let t = antipode_augment(8, &set(8, &[1, 7]), &set(8, &[2, 6]), &set(8, &[1, 3, 5, 7]))
            .unwrap()
            .unwrap();
        assert_eq!(t.s().to_vec(), vec![1, 4, 7]);
        assert_eq!(t.u().to_vec(), vec![1, 2, 3, 5, 6, 7]);
        assert!(t.is_verified());

        assert_eq!(
            antipode_augment(16, &set(16, &[6, 10]), &set(16, &[1, 15]), &set(16, &[5, 7, 9, 11])),
            Ok(None)
        );
        assert_eq!(
            antipode_augment(6, &set(6, &[3]), &set(6, &[1, 5]), &set(6, &[2, 4])),
            Err(CyclicError::AntipodeInS(3))
        );
        assert_eq!(
            antipode_augment(6, &set(6, &[1, 5]), &set(6, &[3]), &set(6, &[2, 4])),
            Err(CyclicError::AntipodeInT(3))
        );
        assert_eq!(
            antipode_augment(5, &set(5, &[1, 4]), &set(5, &[2, 3]), &set(5, &[1, 2, 3, 4])),
            Err(CyclicError::OddModulus(5))
        );
        assert!(matches!(
            antipode_augment(8, &set(8, &[1, 7]), &set(8, &[1, 7]), &set(8, &[2, 6])),
            Err(CyclicError::NotVerified(_))
        ));
    }

    #[test]
    fn table1_examples() {
        let t = table1_family(&Table1Row::HalfShift { n: 10, u: set(10, &[1, 9]) }).unwrap();
        assert_eq!(t.s().to_vec(), vec![5]);
        assert_eq!(t.t().to_vec(), vec![4, 6]);
        assert_eq!(t.u().to_vec(), vec![1, 9]);

        let t = table1_family(&Table1Row::PmD { n: 11, d: 2 }).unwrap();
        assert_eq!(t.s().to_vec(), vec![2, 9]);
        assert_eq!(t.t().to_vec(), vec![4, 7]);
        assert_eq!(t.u().to_vec(), vec![2, 5, 6, 9]);

        let t = table1_family(&Table1Row::IndexSets { n: 12, i: vec![1], j: vec![3] }).unwrap();
        assert_eq!(t.s().to_vec(), vec![1, 11]);
        assert_eq!(t.t().to_vec(), vec![3, 9]);
        assert_eq!(t.u().to_vec(), vec![2, 4, 8, 10]);

        let m = table1_family(&Table1Row::Multiplier { g: 5, base: t.clone() }).unwrap();
        assert_eq!(m.s().to_vec(), vec![5, 7]);
        assert!(matches!(
            table1_family(&Table1Row::Multiplier { g: 2, base: t }),
            Err(CyclicError::NotAUnit { g: 2, n: 12 })
        ));
    }

    #[test]
    fn table1_side_conditions() {
        assert!(matches!(
            table1_family(&Table1Row::PmD { n: 8, d: 2 }),
            Err(CyclicError::SideCondition { element: 2, .. })
        ));
        // ord(d) = 6: 2d = -4d is a common difference
        assert!(matches!(
            table1_family(&Table1Row::PmD { n: 6, d: 1 }),
            Err(CyclicError::SideCondition { element: 2, .. })
        ));
        assert!(matches!(
            table1_family(&Table1Row::HalfShift { n: 10, u: set(10, &[5]) }),
            Err(CyclicError::SideCondition { element: 5, .. })
        ));
        assert!(matches!(
            table1_family(&Table1Row::HalfShift { n: 10, u: set(10, &[1]) }),
            Err(CyclicError::SideCondition { element: 1, .. })
        ));
        assert!(matches!(
            table1_family(&Table1Row::IndexSets { n: 12, i: vec![1], j: vec![5] }),
            Err(CyclicError::SideCondition { element: 6, .. })
        ));
        assert!(matches!(
            table1_family(&Table1Row::IndexSets { n: 12, i: vec![1, 3], j: vec![2] }),
            Err(CyclicError::SideCondition { element: 1, .. })
        ));
    }

    #[test]
    fn dstar_examples() {
        let d5 = dstar(5, None).unwrap();
        assert_eq!(d5.value, 2);
        assert!(dstar_witness_ok(&d5));
        assert!(dstar(4, None).unwrap().value <= 2);
        let d16 = dstar(16, None).unwrap();
        assert!(d16.value <= 4);
        assert!(dstar_witness_ok(&d16));
        assert!(matches!(dstar(16, Some(3)), Err(CyclicError::BudgetExceeded(3))));
        assert!(dstar(2, None).is_err());
    }
}
