//! Exhaustive search for factorizations over symmetric atoms.
//!
//! Symmetric identity-free sets are unions of atoms: involutions and
//! inverse pairs `{g, g^{-1}}`. Work is split by the first atom of `S`;
//! each split is searched sequentially and the results are merged by
//! canonical sort, so reports do not depend on the thread count. Only the
//! point at which a node budget runs out can vary between runs.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::equivalence::canonical_form;
use crate::factor::{involution_count, verify_triple, FactorTriple, Violation};
use crate::group::{automorphisms, FiniteGroup, GroupError};
use crate::set::ElementSet;

/// Largest number of atoms for which pruned branches can be audited.
pub const AUDIT_ATOM_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("U must be symmetric and identity-free: {0}")]
    BadTarget(Violation),
    #[error("group of order {0} is too small to search")]
    TrivialGroup(usize),
    #[error("prune audit needs at most {AUDIT_ATOM_LIMIT} atoms, group has {0}")]
    AuditTooLarge(usize),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("budget must be positive")]
    ZeroBudget,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Upper bound on `|S|` and `|T|`.
    pub max_set_size: Option<usize>,
    /// Keep only triples whose `U` generates `G`.
    pub require_connected: bool,
    /// One canonical representative per `Aut(G)`-orbit.
    pub dedup: bool,
    pub threads: Option<usize>,
    pub node_budget: Option<u64>,
    /// Re-expand every pruned branch by brute force and count verified
    /// triples found there.
    pub audit_prunes: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub pruned_size: u64,
    pub pruned_collision: u64,
    pub pruned_parity: u64,
    /// Verified triples found inside pruned branches in audit mode.
    pub audit_violations: u64,
}

impl SearchStats {
    fn add(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.pruned_size += o.pruned_size;
        self.pruned_collision += o.pruned_collision;
        self.pruned_parity += o.pruned_parity;
        self.audit_violations += o.audit_violations;
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub group: FiniteGroup,
    /// Sorted by `(|S|, S, T, U)`.
    pub triples: Vec<FactorTriple>,
    pub stats: SearchStats,
    pub exhaustive: bool,
    /// Number of orbits when deduplicated.
    pub orbits: Option<usize>,
}

/// `Cay(G;U)` is connected exactly when `U` generates `G`.
pub fn is_connected(g: &FiniteGroup, u: &ElementSet) -> bool {
    if u.is_empty() {
        return g.order() == 1;
    }
    g.subgroup_generated(u).order() == g.order()
}

struct Ctx<'a> {
    g: &'a FiniteGroup,
    atoms: Vec<Vec<usize>>,
    max_size: usize,
    audit: bool,
    nodes: &'a AtomicU64,
    budget: u64,
    aborted: &'a AtomicBool,
}

#[derive(Default)]
struct Local {
    triples: Vec<FactorTriple>,
    stats: SearchStats,
}

impl Ctx<'_> {
    fn tick(&self, local: &mut Local) -> bool {
        local.stats.nodes += 1;
        if self.nodes.fetch_add(1, Ordering::Relaxed) + 1 > self.budget {
            self.aborted.store(true, Ordering::Relaxed);
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    fn set_of(&self, atom_ids: &[usize]) -> ElementSet {
        self.g.set(atom_ids.iter().flat_map(|&k| self.atoms[k].iter().copied()))
    }

    /// Sets formed by `base` plus any subset of the atoms `from..`.
    fn extensions(&self, base: &[usize], from: usize) -> Vec<ElementSet> {
        let rest: Vec<usize> = (from..self.atoms.len()).collect();
        (0u32..1 << rest.len())
            .map(|mask| {
                let mut ids = base.to_vec();
                ids.extend(rest.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &k)| k));
                self.set_of(&ids)
            })
            .collect()
    }

    /// Verified triples `(S, T, ST)` with `S` and `T` drawn from the given
    /// families and, when `u` is fixed, `ST = U`.
    fn brute_count(&self, ss: &[ElementSet], ts: &[ElementSet], u: Option<&ElementSet>) -> u64 {
        let mut found = 0;
        for s in ss.iter().filter(|s| !s.is_empty()) {
            for t in ts.iter().filter(|t| !t.is_empty()) {
                let target = match u {
                    Some(u) if s.len() * t.len() == u.len() => u.clone(),
                    Some(_) => continue,
                    None => match crate::factor::product_if_unique(self.g, s, t) {
                        Some(p) => p,
                        None => continue,
                    },
                };
                if verify_triple(self.g, s, t, &target).verified {
                    found += 1;
                }
            }
        }
        found
    }
}

fn divisors(m: usize) -> impl Iterator<Item = usize> {
    (1..=m).filter(move |a| m.is_multiple_of(*a))
}

fn sort_and_dedup(
    g: &FiniteGroup,
    mut triples: Vec<FactorTriple>,
    dedup: bool,
    fixing: Option<&ElementSet>,
) -> Result<(Vec<FactorTriple>, Option<usize>), SearchError> {
    if dedup {
        let mut auts = automorphisms(g)?;
        // orbits of pairs for a fixed target are taken under its stabilizer
        if let Some(u) = fixing {
            auts.retain(|a| a.apply_set(u) == *u);
        }
        let mut reps: Vec<FactorTriple> = triples
            .iter()
            .map(|t| {
                let (s, tt, u) = canonical_form(t, &auts);
                FactorTriple::new(g, s, tt, u)
            })
            .collect();
        reps.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        reps.dedup();
        triples = reps;
    } else {
        triples.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    }
    let orbits = dedup.then_some(triples.len());
    Ok((triples, orbits))
}

fn run_in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, SearchError> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| SearchError::ThreadPool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn check_options(g: &FiniteGroup, opts: &SearchOptions, atoms: usize) -> Result<(), SearchError> {
    if opts.node_budget == Some(0) {
        return Err(SearchError::ZeroBudget);
    }
    if opts.audit_prunes && atoms > AUDIT_ATOM_LIMIT {
        return Err(SearchError::AuditTooLarge(atoms));
    }
    if opts.dedup {
        automorphisms(g)?;
    }
    Ok(())
}

fn atom_lists(g: &FiniteGroup) -> Vec<Vec<usize>> {
    g.atoms().iter().map(|a| a.elements().collect()).collect()
}

/// All `(S, T)` with `(S, T, U)` factorable, `S` and `T` nonempty.
///
/// `S` runs over atom sets with `|S|` dividing `|U|`. Every `T` lies in
/// `∩_{s∈S} s^{-1}U`, so a partial `S` is abandoned once that intersection
/// is smaller than the least admissible `|T|`. `T` atoms whose products
/// with `S` repeat an earlier product are skipped.
pub fn find_factor_pairs(
    g: &FiniteGroup,
    u: &ElementSet,
    opts: &SearchOptions,
) -> Result<SearchReport, SearchError> {
    if let Some(v) = crate::factor::hypothesis_violation(g, &g.empty_set(), &g.empty_set(), u) {
        return Err(SearchError::BadTarget(v));
    }
    let atoms = atom_lists(g);
    check_options(g, opts, atoms.len())?;
    let m = u.len();
    let mut stats = SearchStats::default();
    let empty = |stats| SearchReport {
        group: g.clone(),
        triples: Vec::new(),
        stats,
        exhaustive: true,
        orbits: opts.dedup.then_some(0),
    };
    if m == 0 || (opts.require_connected && !is_connected(g, u)) {
        return Ok(empty(stats));
    }
    if g.order() % 4 == 2 && involution_count(g, u) % 2 == 1 {
        stats.pruned_parity += 1;
        if opts.audit_prunes {
            let all = Ctx {
                g,
                atoms: atoms.clone(),
                max_size: usize::MAX,
                audit: true,
                nodes: &AtomicU64::new(0),
                budget: u64::MAX,
                aborted: &AtomicBool::new(false),
            };
            let every = all.extensions(&[], 0);
            stats.audit_violations += all.brute_count(&every, &every, Some(u));
        }
        return Ok(empty(stats));
    }
    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let ctx = Ctx {
        g,
        atoms,
        max_size: opts.max_set_size.unwrap_or(usize::MAX),
        audit: opts.audit_prunes,
        nodes: &nodes,
        budget: opts.node_budget.unwrap_or(u64::MAX),
        aborted: &aborted,
    };
    // x^{-1}U for every x
    let shifted: Vec<ElementSet> = g.elements().map(|x| g.left_translate(g.inv(x), u)).collect();
    let locals: Vec<Local> = run_in_pool(opts.threads, || {
        (0..ctx.atoms.len())
            .into_par_iter()
            .map(|k| {
                let mut local = Local::default();
                let mut cand = ElementSet::full(g.order());
                for &x in &ctx.atoms[k] {
                    cand = cand.intersection(&shifted[x]);
                }
                if pair_s_admissible(&ctx, m, ctx.atoms[k].len(), &cand, &mut local) {
                    let mut s = vec![k];
                    pairs_s(&ctx, u, m, &shifted, &mut s, ctx.atoms[k].len(), cand, &mut local);
                } else if ctx.audit {
                    audit_s_branch(&ctx, u, &[], k, &mut local);
                }
                local
            })
            .collect()
    })?;
    let mut triples = Vec::new();
    for l in locals {
        stats.add(&l.stats);
        triples.extend(l.triples);
    }
    let (triples, orbits) = sort_and_dedup(g, triples, opts.dedup, Some(u))?;
    Ok(SearchReport {
        group: g.clone(),
        triples,
        stats,
        exhaustive: !aborted.load(Ordering::Relaxed),
        orbits,
    })
}

/// Whether an `S` of size `len` (so far) with candidate set `cand` for
/// `T` can still be completed; records a size prune otherwise.
fn pair_s_admissible(ctx: &Ctx<'_>, m: usize, len: usize, cand: &ElementSet, local: &mut Local) -> bool {
    let least_t = divisors(m)
        .filter(|&a| a >= len && a <= ctx.max_size && m / a <= ctx.max_size)
        .map(|a| m / a)
        .min();
    let ok = least_t.is_some_and(|b| cand.len() >= b);
    if !ok {
        local.stats.pruned_size += 1;
    }
    ok
}

#[allow(clippy::too_many_arguments)]
fn pairs_s(
    ctx: &Ctx<'_>,
    u: &ElementSet,
    m: usize,
    shifted: &[ElementSet],
    s: &mut Vec<usize>,
    s_len: usize,
    cand: ElementSet,
    local: &mut Local,
) {
    if !ctx.tick(local) {
        return;
    }
    if m.is_multiple_of(s_len) && s_len <= ctx.max_size && m / s_len <= ctx.max_size {
        let s_set = ctx.set_of(s);
        let t_atoms: Vec<usize> = (0..ctx.atoms.len())
            .filter(|&k| ctx.atoms[k].iter().all(|&x| cand.contains(x) && !s_set.contains(x)))
            .collect();
        let before = local.triples.len();
        let mut counts = vec![0u8; ctx.g.order()];
        let s_elems = s_set.to_vec();
        pairs_t(ctx, u, &s_set, &s_elems, m / s_len, &t_atoms, 0, &mut Vec::new(), 0, &mut counts, local);
        if ctx.audit {
            let all_t: Vec<ElementSet> = ctx
                .extensions(&[], 0)
                .into_iter()
                .filter(|t| t.len() == m / s_len)
                .collect();
            let brute = ctx.brute_count(std::slice::from_ref(&s_set), &all_t, Some(u));
            let found = (local.triples.len() - before) as u64;
            local.stats.audit_violations += brute.saturating_sub(found);
        }
    }
    let last = *s.last().expect("S holds at least its first atom");
    for k in last + 1..ctx.atoms.len() {
        let len = s_len + ctx.atoms[k].len();
        if len > m.min(ctx.max_size) {
            local.stats.pruned_size += 1;
            if ctx.audit {
                audit_s_branch(ctx, u, s, k, local);
            }
            continue;
        }
        let mut next_cand = cand.clone();
        for &x in &ctx.atoms[k] {
            next_cand = next_cand.intersection(&shifted[x]);
        }
        if !pair_s_admissible(ctx, m, len, &next_cand, local) {
            if ctx.audit {
                audit_s_branch(ctx, u, s, k, local);
            }
            continue;
        }
        s.push(k);
        pairs_s(ctx, u, m, shifted, s, len, next_cand, local);
        s.pop();
    }
}

/// Brute-force re-expansion of the `S` branch `prefix ∪ atom k ∪ …`.
fn audit_s_branch(ctx: &Ctx<'_>, u: &ElementSet, prefix: &[usize], k: usize, local: &mut Local) {
    let mut base = prefix.to_vec();
    base.push(k);
    let ss: Vec<ElementSet> = ctx
        .extensions(&base, k + 1)
        .into_iter()
        .filter(|s| s.len() <= ctx.max_size)
        .collect();
    let ts: Vec<ElementSet> = ctx
        .extensions(&[], 0)
        .into_iter()
        .filter(|t| t.len() <= ctx.max_size)
        .collect();
    local.stats.audit_violations += ctx.brute_count(&ss, &ts, Some(u));
}

/// Adds the products of `atom` with `S` to `counts`; on a repeat, undoes
/// the partial update and returns `false`.
fn add_products(g: &FiniteGroup, s_elems: &[usize], atom: &[usize], counts: &mut [u8]) -> bool {
    let mut added = Vec::with_capacity(atom.len() * s_elems.len());
    for &b in atom {
        for &a in s_elems {
            let c = g.mul(a, b);
            if counts[c] > 0 {
                for c in added {
                    counts[c] = 0;
                }
                return false;
            }
            counts[c] = 1;
            added.push(c);
        }
    }
    true
}

fn remove_products(g: &FiniteGroup, s_elems: &[usize], atom: &[usize], counts: &mut [u8]) {
    for &b in atom {
        for &a in s_elems {
            counts[g.mul(a, b)] = 0;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn pairs_t(
    ctx: &Ctx<'_>,
    u: &ElementSet,
    s_set: &ElementSet,
    s_elems: &[usize],
    b: usize,
    t_atoms: &[usize],
    pos: usize,
    t: &mut Vec<usize>,
    t_len: usize,
    counts: &mut [u8],
    local: &mut Local,
) {
    if !ctx.tick(local) {
        return;
    }
    if t_len == b {
        let t_set = ctx.set_of(t);
        if verify_triple(ctx.g, s_set, &t_set, u).verified {
            local.triples.push(FactorTriple::new(ctx.g, s_set.clone(), t_set, u.clone()));
        }
        return;
    }
    for idx in pos..t_atoms.len() {
        let k = t_atoms[idx];
        let atom = &ctx.atoms[k];
        if t_len + atom.len() > b {
            continue;
        }
        if !add_products(ctx.g, s_elems, atom, counts) {
            local.stats.pruned_collision += 1;
            if ctx.audit {
                let mut base = t.clone();
                base.push(k);
                let ts: Vec<ElementSet> = ctx
                    .extensions(&base, k + 1)
                    .into_iter()
                    .filter(|x| x.len() == b)
                    .collect();
                local.stats.audit_violations += ctx.brute_count(std::slice::from_ref(s_set), &ts, Some(u));
            }
            continue;
        }
        t.push(k);
        pairs_t(ctx, u, s_set, s_elems, b, t_atoms, idx + 1, t, t_len + atom.len(), counts, local);
        t.pop();
        remove_products(ctx.g, s_elems, atom, counts);
    }
}

/// Every factorable `(S, T, U)` with nonempty `S`, `T` within the size
/// bound, `U = ST`.
pub fn enumerate_triples(g: &FiniteGroup, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    if g.order() < 2 {
        return Err(SearchError::TrivialGroup(g.order()));
    }
    let atoms = atom_lists(g);
    check_options(g, opts, atoms.len())?;
    let nodes = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let ctx = Ctx {
        g,
        atoms,
        max_size: opts.max_set_size.unwrap_or(usize::MAX),
        audit: opts.audit_prunes,
        nodes: &nodes,
        budget: opts.node_budget.unwrap_or(u64::MAX),
        aborted: &aborted,
    };
    let locals: Vec<Local> = run_in_pool(opts.threads, || {
        (0..ctx.atoms.len())
            .into_par_iter()
            .map(|k| {
                let mut local = Local::default();
                if ctx.atoms[k].len() <= ctx.max_size {
                    let mut s = vec![k];
                    enum_s(&ctx, &mut s, ctx.atoms[k].len(), opts.require_connected, &mut local);
                }
                local
            })
            .collect()
    })?;
    let mut stats = SearchStats::default();
    let mut triples = Vec::new();
    for l in locals {
        stats.add(&l.stats);
        triples.extend(l.triples);
    }
    let (triples, orbits) = sort_and_dedup(g, triples, opts.dedup, None)?;
    Ok(SearchReport {
        group: g.clone(),
        triples,
        stats,
        exhaustive: !aborted.load(Ordering::Relaxed),
        orbits,
    })
}

fn enum_s(ctx: &Ctx<'_>, s: &mut Vec<usize>, s_len: usize, connected: bool, local: &mut Local) {
    if !ctx.tick(local) {
        return;
    }
    let n = ctx.g.order();
    let s_set = ctx.set_of(s);
    let s_elems = s_set.to_vec();
    let t_atoms: Vec<usize> = (0..ctx.atoms.len())
        .filter(|&k| ctx.atoms[k].iter().all(|&x| !s_set.contains(x)))
        .collect();
    // |S||T| ≤ |G| - 1
    let max_t = ((n - 1) / s_len).min(ctx.max_size);
    let mut counts = vec![0u8; n];
    let before = local.triples.len();
    enum_t(ctx, &s_set, &s_elems, max_t, &t_atoms, 0, &mut Vec::new(), 0, &mut counts, connected, local);
    if ctx.audit && !connected {
        let ts: Vec<ElementSet> = ctx.extensions(&[], 0);
        let brute = ctx.brute_count(std::slice::from_ref(&s_set), &ts, None);
        let found = (local.triples.len() - before) as u64;
        local.stats.audit_violations += brute.saturating_sub(found);
    }
    let last = *s.last().expect("S holds at least its first atom");
    for k in last + 1..ctx.atoms.len() {
        let len = s_len + ctx.atoms[k].len();
        if len > ctx.max_size || len > n - 1 {
            local.stats.pruned_size += 1;
            continue;
        }
        s.push(k);
        enum_s(ctx, s, len, connected, local);
        s.pop();
    }
}

#[allow(clippy::too_many_arguments)]
fn enum_t(
    ctx: &Ctx<'_>,
    s_set: &ElementSet,
    s_elems: &[usize],
    max_t: usize,
    t_atoms: &[usize],
    pos: usize,
    t: &mut Vec<usize>,
    t_len: usize,
    counts: &mut [u8],
    connected: bool,
    local: &mut Local,
) {
    if !ctx.tick(local) {
        return;
    }
    if t_len > 0 {
        let t_set = ctx.set_of(t);
        let u = ElementSet::from_indices(ctx.g.order(), (0..counts.len()).filter(|&c| counts[c] > 0));
        if (!connected || is_connected(ctx.g, &u)) && verify_triple(ctx.g, s_set, &t_set, &u).verified {
            local.triples.push(FactorTriple::new(ctx.g, s_set.clone(), t_set, u));
        }
    }
    for idx in pos..t_atoms.len() {
        let k = t_atoms[idx];
        let atom = &ctx.atoms[k];
        if t_len + atom.len() > max_t {
            local.stats.pruned_size += 1;
            continue;
        }
        if !add_products(ctx.g, s_elems, atom, counts) {
            local.stats.pruned_collision += 1;
            continue;
        }
        t.push(k);
        enum_t(ctx, s_set, s_elems, max_t, t_atoms, idx + 1, t, t_len + atom.len(), counts, connected, local);
        t.pop();
        remove_products(ctx.g, s_elems, atom, counts);
    }
}

/// All symmetric `(S, T)` with `ST = G ∖ {e}` and unique representations.
pub fn near_factorization_census(g: &FiniteGroup, opts: &SearchOptions) -> Result<SearchReport, SearchError> {
    if g.order() < 2 {
        return Err(SearchError::TrivialGroup(g.order()));
    }
    find_factor_pairs(g, &g.non_identity(), opts)
}
