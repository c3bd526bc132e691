//! Dihedral structure: rotation/reflection splits, strong symmetry, the
//! standard dihedral families, involution-equivalence and the Pêcher
//! correspondence between `Z_{2n}` and `D_{2n}` for odd `n`.
//!
//! Element `s^i r^j` of `D_{2n}` has index `i·n + j`, so rotations are
//! `0..n` and reflections `n..2n`. Note `r^j s = s r^{-j}`.

use num_integer::gcd;
use thiserror::Error;

use crate::factor::{verify_triple, FactorTriple, Role, Violation};
use crate::group::{make_cyclic, make_dihedral, FiniteGroup, GroupError};
use crate::set::ElementSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DihedralError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("{0} is not a dihedral group")]
    NotDihedral(String),
    #[error("n = {0} must be odd and at least 3")]
    BadOddN(usize),
    #[error("triple does not verify: {0}")]
    NotVerified(Violation),
    #[error("triple lives on {got}, expected {expected}")]
    WrongGroup { expected: String, got: String },
    #[error("preimage of {0} is not symmetric in Z_2n")]
    PreimageNotSymmetric(Role),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("table row {row}: {reason}")]
    Table2 { row: u8, reason: String },
    #[error("element {0} is not an involution")]
    NotInvolution(usize),
    #[error("element {x} lies in {role}")]
    InSet { x: usize, role: Role },
    #[error("conjugation by {x} does not fix {role}")]
    NotFixed { x: usize, role: Role },
}

/// `X = X_R ⊔ X_M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DihedralSplit {
    pub rotations: ElementSet,
    pub reflections: ElementSet,
}

fn dihedral_n(g: &FiniteGroup) -> Result<usize, DihedralError> {
    g.dihedral_n()
        .ok_or_else(|| DihedralError::NotDihedral(g.to_string()))
}

pub fn split_rm(g: &FiniteGroup, x: &ElementSet) -> Result<DihedralSplit, DihedralError> {
    let n = dihedral_n(g)?;
    let mut rotations = g.empty_set();
    let mut reflections = g.empty_set();
    for y in x {
        if y < n {
            rotations.insert(y);
        } else {
            reflections.insert(y);
        }
    }
    Ok(DihedralSplit {
        rotations,
        reflections,
    })
}

/// The four products behind `U ∩ R = S_R T_R ⊔ S_M T_M` and
/// `U ∩ M = S_R T_M ⊔ S_M T_R`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UrUm {
    pub rr: ElementSet,
    pub mm: ElementSet,
    pub rm: ElementSet,
    pub mr: ElementSet,
}

/// Products of the rotation and reflection parts of a verified triple,
/// checked against both disjoint-union identities.
pub fn ur_um_decomposition(t: &FactorTriple) -> Result<UrUm, DihedralError> {
    let g = t.group();
    if let Some(v) = t.report().violation {
        return Err(DihedralError::NotVerified(v));
    }
    let s = split_rm(g, t.s())?;
    let tt = split_rm(g, t.t())?;
    let u = split_rm(g, t.u())?;
    let parts = UrUm {
        rr: g.product_set(&s.rotations, &tt.rotations),
        mm: g.product_set(&s.reflections, &tt.reflections),
        rm: g.product_set(&s.rotations, &tt.reflections),
        mr: g.product_set(&s.reflections, &tt.rotations),
    };
    let disjoint_union = |a: &ElementSet, b: &ElementSet, whole: &ElementSet| {
        a.is_disjoint(b) && a.union(b) == *whole
    };
    if !disjoint_union(&parts.rr, &parts.mm, &u.rotations) {
        return Err(DihedralError::TheoremViolation(
            "U ∩ R is not S_R T_R ⊔ S_M T_M".into(),
        ));
    }
    if !disjoint_union(&parts.rm, &parts.mr, &u.reflections) {
        return Err(DihedralError::TheoremViolation(
            "U ∩ M is not S_R T_M ⊔ S_M T_R".into(),
        ));
    }
    Ok(parts)
}

/// Both parts closed under `j ↦ −j`: `r^j ↔ r^{-j}` and `sr^j ↔ sr^{-j}`.
pub fn is_strongly_symmetric(n: usize, x: &ElementSet) -> bool {
    x.universe() == 2 * n
        && x.iter().all(|y| {
            let (i, j) = (y / n, y % n);
            x.contains(i * n + (n - j) % n)
        })
}

/// The set bijection `Z_{2n} → D_{2n}`, `x ↦ (x mod 2, x mod n) ↦ s^i r^j`,
/// for odd `n ≥ 3`. It is not a homomorphism.
#[derive(Clone, Debug)]
pub struct PecherCorrespondence {
    n: usize,
    cyclic: FiniteGroup,
    dihedral: FiniteGroup,
    forward: Vec<usize>,
    inverse: Vec<usize>,
}

impl PecherCorrespondence {
    pub fn new(n: usize) -> Result<Self, DihedralError> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(DihedralError::BadOddN(n));
        }
        let forward: Vec<usize> = (0..2 * n).map(|x| (x % 2) * n + x % n).collect();
        let mut inverse = vec![0; 2 * n];
        for (x, &y) in forward.iter().enumerate() {
            inverse[y] = x;
        }
        Ok(PecherCorrespondence {
            n,
            cyclic: make_cyclic(2 * n)?,
            dihedral: make_dihedral(n)?,
            forward,
            inverse,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cyclic(&self) -> &FiniteGroup {
        &self.cyclic
    }

    pub fn dihedral(&self) -> &FiniteGroup {
        &self.dihedral
    }

    pub fn forward_element(&self, x: usize) -> usize {
        self.forward[x]
    }

    pub fn inverse_element(&self, y: usize) -> usize {
        self.inverse[y]
    }

    /// `P(X)` for `X ⊆ Z_{2n}`.
    pub fn forward(&self, x: &ElementSet) -> ElementSet {
        x.map(2 * self.n, |a| self.forward[a])
    }

    /// `P^{-1}(X̃)` for `X̃ ⊆ D_{2n}`.
    pub fn inverse(&self, x: &ElementSet) -> ElementSet {
        x.map(2 * self.n, |a| self.inverse[a])
    }

    fn check_group(&self, t: &FactorTriple, expected: &FiniteGroup) -> Result<(), DihedralError> {
        if t.group() != expected {
            return Err(DihedralError::WrongGroup {
                expected: expected.to_string(),
                got: t.group().to_string(),
            });
        }
        if let Some(v) = t.report().violation {
            return Err(DihedralError::NotVerified(v));
        }
        Ok(())
    }

    /// Image of a verified triple of `Z_{2n}`; the image is re-verified and
    /// checked for strong symmetry.
    pub fn transfer_forward(&self, t: &FactorTriple) -> Result<FactorTriple, DihedralError> {
        self.check_group(t, &self.cyclic)?;
        let (s, tt, u) = t.sets();
        let image = FactorTriple::new(&self.dihedral, self.forward(s), self.forward(tt), self.forward(u));
        if let Some(v) = image.report().violation {
            return Err(DihedralError::TheoremViolation(format!(
                "forward image does not verify: {v}"
            )));
        }
        let (s, tt, u) = image.sets();
        if ![s, tt, u].iter().all(|x| is_strongly_symmetric(self.n, x)) {
            return Err(DihedralError::TheoremViolation(
                "forward image is not strongly symmetric".into(),
            ));
        }
        Ok(image)
    }

    /// Preimage of a verified triple of `D_{2n}`. The preimage of a set is
    /// symmetric exactly when the set is strongly symmetric, so triples
    /// that are merely symmetric are rejected.
    pub fn transfer_backward(&self, t: &FactorTriple) -> Result<FactorTriple, DihedralError> {
        self.check_group(t, &self.dihedral)?;
        let (s, tt, u) = t.sets();
        let pre = [(Role::S, self.inverse(s)), (Role::T, self.inverse(tt)), (Role::U, self.inverse(u))];
        for (role, x) in &pre {
            if !self.cyclic.is_symmetric(x) {
                return Err(DihedralError::PreimageNotSymmetric(*role));
            }
        }
        let [(_, s), (_, tt), (_, u)] = pre;
        let back = FactorTriple::new(&self.cyclic, s, tt, u);
        if let Some(v) = back.report().violation {
            return Err(DihedralError::TheoremViolation(format!(
                "preimage does not verify: {v}"
            )));
        }
        Ok(back)
    }
}

/// `gcd(n, (k+1)/2) = gcd(n, (ℓ+1)/2) = 1` for `k = |S|`, `ℓ = |T|`. Even
/// sizes do not give integer arguments and fail the predicate.
pub fn pullback_predicate(n: usize, t: &FactorTriple) -> bool {
    let ok = |k: usize| k % 2 == 1 && gcd(n, k.div_ceil(2)) == 1;
    ok(t.s().len()) && ok(t.t().len())
}

/// Rows of the table of factorable triples in `D_{2n}`. Each row has
/// `S = {x}` for a reflection `x` and `T = Ux`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Table2Row {
    /// `n` odd: `({s}, {r^{∓1}}, {sr^{±1}})`.
    One,
    /// `({s}, {rs, r^{-1}s, r^{∓1}}, {r^{±1}, sr^{±1}})`.
    Two,
    /// `({s}, R ∖ {e}, M ∖ {s})`.
    Three,
    /// `gcd(m, n) = 1`, `u ≢ 0`: `({s}, {r^m s, r^{-m}s, r^{∓u}}, {r^{±m}, sr^{±u}})`.
    Four { m: usize, u: usize },
    /// `n` even: `({s}, {r^{-k} : k odd} ∪ {rs, r^{-1}s}, {sr^k : k odd} ∪ {r^{±1}})`.
    Five,
    /// `({s}, {rs, r^{-1}s, r^{∓2}}, {r^{±1}, sr^{±2}})`.
    Six,
    /// `n` odd, `gcd(u, n) = 1`: `({sr^a}, {r^{∓u}}, {sr^{a±u}})`.
    Seven { a: usize, u: usize },
    /// `gcd(m, n) = 1`, every `u_i ≢ 0`:
    /// `({sr^a}, {sr^{a∓m}} ∪ {r^{∓u_i}}, {r^{±m}} ∪ {sr^{a±u_i}})`.
    Eight { a: usize, m: usize, us: Vec<usize> },
}

impl Table2Row {
    pub fn id(&self) -> u8 {
        match self {
            Table2Row::One => 1,
            Table2Row::Two => 2,
            Table2Row::Three => 3,
            Table2Row::Four { .. } => 4,
            Table2Row::Five => 5,
            Table2Row::Six => 6,
            Table2Row::Seven { .. } => 7,
            Table2Row::Eight { .. } => 8,
        }
    }
}

/// Builds a row's triple in `D_{2n}` after checking its side conditions,
/// then verifies it.
pub fn table2_family(n: usize, row: &Table2Row) -> Result<FactorTriple, DihedralError> {
    let id = row.id();
    let fail = |reason: String| DihedralError::Table2 { row: id, reason };
    if n < 3 {
        return Err(fail(format!("n = {n} is below 3")));
    }
    let g = make_dihedral(n)?;
    let rot = |j: i64| j.rem_euclid(n as i64) as usize;
    let refl = |j: i64| n + rot(j);
    // r^j s = s r^{-j}
    let rot_s = |j: i64| refl(-j);
    let require_odd = |odd: bool| {
        if (n % 2 == 1) != odd {
            Err(fail(format!("n = {n} must be {}", if odd { "odd" } else { "even" })))
        } else {
            Ok(())
        }
    };
    let unit = |name: &str, v: usize| {
        if gcd(v % n, n) != 1 {
            Err(fail(format!("gcd({name} = {v}, n = {n}) must be 1")))
        } else {
            Ok(())
        }
    };
    let nonzero = |name: &str, v: usize| {
        if v.is_multiple_of(n) {
            Err(fail(format!("{name} = {v} must be nonzero modulo n")))
        } else {
            Ok(())
        }
    };
    let (s, t, u) = match row {
        Table2Row::One => {
            require_odd(true)?;
            (vec![refl(0)], vec![rot(-1), rot(1)], vec![refl(1), refl(-1)])
        }
        Table2Row::Two => (
            vec![refl(0)],
            vec![rot_s(1), rot_s(-1), rot(-1), rot(1)],
            vec![rot(1), rot(-1), refl(1), refl(-1)],
        ),
        Table2Row::Three => (
            vec![refl(0)],
            (1..n as i64).map(|k| rot(-k)).collect(),
            (1..n as i64).map(refl).collect(),
        ),
        Table2Row::Four { m, u } => {
            unit("m", *m)?;
            nonzero("u", *u)?;
            let (m, u) = (*m as i64, *u as i64);
            (
                vec![refl(0)],
                vec![rot_s(m), rot_s(-m), rot(-u), rot(u)],
                vec![rot(m), rot(-m), refl(u), refl(-u)],
            )
        }
        Table2Row::Five => {
            require_odd(false)?;
            let odd: Vec<i64> = (1..n as i64).step_by(2).collect();
            let mut t: Vec<usize> = odd.iter().map(|&k| rot(-k)).collect();
            t.extend([rot_s(1), rot_s(-1)]);
            let mut u: Vec<usize> = odd.iter().map(|&k| refl(k)).collect();
            u.extend([rot(1), rot(-1)]);
            (vec![refl(0)], t, u)
        }
        Table2Row::Six => (
            vec![refl(0)],
            vec![rot_s(1), rot_s(-1), rot(-2), rot(2)],
            vec![rot(1), rot(-1), refl(2), refl(-2)],
        ),
        Table2Row::Seven { a, u } => {
            require_odd(true)?;
            unit("u", *u)?;
            let (a, u) = (*a as i64, *u as i64);
            (vec![refl(a)], vec![rot(-u), rot(u)], vec![refl(a + u), refl(a - u)])
        }
        Table2Row::Eight { a, m, us } => {
            unit("m", *m)?;
            for &ui in us {
                nonzero("u_i", ui)?;
            }
            let (a, m) = (*a as i64, *m as i64);
            let mut t = vec![refl(a - m), refl(a + m)];
            let mut u = vec![rot(m), rot(-m)];
            for &ui in us {
                let ui = ui as i64;
                t.extend([rot(-ui), rot(ui)]);
                u.extend([refl(a + ui), refl(a - ui)]);
            }
            (vec![refl(a)], t, u)
        }
    };
    let (s, t, u) = (g.set(s), g.set(t), g.set(u));
    let x = s.first().expect("every row has a reflection in S");
    if g.right_translate(&u, x) != t {
        return Err(fail("T differs from Ux".into()));
    }
    match verify_triple(&g, &s, &t, &u).violation {
        Some(v) => Err(fail(format!("construction does not verify: {v}"))),
        None => Ok(FactorTriple::new(&g, s, t, u)),
    }
}

/// `(Sx, xT, U)` for an involution `x ∉ S ∪ T` with `xSx = S`, `xTx = T`.
pub fn involution_equivalent(t: &FactorTriple, x: usize) -> Result<FactorTriple, DihedralError> {
    let g = t.group();
    if let Some(v) = t.report().violation {
        return Err(DihedralError::NotVerified(v));
    }
    if x >= g.order() || !g.is_involution(x) {
        return Err(DihedralError::NotInvolution(x));
    }
    for (role, set) in [(Role::S, t.s()), (Role::T, t.t())] {
        if set.contains(x) {
            return Err(DihedralError::InSet { x, role });
        }
        if g.conjugate_set(x, set) != *set {
            return Err(DihedralError::NotFixed { x, role });
        }
    }
    let sx = g.right_translate(t.s(), x);
    let xt = g.left_translate(x, t.t());
    assert!(g.is_symmetric(&sx) && g.is_symmetric(&xt));
    FactorTriple::verified(g, sx, xt, t.u().clone()).map_err(|e| {
        DihedralError::TheoremViolation(format!("involution image does not verify: {e}"))
    })
}
