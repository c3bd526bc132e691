//! Closed-form character tables and the character criterion for
//! class-closed triples.
//!
//! For class-closed `X` the group-algebra element `σ_X = Σ_{x∈X} x` is
//! central, so it acts on each irreducible as the scalar `χ(X)/χ(1)`.
//! Consequently `(S, T, U)` factors exactly when
//! `χ(U)·χ(1) = χ(S)·χ(T)` for every irreducible `χ`, and these scalars
//! are the eigenvalues of `A(G;X)` with multiplicity `χ(1)²`.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, LazyLock, RwLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::factor::{adjacency, hypothesis_violation, Violation};
use crate::group::{product_coordinates, FiniteGroup, GroupDescriptor, GroupTag};
use crate::set::ElementSet;

/// Tolerance of the character criterion and spectrum comparisons.
pub const CRITERION_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CharacterError {
    #[error("no closed-form character table for {0}")]
    Unsupported(String),
    #[error("set is not a union of conjugacy classes: element {0} misses part of its class")]
    NotClassClosed(usize),
    #[error("criterion hypotheses fail: {0}")]
    Hypothesis(Violation),
    #[error("adjacency matrix of a non-symmetric set has no real spectrum")]
    NotSymmetric,
}

/// An irreducible character, stored by its value on each element.
#[derive(Clone, Debug)]
pub struct Character {
    pub label: String,
    pub degree: usize,
    values: Vec<Complex64>,
}

impl Character {
    pub fn value(&self, g: usize) -> Complex64 {
        self.values[g]
    }

    /// `χ(X) = Σ_{x∈X} χ(x)`.
    pub fn sum(&self, x: &ElementSet) -> Complex64 {
        x.iter().map(|g| self.values[g]).sum()
    }
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: FiniteGroup,
    characters: Vec<Character>,
}

fn root_of_unity(k: usize, n: usize) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k % n) as f64 / n as f64)
}

fn cyclic_characters(n: usize) -> Vec<Character> {
    (0..n)
        .map(|k| Character {
            label: format!("chi_{k}"),
            degree: 1,
            values: (0..n).map(|x| root_of_unity(k * x, n)).collect(),
        })
        .collect()
}

fn dihedral_characters(n: usize) -> Vec<Character> {
    let real = |f: &dyn Fn(usize, usize) -> f64| -> Vec<Complex64> {
        (0..2 * n).map(|g| Complex64::new(f(g / n, g % n), 0.0)).collect()
    };
    let sign = |e: usize| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut out = vec![
        Character {
            label: "trivial".into(),
            degree: 1,
            values: real(&|_, _| 1.0),
        },
        Character {
            label: "sign".into(),
            degree: 1,
            values: real(&|i, _| sign(i)),
        },
    ];
    if n.is_multiple_of(2) {
        out.push(Character {
            label: "alt_r".into(),
            degree: 1,
            values: real(&|_, j| sign(j)),
        });
        out.push(Character {
            label: "alt_rs".into(),
            degree: 1,
            values: real(&|i, j| sign(i + j)),
        });
    }
    for h in (1..n).take_while(|&h| 2 * h < n) {
        out.push(Character {
            label: format!("rho_{h}"),
            degree: 2,
            values: real(&|i, j| {
                if i == 1 {
                    0.0
                } else {
                    2.0 * (TAU * (h * j) as f64 / n as f64).cos()
                }
            }),
        });
    }
    out
}

fn build(g: &FiniteGroup) -> Result<Vec<Character>, CharacterError> {
    match g.tag() {
        GroupTag::Cyclic(n) => Ok(cyclic_characters(*n)),
        GroupTag::Dihedral(n) => Ok(dihedral_characters(*n)),
        GroupTag::Product(parts) => {
            let tables = parts.iter().map(build).collect::<Result<Vec<_>, _>>()?;
            let coords: Vec<Vec<usize>> = g.elements().map(|x| product_coordinates(parts, x)).collect();
            let mut out = vec![Character {
                label: String::new(),
                degree: 1,
                values: vec![Complex64::new(1.0, 0.0); g.order()],
            }];
            for (p, table) in tables.iter().enumerate() {
                let mut next = Vec::with_capacity(out.len() * table.len());
                for acc in &out {
                    for chi in table {
                        let label = if acc.label.is_empty() {
                            chi.label.clone()
                        } else {
                            format!("{} x {}", acc.label, chi.label)
                        };
                        let values = coords
                            .iter()
                            .zip(&acc.values)
                            .map(|(c, &v)| v * chi.values[c[p]])
                            .collect();
                        next.push(Character {
                            label,
                            degree: acc.degree * chi.degree,
                            values,
                        });
                    }
                }
                out = next;
            }
            Ok(out)
        }
        GroupTag::Table => Err(CharacterError::Unsupported(g.to_string())),
    }
}

type Cache = RwLock<HashMap<GroupDescriptor, Arc<CharacterTable>>>;

static CACHE: LazyLock<Cache> = LazyLock::new(|| RwLock::new(HashMap::new()));

/// The irreducible characters of a cyclic group, a dihedral group or a
/// direct product of such. Tables are cached per group.
pub fn character_table(g: &FiniteGroup) -> Result<Arc<CharacterTable>, CharacterError> {
    let key = g.descriptor();
    if let Some(t) = CACHE.read().expect("character cache poisoned").get(&key) {
        return Ok(t.clone());
    }
    let table = Arc::new(CharacterTable {
        group: g.clone(),
        characters: build(g)?,
    });
    CACHE
        .write()
        .expect("character cache poisoned")
        .entry(key)
        .or_insert(table.clone());
    Ok(table)
}

impl CharacterTable {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn characters(&self) -> &[Character] {
        &self.characters
    }

    pub fn len(&self) -> usize {
        self.characters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.characters.is_empty()
    }

    /// Values of `χ` on the conjugacy classes, in class order.
    pub fn class_values(&self, chi: usize) -> Vec<Complex64> {
        self.group
            .conjugacy_classes()
            .iter()
            .map(|c| self.characters[chi].values[c[0]])
            .collect()
    }

    /// `Σ χ(1)²`.
    pub fn degree_square_sum(&self) -> usize {
        self.characters.iter().map(|c| c.degree * c.degree).sum()
    }

    /// Largest deviation of `Σ_g χ_i(g) conj(χ_j(g))` from `|G|·δ_ij`.
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.group.order() as f64;
        let mut worst = 0.0f64;
        for (i, a) in self.characters.iter().enumerate() {
            for (j, b) in self.characters.iter().enumerate() {
                let ip: Complex64 = a.values.iter().zip(&b.values).map(|(x, y)| x * y.conj()).sum();
                let expected = if i == j { n } else { 0.0 };
                worst = worst.max((ip - expected).norm());
            }
        }
        worst
    }

    /// Whether `χ` is constant on every conjugacy class.
    pub fn is_class_function(&self, chi: usize) -> bool {
        self.group.conjugacy_classes().iter().all(|c| {
            let v = self.characters[chi].values[c[0]];
            c.iter().all(|&g| (self.characters[chi].values[g] - v).norm() < 1e-9)
        })
    }
}

/// `χ(X)` for the character at index `chi`.
pub fn char_sum(table: &CharacterTable, chi: usize, x: &ElementSet) -> Complex64 {
    table.characters[chi].sum(x)
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionRow {
    pub label: String,
    pub degree: usize,
    pub chi_s: (f64, f64),
    pub chi_t: (f64, f64),
    pub chi_u: (f64, f64),
    /// `|χ(U)·χ(1) − χ(S)·χ(T)|`.
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub holds: bool,
    pub tolerance: f64,
    pub rows: Vec<CriterionRow>,
}

fn pair(z: Complex64) -> (f64, f64) {
    (z.re, z.im)
}

fn require_class_closed(g: &FiniteGroup, sets: &[&ElementSet]) -> Result<(), CharacterError> {
    for x in sets {
        if let Some(bad) = g.first_class_violation(x) {
            return Err(CharacterError::NotClassClosed(bad));
        }
    }
    Ok(())
}

/// Evaluates `χ(U)·χ(1) = χ(S)·χ(T)` on every irreducible character.
///
/// The sets must be class-closed, symmetric and identity-free.
pub fn criterion_check(
    g: &FiniteGroup,
    s: &ElementSet,
    t: &ElementSet,
    u: &ElementSet,
) -> Result<CriterionReport, CharacterError> {
    if let Some(v) = hypothesis_violation(g, s, t, u) {
        return Err(CharacterError::Hypothesis(v));
    }
    require_class_closed(g, &[s, t, u])?;
    let table = character_table(g)?;
    let rows: Vec<CriterionRow> = table
        .characters
        .iter()
        .map(|chi| {
            let (cs, ct, cu) = (chi.sum(s), chi.sum(t), chi.sum(u));
            CriterionRow {
                label: chi.label.clone(),
                degree: chi.degree,
                chi_s: pair(cs),
                chi_t: pair(ct),
                chi_u: pair(cu),
                residual: (cu * chi.degree as f64 - cs * ct).norm(),
            }
        })
        .collect();
    Ok(CriterionReport {
        holds: rows.iter().all(|r| r.residual <= CRITERION_TOLERANCE),
        tolerance: CRITERION_TOLERANCE,
        rows,
    })
}

/// Eigenvalue `χ(X)/χ(1)` of `A(G;X)` with multiplicity `χ(1)²`.
#[derive(Clone, Debug, Serialize)]
pub struct Eigenvalue {
    pub character: String,
    pub value: (f64, f64),
    pub multiplicity: usize,
}

/// The spectrum of `A(G;X)` for class-closed `X`, one entry per irreducible.
pub fn cayley_eigenvalues(g: &FiniteGroup, x: &ElementSet) -> Result<Vec<Eigenvalue>, CharacterError> {
    require_class_closed(g, &[x])?;
    let table = character_table(g)?;
    Ok(table
        .characters
        .iter()
        .map(|chi| Eigenvalue {
            character: chi.label.clone(),
            value: pair(chi.sum(x) / chi.degree as f64),
            multiplicity: chi.degree * chi.degree,
        })
        .collect())
}

/// Eigenvalues of `A(G;X)` by dense symmetric diagonalization, ascending.
pub fn numeric_spectrum(g: &FiniteGroup, x: &ElementSet) -> Result<Vec<f64>, CharacterError> {
    if !g.is_symmetric(x) {
        return Err(CharacterError::NotSymmetric);
    }
    let a = adjacency(g, x);
    let n = g.order();
    let m = DMatrix::from_fn(n, n, |i, j| a.get(i, j) as f64);
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Largest gap between the character spectrum (expanded by multiplicity)
/// and the numeric spectrum, both sorted. Needs symmetric class-closed `X`.
pub fn spectrum_gap(g: &FiniteGroup, x: &ElementSet) -> Result<f64, CharacterError> {
    let numeric = numeric_spectrum(g, x)?;
    let mut predicted: Vec<f64> = Vec::with_capacity(g.order());
    for e in cayley_eigenvalues(g, x)? {
        if e.value.1.abs() > CRITERION_TOLERANCE {
            return Ok(f64::INFINITY);
        }
        predicted.extend(std::iter::repeat_n(e.value.0, e.multiplicity));
    }
    predicted.sort_by(f64::total_cmp);
    Ok(predicted
        .iter()
        .zip(&numeric)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::verify_triple;
    use crate::group::{direct_product, make_cyclic, make_dihedral};

    fn close(a: Complex64, re: f64) -> bool {
        (a - Complex64::new(re, 0.0)).norm() < 1e-9
    }

    #[test]
    fn table_shapes() {
        let z5 = make_cyclic(5).unwrap();
        let t = character_table(&z5).unwrap();
        assert_eq!(t.len(), 5);
        assert!(t.characters().iter().all(|c| c.degree == 1));

        let d10 = make_dihedral(5).unwrap();
        let t = character_table(&d10).unwrap();
        let degrees: Vec<usize> = t.characters().iter().map(|c| c.degree).collect();
        assert_eq!(degrees, vec![1, 1, 2, 2]);
        assert_eq!(t.degree_square_sum(), 10);

        let d8 = make_dihedral(4).unwrap();
        let t = character_table(&d8).unwrap();
        let degrees: Vec<usize> = t.characters().iter().map(|c| c.degree).collect();
        assert_eq!(degrees, vec![1, 1, 1, 1, 2]);
    }

    #[test]
    fn orthogonality_and_class_functions() {
        let mut groups = vec![
            direct_product(&make_cyclic(2).unwrap(), &make_cyclic(4).unwrap()).unwrap(),
            direct_product(&make_cyclic(3).unwrap(), &make_dihedral(4).unwrap()).unwrap(),
        ];
        for n in 1..=12 {
            groups.push(make_cyclic(n).unwrap());
        }
        for n in 3..=9 {
            groups.push(make_dihedral(n).unwrap());
        }
        for g in groups {
            let t = character_table(&g).unwrap();
            assert_eq!(t.degree_square_sum(), g.order(), "{g}");
            assert_eq!(t.len(), g.conjugacy_classes().len(), "{g}");
            assert!(t.orthogonality_defect() < 1e-9, "{g}");
            for chi in 0..t.len() {
                assert!(t.is_class_function(chi), "{g}");
            }
        }
    }

    #[test]
    fn char_sum_examples() {
        let z5 = make_cyclic(5).unwrap();
        let t = character_table(&z5).unwrap();
        assert!(close(char_sum(&t, 0, &z5.set([1, 2, 4])), 3.0));
        assert!(close(char_sum(&t, 1, &z5.set([1, 2, 3, 4])), -1.0));
        assert!((char_sum(&t, 1, &z5.set([1, 4])) - Complex64::new(0.618034, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn criterion_examples() {
        let z5 = make_cyclic(5).unwrap();
        let r = criterion_check(&z5, &z5.set([1, 4]), &z5.set([2, 3]), &z5.set([1, 2, 3, 4])).unwrap();
        assert!(r.holds);
        let row = &r.rows[1];
        assert!((row.chi_u.0 + 1.0).abs() < 1e-9);
        assert!((row.chi_s.0 * row.chi_t.0 + 1.0).abs() < 1e-9);

        let d10 = make_dihedral(5).unwrap();
        let r = criterion_check(&d10, &d10.set([1, 4]), &d10.set([2, 3]), &d10.set([1, 2, 3, 4])).unwrap();
        assert!(r.holds);

        let r = criterion_check(&z5, &z5.set([1, 4]), &z5.set([1, 4]), &z5.set([2, 3])).unwrap();
        assert!(!r.holds);
        assert!(!verify_triple(&z5, &z5.set([1, 4]), &z5.set([1, 4]), &z5.set([2, 3])).verified);

        assert_eq!(
            criterion_check(&d10, &d10.set([5]), &d10.set([1, 4]), &d10.set([6, 9])).unwrap_err(),
            CharacterError::NotClassClosed(5)
        );
    }

    #[test]
    fn eigenvalue_examples() {
        let z9 = make_cyclic(9).unwrap();
        let ev = cayley_eigenvalues(&z9, &z9.set([2, 7])).unwrap();
        for (k, e) in ev.iter().enumerate() {
            assert!((e.value.0 - 2.0 * (TAU * (2 * k) as f64 / 9.0).cos()).abs() < 1e-9);
        }
        let z6 = make_cyclic(6).unwrap();
        let ev = cayley_eigenvalues(&z6, &z6.non_identity()).unwrap();
        assert!((ev[0].value.0 - 5.0).abs() < 1e-9);
        assert!(ev[1..].iter().all(|e| (e.value.0 + 1.0).abs() < 1e-9));

        let d10 = make_dihedral(5).unwrap();
        assert!(spectrum_gap(&d10, &d10.set([1, 4])).unwrap() < CRITERION_TOLERANCE);
        assert!(spectrum_gap(&d10, &d10.set([5, 6, 7, 8, 9])).unwrap() < CRITERION_TOLERANCE);
        let d8 = make_dihedral(4).unwrap();
        assert!(spectrum_gap(&d8, &d8.set([2, 4, 6])).unwrap() < CRITERION_TOLERANCE);
    }

    #[test]
    fn product_tables_are_supported() {
        let g = direct_product(&make_cyclic(2).unwrap(), &make_cyclic(2).unwrap()).unwrap();
        let t = character_table(&g).unwrap();
        assert_eq!(t.len(), 4);
        assert!(t.orthogonality_defect() < 1e-9);
        let table_group = crate::group::from_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert!(matches!(character_table(&table_group), Err(CharacterError::Unsupported(_))));
    }
}
