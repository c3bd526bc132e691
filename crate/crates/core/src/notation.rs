//! Text and JSON notation for groups, elements, sets and triples.
//!
//! Groups: `cyclic:N` or `Z_N`, `dihedral:N` (the group `D_{2N}`) or
//! `D_{2N}`, products joined by `x` (`Z_2 x Z_4`), or a JSON descriptor.
//! Elements: residues for cyclic groups (negative values wrap), `e`, `r`,
//! `r^j`, `s`, `sr`, `sr^j`, `r^j s` for dihedral groups, parenthesized
//! tuples for products, and plain indices for table groups.

use serde_json::{json, Value};
use thiserror::Error;

use crate::factor::FactorTriple;
use crate::group::{make_cyclic, make_dihedral, product_coordinates, product_index, product_of};
use crate::group::{FiniteGroup, GroupDescriptor, GroupError, GroupTag};
use crate::search::SearchReport;
use crate::set::ElementSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotationError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("unknown group `{0}`; expected cyclic:N, dihedral:N, Z_N, D_2N, a product joined by x, or JSON")]
    UnknownGroup(String),
    #[error("invalid group JSON: {0}")]
    GroupJson(String),
    #[error("`{0}` is not an integer")]
    BadNumber(String),
    #[error("element `{lit}` is out of range for a group of order {order}")]
    OutOfRange { lit: String, order: usize },
    #[error("`{lit}` is not an element of {group}")]
    BadElement { lit: String, group: String },
    #[error("tuple `{lit}` needs {arity} components")]
    BadTuple { lit: String, arity: usize },
    #[error("unbalanced parentheses in `{0}`")]
    Unbalanced(String),
}

fn parse_int(s: &str) -> Result<i64, NotationError> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| NotationError::BadNumber(s.trim().to_string()))
}

/// Splits on commas at parenthesis depth zero.
fn split_top(s: &str) -> Result<Vec<&str>, NotationError> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(NotationError::Unbalanced(s.to_string()));
                }
            }
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(NotationError::Unbalanced(s.to_string()));
    }
    parts.push(&s[start..]);
    Ok(parts)
}

fn parse_factor(s: &str) -> Result<FiniteGroup, NotationError> {
    let t = s.trim();
    let unknown = || NotationError::UnknownGroup(t.to_string());
    let num = |x: &str| {
        x.trim_matches(|c| c == '{' || c == '}')
            .parse::<usize>()
            .map_err(|_| unknown())
    };
    if let Some(n) = t.strip_prefix("cyclic:") {
        return Ok(make_cyclic(num(n)?)?);
    }
    if let Some(n) = t.strip_prefix("dihedral:") {
        return Ok(make_dihedral(num(n)?)?);
    }
    if let Some(n) = t.strip_prefix("Z_").or_else(|| t.strip_prefix('Z')) {
        return Ok(make_cyclic(num(n)?)?);
    }
    if let Some(n) = t.strip_prefix("D_").or_else(|| t.strip_prefix('D')) {
        let order = num(n)?;
        if order == 0 || order % 2 == 1 {
            return Err(unknown());
        }
        return Ok(make_dihedral(order / 2)?);
    }
    Err(unknown())
}

pub fn parse_group(s: &str) -> Result<FiniteGroup, NotationError> {
    let t = s.trim();
    if t.starts_with('{') && t.contains("\"kind\"") {
        let desc: GroupDescriptor =
            serde_json::from_str(t).map_err(|e| NotationError::GroupJson(e.to_string()))?;
        return Ok(FiniteGroup::from_descriptor(&desc)?);
    }
    let parts: Vec<FiniteGroup> = t.split('x').map(parse_factor).collect::<Result<_, _>>()?;
    if parts.len() == 1 {
        return Ok(parts.into_iter().next().expect("one part"));
    }
    Ok(product_of(&parts)?)
}

/// Short form that [`parse_group`] reads back; table groups use JSON.
pub fn format_group(g: &FiniteGroup) -> String {
    match g.tag() {
        GroupTag::Table => serde_json::to_string(&g.descriptor()).expect("descriptor serializes"),
        _ => g.to_string(),
    }
}

fn reduce(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

fn parse_exponent(s: &str, n: usize) -> Result<usize, NotationError> {
    if s.is_empty() {
        return Ok(1 % n);
    }
    let e = s.strip_prefix('^').ok_or_else(|| NotationError::BadNumber(s.to_string()))?;
    let e = e.trim_matches(|c| c == '{' || c == '}');
    Ok(reduce(parse_int(e)?, n))
}

fn parse_dihedral(n: usize, lit: &str) -> Option<usize> {
    let t: String = lit.chars().filter(|c| !c.is_whitespace()).collect();
    if t == "e" || t == "1" {
        return Some(0);
    }
    if let Some(rest) = t.strip_prefix('s') {
        if rest.is_empty() {
            return Some(n);
        }
        let rest = rest.strip_prefix('r')?;
        return parse_exponent(rest, n).ok().map(|j| n + j);
    }
    let rest = t.strip_prefix('r')?;
    // r^j s = s r^{-j}
    if let Some(exp) = rest.strip_suffix('s') {
        return parse_exponent(exp, n).ok().map(|j| n + (n - j) % n);
    }
    parse_exponent(rest, n).ok()
}

pub fn parse_element(g: &FiniteGroup, lit: &str) -> Result<usize, NotationError> {
    let t = lit.trim();
    let bad = || NotationError::BadElement {
        lit: t.to_string(),
        group: g.to_string(),
    };
    match g.tag() {
        GroupTag::Cyclic(n) => {
            let k = parse_int(t)?;
            if k.unsigned_abs() as usize >= *n {
                return Err(NotationError::OutOfRange {
                    lit: t.to_string(),
                    order: *n,
                });
            }
            Ok(reduce(k, *n))
        }
        GroupTag::Dihedral(n) => parse_dihedral(*n, t).ok_or_else(bad),
        GroupTag::Product(parts) => {
            let inner = t
                .strip_prefix('(')
                .and_then(|x| x.strip_suffix(')'))
                .ok_or_else(|| NotationError::BadTuple {
                    lit: t.to_string(),
                    arity: parts.len(),
                })?;
            let items = split_top(inner)?;
            if items.len() != parts.len() {
                return Err(NotationError::BadTuple {
                    lit: t.to_string(),
                    arity: parts.len(),
                });
            }
            let coords = items
                .iter()
                .zip(parts)
                .map(|(x, p)| parse_element(p, x))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(product_index(parts, &coords))
        }
        GroupTag::Table => {
            let k = parse_int(t)?;
            if k < 0 || k as usize >= g.order() {
                return Err(NotationError::OutOfRange {
                    lit: t.to_string(),
                    order: g.order(),
                });
            }
            Ok(k as usize)
        }
    }
}

pub fn format_element(g: &FiniteGroup, x: usize) -> String {
    match g.tag() {
        GroupTag::Cyclic(_) | GroupTag::Table => x.to_string(),
        GroupTag::Dihedral(n) => {
            let (i, j) = (x / n, x % n);
            match (i, j) {
                (0, 0) => "e".into(),
                (0, 1) => "r".into(),
                (0, j) => format!("r^{j}"),
                (_, 0) => "s".into(),
                (_, 1) => "sr".into(),
                (_, j) => format!("sr^{j}"),
            }
        }
        GroupTag::Product(parts) => {
            let items: Vec<String> = product_coordinates(parts, x)
                .into_iter()
                .zip(parts)
                .map(|(c, p)| format_element(p, c))
                .collect();
            format!("({})", items.join(","))
        }
    }
}

/// Comma-separated element literals; braces are optional and an empty
/// literal is the empty set.
pub fn parse_set(g: &FiniteGroup, lit: &str) -> Result<ElementSet, NotationError> {
    let t = lit.trim();
    let t = t
        .strip_prefix('{')
        .and_then(|x| x.strip_suffix('}'))
        .unwrap_or(t)
        .trim();
    let mut out = g.empty_set();
    if t.is_empty() {
        return Ok(out);
    }
    for item in split_top(t)? {
        out.insert(parse_element(g, item)?);
    }
    Ok(out)
}

pub fn format_set(g: &FiniteGroup, x: &ElementSet) -> String {
    let items: Vec<String> = x.iter().map(|e| format_element(g, e)).collect();
    format!("{{{}}}", items.join(", "))
}

/// Literal accepted by [`parse_set`], without braces or spaces.
pub fn set_literal(g: &FiniteGroup, x: &ElementSet) -> String {
    x.iter().map(|e| format_element(g, e)).collect::<Vec<_>>().join(",")
}

pub fn element_json(g: &FiniteGroup, x: usize) -> Value {
    match g.tag() {
        GroupTag::Cyclic(_) | GroupTag::Table => json!(x),
        _ => json!(format_element(g, x)),
    }
}

pub fn set_json(g: &FiniteGroup, x: &ElementSet) -> Value {
    Value::Array(x.iter().map(|e| element_json(g, e)).collect())
}

pub fn triple_json(t: &FactorTriple) -> Value {
    let g = t.group();
    json!({
        "group": format_group(g),
        "S": set_json(g, t.s()),
        "T": set_json(g, t.t()),
        "U": set_json(g, t.u()),
        "verified": t.is_verified(),
    })
}

pub fn report_json(r: &SearchReport) -> Value {
    json!({
        "group": format_group(&r.group),
        "exhaustive": r.exhaustive,
        "count": r.triples.len(),
        "orbits": r.orbits,
        "stats": r.stats,
        "triples": r.triples.iter().map(triple_json).collect::<Vec<_>>(),
    })
}

/// Fixed-width text table of a search report.
pub fn report_table(r: &SearchReport) -> String {
    let g = &r.group;
    let rows: Vec<[String; 3]> = r
        .triples
        .iter()
        .map(|t| [format_set(g, t.s()), format_set(g, t.t()), format_set(g, t.u())])
        .collect();
    let width = |i: usize, head: &str| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0).max(head.len());
    let (ws, wt) = (width(0, "S"), width(1, "T"));
    let mut out = format!("{:<ws$}  {:<wt$}  U\n", "S", "T");
    for [s, t, u] in &rows {
        out.push_str(&format!("{s:<ws$}  {t:<wt$}  {u}\n"));
    }
    out
}
