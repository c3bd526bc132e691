use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use cayley_factor::characters::{cayley_eigenvalues, criterion_check, spectrum_gap, CRITERION_TOLERANCE};
use cayley_factor::cyclic::{
    antipode_augment, crt_split, dstar, product_form_components, sidon_pair, table1_family, MaskPolynomial,
    Table1Row,
};
use cayley_factor::dihedral::{table2_family, PecherCorrespondence, Table2Row};
use cayley_factor::equivalence::equivalence_classes;
use cayley_factor::factor::{verify_triple, FactorTriple, Violation};
use cayley_factor::group::{make_cyclic, FiniteGroup};
use cayley_factor::notation::{
    element_json, format_element, format_group, format_set, parse_group, parse_set, report_json, report_table,
    set_json, triple_json,
};
use cayley_factor::search::{enumerate_triples, find_factor_pairs, near_factorization_census, SearchOptions};
use cayley_factor::set::ElementSet;
use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{json, Value};

use cayley_factor_cli::args::{Cli, Command, CyclicTripleArgs, GlobalOpts, Table1Kind, TripleArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Ok,
    /// Valid input, but the checked predicate is false.
    False,
    /// A search stopped at its node budget.
    Incomplete(u64),
}

struct Reply {
    text: String,
    json: Value,
    status: Status,
}

impl Reply {
    fn new(text: String, json: Value, holds: bool) -> Self {
        let status = if holds { Status::Ok } else { Status::False };
        Reply { text, json, status }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(reply) => {
            if cli.opts.json {
                println!("{}", serde_json::to_string_pretty(&reply.json).expect("JSON values serialize"));
            } else {
                print!("{}", reply.text);
            }
            match reply.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::False => ExitCode::from(2),
                Status::Incomplete(budget) => {
                    eprintln!("error: node budget of {budget} exhausted before the search finished; results are partial");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn search_options(o: &GlobalOpts) -> SearchOptions {
    SearchOptions {
        max_set_size: o.max_size,
        require_connected: o.connected,
        dedup: o.dedup,
        threads: o.threads,
        node_budget: o.budget,
        audit_prunes: false,
    }
}

fn group(lit: &str) -> Result<FiniteGroup> {
    parse_group(lit).with_context(|| format!("bad group `{lit}`"))
}

fn set(g: &FiniteGroup, role: &str, lit: &str) -> Result<ElementSet> {
    parse_set(g, lit).with_context(|| format!("bad set literal for {role}: `{lit}`"))
}

fn sets(g: &FiniteGroup, s: &str, t: &str, u: &str) -> Result<(ElementSet, ElementSet, ElementSet)> {
    Ok((set(g, "S", s)?, set(g, "T", t)?, set(g, "U", u)?))
}

fn cyclic_triple(a: &CyclicTripleArgs) -> Result<FactorTriple> {
    let g = make_cyclic(a.n)?;
    let (s, t, u) = sets(&g, &a.s, &a.t, &a.u)?;
    Ok(FactorTriple::new(&g, s, t, u))
}

fn describe(g: &FiniteGroup, v: &Violation) -> String {
    let el = |x: usize| format_element(g, x);
    match *v {
        Violation::WrongUniverse(role) => format!("{} ({role} is over a different universe)", v.kind()),
        Violation::NotSymmetric { set, element } => {
            format!("{} ({set} lacks the inverse of {})", v.kind(), el(element))
        }
        Violation::ContainsIdentity(role) => format!("{} ({role})", v.kind()),
        Violation::IdentityInProduct => v.kind().to_string(),
        Violation::RepeatedProduct { element, count } => {
            format!("{} ({} has {count} representations)", v.kind(), el(element))
        }
        Violation::MissingProduct { element } | Violation::UnexpectedProduct { element } => {
            format!("{} ({})", v.kind(), el(element))
        }
    }
}

fn violation_json(g: &FiniteGroup, v: &Violation) -> Value {
    json!({
        "kind": v.kind(),
        "element": v.element().map(|x| element_json(g, x)),
        "message": describe(g, v),
    })
}

fn triple_text(t: &FactorTriple) -> String {
    let g = t.group();
    format!(
        "group: {}\nS: {}\nT: {}\nU: {}\nverified: {}\n",
        g,
        format_set(g, t.s()),
        format_set(g, t.t()),
        format_set(g, t.u()),
        t.is_verified()
    )
}

fn verified_reply(t: &FactorTriple) -> Reply {
    Reply::new(triple_text(t), triple_json(t), t.is_verified())
}

fn search_reply(report: cayley_factor::search::SearchReport, budget: Option<u64>) -> Reply {
    let mut text = format!(
        "group: {}\ncount: {}\nexhaustive: {}\n",
        report.group,
        report.triples.len(),
        report.exhaustive
    );
    if let Some(orbits) = report.orbits {
        let _ = writeln!(text, "orbits: {orbits}");
    }
    if !report.triples.is_empty() {
        text.push_str(&report_table(&report));
    }
    let status = match (report.exhaustive, budget) {
        (false, Some(b)) => Status::Incomplete(b),
        _ => Status::Ok,
    };
    Reply {
        text,
        json: report_json(&report),
        status,
    }
}

/// Rounds away floating noise so printed numbers are stable.
fn tidy(x: f64) -> f64 {
    (x * 1e9).round() / 1e9 + 0.0
}

fn complex_text((re, im): (f64, f64)) -> String {
    let (re, im) = (tidy(re), tidy(im));
    if im.abs() < 5e-7 {
        format!("{re:.6}")
    } else {
        let sign = if im < 0.0 { '-' } else { '+' };
        format!("{re:.6}{sign}{:.6}i", im.abs())
    }
}

fn complex_json((re, im): (f64, f64)) -> Value {
    json!([tidy(re), tidy(im)])
}

fn run(cli: &Cli) -> Result<Reply> {
    let opts = search_options(&cli.opts);
    match &cli.command {
        Command::Verify(a) => verify(a),
        Command::Search { group: gl, u } => {
            let g = group(gl)?;
            let u = set(&g, "U", u)?;
            Ok(search_reply(find_factor_pairs(&g, &u, &opts)?, opts.node_budget))
        }
        Command::Enumerate { group: gl } => {
            Ok(search_reply(enumerate_triples(&group(gl)?, &opts)?, opts.node_budget))
        }
        Command::Nearfact { group: gl } => Ok(search_reply(
            near_factorization_census(&group(gl)?, &opts)?,
            opts.node_budget,
        )),
        Command::Sidon { n, s, t } => {
            let g = make_cyclic(*n)?;
            let (s, t) = (set(&g, "S", s)?, set(&g, "T", t)?);
            let holds = sidon_pair(*n, &s, &t)?;
            let text = format!(
                "group: {g}\nS: {}\nT: {}\nsidon: {holds}\n",
                format_set(&g, &s),
                format_set(&g, &t)
            );
            let json = json!({"group": format_group(&g), "S": set_json(&g, &s), "T": set_json(&g, &t), "sidon": holds});
            Ok(Reply::new(text, json, holds))
        }
        Command::Mask { n, s, t, u } => mask(*n, s, t, u.as_deref()),
        Command::Crt(a) => crt(a),
        Command::Antipode(a) => {
            let base = cyclic_triple(a)?;
            let (s, t, u) = base.sets();
            match antipode_augment(a.n, s, t, u)? {
                Some(aug) => Ok(verified_reply(&aug)),
                None => {
                    let text = format!("antipode: not applicable, {} + T meets U\n", a.n / 2);
                    let json = json!({"group": format_group(base.group()), "applicable": false});
                    Ok(Reply::new(text, json, false))
                }
            }
        }
        Command::Table1 {
            row,
            n,
            d,
            g: mult,
            i,
            j,
            s,
            t,
            u,
        } => {
            let need = |name: &str, v: Option<usize>| v.ok_or_else(|| anyhow!("this row needs --{name}"));
            let row = match row {
                Table1Kind::Multiplier => {
                    let (Some(s), Some(t), Some(u)) = (s, t, u) else {
                        bail!("the multiplier row needs a base triple via --S, --T and --U");
                    };
                    let base = cyclic_triple(&CyclicTripleArgs {
                        n: *n,
                        s: s.clone(),
                        t: t.clone(),
                        u: u.clone(),
                    })?;
                    Table1Row::Multiplier {
                        g: need("g", *mult)?,
                        base,
                    }
                }
                Table1Kind::HalfShift => {
                    let u = u.as_deref().ok_or_else(|| anyhow!("the half-shift row needs --U"))?;
                    Table1Row::HalfShift {
                        n: *n,
                        u: set(&make_cyclic(*n)?, "U", u)?,
                    }
                }
                Table1Kind::PmD => Table1Row::PmD { n: *n, d: need("d", *d)? },
                Table1Kind::IndexSets => {
                    if i.is_empty() || j.is_empty() {
                        bail!("the index-sets row needs --I and --J");
                    }
                    Table1Row::IndexSets {
                        n: *n,
                        i: i.clone(),
                        j: j.clone(),
                    }
                }
            };
            Ok(verified_reply(&table1_family(&row)?))
        }
        Command::Table2 { row, n, m, u, a, us } => {
            let need = |name: &str, v: Option<usize>| v.ok_or_else(|| anyhow!("row {row} needs --{name}"));
            let row = match row {
                1 => Table2Row::One,
                2 => Table2Row::Two,
                3 => Table2Row::Three,
                4 => Table2Row::Four {
                    m: need("m", *m)?,
                    u: need("u", *u)?,
                },
                5 => Table2Row::Five,
                6 => Table2Row::Six,
                7 => Table2Row::Seven {
                    a: need("a", *a)?,
                    u: need("u", *u)?,
                },
                8 => {
                    if us.is_empty() {
                        bail!("row 8 needs --us");
                    }
                    Table2Row::Eight {
                        a: need("a", *a)?,
                        m: need("m", *m)?,
                        us: us.clone(),
                    }
                }
                other => bail!("no table row {other}"),
            };
            Ok(verified_reply(&table2_family(*n, &row)?))
        }
        Command::Pecher { triple, backward } => {
            let p = PecherCorrespondence::new(triple.n)?;
            let (from, to) = if *backward {
                let g = p.dihedral();
                let (s, t, u) = sets(g, &triple.s, &triple.t, &triple.u)?;
                let from = FactorTriple::new(g, s, t, u);
                let to = p.transfer_backward(&from)?;
                (from, to)
            } else {
                let g = p.cyclic();
                let (s, t, u) = sets(g, &triple.s, &triple.t, &triple.u)?;
                let from = FactorTriple::new(g, s, t, u);
                let to = p.transfer_forward(&from)?;
                (from, to)
            };
            let text = format!("from\n{}to\n{}", triple_text(&from), triple_text(&to));
            let json = json!({"from": triple_json(&from), "to": triple_json(&to)});
            Ok(Reply::new(text, json, true))
        }
        Command::CharCheck(a) => char_check(a),
        Command::Eigen { group: gl, u } => eigen(gl, u),
        Command::Dstar { n } => {
            let d = dstar(*n, opts.node_budget)?;
            let g = make_cyclic(*n)?;
            let text = format!(
                "d*(Z_{n}) = {}\nS: {}\nT: {}\nnodes: {}\n",
                d.value,
                format_set(&g, &d.s),
                format_set(&g, &d.t),
                d.nodes
            );
            let json = json!({
                "n": n,
                "value": d.value,
                "S": set_json(&g, &d.s),
                "T": set_json(&g, &d.t),
                "nodes": d.nodes,
            });
            Ok(Reply::new(text, json, true))
        }
        Command::Classes { group: gl, conjugacy } => {
            let g = group(gl)?;
            if *conjugacy {
                conjugacy_classes(&g)
            } else {
                triple_classes(&g, &opts)
            }
        }
    }
}

fn verify(a: &TripleArgs) -> Result<Reply> {
    let g = group(&a.group)?;
    let (s, t, u) = sets(&g, &a.s, &a.t, &a.u)?;
    let report = verify_triple(&g, &s, &t, &u);
    let triple = FactorTriple::new(&g, s, t, u);
    let mut text = triple_text(&triple);
    let mut json = triple_json(&triple);
    if let Some(v) = &report.violation {
        let _ = writeln!(text, "violation: {}", describe(&g, v));
        json["violation"] = violation_json(&g, v);
    }
    Ok(Reply::new(text, json, report.verified))
}

fn mask(n: usize, s: &str, t: &str, u: Option<&str>) -> Result<Reply> {
    let g = make_cyclic(n)?;
    let (s, t) = (set(&g, "S", s)?, set(&g, "T", t)?);
    let (fs, ft) = (MaskPolynomial::of_set(n, &s), MaskPolynomial::of_set(n, &t));
    let product = fs
        .checked_mul(&ft)
        .ok_or_else(|| anyhow!("coefficient overflow multiplying mask polynomials"))?;
    let mut text = format!("F_S = {fs}\nF_T = {ft}\nF_S F_T = {product}\n");
    let mut json = json!({
        "n": n,
        "F_S": fs.to_string(),
        "F_T": ft.to_string(),
        "product": product.to_string(),
        "product_set": product.as_set().map(|x| set_json(&g, &x)),
    });
    let mut holds = true;
    if let Some(u) = u {
        let fu = MaskPolynomial::of_set(n, &set(&g, "U", u)?);
        holds = fu == product;
        let _ = write!(text, "F_U = {fu}\nF_U = F_S F_T: {holds}\n");
        json["F_U"] = json!(fu.to_string());
        json["equal"] = json!(holds);
    }
    Ok(Reply::new(text, json, holds))
}

fn crt(a: &CyclicTripleArgs) -> Result<Reply> {
    let triple = cyclic_triple(a)?;
    let iso = crt_split(a.n)?;
    let (s, t, u) = triple.sets();
    let parts = [s, t, u].map(|x| product_form_components(a.n, x));
    let mut text = format!(
        "moduli: {}\n",
        iso.moduli().iter().map(usize::to_string).collect::<Vec<_>>().join(", ")
    );
    let mut json = json!({
        "triple": triple_json(&triple),
        "moduli": iso.moduli(),
    });
    let [Some(ps), Some(pt), Some(pu)] = parts else {
        text.push_str("product form: false\n");
        json["product_form"] = json!(false);
        return Ok(Reply::new(text, json, false));
    };
    let mut components = Vec::new();
    for (k, &m) in iso.moduli().iter().enumerate() {
        let c = FactorTriple::new(&make_cyclic(m)?, ps[k].clone(), pt[k].clone(), pu[k].clone());
        let _ = writeln!(
            text,
            "Z_{m}: S {} T {} U {} verified: {}",
            format_set(c.group(), c.s()),
            format_set(c.group(), c.t()),
            format_set(c.group(), c.u()),
            c.is_verified()
        );
        components.push(triple_json(&c));
    }
    let _ = writeln!(text, "verified: {}", triple.is_verified());
    json["product_form"] = json!(true);
    json["components"] = Value::Array(components);
    Ok(Reply::new(text, json, triple.is_verified()))
}

fn char_check(a: &TripleArgs) -> Result<Reply> {
    let g = group(&a.group)?;
    let (s, t, u) = sets(&g, &a.s, &a.t, &a.u)?;
    let report = criterion_check(&g, &s, &t, &u)?;
    let mut text = format!("group: {g}\ncharacter  degree  chi(S)  chi(T)  chi(U)  residual\n");
    for r in &report.rows {
        let _ = writeln!(
            text,
            "{}  {}  {}  {}  {}  {:.3e}",
            r.label,
            r.degree,
            complex_text(r.chi_s),
            complex_text(r.chi_t),
            complex_text(r.chi_u),
            tidy(r.residual)
        );
    }
    let _ = writeln!(text, "criterion holds: {} (tolerance {CRITERION_TOLERANCE:e})", report.holds);
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "character": r.label,
                "degree": r.degree,
                "chi_S": complex_json(r.chi_s),
                "chi_T": complex_json(r.chi_t),
                "chi_U": complex_json(r.chi_u),
                "residual": tidy(r.residual),
            })
        })
        .collect();
    let json = json!({
        "group": format_group(&g),
        "holds": report.holds,
        "tolerance": report.tolerance,
        "rows": rows,
    });
    Ok(Reply::new(text, json, report.holds))
}

fn eigen(gl: &str, u: &str) -> Result<Reply> {
    let g = group(gl)?;
    let u = set(&g, "U", u)?;
    let eigen = cayley_eigenvalues(&g, &u)?;
    let gap = if g.is_symmetric(&u) {
        Some(spectrum_gap(&g, &u)?)
    } else {
        None
    };
    let mut text = format!("group: {g}\nU: {}\ncharacter  eigenvalue  multiplicity\n", format_set(&g, &u));
    for e in &eigen {
        let _ = writeln!(text, "{}  {}  {}", e.character, complex_text(e.value), e.multiplicity);
    }
    if let Some(gap) = gap {
        let _ = writeln!(text, "agrees with numeric spectrum: {}", gap <= CRITERION_TOLERANCE);
    }
    let rows: Vec<Value> = eigen
        .iter()
        .map(|e| json!({"character": e.character, "value": complex_json(e.value), "multiplicity": e.multiplicity}))
        .collect();
    let json = json!({
        "group": format_group(&g),
        "U": set_json(&g, &u),
        "eigenvalues": rows,
        "agrees_with_numeric": gap.map(|x| x <= CRITERION_TOLERANCE),
    });
    Ok(Reply::new(text, json, gap.is_none_or(|x| x <= CRITERION_TOLERANCE)))
}

fn conjugacy_classes(g: &FiniteGroup) -> Result<Reply> {
    let classes: Vec<ElementSet> = g.conjugacy_classes().iter().map(|c| g.set(c.iter().copied())).collect();
    let mut text = format!("group: {g}\nclasses: {}\n", classes.len());
    for c in &classes {
        let _ = writeln!(text, "{}", format_set(g, c));
    }
    let json = json!({
        "group": format_group(g),
        "classes": classes.iter().map(|c| set_json(g, c)).collect::<Vec<_>>(),
    });
    Ok(Reply::new(text, json, true))
}

fn triple_classes(g: &FiniteGroup, opts: &SearchOptions) -> Result<Reply> {
    let report = enumerate_triples(
        g,
        &SearchOptions {
            dedup: false,
            ..opts.clone()
        },
    )?;
    if !report.exhaustive {
        bail!(
            "node budget of {} exhausted before all triples were found; classes would be incomplete",
            opts.node_budget.unwrap_or_default()
        );
    }
    let classes = equivalence_classes(&report.triples).context("automorphism classes")?;
    let mut text = format!("group: {g}\ntriples: {}\nclasses: {}\n", report.triples.len(), classes.len());
    let mut out = Vec::new();
    for class in &classes {
        let rep = &class[0];
        let _ = writeln!(
            text,
            "size {}: S {} T {} U {}",
            class.len(),
            format_set(g, rep.s()),
            format_set(g, rep.t()),
            format_set(g, rep.u())
        );
        out.push(json!({
            "size": class.len(),
            "representative": triple_json(rep),
            "members": class.iter().map(triple_json).collect::<Vec<_>>(),
        }));
    }
    let json = json!({
        "group": format_group(g),
        "triples": report.triples.len(),
        "classes": out,
    });
    Ok(Reply::new(text, json, true))
}
