use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone, PartialEq, Eq)]
#[command(name = "cayley-factor", version, about = "Factorizations of Cayley graph adjacency matrices")]
pub struct Cli {
    #[command(flatten)]
    pub opts: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default, PartialEq, Eq)]
pub struct GlobalOpts {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for searches.
    #[arg(long, global = true, env = "CAYLEY_FACTOR_THREADS")]
    pub threads: Option<usize>,
    /// Node budget for searches.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Upper bound on |S| and |T| in searches.
    #[arg(long = "max-size", global = true)]
    pub max_size: Option<usize>,
    /// Keep only triples whose U generates the group.
    #[arg(long, global = true)]
    pub connected: bool,
    /// Report one triple per automorphism orbit.
    #[arg(long, global = true)]
    pub dedup: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct TripleArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long = "S", allow_hyphen_values = true)]
    pub s: String,
    #[arg(long = "T", allow_hyphen_values = true)]
    pub t: String,
    #[arg(long = "U", allow_hyphen_values = true)]
    pub u: String,
}

#[derive(Args, Debug, Clone, PartialEq, Eq)]
pub struct CyclicTripleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "S", allow_hyphen_values = true)]
    pub s: String,
    #[arg(long = "T", allow_hyphen_values = true)]
    pub t: String,
    #[arg(long = "U", allow_hyphen_values = true)]
    pub u: String,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table1Kind {
    #[value(alias = "1")]
    Multiplier,
    #[value(alias = "2")]
    HalfShift,
    #[value(alias = "3")]
    PmD,
    #[value(alias = "4")]
    IndexSets,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Decide whether (S, T, U) is factorable.
    Verify(TripleArgs),
    /// All factor pairs (S, T) of a given U.
    Search {
        #[arg(long)]
        group: String,
        #[arg(long = "U", allow_hyphen_values = true)]
        u: String,
    },
    /// All factorable triples of a group.
    Enumerate {
        #[arg(long)]
        group: String,
    },
    /// Symmetric near-factorizations ST = G minus the identity.
    Nearfact {
        #[arg(long)]
        group: String,
    },
    /// Whether every sum s + t in Z_n is represented at most once.
    Sidon {
        #[arg(long)]
        n: usize,
        #[arg(long = "S", allow_hyphen_values = true)]
        s: String,
        #[arg(long = "T", allow_hyphen_values = true)]
        t: String,
    },
    /// Mask polynomials of S and T, and their product modulo X^n - 1.
    Mask {
        #[arg(long)]
        n: usize,
        #[arg(long = "S", allow_hyphen_values = true)]
        s: String,
        #[arg(long = "T", allow_hyphen_values = true)]
        t: String,
        #[arg(long = "U", allow_hyphen_values = true)]
        u: Option<String>,
    },
    /// Split a product-form triple of Z_n into prime-power components.
    Crt(CyclicTripleArgs),
    /// Add n/2 to S when n/2 + T misses U.
    Antipode(CyclicTripleArgs),
    /// Instantiate a circulant family.
    Table1 {
        #[arg(long)]
        row: Table1Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        g: Option<usize>,
        #[arg(long = "I", value_delimiter = ',')]
        i: Vec<usize>,
        #[arg(long = "J", value_delimiter = ',')]
        j: Vec<usize>,
        #[arg(long = "S", allow_hyphen_values = true)]
        s: Option<String>,
        #[arg(long = "T", allow_hyphen_values = true)]
        t: Option<String>,
        #[arg(long = "U", allow_hyphen_values = true)]
        u: Option<String>,
    },
    /// Instantiate a dihedral family.
    Table2 {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=8))]
        row: u8,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        u: Option<usize>,
        #[arg(long)]
        a: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        us: Vec<usize>,
    },
    /// Transfer a triple between Z_2n and D_2n for odd n.
    Pecher {
        #[command(flatten)]
        triple: CyclicTripleArgs,
        /// Pull a dihedral triple back to Z_2n.
        #[arg(long)]
        backward: bool,
    },
    /// Character criterion for class-closed triples.
    CharCheck(TripleArgs),
    /// Spectrum of A(G;U) from characters, checked numerically.
    Eigen {
        #[arg(long)]
        group: String,
        #[arg(long = "U", allow_hyphen_values = true)]
        u: String,
    },
    /// Largest d with a symmetric Sidon pair of size d in Z_n.
    Dstar {
        #[arg(long)]
        n: usize,
    },
    /// Automorphism classes of factorable triples, or conjugacy classes.
    Classes {
        #[arg(long)]
        group: String,
        #[arg(long)]
        conjugacy: bool,
    },
}

fn push(out: &mut Vec<String>, flag: &str, value: impl ToString) {
    out.push(format!("--{flag}"));
    out.push(value.to_string());
}

fn push_opt(out: &mut Vec<String>, flag: &str, value: Option<impl ToString>) {
    if let Some(v) = value {
        push(out, flag, v);
    }
}

fn push_list(out: &mut Vec<String>, flag: &str, values: &[usize]) {
    if !values.is_empty() {
        push(out, flag, values.iter().map(usize::to_string).collect::<Vec<_>>().join(","));
    }
}

fn push_flag(out: &mut Vec<String>, flag: &str, on: bool) {
    if on {
        out.push(format!("--{flag}"));
    }
}

impl TripleArgs {
    fn render(&self, out: &mut Vec<String>) {
        push(out, "group", &self.group);
        push(out, "S", &self.s);
        push(out, "T", &self.t);
        push(out, "U", &self.u);
    }
}

impl CyclicTripleArgs {
    fn render(&self, out: &mut Vec<String>) {
        push(out, "n", self.n);
        push(out, "S", &self.s);
        push(out, "T", &self.t);
        push(out, "U", &self.u);
    }
}

impl Cli {
    /// Argument vector that parses back to `self`.
    pub fn to_argv(&self) -> Vec<String> {
        let mut out = vec!["cayley-factor".to_string()];
        let name = match &self.command {
            Command::Verify(_) => "verify",
            Command::Search { .. } => "search",
            Command::Enumerate { .. } => "enumerate",
            Command::Nearfact { .. } => "nearfact",
            Command::Sidon { .. } => "sidon",
            Command::Mask { .. } => "mask",
            Command::Crt(_) => "crt",
            Command::Antipode(_) => "antipode",
            Command::Table1 { .. } => "table1",
            Command::Table2 { .. } => "table2",
            Command::Pecher { .. } => "pecher",
            Command::CharCheck(_) => "char-check",
            Command::Eigen { .. } => "eigen",
            Command::Dstar { .. } => "dstar",
            Command::Classes { .. } => "classes",
        };
        out.push(name.to_string());
        match &self.command {
            Command::Verify(a) | Command::CharCheck(a) => a.render(&mut out),
            Command::Crt(a) | Command::Antipode(a) => a.render(&mut out),
            Command::Search { group, u } | Command::Eigen { group, u } => {
                push(&mut out, "group", group);
                push(&mut out, "U", u);
            }
            Command::Enumerate { group } | Command::Nearfact { group } => push(&mut out, "group", group),
            Command::Sidon { n, s, t } => {
                push(&mut out, "n", n);
                push(&mut out, "S", s);
                push(&mut out, "T", t);
            }
            Command::Mask { n, s, t, u } => {
                push(&mut out, "n", n);
                push(&mut out, "S", s);
                push(&mut out, "T", t);
                push_opt(&mut out, "U", u.as_ref());
            }
            Command::Table1 { row, n, d, g, i, j, s, t, u } => {
                let row = row.to_possible_value().expect("no skipped variants");
                push(&mut out, "row", row.get_name());
                push(&mut out, "n", n);
                push_opt(&mut out, "d", *d);
                push_opt(&mut out, "g", *g);
                push_list(&mut out, "I", i);
                push_list(&mut out, "J", j);
                push_opt(&mut out, "S", s.as_ref());
                push_opt(&mut out, "T", t.as_ref());
                push_opt(&mut out, "U", u.as_ref());
            }
            Command::Table2 { row, n, m, u, a, us } => {
                push(&mut out, "row", row);
                push(&mut out, "n", n);
                push_opt(&mut out, "m", *m);
                push_opt(&mut out, "u", *u);
                push_opt(&mut out, "a", *a);
                push_list(&mut out, "us", us);
            }
            Command::Pecher { triple, backward } => {
                triple.render(&mut out);
                push_flag(&mut out, "backward", *backward);
            }
            Command::Dstar { n } => push(&mut out, "n", n),
            Command::Classes { group, conjugacy } => {
                push(&mut out, "group", group);
                push_flag(&mut out, "conjugacy", *conjugacy);
            }
        }
        let o = &self.opts;
        push_flag(&mut out, "json", o.json);
        push_opt(&mut out, "threads", o.threads);
        push_opt(&mut out, "budget", o.budget);
        push_opt(&mut out, "max-size", o.max_size);
        push_flag(&mut out, "connected", o.connected);
        push_flag(&mut out, "dedup", o.dedup);
        out
    }
}
