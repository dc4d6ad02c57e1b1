use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::{json, Value};

use wreath_vertex::fock::n_quotient;
use wreath_vertex::gerbe::{verify_theorem2, LocalGerbe};
use wreath_vertex::hurwitz::{burnside, check_appendix, check_degeneration, check_orthogonality, check_relations, h_tilde, phi_matrix, Relation};
use wreath_vertex::loop_schur::{diagram_schur, verify_strip_theorems};
use wreath_vertex::report::Report;
use wreath_vertex::series::parse_ratio;
use wreath_vertex::vertex::{check_reduction, dt_family, gw_family, Identity};
use wreath_vertex::wreath_char::char_table;
use wreath_vertex::{MultiPartition, Partition};

#[derive(Parser)]
#[command(name = "wreath-vertex", version, about = "Orbifold topological vertex computations and identity checks over Q(zeta)")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Order {
    /// Truncation order (total degree).
    #[arg(long, env = "WREATH_ORDER", default_value_t = 6, value_parser = clap::value_parser!(i64).range(1..))]
    order: i64,
}

#[derive(Subcommand)]
enum Command {
    /// Character table of Z_n wr S_d.
    Chartable {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
    },
    /// Principal specialization of a loop Schur function (optionally k-shifted).
    Schur {
        #[arg(long)]
        n: u32,
        /// Diagram colored by content mod n, e.g. 4,3,3,1.
        #[arg(long)]
        shape: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        k: i64,
        #[command(flatten)]
        order: Order,
    },
    /// Framed vertex family on one side.
    Vertex {
        #[arg(long, value_enum)]
        side: SideArg,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        /// Framing p/q with n*a integral.
        #[arg(long, default_value = "0", value_parser = ratio, allow_hyphen_values = true)]
        a: Rational64,
        #[command(flatten)]
        order: Order,
    },
    /// Wreath Hurwitz generating function H(nu, mu), or its rescaled form at framing --a.
    Hurwitz {
        #[arg(long)]
        nu: String,
        #[arg(long)]
        mu: String,
        #[arg(long, value_parser = ratio, allow_hyphen_values = true)]
        a: Option<Rational64>,
        #[command(flatten)]
        order: Order,
    },
    /// GW and DT potentials of the local gerbe X_{k,b} in degree d.
    Gerbe(GerbeArgs),
    /// Verification suites; exit status 1 if any check fails.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Args, Clone)]
struct GerbeArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    k: u32,
    #[arg(long, value_parser = ratio, allow_hyphen_values = true)]
    b: Rational64,
    #[arg(long)]
    degree: u32,
    #[command(flatten)]
    order: Order,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Gw,
    Dt,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichIdentity {
    #[value(name = "I")]
    I,
    #[value(name = "II")]
    Ii,
    #[value(name = "III")]
    Iii,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichRelation {
    R1,
    R2,
    Framing,
    Degeneration,
    Orthogonality,
}

#[derive(Subcommand)]
enum Suite {
    /// One of the reduction identities I, II, III for all instances of size d.
    Reduction {
        #[arg(long, value_enum)]
        which: WhichIdentity,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        order: Order,
    },
    /// Relations between the GW vertex and Hurwitz generating functions.
    Relations {
        #[arg(long, value_enum)]
        which: WhichRelation,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        /// Framing for R1 and framing; defaults to 1/n.
        #[arg(long, value_parser = ratio, allow_hyphen_values = true)]
        a: Option<Rational64>,
        #[command(flatten)]
        order: Order,
    },
    /// Block structure and leading determinants of the invertibility matrix, plus the
    /// linear system it solves.
    Appendix {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[command(flatten)]
        order: Order,
    },
    /// Reduction identities I-III for all n <= max-n, d <= max-d.
    Theorem1 {
        #[arg(long, default_value_t = 2)]
        max_n: u32,
        #[arg(long, default_value_t = 2)]
        max_d: u32,
        #[command(flatten)]
        order: Order,
    },
    /// GW = DT for one local gerbe.
    Theorem2(GerbeArgs),
    /// Border-strip identities for every lambda with |lambda| <= d, strips of length l*n, all k.
    Strips {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long, default_value_t = 2)]
        max_l: u32,
        #[command(flatten)]
        order: Order,
    },
    /// Every suite at desk scale.
    All {
        #[arg(long, default_value_t = 2)]
        max_n: u32,
        #[arg(long, default_value_t = 2)]
        max_d: u32,
        #[command(flatten)]
        order: Order,
    },
}

fn ratio(s: &str) -> Result<Rational64, String> {
    parse_ratio(s).map_err(|e| e.to_string())
}

type Res<T> = Result<T, wreath_vertex::Error>;

fn mp(s: &str) -> Res<MultiPartition> {
    s.parse()
}

fn verdict(command: &str, reports: Vec<Report>) -> (Value, bool) {
    let pass = reports.iter().all(Report::passed);
    for r in &reports {
        if !r.passed() {
            eprintln!("{r}");
        }
    }
    let v = json!({
        "command": command,
        "pass": pass,
        "reports": reports.iter().map(Report::to_json).collect::<Vec<_>>(),
    });
    (v, pass)
}

fn strips(n: u32, d: u32, max_l: u32, order: i64) -> Res<Report> {
    let mut rep = Report::new(format!("strips n={n}"));
    for e in 0..=d {
        for lam in MultiPartition::all(n, e) {
            for l in 1..=max_l {
                for k in 0..n as i64 {
                    rep.merge(verify_strip_theorems(&lam, l, k, order)?);
                }
            }
        }
    }
    Ok(rep)
}

fn reductions(max_n: u32, max_d: u32, order: i64) -> Res<Vec<Report>> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for d in 1..=max_d {
            for w in [Identity::I, Identity::II, Identity::III] {
                let mut r = check_reduction(w, n, d, order)?;
                r.name = format!("{} n={n} d={d}", r.name);
                out.push(r);
            }
        }
    }
    Ok(out)
}

fn relations(which: WhichRelation, n: u32, d: u32, a: Option<Rational64>, order: i64) -> Res<Report> {
    let a = a.unwrap_or(Rational64::new(1, n as i64));
    let mut r = match which {
        WhichRelation::R1 => check_relations(Relation::R1, n, d, a, order)?,
        WhichRelation::R2 => check_relations(Relation::R2, n, d, a, order)?,
        WhichRelation::Framing => check_relations(Relation::Framing, n, d, a, order)?,
        WhichRelation::Degeneration => check_degeneration(n, d, order)?,
        WhichRelation::Orthogonality => check_orthogonality(n, d)?,
    };
    r.name = match which {
        WhichRelation::R1 | WhichRelation::Framing => format!("{} n={n} d={d} a={a}", r.name),
        _ => format!("{} n={n} d={d}", r.name),
    };
    Ok(r)
}

fn appendix(n: u32, d: u32, order: i64) -> Res<Vec<Report>> {
    let (mut structure, _) = check_appendix(n, d, order)?;
    structure.name = format!("{} n={n} d={d}", structure.name);
    let mut system = phi_matrix(n, d, order)?.check_system(order)?;
    system.name = format!("{} n={n} d={d}", system.name);
    Ok(vec![structure, system])
}

fn gerbe(g: &GerbeArgs) -> Res<(Value, bool)> {
    let x = LocalGerbe::new(g.n, g.k, g.b)?;
    let p = verify_theorem2(&x, g.degree, g.order.order)?;
    if !p.equal() {
        eprintln!("{}", p.report);
    }
    Ok((p.to_json(), p.equal()))
}

/// Gerbes exercised by `verify all` for a given `n`.
fn sample_gerbes(n: u32) -> Vec<(u32, Rational64)> {
    let mut out = vec![(0, Rational64::from_integer(-1))];
    if n > 1 {
        out.push((1, Rational64::new(-1, n as i64)));
    }
    out
}

fn run(cli: &Cli) -> Res<(Value, bool)> {
    Ok(match &cli.command {
        Command::Chartable { n, d } => (char_table(*n, *d)?.to_json(), true),
        Command::Schur { n, shape, k, order } => {
            let p: Partition = shape.parse()?;
            // the quotient label only exists for balanced diagrams
            let lam = n_quotient(&p, *n).ok();
            let s = diagram_schur(&p, *n, *k, order.order)?;
            let v = json!({
                "n": n,
                "shape": p.to_string(),
                "quotient": lam.map(|l| l.to_string()),
                "k": k,
                "series": s.to_json(),
            });
            (v, true)
        }
        Command::Vertex { side, n, d, a, order } => {
            let fam = match side {
                SideArg::Gw => gw_family(*n, *d, *a, order.order)?,
                SideArg::Dt => dt_family(*n, *d, *a, order.order)?,
            };
            (fam.to_json(), true)
        }
        Command::Hurwitz { nu, mu, a, order } => {
            let (nu, mu) = (mp(nu)?, mp(mu)?);
            let h = match a {
                Some(a) => h_tilde(&nu, &mu, *a, order.order)?,
                None => burnside(&nu, &mu, order.order)?,
            };
            let mut v = h.to_json();
            v["a"] = a.map_or(Value::Null, |a| Value::String(a.to_string()));
            (v, true)
        }
        Command::Gerbe(g) => gerbe(g)?,
        Command::Verify { suite } => match suite {
            Suite::Reduction { which, n, d, order } => {
                let w = match which {
                    WhichIdentity::I => Identity::I,
                    WhichIdentity::Ii => Identity::II,
                    WhichIdentity::Iii => Identity::III,
                };
                verdict("verify reduction", vec![check_reduction(w, *n, *d, order.order)?])
            }
            Suite::Relations { which, n, d, a, order } => {
                verdict("verify relations", vec![relations(*which, *n, *d, *a, order.order)?])
            }
            Suite::Appendix { n, d, order } => verdict("verify appendix", appendix(*n, *d, order.order)?),
            Suite::Theorem1 { max_n, max_d, order } => {
                verdict("verify theorem1", reductions(*max_n, *max_d, order.order)?)
            }
            Suite::Theorem2(g) => {
                let (mut v, pass) = gerbe(g)?;
                v["command"] = json!("verify theorem2");
                v["pass"] = json!(pass);
                (v, pass)
            }
            Suite::Strips { n, d, max_l, order } => {
                verdict("verify strips", vec![strips(*n, *d, *max_l, order.order)?])
            }
            Suite::All { max_n, max_d, order } => {
                let o = order.order;
                let mut reps = Vec::new();
                for n in 1..=*max_n {
                    reps.push(strips(n, *max_d, 2, o)?);
                }
                reps.extend(reductions(*max_n, *max_d, o)?);
                for n in 1..=*max_n {
                    for d in 1..=*max_d {
                        for a in [Rational64::from_integer(0), Rational64::from_integer(1), Rational64::new(1, n as i64)] {
                            reps.push(relations(WhichRelation::R1, n, d, Some(a), o)?);
                        }
                        for w in [WhichRelation::R2, WhichRelation::Framing, WhichRelation::Degeneration, WhichRelation::Orthogonality] {
                            reps.push(relations(w, n, d, None, o)?);
                        }
                        reps.extend(appendix(n, d, o)?);
                        for (k, b) in sample_gerbes(n) {
                            let x = LocalGerbe::new(n, k, b)?;
                            let mut r = verify_theorem2(&x, d, o)?.report;
                            r.name = format!("gw = dt n={n} k={k} b={b} d={d}");
                            reps.push(r);
                        }
                    }
                }
                verdict("verify all", reps)
            }
        },
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let (value, pass) = match run(&cli) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("JSON values serialize") + "\n";
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, text) {
                eprintln!("error: cannot write {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
