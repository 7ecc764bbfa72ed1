//! `hulb`: energy bounds for codes and designs in Hamming spaces.

mod emit;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hamming_energy::asymptotics::{self, AsymptoticRegime, ProbeRow, RegimeParity};
use hamming_energy::bounds;
use hamming_energy::codes;
use hamming_energy::window::{self, Parity};
use hamming_energy::{quadrature, refine, ulb, Error, Potential, SpaceParams, Tolerances};
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}

#[derive(Debug, Parser)]
#[command(name = "hulb", version, about = "Universal energy bounds for codes and designs in Hamming spaces")]
struct Cli {
    /// Output format (csv applies to `asymp` only).
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    /// Root-finding tolerance.
    #[arg(long, default_value = "1e-12", value_parser = positive, global = true)]
    tol_root: f64,
    /// Slack for certificate condition checks.
    #[arg(long, env = "HULB_TOL", default_value = "1e-9", value_parser = positive, global = true)]
    tol_check: f64,
    /// Evaluate independent rows on worker threads.
    #[arg(long, global = true)]
    parallel: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Args)]
struct Space {
    /// Word length.
    #[arg(long)]
    n: usize,
    /// Alphabet size.
    #[arg(long, default_value_t = 2)]
    q: u32,
}

#[derive(Debug, Args)]
struct Card {
    #[command(flatten)]
    space: Space,
    /// Code cardinality.
    #[arg(long = "M")]
    m: u64,
}

#[derive(Debug, Args)]
struct WithPot {
    #[command(flatten)]
    card: Card,
    /// Potential: riesz:<a>, unit-riesz:<a>, exp:<a> or poly:<c0,c1,...>.
    #[arg(long, default_value = "riesz:1")]
    pot: Potential,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Rao bound R(n,tau): the minimum size of a tau-design.
    Rao {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        tau: usize,
    },
    /// Levenshtein bound L_tau(n,s) on the size of a code with largest inner product s.
    Lev {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        tau: usize,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Strength tau(n,M) whose Rao interval contains M, with the matching s.
    Tau(Card),
    /// Nodes and weights of the quadrature rule attached to M.
    Quad(Card),
    /// Universal lower bound on the energy of codes of size M.
    Ulb(WithPot),
    /// Test functions P_j for tau < j <= j_max.
    Testfn {
        #[command(flatten)]
        card: Card,
        /// Largest degree to scan (defaults to n).
        #[arg(long)]
        j_max: Option<usize>,
    },
    /// Pair-covering refinement of the universal bound on the grid T_n.
    Paircover(WithPot),
    /// Higher-degree improvement eps*Q_j + g of the universal bound.
    Improve {
        #[command(flatten)]
        with: WithPot,
        /// Degree of the added Krawtchouk term.
        #[arg(long)]
        j: usize,
        /// Fixed eps instead of the largest admissible one.
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Inner-product window and energy strip for binary 2-designs.
    Window {
        /// Word length (binary only).
        #[arg(long)]
        n: usize,
        #[arg(long = "M")]
        m: u64,
        #[arg(long, default_value = "riesz:1")]
        pot: Potential,
    },
    /// Convergence of binary rules toward their large-n limits.
    Asymp {
        /// Number of free nodes; the strength is 2k-1 (odd) or 2k (even).
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "odd")]
        parity: ParityArg,
        /// Offset in the cardinality scaling M_n.
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// Comma-separated increasing word lengths.
        #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
        ns: Vec<usize>,
        /// Potential, as for `ulb`.
        #[arg(long, default_value = "exp:1")]
        pot: Potential,
    },
    /// Energy, distance statistics and strength of a code read from a file.
    Energy {
        /// Code file ('-' for standard input).
        #[arg(long)]
        file: String,
        #[arg(long, default_value = "riesz:1")]
        pot: Potential,
        /// Word length when the file has no header.
        #[arg(long, requires = "q")]
        n: Option<usize>,
        /// Alphabet size when the file has no header.
        #[arg(long, requires = "n")]
        q: Option<u32>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParityArg {
    Odd,
    Even,
}

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Out = Result<Output, Failure>;

enum Output {
    /// Bare value in table mode, object in JSON.
    Scalar(String, Value),
    Record(Value),
    Rows(Value, Vec<Map<String, Value>>, &'static [&'static str]),
}

fn space(s: &Space) -> Result<SpaceParams, Error> {
    SpaceParams::new(s.n, s.q)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn big_value(x: &impl std::fmt::Display) -> Value {
    let text = x.to_string();
    text.parse::<u64>().map_or(Value::String(text), |v| json!(v))
}

fn run(cli: &Cli) -> Out {
    let tol = Tolerances {
        root: cli.tol_root,
        check: cli.tol_check,
    };
    match &cli.cmd {
        Cmd::Rao { space: s, tau } => {
            let r = bounds::rao(space(s)?, *tau)?;
            Ok(Output::Scalar(r.to_string(), json!({"n": s.n, "q": s.q, "tau": tau, "rao": big_value(&r)})))
        }
        Cmd::Lev { space: s, tau, s: x } => {
            let v = bounds::lev(space(s)?, *tau, *x, &tol)?;
            Ok(Output::Scalar(
                emit::truncate4(v),
                json!({"n": s.n, "q": s.q, "tau": tau, "s": x, "lev": v}),
            ))
        }
        Cmd::Tau(c) => {
            let sp = space(&c.space)?;
            let (a, s) = bounds::solve_s(sp, c.m, &tol)?;
            Ok(Output::Scalar(
                a.tau.to_string(),
                json!({
                    "n": sp.n, "q": sp.q, "M": c.m, "tau": a.tau,
                    "branch": to_value(&a.branch), "interval": [a.interval.0, a.interval.1], "s": s,
                }),
            ))
        }
        Cmd::Quad(c) => {
            let r = quadrature::rule(space(&c.space)?, c.m, &tol)?;
            let mut v = to_value(&r);
            v["tau"] = json!(r.tau());
            Ok(Output::Record(v))
        }
        Cmd::Ulb(w) => {
            let sp = space(&w.card.space)?;
            let mut r = ulb::ulb(sp, w.card.m, &w.pot, &tol)?;
            let cert = ulb::hermite_certificate(sp, w.card.m, &w.pot, &tol)?;
            r.certificate = cert.certificate;
            r.kraw = cert.kraw;
            r.a1_ok = cert.a1_ok;
            r.a2_ok = cert.a2_ok;
            if !cert.notes.is_empty() {
                r.notes = cert.notes;
            }
            Ok(Output::Record(to_value(&r)))
        }
        Cmd::Testfn { card, j_max } => {
            let sp = space(&card.space)?;
            let scan = refine::scan_test_functions(sp, card.m, j_max.unwrap_or(sp.n), &tol)?;
            Ok(Output::Record(to_value(&scan)))
        }
        Cmd::Paircover(w) => Ok(Output::Record(to_value(&refine::pair_covering(
            space(&w.card.space)?,
            w.card.m,
            &w.pot,
            &tol,
        )?))),
        Cmd::Improve { with, j, eps } => {
            let sp = space(&with.card.space)?;
            let r = match eps {
                Some(e) => refine::higher_degree_with_epsilon(sp, with.card.m, &with.pot, *j, *e, &tol)?,
                None => refine::higher_degree_bound(sp, with.card.m, &with.pot, *j, &tol)?,
            };
            Ok(Output::Record(to_value(&r)))
        }
        Cmd::Window { n, m, pot } => window_report(*n, *m, pot, &tol),
        Cmd::Asymp {
            k,
            parity,
            delta,
            ns,
            pot,
        } => {
            let parity = match parity {
                ParityArg::Odd => RegimeParity::Odd,
                ParityArg::Even => RegimeParity::Even,
            };
            let reg = AsymptoticRegime::new(*k, parity, *delta)?;
            let rows = probe(&reg, ns, pot, &tol, cli.parallel)?;
            let limits = json!({
                "nodes": asymptotics::node_limits(&reg),
                "rho0M": asymptotics::rho0m_limit(&reg).ok(),
                "floor": asymptotics::energy_floor(&reg, pot).ok().map(|f| to_value(&f)),
            });
            let records: Vec<Map<String, Value>> = rows
                .iter()
                .map(|r| to_value(r).as_object().cloned().expect("rows are objects"))
                .collect();
            let meta = json!({"regime": to_value(&reg), "limits": limits, "rows": records});
            Ok(Output::Rows(meta, records, &ASYMP_COLUMNS))
        }
        Cmd::Energy { file, pot, n, q } => energy_report(file, pot, n.zip(*q), &tol),
    }
}

const ASYMP_COLUMNS: [&str; 10] = [
    "n",
    "m",
    "nodes",
    "weight0_m",
    "ulb_over_m",
    "h0",
    "node_error",
    "weight_error",
    "ratio_error",
    "note",
];

fn probe(
    reg: &AsymptoticRegime,
    ns: &[usize],
    pot: &Potential,
    tol: &Tolerances,
    parallel: bool,
) -> Result<Vec<ProbeRow>, Error> {
    if !parallel {
        return asymptotics::convergence_probe(reg, ns, pot, tol);
    }
    // Bad input is reported by the sequential path.
    if ns.windows(2).any(|w| w[0] >= w[1]) || ns.first().is_some_and(|&n| n < 2) {
        return asymptotics::convergence_probe(reg, ns, pot, tol);
    }
    std::thread::scope(|sc| {
        let handles: Vec<_> = ns
            .iter()
            .map(|&n| sc.spawn(move || asymptotics::convergence_probe(reg, &[n], pot, tol)))
            .collect();
        let mut rows = Vec::with_capacity(ns.len());
        for h in handles {
            rows.extend(h.join().expect("probe worker panicked")?);
        }
        Ok(rows)
    })
}

fn window_report(n: usize, m: u64, pot: &Potential, tol: &Tolerances) -> Out {
    let ell = window::ell_lower_2designs(n, m, Parity::Conservative)?;
    let s = window::s_upper_2designs(n, m, Parity::Conservative)?;
    let lower = window::lower_2design(n, m, pot, tol)?;
    let upper = window::upper_2design(n, m, pot, tol)?;
    let gamma = window::gamma0m(n, m, tol).ok();
    let xi = gamma.and_then(|_| window::xi_lower(n, m, tol).ok());
    let strict = match xi {
        Some(x) => Some(window::strict_even_bound(n, m, pot, x, tol)?.value),
        None => None,
    };
    Ok(Output::Record(json!({
        "n": n, "M": m,
        "ell": ell, "s": s,
        "ell_even": window::ell_formula(n, m as f64, Parity::Even),
        "ell_odd": window::ell_formula(n, m as f64, Parity::Odd),
        "s_even": window::s_formula(n, m as f64, Parity::Even),
        "s_odd": window::s_formula(n, m as f64, Parity::Odd),
        "lower": lower.value, "lower_valid": lower.valid(),
        "upper": upper.value, "upper_valid": upper.valid(),
        "gamma0M": gamma, "xi": xi, "strict_even": strict,
    })))
}

fn energy_report(file: &str, pot: &Potential, nq: Option<(usize, u32)>, tol: &Tolerances) -> Out {
    let text = if file == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::Io(format!("stdin: {e}")))?
    } else {
        std::fs::read_to_string(file).map_err(|e| Failure::Io(format!("{file}: {e}")))?
    };
    let known = nq.map(|(n, q)| SpaceParams::new(n, q)).transpose()?;
    let code = codes::parse_code_with(&text, known)?;
    let e = codes::energy(&code, pot)?;
    let st = codes::strength(&code);
    let mut v = json!({
        "n": code.space.n, "q": code.space.q, "M": code.len(),
        "energy": e,
        "strength": st.tau,
        "dual_distance": st.dual_distance,
        "warning": st.warning,
    });
    if code.len() >= 2 {
        let stats = codes::inner_product_stats(&code)?;
        v["distance_distribution"] = json!(stats.distribution.values());
        v["s"] = json!(stats.s);
        v["ell"] = json!(stats.ell);
        v["min_distance"] = json!(stats.min_distance);
    }
    match ulb::ulb(code.space, code.len() as u64, pot, tol) {
        Ok(b) => {
            v["ulb"] = json!(b.value);
            v["above_ulb"] = json!(e >= b.value - tol.check * b.value.abs().max(1.0));
        }
        Err(err) => v["ulb_note"] = json!(err.to_string()),
    }
    Ok(Output::Record(v))
}

fn render(out: &Output, format: Format) -> Result<String, Failure> {
    Ok(match (out, format) {
        (Output::Scalar(s, _), Format::Table) => format!("{s}\n"),
        (Output::Scalar(_, v) | Output::Record(v) | Output::Rows(v, _, _), Format::Json) => {
            emit::json(v) + "\n"
        }
        (Output::Record(v), Format::Table) => emit::table(v),
        (Output::Rows(_, rows, cols), Format::Table) => emit::grid(rows, cols),
        (Output::Rows(_, rows, cols), Format::Csv) => {
            emit::csv(rows, cols).map_err(|e| Failure::Io(e.to_string()))?
        }
        (_, Format::Csv) => {
            return Err(Failure::Core(Error::Domain(
                "csv output is only available for asymp".into(),
            )))
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli).and_then(|o| render(&o, cli.format)) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Numeric(_) => 3,
                Error::Domain(_) | Error::Parse { .. } => 2,
            })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
