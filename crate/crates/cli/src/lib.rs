//! Command-line front end. [`run`] is the whole program; `main` only wires
//! it to the process streams.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};
use whitney_core::counts::{self, format_rational, parse_rational};
use whitney_core::enumerate::{enumerate_class, ClassSpec};
use whitney_core::graph::fixtures;
use whitney_core::mc;
use whitney_core::order::{self, Order};
use whitney_core::scan::{self, ScanConfig};
use whitney_core::tutte::{self, TutteMemo};
use whitney_core::{Error, SimpleGraph};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
/// An internal cross-check failed. Indicates a bug, not bad input.
pub const EXIT_INTERNAL: i32 = 4;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "WHITNEY_WORKERS";

#[derive(Parser, Debug)]
#[command(
    name = "whitney",
    version,
    about = "Exact Tutte/Whitney polynomials and network reliability"
)]
struct Cli {
    /// Write the JSON result here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for `scan` and `mc`.
    #[arg(long, global = true, env = WORKERS_ENV)]
    workers: Option<usize>,

    /// Bound on memoized deletion-contraction minors.
    #[arg(long, global = true, default_value_t = 1 << 22)]
    memo_capacity: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tutte or Whitney polynomial of a graph.
    Poly(PolyArgs),
    /// Spanning subgraph count table and derived invariants.
    Counts(GraphArg),
    /// Exact k-reliability at a rational edge probability.
    Rel(RelArgs),
    /// Compare two graphs in the Whitney or Tutte order.
    Compare(CompareArgs),
    /// Enumerate and classify every connected graph with n vertices, m edges.
    Scan(ScanArgs),
    /// Check whether a graph is maximum in its class.
    Certify(CertifyArgs),
    /// Monte Carlo reliability estimate.
    Mc(McArgs),
}

#[derive(Args, Debug)]
struct GraphArg {
    /// `fixture:<name>`, `g6:<graph6>`, `file:<path>`, or a bare path or graph6 string.
    #[arg(long)]
    graph: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Dc,
    Expansion,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrderArg {
    Whitney,
    Tutte,
}

impl From<OrderArg> for Order {
    fn from(o: OrderArg) -> Order {
        match o {
            OrderArg::Whitney => Order::Whitney,
            OrderArg::Tutte => Order::Tutte,
        }
    }
}

#[derive(Args, Debug)]
struct PolyArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long, conflicts_with = "whitney")]
    tutte: bool,
    #[arg(long)]
    whitney: bool,
    #[arg(long, value_enum, default_value = "dc")]
    method: Method,
}

#[derive(Args, Debug)]
struct RelArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long)]
    k: usize,
    /// Edge survival probability as `a/b`.
    #[arg(long)]
    p: String,
    /// Also evaluate through the Tutte polynomial (k = 1 only).
    #[arg(long)]
    via_tutte: bool,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[arg(long)]
    g: String,
    #[arg(long)]
    h: String,
    #[arg(long, value_enum)]
    order: OrderArg,
    /// Exit with status 1 unless `h` is below `g`.
    #[arg(long)]
    expect_dominates: bool,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Record every counterexample instead of the first.
    #[arg(long)]
    full: bool,
    /// Analyse only the first L members (smoke mode; report is marked partial).
    #[arg(long)]
    limit: Option<usize>,
    /// Skip division certificates for members failing table domination.
    #[arg(long)]
    prefilter: bool,
    /// Also write the CSV digest to this path.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum)]
    order: OrderArg,
    #[arg(long)]
    full: bool,
    /// Exit with status 1 when a counterexample is found.
    #[arg(long)]
    expect_maximum: bool,
}

#[derive(Args, Debug)]
struct McArgs {
    #[command(flatten)]
    graph: GraphArg,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    p: String,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Compare against the exact value; exit 1 when outside the tolerance.
    #[arg(long)]
    cross_check: bool,
    /// Tolerance in standard errors.
    #[arg(long, default_value_t = 4.0)]
    sigmas: f64,
}

/// Failure of a command, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Core(Error),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Core(Error::Budget { .. }) => EXIT_BUDGET,
            Failure::Core(Error::Consistency(_)) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Failure::Core(e) => {
                let mut v = json!({"error": e.kind(), "message": e.to_string()});
                match e {
                    Error::Parse { offset, .. } => v["offset"] = json!(offset),
                    Error::Budget {
                        required, limit, ..
                    } => {
                        v["required"] = json!(required);
                        v["limit"] = json!(limit);
                    }
                    _ => {}
                }
                v
            }
            Failure::Usage(m) => json!({"error": "usage", "message": m}),
            Failure::Io(m) => json!({"error": "io", "message": m}),
        }
    }
}

type Outcome = Result<(Value, i32), Failure>;

/// Runs the program on `argv` (including the program name) and returns the
/// exit code. Results go to `out` as JSON with sorted keys; errors go to
/// `err` as a single JSON line.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let message = e.kind().to_string();
            let detail = e.to_string();
            let first = detail
                .lines()
                .next()
                .unwrap_or(&message)
                .trim_start_matches("error: ");
            return report(err, &Failure::Usage(first.to_string()));
        }
    };
    let result = dispatch(&cli).and_then(|(value, code)| {
        let mut text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
        text.push('\n');
        match &cli.output {
            Some(path) => write_file(path, &text)?,
            None => out
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(format!("cannot write output: {e}")))?,
        }
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(f) => report(err, &f),
    }
}

fn report(err: &mut dyn Write, failure: &Failure) -> i32 {
    let _ = writeln!(err, "{}", failure.to_json());
    failure.code()
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Poly(a) => poly(a, cli),
        Command::Counts(a) => counts_cmd(a),
        Command::Rel(a) => rel(a),
        Command::Compare(a) => compare(a),
        Command::Scan(a) => scan_cmd(a, cli),
        Command::Certify(a) => certify(a),
        Command::Mc(a) => mc_cmd(a, cli),
    }
}

/// Resolves a graph argument.
fn load(source: &str) -> Result<SimpleGraph, Failure> {
    if let Some(name) = source.strip_prefix("fixture:") {
        return Ok(fixtures::by_name(name)?);
    }
    if let Some(g6) = source.strip_prefix("g6:") {
        return Ok(SimpleGraph::parse_graph6(g6)?);
    }
    if let Some(path) = source.strip_prefix("file:") {
        return load_file(Path::new(path));
    }
    if Path::new(source).is_file() {
        return load_file(Path::new(source));
    }
    Ok(SimpleGraph::parse_graph6(source)?)
}

/// A file holds either an edge list (`n m` header) or a single graph6 line.
fn load_file(path: &Path) -> Result<SimpleGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or_default();
    if first.split_whitespace().count() > 1 || text.contains('#') {
        Ok(SimpleGraph::parse_edge_list(&text)?)
    } else {
        Ok(SimpleGraph::parse_graph6(first)?)
    }
}

fn rational(text: &str) -> Result<BigRational, Failure> {
    Ok(parse_rational(text)?)
}

fn graph_header(g: &SimpleGraph) -> Value {
    json!({"graph6": g.to_graph6(), "n": g.n(), "m": g.m()})
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn poly(a: &PolyArgs, cli: &Cli) -> Outcome {
    let g = load(&a.graph.graph)?;
    let t = match a.method {
        Method::Dc => tutte::tutte_dc(
            &g.to_multigraph(),
            &TutteMemo::with_capacity(cli.memo_capacity),
        ),
        Method::Expansion => tutte::tutte_expansion(&g)?,
    };
    let (kind, p) = if a.whitney {
        ("whitney", t.shift_vars(1, 1))
    } else {
        ("tutte", t)
    };
    let mut v = graph_header(&g);
    v["polynomial"] = json!(kind);
    v["method"] = json!(match a.method {
        Method::Dc => "dc",
        Method::Expansion => "expansion",
    });
    v["terms"] = p.to_json();
    v["text"] = json!(p.to_string());
    Ok((v, EXIT_OK))
}

fn counts_cmd(a: &GraphArg) -> Outcome {
    let g = load(&a.graph)?;
    let table = counts::ntable(&g)?;
    let n = g.n();
    let forests = (1..=n)
        .map(|k| counts::t_k(&table, k))
        .collect::<Result<Vec<_>, _>>()?;
    let lambda = (1..=n)
        .map(|k| counts::lambda_k(&table, k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut v = graph_header(&g);
    v["ntable"] = table.to_json();
    v["digest"] = json!(table.digest());
    v["cumulative"] = json!(table
        .cumulative()
        .iter()
        .map(|r| strings(r))
        .collect::<Vec<_>>());
    v["mu"] = json!(strings(&counts::mu_vector(&table).0));
    v["t"] = json!(strings(&forests));
    v["lambda"] = json!(lambda);
    Ok((v, EXIT_OK))
}

fn rel(a: &RelArgs) -> Outcome {
    let g = load(&a.graph.graph)?;
    let p = rational(&a.p)?;
    if a.via_tutte && a.k != 1 {
        return Err(Failure::Usage("--via-tutte applies to k = 1 only".into()));
    }
    let rp = counts::reliability(&counts::ntable(&g)?, a.k)?;
    let value = counts::rel_eval(&rp, &p)?;
    let mut v = graph_header(&g);
    v["k"] = json!(a.k);
    v["p"] = json!(format_rational(&p));
    v["reliability"] = json!(format_rational(&value));
    v["coefficients"] = json!(strings(&rp.coeffs));
    let mut code = EXIT_OK;
    if a.via_tutte {
        let other = counts::reliability_via_tutte(&g, &p)?;
        v["via_tutte"] = json!(format_rational(&other));
        v["agree"] = json!(other == value);
        if other != value {
            code = EXIT_NEGATIVE;
        }
    }
    Ok((v, code))
}

fn compare(a: &CompareArgs) -> Outcome {
    let g = load(&a.g)?;
    let h = load(&a.h)?;
    let result = order::compare(&g, &h, a.order.into())?;
    let mut v = result.to_json();
    v["g"] = json!(g.to_graph6());
    v["h"] = json!(h.to_graph6());
    v["holds"] = json!(result.holds());
    if let Some(q) = &result.quotient {
        v["quotient_text"] = json!(q.to_string());
    }
    let code = if a.expect_dominates && !result.holds() {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    };
    Ok((v, code))
}

fn scan_cmd(a: &ScanArgs, cli: &Cli) -> Outcome {
    let spec = ClassSpec::new(a.n, a.m)?;
    let config = ScanConfig {
        workers: cli.workers,
        limit: a.limit,
        prefilter: a.prefilter,
        full: a.full,
        memo_capacity: cli.memo_capacity,
    };
    let report = scan::scan(spec, &config)?;
    let check = scan::verify_invariant_maxima(&report);
    if let Some(path) = &a.csv {
        write_file(path, &report.to_csv())?;
    }
    let mut v = report.to_json();
    v["whitney_max"] = json!(report
        .whitney_max()
        .map(|m| m.graph6.clone())
        .collect::<Vec<_>>());
    v["invariant_maxima"] = json!(check);
    v["csv"] = json!(report.to_csv());
    Ok((v, EXIT_OK))
}

fn certify(a: &CertifyArgs) -> Outcome {
    let g = load(&a.graph.graph)?;
    if (g.n(), g.m()) != (a.n, a.m) {
        return Err(Failure::Usage(format!(
            "graph has n={}, m={} but the class is C({}, {})",
            g.n(),
            g.m(),
            a.n,
            a.m
        )));
    }
    let class = enumerate_class(ClassSpec::new(a.n, a.m)?)?;
    let own = g.canonical_form();
    let others = class.into_iter().filter(|h| h.canonical_form() != own);
    let cert = order::certify_maximum(&g, others, a.order.into(), a.full)?;
    let mut v = graph_header(&g);
    v["order"] = json!(match cert.order {
        Order::Whitney => "whitney",
        Order::Tutte => "tutte",
    });
    v["compared"] = json!(cert.compared);
    v["maximum"] = json!(cert.is_maximum());
    v["counterexamples"] = json!(cert
        .counterexamples
        .iter()
        .map(|(h, r)| json!({"graph6": h.canonical().to_graph6(), "result": r.to_json()}))
        .collect::<Vec<_>>());
    let code = if a.expect_maximum && !cert.is_maximum() {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    };
    Ok((v, code))
}

fn mc_cmd(a: &McArgs, cli: &Cli) -> Outcome {
    let g = load(&a.graph.graph)?;
    let p = rational(&a.p)?;
    if a.k == 0 || a.k > g.n() {
        return Err(Failure::Usage(format!("k={} outside 1..={}", a.k, g.n())));
    }
    let est =
        whitney_core::with_workers(cli.workers, || mc::estimate(&g, a.k, &p, a.trials, a.seed))??;
    let mut v = json!({
        "mean": est.mean,
        "stderr": est.stderr,
        "trials": est.trials,
        "seed": est.seed,
        "successes": est.successes,
        "k": a.k,
        "p": format_rational(&p),
        "exact": Value::Null,
        "verdict": Value::Null,
    });
    let mut code = EXIT_OK;
    if a.cross_check {
        let exact = counts::rel_eval(&counts::reliability(&counts::ntable(&g)?, a.k)?, &p)?;
        let check = mc::compare_to_exact(est, &exact, a.sigmas);
        v["exact"] = json!(format_rational(&exact));
        v["sigma"] = json!(check.sigma);
        v["deviation_sigmas"] = json!(check.deviation_sigmas);
        v["verdict"] = json!(if check.pass { "pass" } else { "fail" });
        if !check.pass {
            code = EXIT_NEGATIVE;
        }
    }
    Ok((v, code))
}
