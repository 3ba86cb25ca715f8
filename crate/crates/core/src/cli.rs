//! Command-line front end. Every command prints one JSON envelope
//! `{schema, command, result, run}`; `run` holds the timestamp and all
//! timing and node counters, so `result` is reproducible byte for byte.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cayley::{self, PaleyVariant};
use crate::clique::{SearchOpts, DEFAULT_BUDGET};
use crate::decomp::{self, DecompMode};
use crate::density;
use crate::elemset::ElemSet;
use crate::emint;
use crate::error::{Error, Result};
use crate::ffield::{make_field, FieldCtx};
use crate::reproduce::{self, Suite};
use crate::stepanov::{self, Variant};
use crate::subgroup::compute_subgroup;
use crate::sumsets::{restricted_sumset, sumset};

pub const SCHEMA: &str = "rsl/1";
pub const BUDGET_ENV: &str = "RSL_BUDGET_SECS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;
pub const EXIT_TIMEOUT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rsl", version, about = "Restricted sumsets in multiplicative subgroups of finite fields")]
pub struct Cli {
    /// Output format; verify-thm defaults to csv and reproduce to table.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads; 1 gives the serial reference execution.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GraphArg {
    Gp,
    Gps,
    GpsNozero,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    Odd,
    Even,
    EvenRefined,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Exact,
    Subset,
    Subset0,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SuiteArg {
    Paper,
    Quick,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Field parameters, modulus and generator.
    FieldInfo {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Size and members of S_d.
    Subgroup {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        list: bool,
    },
    /// A + A or A +^ A for a set of element indices.
    Sumset {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        set: String,
        #[arg(long)]
        restricted: bool,
    },
    /// Clique number of a Paley-type graph.
    Clique {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value = "gps")]
        graph: GraphArg,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Builds and checks the auxiliary polynomial for a set.
    Certify {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        set: String,
        /// Defaults to odd or even by the parity of |A|.
        #[arg(long, value_enum)]
        variant: Option<VariantArg>,
    },
    /// Exhaustive search for A +^ A = S_d.
    Decomp {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        d: u64,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Batch check of a named result: 1.1, 1.4, 1.5, 1.6, 2.6 or 4.1.
    VerifyThm {
        #[arg(long)]
        name: String,
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Window, digit and C_d predicates over primes p ≡ 1 (mod d).
    DensityScan {
        #[arg(long)]
        d: u64,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long)]
        limit: u64,
        /// Per-prime CSV output file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Largest A ⊆ {1..N} with all pairwise sums perfect d-th powers.
    EmSearch {
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Checks that all pairwise sums of a set are perfect d-th powers.
    EmVerify {
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 2)]
        d: u32,
    },
    /// Larger-sieve bound for sets with d-th power pairwise sums.
    SieveBound {
        #[arg(long = "N")]
        n: u64,
        #[arg(long, default_value_t = 2)]
        d: u64,
        #[arg(long = "Q")]
        q: Option<f64>,
        /// Residue classes mod d admitted in the sieve; only "1" is supported.
        #[arg(long, default_value = "1")]
        residues: String,
    },
    /// Runs every acceptance criterion and prints a summary.
    Reproduce {
        #[arg(long, value_enum, default_value = "paper")]
        suite: SuiteArg,
        #[arg(long)]
        budget: Option<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::FieldInfo { .. } => "field-info",
            Command::Subgroup { .. } => "subgroup",
            Command::Sumset { .. } => "sumset",
            Command::Clique { .. } => "clique",
            Command::Certify { .. } => "certify",
            Command::Decomp { .. } => "decomp",
            Command::VerifyThm { .. } => "verify-thm",
            Command::DensityScan { .. } => "density-scan",
            Command::EmSearch { .. } => "em-search",
            Command::EmVerify { .. } => "em-verify",
            Command::SieveBound { .. } => "sieve-bound",
            Command::Reproduce { .. } => "reproduce",
        }
    }
}

/// What a command produced: a JSON result, an optional text rendering for
/// csv/table output, and whether a verification inside it failed.
struct Output {
    result: Value,
    text: Option<String>,
    failed: bool,
    timed_out: bool,
}

impl Output {
    fn json<T: Serialize>(v: &T) -> Self {
        Output {
            result: serde_json::to_value(v).expect("serializable"),
            text: None,
            failed: false,
            timed_out: false,
        }
    }

    fn failed_if(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }
}

/// Budget from the flag, then the environment, then the default.
fn budget(flag: Option<f64>) -> Result<Duration> {
    let secs = match flag {
        Some(s) => Some(s),
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("{BUDGET_ENV}={v} is not a number")))?,
            ),
            Err(_) => None,
        },
    };
    match secs {
        None => Ok(DEFAULT_BUDGET),
        Some(s) if s.is_finite() && s > 0.0 => Ok(Duration::from_secs_f64(s)),
        Some(s) => Err(Error::InvalidParameter(format!("budget {s} must be a positive number of seconds"))),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| Error::InvalidParameter(format!("cannot parse {t:?} in set"))))
        .collect()
}

fn parse_set(ctx: &FieldCtx, s: &str) -> Result<ElemSet> {
    let xs: Vec<u64> = parse_list(s)?;
    for &x in &xs {
        ctx.elem(x)?;
    }
    Ok(ElemSet::from_indices(ctx.q() as usize, xs))
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn theorem_csv(t: &reproduce::TheoremTable) -> String {
    let mut out = String::from("theorem,instance,expected,observed,status\n");
    for r in &t.rows {
        out += &format!(
            "{},{},{},{},{}\n",
            t.name,
            csv_escape(&r.instance),
            csv_escape(&r.expected),
            csv_escape(&r.observed),
            r.status.as_str()
        );
    }
    out
}

fn suite_text(r: &reproduce::SuiteReport, format: Format) -> String {
    if format == Format::Csv {
        let mut out = String::from("criterion,title,status,detail\n");
        for row in &r.rows {
            out += &format!(
                "{},{},{},{}\n",
                row.id,
                csv_escape(&row.title),
                if row.pass { "PASS" } else { "FAIL" },
                csv_escape(&row.detail)
            );
        }
        return out;
    }
    let mut out = String::new();
    for row in &r.rows {
        out += &format!(
            "{:>2}  {}  {:<52}  {:>8} ms  {}\n",
            row.id,
            if row.pass { "PASS" } else { "FAIL" },
            row.title,
            row.stats.wall_time_ms,
            row.detail
        );
    }
    out += &format!("{} passed, {} failed\n", r.passed, r.failed);
    out
}

fn density_csv(records: &[density::ScanRecord]) -> String {
    let mut out = String::from("p,in_window,window_boundary,digits_ok,in_Cd,in_D_tilde,alpha_p\n");
    for r in records {
        out += &format!(
            "{},{},{},{},{},{},{}\n",
            r.p,
            r.in_window,
            r.window_boundary,
            r.digit_ok.iter().all(|&b| b),
            r.in_cd,
            r.in_d_tilde,
            r.alpha_p
        );
    }
    out
}

fn execute(cmd: &Command, format: Option<Format>, parallel: bool) -> Result<Output> {
    let opts = |flag: Option<f64>| -> Result<SearchOpts> {
        Ok(SearchOpts {
            budget: Some(budget(flag)?),
            parallel,
        })
    };
    Ok(match cmd {
        Command::FieldInfo { p, k } => {
            let ctx = make_field(*p, *k)?;
            Output::json(&json!({
                "p": ctx.p(),
                "k": ctx.k(),
                "q": ctx.q(),
                "modulus": ctx.modulus(),
                "generator": ctx.generator().idx(),
                "log_tables": ctx.has_tables(),
            }))
        }
        Command::Subgroup { p, k, d, list } => {
            let ctx = make_field(*p, *k)?;
            let sd = compute_subgroup(&ctx, *d)?;
            let mut v = json!({ "q": ctx.q(), "d": d, "size": sd.len(), "index_exponent": sd.index_exponent });
            if *list {
                v["members"] = json!(sd.members.to_vec());
            }
            Output::json(&v)
        }
        Command::Sumset { p, k, set, restricted } => {
            let ctx = make_field(*p, *k)?;
            let a = parse_set(&ctx, set)?;
            let s = if *restricted {
                restricted_sumset(&ctx, &a)
            } else {
                sumset(&ctx, &a, &a)
            };
            Output::json(&json!({
                "q": ctx.q(),
                "set": a.to_vec(),
                "restricted": restricted,
                "sumset": s.to_vec(),
            }))
        }
        Command::Clique {
            p,
            k,
            d,
            graph,
            enumerate,
            budget,
        } => {
            let ctx = make_field(*p, *k)?;
            let variant = match graph {
                GraphArg::Gp => PaleyVariant::Gp,
                GraphArg::Gps => PaleyVariant::Gps,
                GraphArg::GpsNozero => PaleyVariant::GpsNoZero,
            };
            let g = cayley::build_variant(&ctx, *d, variant)?;
            let o = opts(*budget)?;
            let r = if *enumerate {
                cayley::enumerate_max_cliques(&g, &o)?
            } else {
                cayley::max_clique(&g, &o)?
            };
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["q"] = json!(ctx.q());
            v["d"] = json!(d);
            v["graph"] = json!(variant);
            if ctx.sqrt_q().is_some() && variant == PaleyVariant::Gps {
                v["ekr"] = json!(cayley::classify_ekr(&ctx, *d, &r)?);
            }
            Output::json(&v)
        }
        Command::Certify { p, k, d, set, variant } => {
            let ctx = make_field(*p, *k)?;
            let a = parse_set(&ctx, set)?;
            let variant = match variant {
                None => stepanov::default_variant(&a),
                Some(VariantArg::Odd) => Variant::OddN,
                Some(VariantArg::Even) => Variant::EvenN,
                Some(VariantArg::EvenRefined) => Variant::EvenNRefined,
            };
            let r = stepanov::build_certificate(&ctx, *d, &a, variant)?;
            Output::json(&r).failed_if(!r.ok)
        }
        Command::Decomp { p, k, d, mode, budget } => {
            let ctx = make_field(*p, *k)?;
            let mode = match mode {
                ModeArg::Exact => DecompMode::Exact,
                ModeArg::Subset => DecompMode::Subset,
                ModeArg::Subset0 => DecompMode::Subset0,
            };
            let r = decomp::search_mode(&ctx, *d, mode, &opts(*budget)?)?;
            let bad = r.structural_checks.iter().any(|v| !v.ok);
            Output::json(&r).failed_if(bad)
        }
        Command::VerifyThm { name, budget } => {
            let t = reproduce::verify_theorem(name, &opts(*budget)?)?;
            let mut out = Output::json(&t).failed_if(t.failed > 0);
            out.timed_out = t.timed_out > 0;
            if format.unwrap_or(Format::Csv) != Format::Json {
                out.text = Some(theorem_csv(&t));
            }
            out
        }
        Command::DensityScan { d, s, limit, csv } => {
            density::density_preconditions(*d, *s)?;
            let records = density::scan(*d, *s, *limit)?;
            if let Some(path) = csv {
                std::fs::write(path, density_csv(&records))
                    .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display())))?;
            }
            let summary = density::summarize(*d, *s, *limit, &records);
            let mut out = Output::json(&summary);
            if format == Some(Format::Csv) {
                out.text = Some(density_csv(&records));
            }
            out
        }
        Command::EmSearch { n, d, budget } => {
            let r = emint::search_max_em_set(*n, *d, &opts(*budget)?)?;
            Output::json(&r)
        }
        Command::EmVerify { set, d } => {
            let xs: Vec<BigUint> = parse_list(set)?;
            let r = emint::em_verify(&xs, *d)?;
            Output::json(&r).failed_if(!r.ok)
        }
        Command::SieveBound { n, d, q, residues } => {
            let classes: Vec<u64> = parse_list(residues)?;
            if classes != [1] {
                return Err(Error::InvalidParameter(format!(
                    "residue classes {residues:?} are not supported; only \"1\" is implemented"
                )));
            }
            Output::json(&emint::gallagher_bound(*n, *d, *q)?)
        }
        Command::Reproduce { suite, budget: b } => {
            let suite = match suite {
                SuiteArg::Paper => Suite::Paper,
                SuiteArg::Quick => Suite::Quick,
            };
            let r = reproduce::run_suite(suite, budget(*b)?, parallel);
            let mut out = Output::json(&r).failed_if(!r.all_pass());
            let f = format.unwrap_or(Format::Table);
            if f != Format::Json {
                out.text = Some(suite_text(&r, f));
            }
            out
        }
    })
}

/// Moves every `stats` object out of `v` into `sink`, keyed by JSON pointer.
fn extract_stats(v: &mut Value, path: &str, sink: &mut Map<String, Value>) {
    match v {
        Value::Object(map) => {
            if let Some(s) = map.remove("stats") {
                sink.insert(format!("{path}/stats"), s);
            }
            for (k, child) in map.iter_mut() {
                extract_stats(child, &format!("{path}/{k}"), sink);
            }
        }
        Value::Array(items) => {
            for (i, child) in items.iter_mut().enumerate() {
                extract_stats(child, &format!("{path}/{i}"), sink);
            }
        }
        _ => {}
    }
}

fn envelope(command: &str, mut result: Value) -> Value {
    let mut stats = Map::new();
    extract_stats(&mut result, "", &mut stats);
    let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    json!({
        "schema": SCHEMA,
        "command": command,
        "result": result,
        "run": { "generated_at_unix": now, "stats": stats },
    })
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NonPrime(_) => "non_prime",
        Error::EvenPrime => "even_prime",
        Error::Overflow { .. } => "overflow",
        Error::DivisionByZero => "division_by_zero",
        Error::ElemOutOfRange { .. } => "elem_out_of_range",
        Error::NotADivisor { .. } => "not_a_divisor",
        Error::TablesUnavailable(_) => "tables_unavailable",
        Error::ParityViolation { .. } => "parity_violation",
        Error::Timeout { .. } => "timeout",
        Error::NotASquare(_) => "not_a_square",
        Error::ZeroPolynomial => "zero_polynomial",
        Error::DuplicatePoints => "duplicate_points",
        Error::PreconditionViolated(_) => "precondition_violated",
        Error::ParityMismatch { .. } => "parity_mismatch",
        Error::NotADecomposition => "not_a_decomposition",
        Error::NonPositive => "non_positive",
        Error::PredicateMismatch(_) => "predicate_mismatch",
        Error::RepeatedRoot => "repeated_root",
        Error::InvalidParameter(_) => "invalid_parameter",
    }
}

fn error_json(command: &str, kind: &str, message: &str) -> String {
    json!({
        "schema": SCHEMA,
        "command": command,
        "error": { "kind": kind, "message": message },
    })
    .to_string()
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            let _ = writeln!(err, "{}", error_json("", "usage", &e.kind().to_string()));
            return EXIT_USAGE;
        }
    };
    let name = cli.command.name();
    let workers = cli.workers.unwrap_or(0);
    let parallel = workers != 1;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build();
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(name, "usage", &e.to_string()));
            return EXIT_USAGE;
        }
    };
    match pool.install(|| execute(&cli.command, cli.format, parallel)) {
        Ok(o) => {
            let written = match &o.text {
                Some(t) => write!(out, "{t}"),
                None => writeln!(out, "{}", serde_json::to_string_pretty(&envelope(name, o.result)).expect("valid json")),
            };
            if written.is_err() {
                return EXIT_USAGE;
            }
            if o.failed {
                EXIT_VERIFY_FAILED
            } else if o.timed_out {
                EXIT_TIMEOUT
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(name, error_kind(&e), &e.to_string()));
            if matches!(e, Error::Timeout { .. }) {
                EXIT_TIMEOUT
            } else {
                EXIT_USAGE
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("rsl").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn decomp_f13() {
        let (code, out, _) = call(&["decomp", "--p", "13", "--k", "1", "--d", "2"]);
        assert_eq!(code, EXIT_OK);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["result"]["solutions"], json!([[0, 1, 3, 9], [0, 4, 10, 12]]));
        assert!(v["result"].get("stats").is_none());
        assert!(v["run"]["stats"]["/stats"].is_object());
    }

    #[test]
    fn usage_errors() {
        let (code, _, err) = call(&["decomp", "--bogus"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("Usage"));
        assert_eq!(call(&["field-info", "--p", "9"]).0, EXIT_USAGE);
        assert_eq!(call(&["sieve-bound", "--N", "1000", "--residues", "1,2"]).0, EXIT_USAGE);
    }

    #[test]
    fn verification_failure_exit() {
        let (code, out, _) = call(&["em-verify", "--set", "1,2,3"]);
        assert_eq!(code, EXIT_VERIFY_FAILED);
        assert!(out.contains("\"ok\": false"));
    }

    #[test]
    fn timeout_exit() {
        let (code, _, err) = call(&["em-search", "--N", "100000", "--budget", "0.001"]);
        assert_eq!(code, EXIT_TIMEOUT);
        assert!(err.contains("\"timeout\""));
    }

    #[test]
    fn stats_are_moved_out() {
        let mut v = json!({"a": {"stats": 1, "b": [{"stats": 2}]}});
        let mut sink = Map::new();
        extract_stats(&mut v, "", &mut sink);
        assert_eq!(v, json!({"a": {"b": [{}]}}));
        assert_eq!(sink.len(), 2);
        assert_eq!(sink["/a/b/0/stats"], json!(2));
    }
}
