//! The `ich` command line: parameter handling, dispatch and JSON reports.

pub mod parse;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ich_core::cherednik::HbContext;
use ich_core::polyseries::{Field, Scalar};
use ich_core::serialize::poly_to_json;
use ich_core::verma::{central_character, singular_vectors, weight_space_dim, Weight};
use serde_json::{json, Value};
use thiserror::Error;

pub use parse::{parse_expr, print_elem, ParseError};
pub use report::{Check, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum UsageError {
    #[error("bad --b: {0}")]
    Params(String),
    #[error("bad --lambda: {0}")]
    Weight(String),
    #[error("{what} = {value} exceeds --max-degree {max}")]
    Guard { what: &'static str, value: u32, max: u32 },
    #[error("{0}")]
    Context(String),
    #[error("{0}")]
    Expr(#[from] ParseError),
}

#[derive(Debug, Parser)]
#[command(name = "ich", about = "Exact computations in infinitesimal Cherednik algebras of gl_n")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 1)]
    pub m: usize,
    /// Comma-separated b_0,...,b_m; the last entry must be 1. Default 0,...,0,1.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long = "char", global = true, default_value_t = 0)]
    pub char_p: u64,
    #[arg(long, global = true, env = "ICH_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub depth: Option<u32>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true, default_value_t = 6)]
    pub max_degree: u32,
    /// Plain-text report instead of JSON.
    #[arg(long, global = true)]
    pub text: bool,
    /// Report elapsed_ms as 0 so output is byte-stable.
    #[arg(long, global = true)]
    pub no_timing: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Normal form of an expression.
    Nf {
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
    },
    /// Commutator [lhs, rhs].
    Bracket {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
    },
    /// Central elements t_i and corrections c_i.
    Casimir {
        #[arg(long)]
        i: Option<usize>,
    },
    /// Verma module data for a weight.
    Verma {
        /// Comma-separated values on e[1,1],...,e[n,n].
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Poisson-algebra checks.
    Poisson {
        #[arg(long, value_enum, default_value = "jacobi")]
        check: PoissonCheck,
    },
    /// Characteristic-p central elements (requires --char p).
    Modp,
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PoissonCheck {
    Jacobi,
    GrCentral,
    Orbit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Pbw,
    Kostant,
    DufloScalar,
    Orbit,
    Modp,
    All,
}

fn params_json(c: &Common, cmd: &Command) -> Value {
    let mut p = json!({
        "n": c.n, "m": c.m, "b": c.b.clone().unwrap_or_else(|| default_b(c.m)),
        "char": c.char_p, "seed": c.seed, "max_degree": c.max_degree,
    });
    let obj = p.as_object_mut().expect("object");
    if let Some(d) = c.depth {
        obj.insert("depth".into(), json!(d));
    }
    if let Some(s) = c.samples {
        obj.insert("samples".into(), json!(s));
    }
    match cmd {
        Command::Nf { expr } => {
            obj.insert("expr".into(), json!(expr));
        }
        Command::Bracket { lhs, rhs } => {
            obj.insert("lhs".into(), json!(lhs));
            obj.insert("rhs".into(), json!(rhs));
        }
        Command::Casimir { i } => {
            obj.insert("i".into(), json!(i));
        }
        Command::Verma { lambda } => {
            obj.insert("lambda".into(), json!(lambda));
        }
        Command::Poisson { check } => {
            obj.insert("check".into(), json!(format!("{check:?}").to_lowercase()));
        }
        Command::Verify { suite } => {
            obj.insert("suite".into(), json!(format!("{suite:?}").to_lowercase()));
        }
        Command::Modp => {}
    }
    p
}

fn default_b(m: usize) -> String {
    let mut v = vec!["0"; m];
    v.push("1");
    v.join(",")
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Nf { .. } => "nf",
        Command::Bracket { .. } => "bracket",
        Command::Casimir { .. } => "casimir",
        Command::Verma { .. } => "verma",
        Command::Poisson { .. } => "poisson",
        Command::Modp => "modp",
        Command::Verify { .. } => "verify",
    }
}

/// `b` parsed over Q.
pub fn parse_b(c: &Common) -> Result<Vec<Scalar>, UsageError> {
    let src = c.b.clone().unwrap_or_else(|| default_b(c.m));
    src.split(',')
        .map(|s| Field::Rational.parse(s).map_err(|e| UsageError::Params(format!("{s}: {e}"))))
        .collect()
}

pub fn build_context(c: &Common, char_p: u64) -> Result<HbContext, UsageError> {
    let field = Field::from_char(char_p).map_err(|e| UsageError::Context(e.to_string()))?;
    let b = parse_b(c)?
        .iter()
        .map(|s| s.reduce(field))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| UsageError::Params(e.to_string()))?;
    HbContext::new(c.n, c.m, b, char_p).map_err(|e| UsageError::Context(e.to_string()))
}

fn elem_json(ctx: &HbContext, a: &ich_core::cherednik::HbElem) -> Value {
    json!({
        "text": print_elem(ctx, a),
        "terms": poly_to_json(&ctx.to_poly(a)).unwrap_or(Value::Null),
    })
}

fn guard(what: &'static str, value: u32, max: u32) -> Result<(), UsageError> {
    if value > max {
        Err(UsageError::Guard { what, value, max })
    } else {
        Ok(())
    }
}

type Outcome = Result<(Vec<Check>, Value), UsageError>;

fn run_nf(c: &Common, expr: &str) -> Outcome {
    let ctx = build_context(c, c.char_p)?;
    let a = parse_expr(expr, &ctx, c.max_degree)?;
    let printed = print_elem(&ctx, &a);
    let again = parse_expr(&printed, &ctx, u32::MAX).ok();
    let checks = vec![Check::new(
        "idempotent",
        again.as_ref() == Some(&a),
        "re-parsing the printed normal form is a fixed point",
    )];
    Ok((checks, elem_json(&ctx, &a)))
}

fn run_bracket(c: &Common, lhs: &str, rhs: &str) -> Outcome {
    let ctx = build_context(c, c.char_p)?;
    let a = parse_expr(lhs, &ctx, c.max_degree)?;
    let b = parse_expr(rhs, &ctx, c.max_degree)?;
    let ab = ctx.commutator(&a, &b);
    let ba = ctx.commutator(&b, &a);
    let checks = vec![Check::new("antisymmetry", ab == ba.neg(), "[a,b] = -[b,a]")];
    Ok((checks, elem_json(&ctx, &ab)))
}

fn run_casimir(c: &Common, i: Option<usize>) -> Outcome {
    let ctx = build_context(c, c.char_p)?;
    let wanted: Vec<usize> = match i {
        Some(k) if k == 0 || k > c.n => return Err(UsageError::Context(format!("--i {k} outside 1..={}", c.n))),
        Some(k) => vec![k],
        None => (1..=c.n).collect(),
    };
    let cas = match ctx.casimirs() {
        Ok(cs) => cs,
        Err(e) => return Ok((vec![Check::new("casimir-solver", false, e.to_string())], Value::Null)),
    };
    let mut checks = Vec::new();
    let mut out = Vec::new();
    for k in wanted {
        let cs = &cas[k - 1];
        checks.push(Check::new(format!("t{k}-central"), ctx.is_central(&cs.t), "commutes with all generators"));
        let c_hb = ctx.embed(&cs.c);
        out.push(json!({
            "i": k,
            "t": elem_json(&ctx, &cs.t),
            "c": elem_json(&ctx, &c_hb),
            "sign": cs.sign,
            "ansatz_dim": cs.ansatz_dim,
            "solve_rank": cs.solve_rank,
        }));
    }
    Ok((checks, json!({"casimirs": out})))
}

fn parse_weight(ctx: &HbContext, src: &str) -> Result<Weight, UsageError> {
    let vals = src
        .split(',')
        .map(|s| ctx.field().parse(s).map_err(|e| UsageError::Weight(format!("{s}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Weight::new(ctx, vals).map_err(|e| UsageError::Weight(e.to_string()))
}

fn run_verma(c: &Common, lambda: &str) -> Outcome {
    let ctx = build_context(c, c.char_p)?;
    let w = parse_weight(&ctx, lambda)?;
    let depth = c.depth.unwrap_or(4);
    guard("--depth", depth, c.max_degree)?;
    let mut checks = Vec::new();
    let dims: Vec<usize> = (0..=depth).map(|k| weight_space_dim(&ctx, k).unwrap_or(0)).collect();
    let chi = match central_character(&ctx, &w, depth) {
        Ok(chi) => {
            checks.push(Check::new("scalar-action", true, format!("t_i - chi_i kills depth <= {depth}")));
            json!(chi.iter().map(Scalar::to_string).collect::<Vec<_>>())
        }
        Err(e) => {
            checks.push(Check::new("scalar-action", false, e.to_string()));
            Value::Null
        }
    };
    let sv = match singular_vectors(&ctx, &w, depth) {
        Ok(sv) => sv
            .iter()
            .map(|s| {
                json!({
                    "depth": s.depth,
                    "weight_shift": s.weight_shift,
                    "vector": s.vector.terms().map(|(m, c)| json!([c.to_string(), {"x": m.xexp, "lower": m.lexp}])).collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
        Err(e) => {
            checks.push(Check::new("singular-vectors", false, e.to_string()));
            Vec::new()
        }
    };
    Ok((checks, json!({"depth_dims": dims, "central_character": chi, "singular_vectors": sv})))
}

fn run_poisson(c: &Common, check: PoissonCheck) -> Outcome {
    let field = Field::from_char(c.char_p).map_err(|e| UsageError::Context(e.to_string()))?;
    match check {
        PoissonCheck::Jacobi => Ok(suites::jacobi(field, c.n, c.m)),
        PoissonCheck::GrCentral => {
            let ctx = build_context(c, c.char_p)?;
            let mut checks = Vec::new();
            let mut out = Vec::new();
            for i in 1..=c.n {
                match ich_core::poisson::gr_t(&ctx, i) {
                    Ok(g) => {
                        checks.push(Check::new(format!("gr-t{i}-central"), true, ""));
                        out.push(poly_to_json(g.poly()).unwrap_or(Value::Null));
                    }
                    Err(e) => checks.push(Check::new(format!("gr-t{i}-central"), false, e.to_string())),
                }
            }
            Ok((checks, json!({"gr_t": out})))
        }
        PoissonCheck::Orbit => {
            let ctx = build_context(c, 0)?;
            Ok(suites::orbit(&ctx, c.samples.unwrap_or(100), c.seed))
        }
    }
}

fn run_modp(c: &Common) -> Outcome {
    if c.char_p == 0 {
        return Err(UsageError::Context("modp needs --char p".into()));
    }
    // validates admissibility up front
    build_context(c, c.char_p)?;
    Ok(suites::modp(c.n, c.m, &parse_b(c)?, &[c.char_p]))
}

fn run_verify(c: &Common, suite: Suite) -> Outcome {
    let mut checks = Vec::new();
    let mut result = serde_json::Map::new();
    let run_all = suite == Suite::All;
    let mut add = |name: &str, (cs, v): (Vec<Check>, Value)| {
        checks.extend(cs.into_iter().map(|mut ch| {
            if run_all {
                ch.name = format!("{name}/{}", ch.name);
            }
            ch
        }));
        result.insert(name.to_string(), v);
    };
    if matches!(suite, Suite::Pbw | Suite::All) {
        let ctx = build_context(c, c.char_p)?;
        add("pbw", suites::pbw(&ctx, c.samples.unwrap_or(200), c.seed, c.max_degree));
    }
    if matches!(suite, Suite::Kostant | Suite::All) {
        let ctx = build_context(c, c.char_p)?;
        add("kostant", suites::kostant(&ctx));
    }
    if matches!(suite, Suite::DufloScalar | Suite::All) {
        let ctx = build_context(c, c.char_p)?;
        let depth = c.depth.unwrap_or(3);
        guard("--depth", depth, c.max_degree)?;
        add("duflo-scalar", suites::duflo_scalar(&ctx, c.samples.unwrap_or(5), depth, c.seed));
    }
    if matches!(suite, Suite::Orbit | Suite::All) {
        let ctx = build_context(c, 0)?;
        add("orbit", suites::orbit(&ctx, c.samples.unwrap_or(100), c.seed));
    }
    if matches!(suite, Suite::Modp | Suite::All) {
        let primes = if c.char_p > 0 {
            vec![c.char_p]
        } else {
            suites::default_primes(c.n, c.m)
        };
        add("modp", suites::modp(c.n, c.m, &parse_b(c)?, &primes));
    }
    Ok((checks, Value::Object(result)))
}

/// Nested reports carry their own timings.
fn zero_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                if k == "elapsed_ms" {
                    *x = json!(0);
                } else {
                    zero_timings(x);
                }
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(zero_timings),
        _ => {}
    }
}

/// Runs a parsed command. Usage errors yield a failing "usage" check and exit code 2.
pub fn run(cli: &Cli) -> (Report, i32) {
    let start = Instant::now();
    let c = &cli.common;
    let outcome = match &cli.command {
        Command::Nf { expr } => run_nf(c, expr),
        Command::Bracket { lhs, rhs } => run_bracket(c, lhs, rhs),
        Command::Casimir { i } => run_casimir(c, *i),
        Command::Verma { lambda } => run_verma(c, lambda),
        Command::Poisson { check } => run_poisson(c, *check),
        Command::Modp => run_modp(c),
        Command::Verify { suite } => run_verify(c, *suite),
    };
    let (checks, mut result, usage) = match outcome {
        Ok((checks, result)) => (checks, result, false),
        Err(e) => (vec![Check::new("usage", false, e.to_string())], Value::Null, true),
    };
    if c.no_timing {
        zero_timings(&mut result);
    }
    let elapsed_ms = if c.no_timing {
        0
    } else {
        start.elapsed().as_millis() as u64
    };
    let report = Report {
        command: command_name(&cli.command).into(),
        params: params_json(c, &cli.command),
        result,
        checks,
        elapsed_ms,
    };
    let code = if usage {
        EXIT_USAGE
    } else if report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    (report, code)
}

/// Parses arguments, runs, and prints the report. Returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (report, code) = run(&cli);
    if cli.common.text {
        print!("{}", report.to_text());
    } else {
        println!(
            "{}",
            serde_json::to_string_pretty(&report.to_json()).expect("report serializes")
        );
    }
    code
}
