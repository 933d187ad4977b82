//! The bundled verification suites. Each returns its checks plus a result payload;
//! domain errors become failing checks.

use ich_core::cherednik::{FiltrationSpec, HbContext};
use ich_core::invariants::{cprime_top_symbol, dualize};
use ich_core::modp::{
    frobenius_central_elements, leading_monomials_independent, modp_casimirs, reduction_compatibility,
};
use ich_core::poisson::{elimination_trials, gr_t, zero_locus_correspondence, PoissonAlgebra};
use ich_core::polyseries::{is_prime, Field, Scalar};
use ich_core::verma::{central_character, random_weights};
use serde_json::{json, Value};

use crate::report::Check;

pub type SuiteOutput = (Vec<Check>, Value);

fn fail(name: &str, e: impl std::fmt::Display) -> SuiteOutput {
    (vec![Check::new(name, false, e.to_string())], Value::Null)
}

pub fn pbw(ctx: &HbContext, samples: usize, seed: u64, max_degree: u32) -> SuiteOutput {
    let d = 3.min(max_degree);
    let len = 5.min(max_degree);
    let r = ctx.pbw_check(d, len, samples, seed);
    let mut checks: Vec<Check> = r
        .counts
        .iter()
        .map(|&(k, got, want)| {
            Check::new(
                format!("pbw-count-d{k}"),
                got == want,
                format!("{got} normal monomials, C(n^2+2n+{k},{k}) = {want}"),
            )
        })
        .collect();
    checks.push(Check::new(
        "confluence",
        r.mismatches.is_empty(),
        format!(
            "{} words of length <= {len}, 4 strategies, {} mismatches",
            r.words_checked,
            r.mismatches.len()
        ),
    ));
    (checks, json!({"words": r.words_checked, "mismatches": r.mismatches.len()}))
}

pub fn kostant(ctx: &HbContext) -> SuiteOutput {
    let cas = match ctx.casimirs() {
        Ok(c) => c,
        Err(e) => return fail("casimir-solver", e),
    };
    let mut checks = Vec::new();
    let mut meta = Vec::new();
    for c in cas {
        let i = c.i;
        checks.push(Check::new(format!("t{i}-central"), ctx.is_central(&c.t), "commutes with all generators"));
        let agree = match (ctx.casimir_core(i), ctx.casimir_core_right(i)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        };
        checks.push(Check::new(format!("t{i}-two-expressions"), agree, "sum [a_i,y_j]x_j = sum y_j[x_j,a_i]"));
        let cprime = cprime_top_symbol(ctx.field(), ctx.n(), ctx.m(), i).map(|p| dualize(&p).into_poly());
        let top = ctx.ug().symbol(&c.c);
        let sign_ok = match (&cprime, &top) {
            (Ok(p), Some(t)) => *t == p.scale(&ctx.field().int(c.sign as i64)),
            _ => false,
        };
        checks.push(Check::new(format!("c{i}-cprime"), sign_ok, format!("top symbol matches c' coefficient with sign {}", c.sign)));
        let t_sym = ctx.symbol(&c.t, FiltrationSpec::GOnly);
        let c_sym = ctx.symbol(&ctx.embed(&c.c), FiltrationSpec::GOnly);
        let gr_ok = matches!((&t_sym, &c_sym), (Ok(a), Ok(b)) if *a == -b);
        checks.push(Check::new(
            format!("t{i}-gonly-symbol"),
            gr_ok,
            "GONLY symbol(t_i) = -symbol(c_i): the correction carries the top g-degree",
        ));
        meta.push(json!({"i": i, "sign": c.sign, "ansatz_dim": c.ansatz_dim, "solve_rank": c.solve_rank}));
    }
    for a in cas {
        for b in cas.iter().filter(|b| b.i > a.i) {
            checks.push(Check::new(
                format!("t{}-t{}-commute", a.i, b.i),
                ctx.commutator(&a.t, &b.t).is_zero(),
                "",
            ));
        }
    }
    for i in 1..=ctx.n() {
        let r = gr_t(ctx, i);
        checks.push(Check::new(
            format!("gr-t{i}-poisson-central"),
            r.is_ok(),
            r.err().map_or_else(|| "bracket with every generator vanishes".into(), |e| e.to_string()),
        ));
    }
    (checks, json!({"casimirs": meta}))
}

pub fn duflo_scalar(ctx: &HbContext, count: usize, depth: u32, seed: u64) -> SuiteOutput {
    let mut checks = Vec::new();
    let mut chars = Vec::new();
    for (k, w) in random_weights(ctx, count, seed).iter().enumerate() {
        let label: Vec<String> = w.values().iter().map(Scalar::to_string).collect();
        match central_character(ctx, w, depth) {
            Ok(chi) => {
                checks.push(Check::new(
                    format!("weight{k}-scalar-action"),
                    true,
                    format!("lambda = ({}): t_i - chi_i kills depth <= {depth}", label.join(", ")),
                ));
                if ctx.n() == 1 && ctx.m() == 1 {
                    let l = &w.values()[0];
                    let f = ctx.field();
                    let b0 = &ctx.b()[0];
                    let expected = &(l + &f.one()) * &(l + b0);
                    checks.push(Check::new(
                        format!("weight{k}-closed-form"),
                        chi[0] == expected,
                        format!("chi = {} vs (l+1)(l+b0) = {expected}", chi[0]),
                    ));
                }
                chars.push(json!({"lambda": label, "chi": chi.iter().map(Scalar::to_string).collect::<Vec<_>>()}));
            }
            Err(e) => checks.push(Check::new(format!("weight{k}-scalar-action"), false, e.to_string())),
        }
    }
    (checks, json!({"characters": chars}))
}

pub fn orbit(ctx: &HbContext, samples: usize, seed: u64) -> SuiteOutput {
    if ctx.n() > 3 {
        return fail("orbit", "orbit checks support n <= 3");
    }
    if ctx.field() != Field::Rational {
        return fail("orbit", "orbit checks run in characteristic 0");
    }
    let mut checks = Vec::new();
    let corr = match zero_locus_correspondence(ctx.n(), samples, seed) {
        Ok(r) => r,
        Err(e) => return fail("zero-locus", e),
    };
    checks.push(Check::new(
        "zero-locus",
        corr.failures.is_empty(),
        format!("{}/{} samples consistent ({} with f_y != 0)", corr.passes, corr.samples, corr.nonvanishing),
    ));
    let target = samples.min(50);
    match elimination_trials(ctx, target, seed) {
        Ok(r) => checks.push(Check::new(
            "elimination",
            r.passed(),
            match r.failures.first() {
                None => format!("{} from f_y, {} from f_x, {} zero residuals", r.from_y, r.from_x, r.zero_residual),
                Some(f) => format!("{} failures, first: {f}", r.failures.len()),
            },
        )),
        Err(e) => checks.push(Check::new("elimination", false, e.to_string())),
    }
    (checks, corr.to_json())
}

/// The three smallest admissible primes for `(n, m)`.
pub fn default_primes(n: usize, m: usize) -> Vec<u64> {
    ((n + m) as u64 + 1..).filter(|&p| is_prime(p)).take(3).collect()
}

pub fn modp(n: usize, m: usize, b: &[Scalar], primes: &[u64]) -> SuiteOutput {
    let ctx0 = match HbContext::new(n, m, b.to_vec(), 0) {
        Ok(c) => c,
        Err(e) => return fail("context", e),
    };
    let mut checks = Vec::new();
    let mut reports = Vec::new();
    for &p in primes {
        let field = Field::Prime(p);
        let bp: Result<Vec<Scalar>, _> = b.iter().map(|s| s.reduce(field)).collect();
        let ctx = match bp.map_err(|e| e.to_string()).and_then(|bp| HbContext::new(n, m, bp, p).map_err(|e| e.to_string())) {
            Ok(c) => c,
            Err(e) => {
                checks.push(Check::new(format!("p{p}-context"), false, e));
                continue;
            }
        };
        match frobenius_central_elements(&ctx) {
            Ok((elems, report)) => {
                checks.push(Check::new(
                    format!("p{p}-restricted-powers"),
                    report.passed(),
                    format!("{} elements y^p, x^p, g^p - g^[p]", report.entries.len()),
                ));
                let raw: Vec<_> = elems.into_iter().map(|(_, e)| e).collect();
                checks.push(Check::new(
                    format!("p{p}-z0-independent"),
                    leading_monomials_independent(&ctx, &raw),
                    "leading monomials have independent exponent vectors",
                ));
                reports.push(report.to_json());
            }
            Err(e) => checks.push(Check::new(format!("p{p}-restricted-powers"), false, e.to_string())),
        }
        match modp_casimirs(&ctx) {
            Ok(cs) => checks.push(Check::new(format!("p{p}-casimirs"), true, format!("{} central t_i over F_{p}", cs.len()))),
            Err(e) => checks.push(Check::new(format!("p{p}-casimirs"), false, e.to_string())),
        }
        match reduction_compatibility(&ctx0, &ctx) {
            Ok(v) => checks.push(Check::new(
                format!("p{p}-reduction"),
                v.iter().all(|&(c, eq)| c && eq),
                "char-0 t_i reduced mod p is central and equals the F_p solution",
            )),
            Err(e) => checks.push(Check::new(format!("p{p}-reduction"), false, e.to_string())),
        }
    }
    (checks, json!({"reports": reports}))
}

/// Jacobi identity on all generator triples.
pub fn jacobi(field: Field, n: usize, m: usize) -> SuiteOutput {
    match PoissonAlgebra::new(field, n, m).and_then(|a| a.jacobi_failures()) {
        Ok(bad) => (
            vec![Check::new(
                "jacobi",
                bad.is_empty(),
                format!("{} failing generator triples", bad.len()),
            )],
            json!({"failures": bad.iter().map(|t| format!("{t:?}")).collect::<Vec<_>>()}),
        ),
        Err(e) => fail("jacobi", e),
    }
}
