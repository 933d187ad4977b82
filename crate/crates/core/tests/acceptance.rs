//! Acceptance run: one PASS/FAIL line per criterion, with its time budget.
//! Run with `cargo test -p ich-core --test acceptance`.

use std::time::{Duration, Instant};

use ich_core::cherednik::{FiltrationSpec, HbContext};
use ich_core::invariants::{cprime_top_symbol, dualize};
use ich_core::modp::{frobenius_central_elements, leading_monomials_independent, modp_casimirs, reduction_compatibility};
use ich_core::poisson::{elimination_trials, gr_t, zero_locus_correspondence, PoissonAlgebra};
use ich_core::polyseries::Field;
use ich_core::verma::{central_character, random_weights, singular_vectors, Weight};

const Q: Field = Field::Rational;
const SEED: u64 = 20240601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn run(id: u32, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let in_time = took <= budget;
    let pass = out.pass && in_time;
    println!(
        "{} criterion {id} ({name}): {} [{:.2}s / {}s]",
        if pass { "PASS" } else { "FAIL" },
        out.detail,
        took.as_secs_f64(),
        budget.as_secs()
    );
    pass
}

fn ctx(n: usize, m: usize, b: &[i64]) -> HbContext {
    HbContext::with_ints(n, m, b, 0).expect("valid parameters")
}

/// `b_0..b_m` with `b_m = 1` and small nonzero lower entries.
fn params(m: usize) -> Vec<i64> {
    (0..=m).map(|k| if k == m { 1 } else { k as i64 + 3 }).collect()
}

const CASES: [(usize, usize); 3] = [(1, 1), (1, 2), (2, 1)];

fn pbw() -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    for (n, m) in CASES {
        let h = ctx(n, m, &params(m));
        let r = h.pbw_check(3, 5, 200, SEED);
        pass &= r.passed();
        let counts: Vec<String> = r.counts.iter().map(|(d, got, want)| format!("d{d}:{got}/{want}")).collect();
        notes.push(format!("({n},{m}) {} words, {} mismatches, {}", r.words_checked, r.mismatches.len(), counts.join(" ")));
    }
    ok(pass, notes.join("; "))
}

fn casimirs() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (n, m) in CASES {
        let h = ctx(n, m, &params(m));
        let cas = match h.casimirs() {
            Ok(c) => c,
            Err(e) => return ok(false, format!("({n},{m}): {e}")),
        };
        let central = cas.iter().all(|c| h.is_central(&c.t));
        let commute = cas.iter().all(|a| cas.iter().all(|b| h.commutator(&a.t, &b.t).is_zero()));
        let agree = (1..=n).all(|i| matches!((h.casimir_core(i), h.casimir_core_right(i)), (Ok(a), Ok(b)) if a == b));
        pass &= central && commute && agree;
        notes.push(format!("({n},{m}) central={central} commute={commute} two-expressions={agree}"));
    }
    // c_1 = -e^2 + (1 - b_0) e at n = m = 1, for several b_0
    for b0 in [0i64, 3, -2] {
        let h = ctx(1, 1, &[b0, 1]);
        let e = h.e(1, 1);
        let want = h.mul(&e, &e).neg().add(&e.scale(&Q.int(1 - b0)));
        let got = h.casimir(1).map(|c| h.embed(&c.c));
        let hit = matches!(&got, Ok(c) if *c == want);
        pass &= hit;
        notes.push(format!("anchor b0={b0}: {hit}"));
    }
    ok(pass, notes.join("; "))
}

fn cprime() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (n, m) in CASES {
        let h = ctx(n, m, &params(m));
        let Ok(cas) = h.casimirs() else { return ok(false, format!("({n},{m}) solver failed")) };
        for c in cas {
            let hit = match (cprime_top_symbol(Q, n, m, c.i), h.ug().symbol(&c.c)) {
                (Ok(p), Some(top)) => top == dualize(&p).into_poly().scale(&Q.int(c.sign as i64)),
                _ => false,
            };
            pass &= hit;
            notes.push(format!("({n},{m}) c{} sign {:+}", c.i, c.sign));
        }
    }
    ok(pass, notes.join("; "))
}

fn gonly_symbol() -> Outcome {
    let mut literal = true;
    let mut up_to_sign = true;
    let mut drop = true;
    for (n, m) in CASES {
        let h = ctx(n, m, &params(m));
        let Ok(cas) = h.casimirs() else { return ok(false, format!("({n},{m}) solver failed")) };
        for c in cas {
            let ce = h.embed(&c.c);
            let (Ok(ts), Ok(cs)) = (h.symbol(&c.t, FiltrationSpec::GOnly), h.symbol(&ce, FiltrationSpec::GOnly)) else {
                return ok(false, "symbol failed");
            };
            literal &= ts == cs;
            up_to_sign &= ts == -&cs;
            let s = h.casimir_core(c.i).expect("core");
            drop &= h.filtration_degree(&s, FiltrationSpec::GOnly) < h.filtration_degree(&ce, FiltrationSpec::GOnly);
        }
    }
    ok(
        literal,
        format!("literal symbol(t_i) = symbol(c_i): {literal}; symbol(t_i) = -symbol(c_i): {up_to_sign}; deg s_i < deg c_i: {drop}"),
    )
}

fn duflo() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for n in [1usize, 2] {
        let h = ctx(n, 1, &[3, 1]);
        for w in random_weights(&h, 5, SEED) {
            match central_character(&h, &w, 3) {
                Ok(chi) if n == 1 => {
                    let l = &w.values()[0];
                    let b0 = &h.b()[0];
                    let closed = &(l + &Q.one()) * &(l + b0);
                    let mirror = Weight::new(&h, vec![&(-l) - &(&Q.one() + b0)]).expect("weight");
                    let linked = central_character(&h, &mirror, 3).map(|c| c == chi).unwrap_or(false);
                    pass &= chi[0] == closed && linked;
                }
                Ok(_) => {}
                Err(e) => {
                    pass = false;
                    notes.push(format!("n={n}: {e}"));
                }
            }
        }
        notes.push(format!("n={n}: 5 weights scalar at depth <= 3"));
    }
    ok(pass, notes.join("; "))
}

fn singular() -> Outcome {
    let h = ctx(1, 1, &[0, 1]);
    let mut pass = true;
    let mut notes = Vec::new();
    // 2 lambda = k - 1 for k = 1..4, plus weights with no k <= 4
    let cases: [(i64, i64, Option<u32>); 7] = [
        (0, 1, Some(1)),
        (1, 2, Some(2)),
        (1, 1, Some(3)),
        (3, 2, Some(4)),
        (1, 3, None),
        (-1, 1, None),
        (7, 5, None),
    ];
    for (num, den, want) in cases {
        let w = Weight::new(&h, vec![Q.ratio(num, den).expect("ratio")]).expect("weight");
        let depths: Vec<u32> = match singular_vectors(&h, &w, 4) {
            Ok(v) => v.iter().map(|s| s.depth).collect(),
            Err(e) => return ok(false, e.to_string()),
        };
        let hit = depths == want.into_iter().collect::<Vec<_>>();
        pass &= hit;
        notes.push(format!("lambda={num}/{den} -> {depths:?}"));
    }
    ok(pass, notes.join(", "))
}

fn poisson() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for n in [1usize, 2] {
        for m in [1usize, 2] {
            let bad = PoissonAlgebra::new(Q, n, m).and_then(|a| a.jacobi_failures());
            let good = matches!(&bad, Ok(v) if v.is_empty());
            pass &= good;
            notes.push(format!("jacobi ({n},{m}): {good}"));
        }
        let h = ctx(n, 1, &[3, 1]);
        let central = (1..=n).all(|i| gr_t(&h, i).is_ok());
        pass &= central;
        notes.push(format!("gr t central n={n}: {central}"));
    }
    ok(pass, notes.join("; "))
}

fn orbit() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for n in [2usize, 3] {
        match zero_locus_correspondence(n, 100, SEED) {
            Ok(r) => {
                pass &= r.failures.is_empty();
                notes.push(format!("n={n}: {}/{} consistent, {} with f_y != 0", r.passes, r.samples, r.nonvanishing));
            }
            Err(e) => return ok(false, e.to_string()),
        }
    }
    let h = ctx(2, 1, &[3, 1]);
    match elimination_trials(&h, 50, SEED) {
        Ok(r) => {
            pass &= r.passed();
            notes.push(format!("elimination: {} via f_y, {} via f_x, {} zero residuals", r.from_y, r.from_x, r.zero_residual));
        }
        Err(e) => return ok(false, e.to_string()),
    }
    ok(pass, notes.join("; "))
}

fn modp() -> Outcome {
    let mut pass = true;
    let mut notes = Vec::new();
    for (n, b, primes) in [(1usize, [3i64, 1], [5u64, 7, 11]), (2, [1, 1], [7, 11, 13])] {
        let h0 = ctx(n, 1, &b);
        for p in primes {
            let hp = match HbContext::with_ints(n, 1, &b, p) {
                Ok(h) => h,
                Err(e) => return ok(false, format!("n={n} p={p}: {e}")),
            };
            let frob = frobenius_central_elements(&hp);
            let restricted = matches!(&frob, Ok((_, r)) if r.passed());
            let independent = match &frob {
                Ok((elems, _)) => {
                    let raw: Vec<_> = elems.iter().map(|(_, e)| e.clone()).collect();
                    leading_monomials_independent(&hp, &raw)
                }
                Err(_) => false,
            };
            let cas = modp_casimirs(&hp).is_ok();
            let reduce = matches!(reduction_compatibility(&h0, &hp), Ok(v) if v.iter().all(|&(c, e)| c && e));
            let good = restricted && independent && cas && reduce;
            pass &= good;
            notes.push(format!("n={n} p={p}: {}", if good { "ok" } else { "bad" }));
        }
    }
    ok(pass, notes.join("; "))
}

fn main() {
    let mins = |m: u64| Duration::from_secs(60 * m);
    let results = [
        run(1, "PBW basis and confluence", Duration::from_secs(30), pbw),
        run(2, "Casimirs central and commuting", mins(5), casimirs),
        run(3, "top symbol of c_i from c'", mins(5), cprime),
        run(4, "GONLY symbol of t_i equals that of c_i", mins(5), gonly_symbol),
        run(5, "central characters on Verma modules", mins(2), duflo),
        run(6, "singular vectors at n = 1", mins(2), singular),
        run(7, "Poisson Jacobi and central gr t_i", mins(1), poisson),
        run(8, "zero locus and elimination", mins(1), orbit),
        run(9, "characteristic p", mins(5), modp),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
