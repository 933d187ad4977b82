use std::process::Command;

use ich_cli::{parse_expr, print_elem};
use ich_core::cherednik::{HbContext, HbElem, HbGen};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use serde_json::Value;

fn ich(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_ich"))
        .args(args)
        .env_remove("ICH_SEED")
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8"),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("report is JSON")
}

#[test]
fn verify_pbw_n2_passes() {
    let (code, out) = ich(&["verify", "--suite", "pbw", "--n", "2", "--m", "1", "--b", "0,1"]);
    assert_eq!(code, 0, "{out}");
    let r = json(&out);
    assert_eq!(r["command"], "verify");
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    for key in ["command", "params", "result", "checks", "elapsed_ms"] {
        assert!(r.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn casimir_payload_has_hand_formula() {
    let (code, out) = ich(&["casimir", "--n", "1", "--m", "1", "--b", "0,1", "--i", "1"]);
    assert_eq!(code, 0, "{out}");
    let r = json(&out);
    let cas = &r["result"]["casimirs"][0];
    assert_eq!(cas["c"]["text"], "e[1,1] - e[1,1]^2");
    assert_eq!(cas["sign"], -1);
    assert!(cas["ansatz_dim"].as_u64().unwrap() >= 2);
}

#[test]
fn poisson_jacobi_n2() {
    let (code, out) = ich(&["poisson", "--n", "2", "--check", "jacobi"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn nf_example_and_usage_errors() {
    let (code, out) = ich(&["nf", "--n", "1", "--m", "1", "--b", "2,1", "--expr", "y[1]*x[1]"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"]["text"], "2 + 2*e[1,1] + x[1]*y[1]");

    let (code, out) = ich(&["nf", "--n", "2", "--expr", "x[3]"]);
    assert_eq!(code, 2);
    assert!(json(&out)["checks"][0]["detail"].as_str().unwrap().contains("index 3"));

    assert_eq!(ich(&["nf", "--b", "0,2", "--expr", "1"]).0, 2);
    assert_eq!(ich(&["nf", "--expr", "x[1]^9"]).0, 2);
    assert_eq!(ich(&["verma", "--lambda", "0", "--depth", "9"]).0, 2);
    assert_eq!(ich(&["modp"]).0, 2);
    assert_eq!(ich(&["modp", "--n", "2", "--char", "3"]).0, 2);
    assert_eq!(ich(&["frobnicate"]).0, 2);
}

#[test]
fn reports_are_byte_stable() {
    let args = ["verify", "--suite", "orbit", "--n", "2", "--samples", "20", "--seed", "5", "--no-timing"];
    let (c1, a) = ich(&args);
    let (c2, b) = ich(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let modp = ["modp", "--n", "1", "--char", "5", "--no-timing"];
    assert_eq!(ich(&modp).1, ich(&modp).1);
}

#[test]
fn seed_comes_from_environment() {
    let run = |seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_ich"));
        cmd.args(["verify", "--suite", "pbw", "--samples", "5", "--no-timing"]);
        match seed {
            Some(s) => cmd.env("ICH_SEED", s),
            None => cmd.env_remove("ICH_SEED"),
        };
        json(&String::from_utf8(cmd.output().unwrap().stdout).unwrap())["params"]["seed"].clone()
    };
    assert_eq!(run(None), 0);
    assert_eq!(run(Some("17")), 17);
}

#[test]
fn verma_and_modp_commands() {
    let (code, out) = ich(&["verma", "--n", "1", "--m", "1", "--b", "0,1", "--lambda", "0", "--depth", "4"]);
    assert_eq!(code, 0, "{out}");
    let r = json(&out);
    assert_eq!(r["result"]["central_character"][0], "0/1");
    assert_eq!(r["result"]["singular_vectors"].as_array().unwrap().len(), 1);

    let (code, out) = ich(&["modp", "--n", "1", "--m", "1", "--b", "3,1", "--char", "11"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn text_mode() {
    let (code, out) = ich(&["verify", "--suite", "kostant", "--text"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("PASS t1-central")), "{out}");
}

fn random_element(ctx: &HbContext) -> impl Strategy<Value = HbElem> + '_ {
    let ngens = ctx.gens().len();
    let term = (
        -20i64..=20,
        1i64..=6,
        proptest::collection::vec(0..ngens, 0..=3),
    );
    proptest::collection::vec(term, 0..=4).prop_map(move |terms| {
        let f = ctx.field();
        let mut acc = ctx.zero();
        for (num, den, word) in terms {
            let gens: Vec<HbGen> = word.iter().map(|&k| ctx.gens()[k]).collect();
            let c = f.ratio(num, den).unwrap_or_else(|_| f.int(num));
            acc = acc.add(&ctx.word(&gens).scale(&c));
        }
        acc
    })
}

#[test]
fn parse_print_round_trip() {
    for (n, char_p) in [(1usize, 0u64), (2, 0), (2, 7)] {
        let ctx = HbContext::with_ints(n, 1, &[1, 1], char_p).unwrap();
        let mut runner = TestRunner::new_with_rng(
            Config::with_cases(200),
            TestRng::deterministic_rng(RngAlgorithm::ChaCha),
        );
        runner
            .run(&random_element(&ctx), |a| {
                let printed = print_elem(&ctx, &a);
                let back = parse_expr(&printed, &ctx, u32::MAX).expect("printer output parses");
                prop_assert_eq!(back, a, "{}", printed);
                Ok(())
            })
            .unwrap();
    }
}
