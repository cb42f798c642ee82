use std::process::{Command, Output};

use serde_json::Value;

fn congabc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_congabc"))
        .args(args)
        .env_remove("CONGABC_RHO_BUDGET")
        .output()
        .expect("run congabc")
}

fn json(args: &[&str]) -> (i32, Value, String) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = congabc(&all);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or(Value::Null);
    (out.status.code().unwrap(), value, text)
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn analyze_reports_quality_and_merit() {
    let (code, v, _) = json(&["analyze", "1", "8", "-9", "--eps", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["triple"]["a"], "-8");
    assert_eq!(v["rad"], "6");
    assert!((num(&v["quality"]) - 9f64.ln() / 6f64.ln()).abs() < 1e-11);
    assert!((num(&v["quality"]) - 1.226294).abs() < 1e-6);
    assert!((num(&v["merit"][0]["f"]) - 1.5f64.ln()).abs() < 1e-11);
    assert!((num(&v["merit"][0]["f"]) - 0.405465).abs() < 1e-6);
    assert_eq!(v["factorizations"]["a"], "2^3");

    let (_, v, _) = json(&["analyze", "1", "2", "-3"]);
    assert!((num(&v["quality"]) - 0.613147).abs() < 1e-6);

    // a + b = c convention.
    let (_, w, _) = json(&["analyze", "1", "8", "9", "--eps", "0,1"]);
    assert_eq!(w["triple"]["a"], "-8");
}

#[test]
fn analyze_rejects_non_coprime_with_exit_2() {
    let out = congabc(&["analyze", "2", "4", "-6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NotCoprime"));
}

#[test]
fn theta_orbit() {
    let (code, v, _) = json(&["theta", "1", "2", "-3", "--n", "2", "--iter", "2"]);
    assert_eq!(code, 0);
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[0]["raw"], serde_json::json!(["-1", "-8", "9"]));
    assert_eq!(steps[1]["raw"], serde_json::json!(["-49", "-32", "81"]));
    assert_eq!(steps[1]["output"]["c"], "81");

    let (_, v, _) = json(&["theta", "1", "3", "-4", "--n", "2"]);
    assert_eq!(v["steps"][0]["fixed_point"], true);

    assert_eq!(congabc(&["theta", "1", "2", "-3", "--n", "3"]).status.code(), Some(2));
    assert_eq!(congabc(&["theta", "1", "2", "-3", "--n", "2", "--iter", "0"]).status.code(), Some(2));
}

#[test]
fn bound_reports() {
    let (code, v, _) = json(&["bound", "--N", "3", "--eps", "1", "--C", "10"]);
    assert_eq!(code, 0);
    assert!((num(&v["bound"]) - 19.852).abs() < 1e-3);
    let (_, v, _) = json(&["bound", "--N", "2", "--eps", "1", "--C", "5"]);
    assert_eq!(num(&v["bound"]), 5.0);
    assert!(v["n"].is_null());
    let (_, v, _) = json(&["bound", "--N", "16", "--eps", "0.5", "--C", "1"]);
    assert_eq!(num(&v["n"]), 8.0);
    // eps / (n + n eps - eps) = 0.5 / 11.5
    assert!((num(&v["constants"]["eps_out"]) - 0.5 / 11.5).abs() < 1e-11);
    assert!((num(&v["constants"]["eps_out"]) - 0.0434783).abs() < 1e-7);
    assert_eq!(congabc(&["bound", "--N", "3", "--eps", "0", "--C", "1"]).status.code(), Some(2));
}

#[test]
fn search_hits() {
    let (code, v, _) = json(&["search", "--max-c", "100", "--min-quality", "1.2"]);
    assert_eq!(code, 0);
    let hits = v["hits"].as_array().unwrap();
    let cs: Vec<&str> = hits.iter().map(|h| h["triple"]["c"].as_str().unwrap()).collect();
    assert_eq!(cs, ["81", "9"]);
    let (code, v, _) = json(&["search", "--max-c", "3", "--min-quality", "1"]);
    assert_eq!(code, 0);
    assert!(v["hits"].as_array().unwrap().is_empty());
    assert_eq!(congabc(&["search", "--max-c", "2"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let (code, v, _) = json(&["verify", "lemma2", "--N", "16", "--max-c", "500"]);
    assert_eq!(code, 0);
    assert_eq!(v["fail"], 0);
    let (code, v, _) = json(&["verify", "lemma1", "--n", "2", "--eps", "1", "--max-c", "1000"]);
    assert_eq!(code, 0);
    assert!(v["extremal"]["triple"].is_object());
    assert_eq!(v["pass"], v["corpus_size"]);
    assert_eq!(congabc(&["verify", "lemma1", "--n", "3", "--eps", "1"]).status.code(), Some(2));
    assert_eq!(congabc(&["verify", "lemma2", "--N", "2"]).status.code(), Some(2));
    assert_eq!(congabc(&["verify", "bogus"]).status.code(), Some(2));
}

#[test]
fn chain_exit_codes() {
    let (code, _, _) = json(&["verify", "chain", "--N", "3", "--eps", "1", "--max-c", "100"]);
    assert_eq!(code, 0);
    // A hypothesis below an observed image merit is a usage error.
    let out = congabc(&["verify", "chain", "--N", "3", "--eps", "1", "--C", "-100", "--max-c", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("HypothesisViolated"));
}

#[test]
fn tiny_rho_budget_is_inconclusive() {
    // c = (2^31 - 1) * (2^31 - 19) needs far more than eight rho steps.
    let c = 2_147_483_647u64 * 2_147_483_629u64;
    let out = Command::new(env!("CARGO_BIN_EXE_congabc"))
        .args(["analyze", "1", &(c - 1).to_string(), &format!("-{c}")])
        .env("CONGABC_RHO_BUDGET", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FactorizationFailure"));
}

#[test]
fn json_round_trips_byte_identically() {
    for args in [
        &["analyze", "1", "8", "-9", "--eps", "0,0.1,1"][..],
        &["theta", "1", "2", "-3", "--n", "4", "--iter", "2"],
        &["bound", "--N", "16", "--eps", "0.5", "--C", "1"],
        &["search", "--max-c", "300", "--min-quality", "1.1"],
        &["verify", "lemma1", "--n", "2,4", "--eps", "0.1,1", "--max-c", "200"],
        &["verify", "identities", "--n", "2,6", "--max-c", "100"],
    ] {
        let (_, value, text) = json(args);
        let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
    }
}

#[test]
fn random_corpus_is_seeded() {
    let run = |seed: &str| {
        json(&["verify", "lemma1", "--n", "2", "--eps", "1", "--max-c", "1000000", "--random", "300", "--seed", seed]).2
    };
    let a = run("7");
    assert_eq!(a, run("7"));
    assert_ne!(a, run("8"));
    assert!(a.contains("\"corpus_size\": 300"));
}

#[test]
fn csv_has_fixed_columns() {
    let out = congabc(&["search", "--max-c", "100", "--min-quality", "1.2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a,b,c,rad,quality,f"));
    assert_eq!(lines.next().unwrap().split(',').take(4).collect::<Vec<_>>(), ["-80", "-1", "81", "30"]);

    let out = congabc(&["verify", "lemma1", "--n", "2", "--eps", "1", "--max-c", "50", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("kind,a,b,c,rad,quality,f,n,eps,modulus,lhs,rhs,slack,pass,witness\n"));
    assert!(text.lines().nth(1).unwrap().starts_with("extremal,"));
}
