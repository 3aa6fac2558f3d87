use std::process::{Command, Output};

use nborient_cli::cache::{Cache, ENV_VAR};
use nborient_cli::commands::{execute, run, Command as Cmd};
use nborient_cli::options::{Budget, RunOptions};
use serde_json::{json, Value};

fn nborient(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nborient"))
        .args(args)
        .env_remove(ENV_VAR)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn reports_are_deterministic() {
    let a = nborient(&["orient-report", "--json", r#"{"suspension":"RP2_6"}"#]);
    let b = nborient(&["orient-report", "--json", r#"{"suspension":"RP2_6"}"#]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let r: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["command"], "orient-report");
    assert_eq!(r["result"]["nonorientable_profile"]["ok"], true);
}

#[test]
fn cache_hit_matches_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let opts = RunOptions::default();
    let spec = json!({"suspension": "T2_7"});
    let fresh = execute(Cmd::Homology, spec.clone(), &opts).unwrap();
    let first = run(Cmd::Homology, Some(spec.clone()), &opts, Some(&cache)).unwrap();
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second = run(Cmd::Homology, Some(spec), &opts, Some(&cache)).unwrap();
    assert_eq!(fresh, first);
    assert_eq!(first.to_json(), second.to_json());
}

#[test]
fn cache_dir_flag_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let cache = dir.path().join("cache");
    let args = ["homology", "T2_7", "--cache-dir", cache.to_str().unwrap(), "--out", out.to_str().unwrap()];
    let a = nborient(&args);
    let first = std::fs::read_to_string(&out).unwrap();
    let b = nborient(&args);
    assert_eq!((code(&a), code(&b)), (0, 0));
    assert_eq!(first, std::fs::read_to_string(&out).unwrap());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&nborient(&["homology", r#"{"bogus":1}"#])), 2);
    assert_eq!(code(&nborient(&["homology", "not_a_space"])), 2);
    assert_eq!(code(&nborient(&["homology", "--ring", "Z4x", "T2_7"])), 2);
    assert_eq!(code(&nborient(&["homology", "RP2_6", "--budget", "5"])), 4);
    assert_eq!(code(&nborient(&["nb-check", "T2_7", "--budget", "unlimited"])), 0);
    assert_eq!(code(&nborient(&["duality", "--field", "Z", "T2_7"])), 2);
}

#[test]
fn lefschetz_outside_alexandrov_is_not_a_falsification() {
    let r = execute(Cmd::Duality, json!({"closed_cone": "T2_7"}), &RunOptions::default()).unwrap();
    assert!(!r.falsified());
    assert_eq!(r.result["table"]["relative"], true);
}

#[test]
fn corpus_file_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.json");
    std::fs::write(&corpus, r#"["T2_7", {"suspension":"RP2_6"}]"#).unwrap();
    let ok = nborient(&["verify-all", "--corpus", corpus.to_str().unwrap()]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));
    let over = nborient(&["verify-all", "--corpus", corpus.to_str().unwrap(), "--budget", "40"]);
    assert_eq!(code(&over), 4);
}

#[test]
fn verify_all_default_corpus_is_clean() {
    let opts = RunOptions {
        budget: Budget::Unlimited,
        ..RunOptions::default()
    };
    let r = execute(Cmd::VerifyAll, Value::Null, &opts).unwrap();
    assert!(r.falsifications.is_empty(), "{:?}", r.falsifications);
    assert_eq!(r.result["spaces"].as_array().unwrap().len(), 26);
}

#[test]
fn every_command_runs() {
    for (cmd, spec) in [
        ("homology", r#"{"closed_cone":"RP2_6"}"#),
        ("local-profile", r#"{"cone":"T2_7"}"#),
        ("nb-check", r#"{"closed_cone":"T2_7"}"#),
        ("double-cover", "RP2_6"),
        ("duality", r#"{"suspension":"CP2_kuehnel_9"}"#),
        ("quotient", r#"{"quotient":{"space":"cross_polytope_sphere(3)","generators":[[1,0,3,2,5,4,7,6]]}}"#),
        ("mass", "T2_7"),
    ] {
        let o = nborient(&[cmd, spec, "--c-n", "1.0"]);
        assert!(matches!(code(&o), 0 | 3), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
}
