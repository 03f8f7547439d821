use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdisc"))
        .args(args)
        .env_remove("HDISC_WORKERS")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_single_suite() {
    let out = hdisc(&["validate", "--n", "1", "--suite", "chi_closed_form"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 1);
    assert_eq!(arr[0]["suite"], "chi_closed_form");
    assert_eq!(arr[0]["pass"], true);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "# knobs\nkmax=20\nlambda_maxx=3\n");
    let out = hdisc(&["validate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda_maxx"));

    assert_eq!(hdisc(&["validate", "--suite", "nonsense"]).status.code(), Some(1));
    assert_eq!(hdisc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hdisc(&["iterm", "--lmax", "-3"]).status.code(), Some(1));
    assert_eq!(hdisc(&["--help"]).status.code(), Some(0));
    assert_eq!(
        hdisc(&["discrepancy", "/nonexistent/points.csv"]).status.code(),
        Some(1)
    );
}

#[test]
fn malformed_point_file_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.csv", "x1,y1,t\n0.1,abc,0.2\n");
    assert_eq!(hdisc(&["discrepancy", &f]).status.code(), Some(1));
}

#[test]
fn empty_point_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "e.csv", "# n=1\nx1,y1,t\n");
    let small = ["--kmax", "20", "--lmax", "20"];
    let mut args = vec!["discrepancy", f.as_str(), "--test-mode"];
    args.extend(small);
    let out = hdisc(&args);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], 0.0);
    args.pop();
    args.truncate(2);
    args.extend(small);
    assert_eq!(hdisc(&args).status.code(), Some(1));
}

#[test]
fn discrepancy_is_reproducible_and_audited() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "p.csv",
        "# n=1\nx1,y1,t\n0.1,0.2,0.3\n-0.4,0.1,-0.2\n0.0,0.5,0.6\n0.3,-0.3,0.0\n",
    );
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = hdisc(&[
            "discrepancy",
            &f,
            "--audit",
            "--samples",
            "50000",
            "--seed",
            "5",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let ta = fs::read(&a).unwrap();
    assert_eq!(ta, fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    for key in [
        "value",
        "stat_stderr",
        "trunc_bound",
        "config",
        "seed",
        "direct",
        "agreement_ratio",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let ratio = v["agreement_ratio"].as_f64().unwrap();
    assert!((ratio - 1.0).abs() < 0.1, "ratio {ratio}");
}

#[test]
fn worker_count_does_not_change_output() {
    let one = hdisc(&[
        "scaling",
        "--Ns",
        "16,32,64,128",
        "--reps",
        "3",
        "--samples",
        "5000",
        "--workers",
        "1",
    ]);
    let three = hdisc(&[
        "scaling",
        "--Ns",
        "16,32,64,128",
        "--reps",
        "3",
        "--samples",
        "5000",
        "--workers",
        "3",
    ]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, three.stdout);
    let text = String::from_utf8(one.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "generator,N_target,N_actual,rep,l2,stderr,trunc");
    assert_eq!(lines[lines.len() - 2], "slope,slope_stderr");
    assert_eq!(lines.len(), 1 + 12 + 2);
}

#[test]
fn minimal_scaling_run_is_quick() {
    let start = std::time::Instant::now();
    let out = hdisc(&["scaling", "--Ns", "16,32"]);
    assert!(start.elapsed().as_secs() < 60);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 2 * 5 + 2);
    let slope: f64 = text.lines().last().unwrap().split(',').next().unwrap().parse().unwrap();
    assert!(slope.is_finite());
}

#[test]
fn sweeps_report_pass() {
    for cmd in ["kernel", "envelope", "iterm"] {
        let out = hdisc(&[cmd]);
        assert_eq!(out.status.code(), Some(0), "{cmd}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert_eq!(text.lines().last(), Some("summary,pass"));
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "run.cfg",
        "Ns=16,32,64,128\nreps=3\nsamples=2000\ngenerator=iid\n",
    );
    let out = hdisc(&["scaling", "--config", &cfg, "--generator", "jittered"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("jittered,16,"));
}
