use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperrigid"))
        .args(args)
        .env_remove("HYPERRIGID_TOL")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

// the rounded endpoints are the documented example input
#[allow(clippy::approx_constant)]
#[test]
fn disc_bound_example() {
    let disc = fixture("disc.json");
    let out = run(&["bound", "--body", &disc, "--I", "0,1.5708", "--J", "3.1416,4.7124", "--eps", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!((num(&v["L"]) - 6.2832).abs() < 1e-4);
    assert!((num(&v["c"]) - 1.0).abs() < 1e-4);
    assert!((num(&v["bound"]) - 0.0628).abs() < 1e-4);
    assert_eq!(num(&v["epsilon"]), 0.01);

    // exact endpoints: tangent lines x = 1 and y = 1 are at distance exactly 1
    let out = run(&["bound", "--body", &disc, "--I", "0,pi/2", "--J", "pi,3pi/2", "--eps", "0.01"]);
    let v = json_of(&out);
    assert!((num(&v["c"]) - 1.0).abs() < 1e-11);
    assert!((num(&v["bound"]) - 0.01 * TAU).abs() < 1e-11);
    assert!(num(&v["chord_bound"]) <= num(&v["bound"]));
}

#[test]
fn diamond_partition_example() {
    let out = run(&["partition", "--body", &fixture("diamond.json"), "--I", "0,pi", "--eps", "0.3"]);
    assert_eq!(out.status.code(), Some(0));
    let knots: Vec<f64> = json_of(&out)["pieces"][0]["knots"].as_array().unwrap().iter().map(num).collect();
    assert_eq!(knots.len(), 3);
    for (k, want) in knots.iter().zip([0.0, FRAC_PI_2, PI]) {
        assert!((k - want).abs() < 1e-11, "{knots:?}");
    }
}

#[test]
fn verify_all_passes() {
    let out = run(&["verify", "--suite", "all", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 5);
    for s in suites {
        assert!(s["checks"].as_u64().unwrap() > 0);
        assert_eq!(s["failures"].as_u64(), Some(0));
    }
}

#[test]
fn reports_are_byte_identical() {
    let disc = fixture("disc.json");
    let diamond = fixture("diamond.json");
    let ellipse = fixture("ellipse.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["bound", "--body", &disc, "--I", "0,1", "--J", "2,4", "--eps", "0.1"],
        vec!["bound", "--body", &diamond, "--I", "0,1", "--J", "2,4", "--eps", "0.1", "--format", "csv"],
        vec!["partition", "--body", &diamond, "--I", "5,1", "--eps", "0.2"],
        vec!["body", "--body", &ellipse, "--format", "csv"],
        vec!["rigidity", "--body", &diamond, "--I", "-0.1,0.1", "--restarts", "5"],
        vec!["wotsot", "--family", "symmetry", "--dim", "16", "--seed", "3"],
        vec!["verify", "--suite", "angle", "--seed", "11"],
    ];
    for args in cases {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bound.json");
    let args = ["bound", "--body", &fixture("disc.json"), "--I", "0,1", "--J", "2,4", "--eps", "0.1"];
    let stdout = run(&args).stdout;
    let mut with_out = args.to_vec();
    let p = path.display().to_string();
    with_out.extend(["--out", &p]);
    let quiet = run(&with_out);
    assert_eq!(quiet.status.code(), Some(0));
    assert!(quiet.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
}

#[test]
fn wrapping_intervals_match_manual_split() {
    let diamond = fixture("diamond.json");
    let disc = fixture("disc.json");
    for format in ["json", "csv"] {
        let wrapped = run(&["partition", "--body", &diamond, "--I", "5,1", "--eps", "0.2", "--format", format]);
        let manual =
            run(&["partition", "--body", &diamond, "--I", "5,2pi", "--I", "0,1", "--eps", "0.2", "--format", format]);
        assert_eq!(wrapped.status.code(), Some(0));
        assert_eq!(wrapped.stdout, manual.stdout);

        let wrapped =
            run(&["bound", "--body", &disc, "--I", "-0.5,0.5", "--J", "2,4", "--eps", "0.05", "--format", format]);
        let manual = run(&[
            "bound",
            "--body",
            &disc,
            "--I",
            "5.783185307179586,6.283185307179586",
            "--I",
            "0,0.5",
            "--J",
            "2,4",
            "--eps",
            "0.05",
            "--format",
            format,
        ]);
        assert_eq!(wrapped.status.code(), Some(0));
        assert_eq!(wrapped.stdout, manual.stdout);
    }
    let v = json_of(&run(&["partition", "--body", &diamond, "--I", "5,1", "--eps", "0.2"]));
    let pieces = v["pieces"].as_array().unwrap();
    assert_eq!(pieces.len(), 2);
    assert!((num(&pieces[0]["hi"]) - TAU).abs() < 1e-11);
    assert_eq!(num(&pieces[1]["lo"]), 0.0);
}

#[test]
fn solve_for_epsilon() {
    let out = run(&["bound", "--body", &fixture("disc.json"), "--I", "0,1", "--J", "2,4", "--target", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!((num(&v["bound"]) - 0.05).abs() < 1e-11);
    let (eps, c, l) = (num(&v["epsilon"]), num(&v["c"]), num(&v["L"]));
    assert!((eps - 0.05 * c / l).abs() < 1e-11);
}

#[test]
fn input_errors_exit_one() {
    let disc = fixture("disc.json");
    let bad_json = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("bad.json");
    std::fs::write(&bad_json, r#"{"type":"polygon","vertices":[[0,0],[1"#).unwrap();
    let bad = bad_json.display().to_string();
    let cases: Vec<Vec<&str>> = vec![
        vec!["body", "--body", "/nonexistent/body.json"],
        vec!["body", "--body", &bad],
        vec!["bound", "--body", &disc, "--I", "0,1", "--J", "2,4", "--eps", "2"],
        vec!["bound", "--body", &disc, "--I", "0,1", "--J", "0.5,2", "--eps", "0.1"],
        vec!["bound", "--body", &disc, "--I", "0,1", "--J", "2,4"],
        vec!["partition", "--body", &disc, "--I", "0", "--eps", "0.1"],
        vec!["verify", "--suite", "nope"],
        vec!["body", "--body", &disc, "--tol", "-1"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = Command::new(env!("CARGO_BIN_EXE_hyperrigid"))
        .args(["body", "--body", &disc])
        .env("HYPERRIGID_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn tolerance_from_environment() {
    let disc = fixture("disc.json");
    let out = Command::new(env!("CARGO_BIN_EXE_hyperrigid"))
        .args(["body", "--body", &disc])
        .env("HYPERRIGID_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(num(&json_of(&out)["tol"]), 1e-6);
    let out = Command::new(env!("CARGO_BIN_EXE_hyperrigid"))
        .args(["body", "--body", &disc, "--tol", "1e-7"])
        .env("HYPERRIGID_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(num(&json_of(&out)["tol"]), 1e-7);
    assert_eq!(num(&json_of(&run(&["body", "--body", &disc]))["tol"]), 1e-9);
}

#[test]
fn unresolved_separation_exits_two_with_trace() {
    let out = run(&[
        "bound",
        "--body",
        &fixture("disc.json"),
        "--I",
        "0,1",
        "--J",
        "1.2,1.4",
        "--eps",
        "0.1",
        "--tol",
        "0.99",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert_eq!(v["status"], "unresolved");
    let trace = v["step2"]["trace"].as_array().unwrap();
    assert!(trace.len() > 10);
    assert_eq!(trace[0]["n"].as_u64(), Some(8));
    assert!(trace.iter().all(|s| num(&s["c"]) <= 0.99));
}

#[test]
fn contact_is_resolved_by_shrinking() {
    // J lies on the edge line through p(1.8708), so c = 0 before shrinking
    let out =
        run(&["bound", "--body", &fixture("diamond.json"), "--I", "0,1.8708", "--J", "2.0708,pi", "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let shrink = &v["pieces"][0]["shrink"];
    assert_eq!(shrink["outcome"], "shrunk");
    assert!(num(&shrink["hull"]["hi"]) - FRAC_PI_2 < 1e-12);
    assert!(num(&v["c"]) > 1e-9);
}

#[test]
fn segment_is_trivially_rigid() {
    let seg = fixture("segment.json");
    for args in [
        vec!["body", "--body", seg.as_str()],
        vec!["bound", "--body", &seg, "--I", "0,1", "--J", "2,3", "--eps", "0.1"],
        vec!["rigidity", "--body", &seg, "--I", "0,1"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0));
        let v = json_of(&out);
        assert_eq!(v["body"], "segment");
        assert_eq!(v["trivially_rigid"], Value::Bool(true));
    }
}

#[test]
fn rigidity_probe() {
    let out = run(&["rigidity", "--body", &fixture("diamond.json"), "--I", "pi/2,pi/2", "--restarts", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["rigid"], Value::Bool(true));
    assert_eq!(v["in_set"].as_u64(), Some(1));
    assert!(num(&v["deviation"]) <= 1e-6);

    // interior site of the segment [-1, 1]: not rigid
    let out = run(&["rigidity", "--pvm", &fixture("segment_control.json"), "--I", "-0.5,0.5", "--restarts", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json_of(&out);
    assert!(num(&v["deviation"]) >= 0.1);
    assert_eq!(v["witness"]["kind"], "povm");
}

#[test]
fn body_summary() {
    let v = json_of(&run(&["body", "--body", &fixture("diamond.json")]));
    assert!((num(&v["L"]) - 4.0 * 2f64.sqrt()).abs() < 1e-11);
    assert_eq!(v["extreme_points"].as_array().unwrap().len(), 4);
    let v = json_of(&run(&["body", "--body", &fixture("ellipse.json")]));
    assert_eq!(v["extreme_points"], "all");
    assert_eq!(v["offset"][0].as_f64(), Some(-3.0));
    assert_eq!(v["offset"][1].as_f64(), Some(1.0));

    let out = run(&["body", "--body", &fixture("disc.json"), "--format", "csv", "--samples", "8"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x,y");
    assert_eq!(lines.len(), 9);
    for line in &lines[1..] {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[1] - f[0].cos()).abs() < 1e-11 && (f[2] - f[0].sin()).abs() < 1e-11);
    }
}

#[test]
fn wotsot_tables() {
    let out = run(&["wotsot", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 33);
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!(f[1] <= 2f64.powf(1.0 - f[0]) && f[2] >= 0.25, "{line}");
    }
    let v = json_of(&run(&["wotsot", "--family", "symmetry", "--dim", "24"]));
    assert_eq!(v["passed"], Value::Bool(true));
    assert!(num(&v["max_identity_residual"]) <= 1e-9);
    // truncation makes the shift family degenerate once n reaches dim
    assert_eq!(run(&["wotsot", "--dim", "4", "--count", "6"]).status.code(), Some(2));
}
