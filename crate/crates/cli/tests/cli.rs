use std::path::Path;
use std::process::{Command, Output};

fn stbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stbc"))
        .args(args)
        .output()
        .expect("failed to run stbc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn golden_min_det() {
    let o = stbc(&["check", "--preset", "golden", "--mindet", "--L", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("1/5"), "{s}");
    assert!(s.contains("[PASS] mindet"), "{s}");
}

#[test]
fn json_report_is_valid() {
    let o = stbc(&["check", "--preset", "alamouti-na", "--all", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["code"], "alamouti-na");
    assert_eq!(v["min_det"]["exact"], "1/4");
}

#[test]
fn shaping_verdicts() {
    let o = stbc(&["check", "--preset", "zeta8", "--shaping"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("G unitary: true"));
    let o = stbc(&["check", "--preset", "zeta3", "--shaping"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("G unitary: false"));
}

#[test]
fn build_golden_codeword() {
    let o = stbc(&["build", "--preset", "golden", "1", "0", "0", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("exact (times 1/√5)"), "{s}");
    // α/√5 with α = 1 + i - iθ ≈ 1 - 0.618i
    assert!(s.contains("0.44721 -0.27639i"), "{s}");

    let o = stbc(&["build", "--preset", "alamouti-na", "1", "2", "0", "-1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.is_object());

    let o = stbc(&["build", "--preset", "golden", "--", "-1-2i", "0", "0", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("-1 - 2i"));

    let o = stbc(&["build", "--preset", "golden", "1", "0", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_specs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let float = write(
        dir.path(),
        "float.json",
        r#"{"name":"f","tower":{"a":-1},"b":[0,0.5],"shape":"2x2"}"#,
    );
    let o = stbc(&["check", "--spec", &float, "--mindet"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("float"));

    let shape = write(
        dir.path(),
        "shape.json",
        r#"{"name":"s","tower":{"a":-1},"b":[0,1],"shape":"3x3"}"#,
    );
    assert_eq!(stbc(&["check", "--spec", &shape, "--mindet"]).status.code(), Some(2));

    let truncated = write(dir.path(), "t.json", r#"{"name":"s","tower":{"#);
    assert_eq!(stbc(&["check", "--spec", &truncated, "--all"]).status.code(), Some(2));

    assert_eq!(stbc(&["check", "--preset", "no-such-code"]).status.code(), Some(2));
    assert_eq!(stbc(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failed_expectation_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "wrong.json",
        r#"{"name":"wrong","tower":{"a":-1},"b":[0,1],"shape":"2x2","shaping":2,
            "expect":{"min_det":"1/3"}}"#,
    );
    let o = stbc(&["check", "--spec", &spec, "--mindet"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("[FAIL] mindet"));
}

#[test]
fn split_algebra_has_zero_determinants() {
    let o = stbc(&["check", "--preset", "split", "--diversity"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[PASS]"));
}

#[test]
fn number_theory_queries() {
    let v = |args: &[&str]| -> serde_json::Value {
        let o = stbc(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        serde_json::from_slice(&o.stdout).unwrap()
    };
    assert_eq!(v(&["nt", "reldisc", "--m", "5"])["rel_disc"], 5);
    assert_eq!(v(&["nt", "reldisc", "--m", "2"])["rel_disc"], 4);
    assert_eq!(v(&["nt", "unitrank", "--r", "2", "--s", "1"])["unit_rank"], 2);
    assert_eq!(v(&["nt", "field", "--m", "-5"])["discriminant"], -20);
    assert_eq!(v(&["nt", "h1", "--imag", "163"])["class_number_one"], true);
    assert_eq!(v(&["nt", "h1", "--imag", "5"])["class_number_one"], false);
    assert_eq!(stbc(&["nt", "field", "--m", "12"]).status.code(), Some(2));
}

#[test]
fn simulate_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = stbc(&[
            "simulate",
            "--preset",
            "golden",
            "--snr",
            "5,10",
            "--trials",
            "300",
            "--seed",
            "11",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    let a = run("a.csv");
    assert_eq!(a, run("b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("snr_db,trials,errors,cer,ci_low,ci_high,code_name\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn noiseless_simulation_is_error_free() {
    let o = stbc(&["simulate", "--preset", "golden", "--snr", "inf", "--trials", "200"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let row: Vec<&str> = s.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "inf");
    assert_eq!(row[2], "0");
    assert_eq!(row[4].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn two_codes_in_one_csv() {
    let o = stbc(&[
        "simulate",
        "--preset",
        "golden",
        "--preset",
        "golden-na-1",
        "--snr",
        "0,10",
        "--trials",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let names: Vec<&str> = s.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(names, ["golden", "golden", "golden-na-1", "golden-na-1"]);
}
