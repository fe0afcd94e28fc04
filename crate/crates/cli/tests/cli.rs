use std::path::Path;
use std::process::{Command, Output};

fn hermpf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hermpf")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn lifted_routes_on_c2_pass_per_character() {
    let o = hermpf(&["theorem44", "--group", "C2", "--seed", "7", "--rank-max", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    for ch in ["2*chi0", "2*chi1"] {
        assert!(out.lines().any(|l| l.starts_with("PASS") && l.contains(ch)), "{out}");
    }
    assert!(!out.contains("FAIL"));
}

#[test]
fn real_quadratic_field_has_positive_sign() {
    let o = hermpf(&["demo-quadratic", "--d", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("sign 1 vs eps_inf 1: PASS"));
    let o = hermpf(&["demo-quadratic", "--d", "-7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("sign -1 vs eps_inf -1: PASS"));
}

#[test]
fn invalid_quadratic_parameter_is_a_precondition_failure() {
    assert_eq!(code(&hermpf(&["demo-quadratic", "--d", "9"])), 3);
}

#[test]
fn nonzero_square_is_rejected_with_its_degree() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "bad.json",
        r#"{"group":"trivial","complex":{"lo":3,"hi":5,"ranks":[1,1,1],
            "boundaries":[[[["1"]]],[[["2"]]]]},
            "pairing":{"cocycles":[[],[],[]],"sigma_ev":[],"sigma_odd":[]}}"#,
    );
    for cmd in ["chi-hermitian", "chi-arakelov", "sign-check", "two-routes", "theorem30", "theorem44"] {
        let o = hermpf(&[cmd, &f]);
        assert_eq!(code(&o), 2, "{cmd}");
        assert!(stderr(&o).contains("degree 3"), "{}", stderr(&o));
    }
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "junk.json", "{ not json");
    assert_eq!(code(&hermpf(&["chi-hermitian", &f])), 2);
    assert_eq!(code(&hermpf(&["chi-hermitian", "/nonexistent/instance.json"])), 2);
    assert_eq!(code(&hermpf(&["theorem44", "--group", "Z9"])), 2);
    let m = write(dir.path(), "sym.json", r#"[["0","1"],["1","0"]]"#);
    assert_eq!(code(&hermpf(&["pf", &m])), 2);
    assert_eq!(code(&hermpf(&["no-such-command"])), 2);
}

#[test]
fn pfaffian_of_alternating_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "a.json", r#"[["0","1/2","1","3"],["-1/2","0","2","1"],["-1","-2","0","5"],["-3","-1","-5","0"]]"#);
    let o = hermpf(&["pf", &m]);
    assert_eq!(code(&o), 0);
    // 1/2·5 - 1·1 + 3·2
    assert!(stdout(&o).starts_with("pf = 15/2\n"));
}

#[test]
fn generated_instances_round_trip_and_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let g = hermpf(&["generate", "--group", "S3", "--seed", "11", "--rank-max", "2"]);
    assert_eq!(code(&g), 0);
    let f = write(dir.path(), "s3.json", &stdout(&g));
    for args in [
        vec!["chi-hermitian", f.as_str()],
        vec!["chi-arakelov", f.as_str()],
        vec!["theorem30", f.as_str()],
        vec!["theorem44", f.as_str()],
        vec!["theorem30", "--group", "Q8", "--seed", "3", "--count", "3"],
        vec!["sweep", "--count", "1", "--groups", "C2,C3"],
        vec!["demo-hp", "--group", "Q8"],
    ] {
        let a = hermpf(&args);
        let b = hermpf(&args);
        assert_eq!(code(&a), 0, "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn character_filter() {
    let dir = tempfile::tempdir().unwrap();
    let g = hermpf(&["generate", "--group", "Q8", "--seed", "2"]);
    let f = write(dir.path(), "q8.json", &stdout(&g));
    let o = hermpf(&["chi-hermitian", &f, "--character", "theta"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 1);
    assert_eq!(v["entries"][0]["character"], "theta");
    assert_eq!(code(&hermpf(&["chi-hermitian", &f, "--character", "nope"])), 3);
}

#[test]
fn conductor_ceiling_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let g = hermpf(&["generate", "--group", "C3", "--seed", "1"]);
    let f = write(dir.path(), "c3.json", &stdout(&g));
    let run = |v: &str| Command::new(env!("CARGO_BIN_EXE_hermpf")).env("HERMPF_MAX_CONDUCTOR", v).args(["chi-hermitian", &f]).output().unwrap();
    assert_eq!(code(&run("2")), 3);
    assert_eq!(code(&run("3")), 0);
    assert_eq!(code(&run("many")), 2);
}
