use std::process::{Command, Output};

use serde_json::Value;

fn nilsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilsep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn orbits_listing() {
    let o = nilsep(&["orbits", "--field", "q=2", "--m", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Zero\nLine(1)\n");

    let o = nilsep(&["orbits", "--field", "q=2", "--m", "2"]);
    assert_eq!(stdout(&o).lines().count(), 5);

    let o = nilsep(&["orbits", "--field", "q=3", "--m", "2", "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("index,tag,form"));
    assert_eq!(text.lines().count(), 1 + 7);

    let o = nilsep(&["orbits", "--field", "q=2^2", "--m", "2", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["count"], 9);
    assert_eq!(v["orbits"][0]["tag"], "Zero");
}

#[test]
fn count_cross_checks() {
    let o = nilsep(&["count", "--field", "q=2", "--m", "3", "--check", "brute-force"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("kappa=15\n"));
    assert!(text.contains("match=true\n"));

    let o = nilsep(&["count", "--field", "q=3", "--m", "3", "--check", "all", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["kappa_formula"], "40");
    assert_eq!(v["kappa_bruteforce"], 40);
    assert_eq!(v["kappa_representatives"], 40);
    assert_eq!(v["match"], true);

    let o = nilsep(&["count", "--field", "q=5", "--m", "2", "--format", "csv"]);
    assert_eq!(stdout(&o), "q,n,m,kappa_formula,kappa_bruteforce,gamma\n5,2,2,11,,2\n");
}

#[test]
fn verify_separating_verdicts() {
    let o = nilsep(&["verify-separating", "--field", "q=3", "--m", "3", "--set", "H"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("separating=true\n"));
    assert!(text.contains("minimal=true\n"));

    let o = nilsep(&["verify-separating", "--field", "q=3", "--m", "2", "--set", "S", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["separating"], false);
    assert!(v["counterexample"].is_array());
}

#[test]
fn counterexample_rechecks_through_eval() {
    let o = nilsep(&["verify-separating", "--field", "q=3", "--m", "2", "--set", "S", "--format", "json"]);
    let v = json(&o);
    let mut values = Vec::new();
    for form in v["counterexample"].as_array().unwrap() {
        // materialize the form by hand: Zero / Line(a) = a_i E12
        let tuple: Vec<Value> = match form["tag"].as_str().unwrap() {
            "Zero" => form["alphas"].as_array().unwrap().iter().map(|_| serde_json::json!([0, 0, 0, 0])).collect(),
            "Line" => form["alphas"]
                .as_array()
                .unwrap()
                .iter()
                .map(|a| serde_json::json!([0, a, 0, 0]))
                .collect(),
            other => panic!("unexpected tag {other}"),
        };
        let arg = Value::Array(tuple).to_string();
        let o = nilsep(&["eval", "--field", "q=3", "--tuple", &arg, "--set", "S", "--format", "json"]);
        assert_eq!(o.status.code(), Some(0));
        let r = json(&o);
        assert_eq!(r["form"], *form);
        values.push(r["values"].clone());
    }
    assert_eq!(values[0], values[1]);
}

#[test]
fn verify_minimal_reports() {
    let o = nilsep(&["verify-minimal", "--field", "q=5", "--m", "3", "--set", "H", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["report"]["minimal"], true);
    let claims = v["claims"].as_array().unwrap();
    // claim 1, three eta claims, claims 3 and 4
    assert_eq!(claims.len(), 6);
    assert!(claims.iter().all(|c| c["holds"] == true));

    let o = nilsep(&["verify-minimal", "--field", "rational", "--set", "S", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let c4 = &v["claims"][1];
    assert_eq!((c4["value_a"].clone(), c4["value_b"].clone()), ("1".into(), "-1".into()));

    let o = nilsep(&["verify-minimal", "--field", "q=2", "--m", "3", "--set", "H"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("tr(Y1Y2Y3): none"));
}

#[test]
fn build_h_output() {
    let o = nilsep(&["build-h", "--field", "q=2", "--m", "2", "--format", "json", "--polys"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["gamma"], 3);
    assert_eq!(v["kappa"], 5);
    let vectors: Vec<Value> = v["orbits"].as_array().unwrap().iter().map(|o| o["values"].clone()).collect();
    assert_eq!(vectors, vec![
        serde_json::json!([0, 0, 0]),
        serde_json::json!([0, 0, 1]),
        serde_json::json!([0, 1, 0]),
        serde_json::json!([0, 1, 1]),
        serde_json::json!([1, 0, 0]),
    ]);
    for p in v["polys"].as_array().unwrap() {
        assert!(p["degree"].as_i64().unwrap() <= 8);
        assert_eq!(p["poly"]["n"], 8);
    }
}

#[test]
fn conjecture_scan_rows() {
    let o = nilsep(&["conjecture-scan", "--field", "q=2", "--field", "q=3", "--n", "3", "--m", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "q,n,m,kappa_formula,kappa_bruteforce,gamma\n2,3,1,,3,\n3,3,1,,3,\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["orbits", "--field", "q=2", "--m", "0"],
        vec!["orbits", "--field", "q=6", "--m", "1"],
        vec!["orbits", "--field", "rational", "--m", "1"],
        vec!["verify-separating", "--field", "rational", "--m", "2", "--set", "H"],
        vec!["verify-minimal", "--field", "rational", "--set", "H"],
        vec!["count", "--field", "q=2", "--m", "2", "--n", "3"],
        vec!["count", "--field", "q=3", "--m", "6", "--check", "brute-force", "--budget", "10"],
        vec!["orbits", "--m", "1"],
        vec!["frobnicate"],
    ] {
        let o = nilsep(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic_and_out_writes_file() {
    let args = ["verify-minimal", "--field", "q=3", "--m", "3", "--set", "H", "--format", "json"];
    let a = nilsep(&args);
    let b = nilsep(&args);
    assert_eq!(a.stdout, b.stdout);

    let dir = std::env::temp_dir().join(format!("nilsep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("orbits.csv");
    let o = nilsep(&["orbits", "--field", "q=3", "--m", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = nilsep(&["orbits", "--field", "q=3", "--m", "2", "--format", "csv"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
