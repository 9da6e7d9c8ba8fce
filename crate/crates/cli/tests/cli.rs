use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_collapsekit"))
        .args(args)
        .env_remove("COLLAPSEKIT_FORMAT")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn undefined_results_exit_with_two() {
    let csv = "label,prevalence,risk0,risk1\na,1/2,0,1/2\nb,1/2,0,1/4\n";
    let out = run(&["weights", "--kind", "rr-minus"], csv);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("probability zero"));
}

#[test]
fn bad_input_and_usage_exit_with_one() {
    let bad = "label,prevalence,risk0,risk1\na,0.6,1/2,1/2\n";
    assert_eq!(run(&["validate"], bad).status.code(), Some(1));
    assert_eq!(run(&["scenario", "nope"], "").status.code(), Some(1));
    assert_eq!(run(&["no-such-command"], "").status.code(), Some(1));
    assert_eq!(run(&["measures"], "{\"strata\": [{\"label\": \"a\", \"prevalence\": 1, \"risk0\": \"1/2\"}]}").status.code(), Some(1));
}

#[test]
fn associational_table_csv() {
    let csv = "label,prevalence,pA,r0,r1\na,1/2,1/2,1/5,2/5\nb,1/2,1/3,0.4,0.4\n";
    let out = run(&["standardize", "--kind", "rd", "--format", "json"], csv);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["value"], "1/10");
    assert_eq!(v["standardized_risks"]["r0"], "3/10");
}

#[test]
fn collapse_check_with_user_weights() {
    let scenario = run(&["scenario", "table1", "--format", "json"], "");
    let out = run(
        &["collapse-check", "--kind", "rd", "--weights", "1,3", "--format", "json"],
        std::str::from_utf8(&scenario.stdout).unwrap(),
    );
    let v = json(&out);
    assert_eq!(v["weights_source"], "user");
    assert_eq!(v["residual"], "0");
    assert_eq!(v["weights"][1]["weight"], "3");
}

#[test]
fn unexposed_target_weights_from_csv() {
    let csv = "label,prevalence,risk\na,1/4,1/2\nb,3/4,1/6\n";
    let v = json(&run(&["weights", "--scheme", "unexposed-target", "--format", "json"], csv));
    let w: Vec<_> = v["weights"].as_array().unwrap().iter().map(|w| w["weight"].clone()).collect();
    assert_eq!(w, ["1/2", "1/2"]);
}

#[test]
fn zero_prevalence_rows_warn() {
    let csv = "label,prevalence,risk0,risk1\na,1,1/2,1/2\nb,0,1/3,1/3\n";
    let out = run(&["validate"], csv);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("1 strata"));
}
