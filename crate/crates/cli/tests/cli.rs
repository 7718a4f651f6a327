use std::process::{Command, Output};

use serde_json::Value;

fn volconj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volconj"))
        .args(args)
        .env_remove("VOLCONJ_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Header and data rows of a CSV payload, comment rows dropped.
fn csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    (header, rows)
}

fn field(header: &[String], row: &[String], name: &str) -> f64 {
    let k = header.iter().position(|h| h == name).unwrap();
    row[k].parse().unwrap()
}

#[test]
fn geom_at_complete_structure() {
    let o = volconj(&["geom", "--u-re", "0", "--u-im", "0"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = csv(&stdout(&o));
    assert_eq!(rows.len(), 1);
    assert_eq!(field(&h, &rows[0], "z_re"), 0.5);
    assert!((field(&h, &rows[0], "z_im") - 3f64.sqrt() / 2.0).abs() <= 1e-15);
    assert_eq!(field(&h, &rows[0], "v_re"), 0.0);
    assert_eq!(field(&h, &rows[0], "v_im"), 0.0);
}

#[test]
fn limit_csv_contract() {
    let o = volconj(&[
        "limit",
        "--u-re",
        "0",
        "--u-im",
        "0",
        "--n",
        "100:6400:x2",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,logJ_re,logJ_im,est_re,est_im");
    assert_eq!(lines.len(), 9);
    let last = lines.last().unwrap();
    let values = last.strip_prefix("# extrapolated: ").expect("trailer row");
    let parts: Vec<f64> = values.split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(parts.len(), 2);
    assert!(parts[0].abs() <= 1e-3);
    assert!((parts[1] - 2.029883212819307).abs() <= 1e-3);
}

#[test]
fn optimistic_p5_agrees() {
    let o = volconj(&["optimistic", "--p", "5"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = csv(&stdout(&o));
    assert!(field(&h, &rows[0], "agree_digits") >= 8.0);
    for name in ["lhs_re", "lhs_im", "rhs_re", "rhs_im"] {
        assert!(field(&h, &rows[0], name).is_finite());
    }
}

#[test]
fn json_mirrors_csv() {
    let args = [
        "limit",
        "--u-re",
        "0.1",
        "--u-im",
        "0.05",
        "--n",
        "100:1600:x2",
    ];
    let a = volconj(&args);
    let mut with_json = args.to_vec();
    with_json.extend(["--format", "json"]);
    let b = volconj(&with_json);
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    let (h, rows) = csv(&stdout(&a));
    let v: Value = serde_json::from_str(&stdout(&b)).unwrap();
    let objs = v["rows"].as_array().unwrap();
    assert_eq!(objs.len(), rows.len());
    for (obj, row) in objs.iter().zip(&rows) {
        let keys: Vec<&String> = obj.as_object().unwrap().keys().collect();
        assert_eq!(keys, h.iter().collect::<Vec<_>>());
        for name in &h {
            assert_eq!(obj[name.as_str()].as_f64().unwrap(), field(&h, row, name));
        }
    }
    assert_eq!(v["extrapolated"].as_array().unwrap().len(), 2);
}

#[test]
fn thread_count_does_not_change_output() {
    let cases: [&[&str]; 4] = [
        &[
            "limit",
            "--u-re",
            "0.12",
            "--u-im",
            "-0.07",
            "--n",
            "200:3200:x2",
        ],
        &["jones", "--r", "1.03", "--n", "50:500:+50"],
        &["optimistic", "--range", "5:12"],
        &["cone", "--r", "0.97"],
    ];
    for args in cases {
        let mut one = args.to_vec();
        one.extend(["--threads", "1"]);
        let mut eight = args.to_vec();
        eight.extend(["--threads", "8"]);
        let a = volconj(&one);
        let b = volconj(&eight);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn threads_from_environment() {
    let run = |val: &str| {
        Command::new(env!("CARGO_BIN_EXE_volconj"))
            .args(["optimistic", "--p", "6"])
            .env("VOLCONJ_THREADS", val)
            .output()
            .unwrap()
    };
    let a = run("1");
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, volconj(&["optimistic", "--p", "6"]).stdout);
    assert_eq!(code(&run("many")), 1);
}

#[test]
fn warnings_go_to_stderr() {
    let o = volconj(&["cone", "--r", "0.93"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o)
        .lines()
        .any(|l| l.starts_with("# warning: r = 93/100")));
    assert!(!stdout(&o).contains("warning"));

    let o = volconj(&[
        "jones",
        "--u-re",
        "0",
        "--u-im",
        "0.785398163397448",
        "--n",
        "8",
    ]);
    assert!(stderr(&o).contains("# warning: r = 9/8"));

    let o = volconj(&["geom", "--u-im", "1.4"]);
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("# warning: |u| ="));

    let o = volconj(&["limit", "--u-re", "0.1", "--u-im", "0.1"]);
    assert!(stderr(&o).is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(code(&volconj(&["--help"])), 0);
    assert_eq!(code(&volconj(&["--version"])), 0);
    assert_eq!(code(&volconj(&[])), 1);
    assert_eq!(code(&volconj(&["bogus"])), 1);
    assert_eq!(code(&volconj(&["geom", "--u-re", "abc"])), 1);
    assert_eq!(code(&volconj(&["limit", "--tol", "0"])), 1);
    assert_eq!(code(&volconj(&["limit", "--tol", "0.02"])), 1);
    assert_eq!(code(&volconj(&["jones", "--n", "0"])), 1);
    assert_eq!(code(&volconj(&["jones", "--n", "8:4:x2"])), 1);
    // outside the validity disk
    assert_eq!(code(&volconj(&["geom", "--u-re", "2"])), 1);
    assert_eq!(code(&volconj(&["optimistic", "--p", "4"])), 1);
    assert_eq!(code(&volconj(&["volcs", "--p", "-4"])), 1);
    assert_eq!(code(&volconj(&["volcs", "--p", "6", "--q", "1"])), 1);
    assert_eq!(code(&volconj(&["cone", "--r", "1.3"])), 1);
    // a tolerance the solver cannot meet
    assert_eq!(code(&volconj(&["fill", "--p", "7", "--tol", "1e-300"])), 2);
    // a branch ambiguity near the discriminant zero is a convergence failure
    assert_eq!(code(&volconj(&["geom", "--u-re", "1.2"])), 2);
}

#[test]
fn error_messages_on_stderr() {
    let o = volconj(&["optimistic", "--p", "3"]);
    assert!(stdout(&o).is_empty());
    assert!(stderr(&o).starts_with("error: "));
}

#[test]
fn fill_and_volcs_agree() {
    let o = volconj(&["fill", "--p", "5", "--q", "1"]);
    assert_eq!(code(&o), 0);
    let (hf, rf) = csv(&stdout(&o));
    assert!(field(&hf, &rf[0], "residual") <= 1e-12);

    let o = volconj(&["volcs", "--p", "5"]);
    let (hv, rv) = csv(&stdout(&o));
    assert_eq!(field(&hv, &rv[0], "u_re"), field(&hf, &rf[0], "u_re"));
    assert!((field(&hv, &rv[0], "vol") - 0.9813688288922).abs() <= 1e-10);

    let (u_re, u_im) = (field(&hv, &rv[0], "u_re"), field(&hv, &rv[0], "u_im"));
    let direct = volconj(&[
        "volcs",
        "--u-re",
        &u_re.to_string(),
        "--u-im",
        &u_im.to_string(),
        "--lambda-re",
        &u_re.to_string(),
        "--lambda-im",
        &u_im.to_string(),
    ]);
    let (hd, rd) = csv(&stdout(&direct));
    assert_eq!(field(&hd, &rd[0], "vol"), field(&hv, &rv[0], "vol"));
    assert_eq!(field(&hd, &rd[0], "cs"), field(&hv, &rv[0], "cs"));
}

#[test]
fn volcs_mirror_slopes() {
    let run = |p: &str| {
        let o = volconj(&["volcs", "--p", p]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let (h, r) = csv(&stdout(&o));
        (field(&h, &r[0], "vol"), field(&h, &r[0], "cs"))
    };
    let (v5, c5) = run("5");
    let (vm5, cm5) = run("-5");
    let (v9, _) = run("9");
    assert!(0.0 < v5 && v5 < v9 && v9 < 2.029883212819307);
    assert!((v5 - vm5).abs() <= 1e-10);
    assert!((c5 + cm5).abs() <= 1e-9);
}

#[test]
fn real_r_jones_rows() {
    let o = volconj(&["jones", "--r", "0.95", "--n", "1,2,3"]);
    assert_eq!(code(&o), 0);
    let (h, rows) = csv(&stdout(&o));
    assert_eq!(h, ["N", "r", "sign", "log_abs", "phase_count"]);
    // J_1 = 1
    assert_eq!(field(&h, &rows[0], "log_abs"), 0.0);
    assert_eq!(field(&h, &rows[0], "sign"), 1.0);
}

#[test]
fn selftest_exit_code_matches_rows() {
    let o = volconj(&["selftest"]);
    let text = stdout(&o);
    let (h, rows) = csv(&text);
    assert_eq!(h, ["suite", "status", "detail"]);
    assert!(rows.len() >= 20);
    let all_pass = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .all(|l| l.split(',').nth(1) == Some("PASS"));
    assert_eq!(code(&o), if all_pass { 0 } else { 3 });
    assert!(text.lines().last().unwrap().starts_with("# passed: "));
}

#[test]
fn optimistic_full_range_flag() {
    let o = volconj(&["optimistic", "--full"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (h, rows) = csv(&stdout(&o));
    assert_eq!(rows.len(), 192);
    assert!(rows.iter().all(|r| field(&h, r, "agree_digits") >= 8.0));
}
