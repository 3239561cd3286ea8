//! End-to-end tests of the `linkframe` binary: flags, file formats, JSON
//! reports, exit codes, and replayability.

use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

fn linkframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linkframe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn reports(output: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&output.stdout)
        .lines()
        .map(|line| serde_json::from_str(line).expect("stdout is JSON per line"))
        .collect()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn link_example_all_methods_agree() {
    let out = linkframe(&["link", "--example", "framing_neg_two", "--method", "all"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let reports = reports(&out);
    assert_eq!(reports.len(), 3);
    let methods: Vec<&str> = reports.iter().map(|r| r["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["quadrature", "exact_polygonal", "crossing_oracle"]);
    for r in &reports {
        assert_eq!(r["rounded"].as_i64().unwrap(), -2);
        assert_eq!(r["confident"].as_bool(), Some(true));
        assert_eq!(r["input_label"].as_str(), Some("framing_neg_two"));
    }
}

#[test]
fn link_example_zero_and_epsilon() {
    let out = linkframe(&["link", "--example", "framing_zero", "--method", "quadrature"]);
    assert!(out.status.success());
    let r = &reports(&out)[0];
    assert_eq!(r["rounded"].as_i64(), Some(0));
    assert!(r["value"].as_f64().unwrap().abs() < 1e-6);

    let out = linkframe(&[
        "link",
        "--example",
        "framing_one",
        "--epsilon",
        "0.05",
        "--method",
        "quadrature",
    ]);
    assert!(out.status.success());
    let r = &reports(&out)[0];
    assert_eq!(r["rounded"].as_i64(), Some(1));
    assert_eq!(r["config"]["epsilon"].as_f64(), Some(0.05));
}

#[test]
fn link_pair_file_roundtrip_label() {
    let pair = temp_file(
        r#"{
          "first": {"type":"circle","center":[0,0,0],"radius":1.0,"normal":[0,0,1]},
          "second": {"type":"circle","center":[0,0,1],"radius":1.0,"normal":[0,0,1]},
          "label": "stacked rings"
        }"#,
    );
    let out = linkframe(&["link", pair.path().to_str().unwrap(), "--method", "all"]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    for r in reports(&out) {
        assert_eq!(r["rounded"].as_i64(), Some(0));
        assert_eq!(r["input_label"].as_str(), Some("stacked rings"));
    }
}

#[test]
fn framing_files_reproduce_the_three_ribbons() {
    let cases = [
        (r#"{"kind":"blackboard"}"#, 0i64),
        (r#"{"kind":"twists","n":1,"profile":"uniform"}"#, 1),
        (r#"{"kind":"twists","n":-2,"profile":"uniform"}"#, -2),
    ];
    for (framing, expect) in cases {
        let ribbon = temp_file(&format!(
            r#"{{
              "base": {{"type":"circle","center":[0,0,0],"radius":1.0,"normal":[0,0,1]}},
              "framing": {framing},
              "offset": 0.1
            }}"#
        ));
        let out = linkframe(&["framing", ribbon.path().to_str().unwrap()]);
        assert!(
            out.status.success(),
            "framing {framing}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let r = &reports(&out)[0];
        assert_eq!(r["rounded"].as_i64(), Some(expect), "framing {framing}");
    }
}

#[test]
fn wilson_phases_from_lk_and_curves() {
    let out = linkframe(&["wilson", "--lk", "1", "--k", "2"]);
    assert!(out.status.success());
    let r = &reports(&out)[0];
    assert_eq!(r["wilson"]["re"].as_f64(), Some(-1.0));
    assert_eq!(r["wilson"]["im"].as_f64(), Some(0.0));

    let out = linkframe(&["wilson", "--example", "framing_one", "--k", "1"]);
    assert!(out.status.success());
    let r = &reports(&out)[0];
    assert_eq!(r["wilson"]["re"].as_f64(), Some(1.0));
    assert_eq!(r["wilson"]["lk"].as_i64(), Some(1));

    let out = linkframe(&["wilson", "--lk", "0", "--k", "5"]);
    let r = &reports(&out)[0];
    assert_eq!(r["wilson"]["re"].as_f64(), Some(1.0));
    assert_eq!(r["wilson"]["im"].as_f64(), Some(0.0));
}

#[test]
fn export_csv_closes_and_obj_lists_two_polylines() {
    let dir = tempfile::tempdir().unwrap();

    // first curve of the offset-circle example at 4 samples
    let curve = temp_file(r#"{"type":"paper_example","id":"framing_zero"}"#);
    let csv_path = dir.path().join("circle.csv");
    let out = linkframe(&[
        "export",
        curve.path().to_str().unwrap(),
        "--samples",
        "4",
        "--format",
        "csv",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0], rows[4]);
    let first: Vec<f64> = rows[0].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[0], 1.0);
    assert!(first[1].abs() < 1e-15 && first[2].abs() < 1e-15);

    // the rectangle example exports both loops as closed 4-segment polylines
    let obj_path = dir.path().join("pair.obj");
    let out = linkframe(&[
        "export",
        "--example",
        "framing_neg_two",
        "--format",
        "obj",
        "--out",
        obj_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let obj = std::fs::read_to_string(&obj_path).unwrap();
    let vs = obj.lines().filter(|l| l.starts_with("v ")).count();
    let ls: Vec<&str> = obj.lines().filter(|l| l.starts_with("l ")).collect();
    assert_eq!(vs, 8);
    assert_eq!(ls, ["l 1 2 3 4 1", "l 5 6 7 8 5"]);

    // the threaded-circle example reproduces both loops as polylines
    let csv_pair = dir.path().join("eps.csv");
    let out = linkframe(&[
        "export",
        "--example",
        "framing_one",
        "--epsilon",
        "0.05",
        "--format",
        "csv",
        "--out",
        csv_pair.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv_pair).unwrap();
    let blocks: Vec<&str> = csv.split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
}

#[test]
fn exit_codes_are_stable() {
    // 2: unparseable input
    let broken = temp_file(r#"{"first": {"type":"circle""#);
    let out = linkframe(&["link", broken.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));

    // 2: missing input
    let out = linkframe(&["link"]);
    assert_eq!(out.status.code(), Some(2));

    // 2: both file and example
    let pairfile = temp_file(r#"{"first":{"type":"paper_example","id":"framing_zero"},"second":{"type":"paper_example","id":"framing_zero"}}"#);
    let out = linkframe(&[
        "link",
        pairfile.path().to_str().unwrap(),
        "--example",
        "framing_zero",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // 3: singular geometry (a curve paired with itself)
    let singular = temp_file(
        r#"{
          "first": {"type":"circle","center":[0,0,0],"radius":1.0,"normal":[0,0,1]},
          "second": {"type":"circle","center":[0,0,0],"radius":1.0,"normal":[0,0,1]}
        }"#,
    );
    let out = linkframe(&[
        "link",
        singular.path().to_str().unwrap(),
        "--method",
        "quadrature",
    ]);
    assert_eq!(out.status.code(), Some(3));

    // 4: unwritable output path
    let curve = temp_file(r#"{"type":"paper_example","id":"framing_zero"}"#);
    let out = linkframe(&[
        "export",
        curve.path().to_str().unwrap(),
        "--out",
        "/nonexistent-dir/nope.csv",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn reports_are_replayable() {
    let run = |extra: &[&str]| -> Vec<Value> {
        let mut args = vec!["link", "--example", "framing_one", "--method", "quadrature"];
        args.extend_from_slice(extra);
        let out = linkframe(&args);
        assert!(out.status.success());
        reports(&out)
    };
    let first = run(&["--epsilon", "0.25"]);
    let cfg = &first[0]["config"];
    let replay = run(&[
        "--epsilon",
        &cfg["epsilon"].to_string(),
        "--target-error",
        &cfg["target_abs_error"].to_string(),
        "--panels",
        &cfg["panels_per_piece"].to_string(),
        "--nodes",
        &cfg["nodes_per_panel"].to_string(),
        "--max-refinements",
        &cfg["max_refinements"].to_string(),
        "--samples",
        &cfg["samples"].to_string(),
    ]);
    let mut a = first[0].clone();
    let mut b = replay[0].clone();
    a.as_object_mut().unwrap().remove("wall_time_ms");
    b.as_object_mut().unwrap().remove("wall_time_ms");
    assert_eq!(a, b);
}

#[test]
fn thread_cap_does_not_change_results() {
    let run = |threads: &str| -> Value {
        let out = Command::new(env!("CARGO_BIN_EXE_linkframe"))
            .args(["link", "--example", "framing_neg_two", "--method", "quadrature"])
            .env("LINKFRAME_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        let mut r = reports(&out).remove(0);
        r.as_object_mut().unwrap().remove("wall_time_ms");
        r
    };
    assert_eq!(run("1"), run("4"));
}
