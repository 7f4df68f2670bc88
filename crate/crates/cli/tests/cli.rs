//! End-to-end runs of the `loneaxis` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loneaxis")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("loneaxis-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn traintrack_on_the_bundled_map_says_yes() {
    let out = run(&["traintrack"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["folds"], serde_json::json!(["a", "e", "a", "d"]));
    assert_eq!(v["lone_axis"]["index"], "-3/2");
    assert_eq!(v["lone_axis"]["verdict"]["verdict"], "yes");
    assert!(v["eigen_residual"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn traintrack_dot_is_the_whitehead_graph() {
    let out = run(&["traintrack", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("graph iw {"));
}

#[test]
fn non_train_track_input_is_an_invariant_failure() {
    let dir = scratch("nontt");
    let path = dir.join("map.txt");
    // b -> bA: the turn (A, B) at the start of the image of b is folded by a -> ab.
    std::fs::write(
        &path,
        "vertices: v\nedges:\n  a v v\n  b v v\nvertex-map:\n  v v\nedge-map:\n  a ab\n  b bA\nmarking: v\n  a a\n  b b\n",
    )
    .unwrap();
    let out = run(&["traintrack", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert_eq!(json(&out)["train_track"], false);
}

#[test]
fn unparseable_input_exits_64() {
    let dir = scratch("garbage");
    let path = dir.join("map.txt");
    std::fs::write(&path, "this is not a map\n").unwrap();
    let out = run(&["traintrack", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["section", "--class", "1,x"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn section_on_the_line_matches_its_table() {
    let out = run(&["section", "--class", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["reference"], "theta_1");
    assert_eq!(v["rank"], 4);
    assert_eq!(v["edges"].as_array().unwrap().len(), 11);
    assert_eq!(v["audit"]["skew_crossings"], 1);
}

#[test]
fn doubled_class_is_disconnected() {
    let out = run(&["section", "--class", "0,2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["components"], 2);
}

#[test]
fn class_outside_the_cone_is_refused() {
    let out = run(&["section", "--class", "0,-1"]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8(out.stderr).unwrap().contains("outside"));
}

#[test]
fn monodromy_of_r_star_has_rank_three() {
    let out = run(&["monodromy", "--class", "0,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["invertibility_verified"], true);
}

#[test]
fn bns_reports_the_sector_and_the_line() {
    let out = run(&["bns"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["component"]["from"], serde_json::json!([1, 1]));
    assert_eq!(v["component"]["to"], serde_json::json!([-1, 0]));
    assert_eq!(v["excluded"].as_array().unwrap().len(), 6);
    assert_eq!(v["lone_axis_line"]["classes"][0], serde_json::json!([0, 1]));
}

#[test]
fn out_directory_receives_the_file() {
    let dir = scratch("out");
    let out = run(&["bns", "--format", "tikz", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.join("bns.tex")).unwrap();
    assert!(text.contains("tikzpicture"));
}

#[test]
fn survey_lists_the_family() {
    let out = run(&["survey", "--height-max", "3", "--k-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let fam = v["family"].as_array().unwrap();
    assert_eq!(fam.len(), 3);
    for (k, row) in fam.iter().enumerate() {
        assert_eq!(row["rank"], k + 3);
        assert_eq!(row["verdict"]["verdict"], "yes");
    }
    let classes = v["classes"].as_array().unwrap();
    let r_star = classes.iter().find(|r| r["class"] == serde_json::json!([0, 1])).unwrap();
    assert_eq!(r_star["in_cone"], true);
    assert_eq!(r_star["on_lone_axis_line"], true);
    let flagged: Vec<&Value> = classes.iter().filter(|r| r["on_lone_axis_line"] == true).map(|r| &r["class"]).collect();
    assert_eq!(flagged, [&serde_json::json!([0, 1]), &serde_json::json!([1, 2]), &serde_json::json!([2, 3])]);
    let doubled = classes.iter().find(|r| r["class"] == serde_json::json!([0, 2])).unwrap();
    assert_eq!(doubled["primitive"], false);
    assert!(classes.iter().all(|r| r["in_cone"] == r["in_cs"]));
}
