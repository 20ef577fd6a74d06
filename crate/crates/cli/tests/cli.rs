use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use threeway::fixtures;

fn threeway(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_threeway"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, content).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn rooted_tree_round_trips_through_its_map() {
    let dir = TempDir::new().unwrap();
    let tree = file(&dir, "t.nwk", fixtures::SAMPLE_ROOTED);
    let map = dir.path().join("t.tsv");
    let o = threeway(&["map-from-tree", s(&tree), "-o", s(&map)]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&map).unwrap();
    assert!(text.contains("1\t2\t5\t2A+B"), "{text}");

    let o = threeway(&["reconstruct", s(&map)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("# verdict: representable"));
    assert!(out.contains("((1,2)B,(3,4)B,5)A;"), "{out}");
}

#[test]
fn unrooted_tree_round_trips_from_every_leaf() {
    let dir = TempDir::new().unwrap();
    let tree = file(&dir, "t.nwk", fixtures::SAMPLE_UNROOTED);
    let map = dir.path().join("t.tsv");
    assert_eq!(threeway(&["map-from-tree", s(&tree), "-o", s(&map)]).status.code(), Some(0));
    let o = threeway(&["reconstruct", s(&map), "--every-leaf"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("# verdict: representable").count(), 5);
    assert!(out.contains("# leaves agree: true"));
}

#[test]
fn four_consistent_map_is_rejected() {
    let dir = TempDir::new().unwrap();
    let map = file(&dir, "m.tsv", fixtures::FOUR_CONSISTENT_MAP);
    let o = threeway(&["reconstruct", s(&map)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("# verdict: not-representable"));
    let o = threeway(&["check", "--conditions", "q", s(&map)]);
    assert_eq!(o.status.code(), Some(0), "every quartet has a type");
}

#[test]
fn caveat_map_lists_five_point_violations() {
    let dir = TempDir::new().unwrap();
    let map = file(&dir, "m.tsv", fixtures::BUILD_CAVEAT_MAP);
    let o = threeway(&["check", "--conditions=p", s(&map)]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("P1\t")), "{out}");

    let triplets = dir.path().join("tr.txt");
    let o = threeway(&["--format", "json", "reconstruct", s(&map), "--triplets", s(&triplets)]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "not-representable");
    assert_eq!(v["stage"], "labelling-verification");
    assert_eq!(fs::read_to_string(&triplets).unwrap().lines().count(), 6);
}

#[test]
fn leaf_one_map_fails_while_projections_pass() {
    let dir = TempDir::new().unwrap();
    let map = file(&dir, "m.tsv", fixtures::LEAF_ONE_MAP);
    let o = threeway(&["check", s(&map)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("M1\t1,2,3,4"));
    for r in ["1", "2", "3", "4", "5"] {
        let proj = dir.path().join(format!("p{r}.tsv"));
        assert_eq!(threeway(&["farris", s(&map), "--leaf", r, "-o", s(&proj)]).status.code(), Some(0));
        assert_eq!(threeway(&["check", s(&proj)]).status.code(), Some(0), "projection at {r}");
    }
}

#[test]
fn farris_transform_of_a_tree() {
    let dir = TempDir::new().unwrap();
    let tree = file(&dir, "t.nwk", fixtures::SAMPLE_UNROOTED);
    let o = threeway(&["farris", s(&tree), "--leaf", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "((1,2)B,(4,5)B)A;\n");
    let rooted = file(&dir, "r.nwk", fixtures::SAMPLE_ROOTED);
    assert_eq!(threeway(&["farris", s(&rooted), "--leaf", "3"]).status.code(), Some(2));
}

#[test]
fn census_counts() {
    let o = threeway(&["--format", "json", "census", "--leaves", "5", "--symbols", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["census"]["shapes"], 236);
    assert_eq!(v["census"]["labelled_trees"], 472);
    assert_eq!(threeway(&["census", "--leaves", "9", "--symbols", "2"]).status.code(), Some(2));
}

#[test]
fn cross_validation_agrees_and_is_reproducible() {
    let args = ["cross-validate", "--count", "200", "--seed", "11", "--symbols", "3"];
    let a = threeway(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("disagreements\t0"));
    assert_eq!(a.stdout, threeway(&args).stdout);

    let o = threeway(&["cross-validate", "--count", "100", "--flavor", "unrooted", "--leaves", "6"]);
    assert_eq!(o.status.code(), Some(0));

    let dir = TempDir::new().unwrap();
    let map = file(&dir, "m.tsv", fixtures::FOUR_CONSISTENT_MAP);
    let o = threeway(&["cross-validate", s(&map)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("oracle\tnot-representable"));
}

#[test]
fn bad_input_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let incomplete = file(&dir, "i.tsv", "1 2 3 A\n1 2 4 B\n");
    assert_eq!(threeway(&["check", s(&incomplete)]).status.code(), Some(2));
    let garbled = file(&dir, "g.nwk", "((1,2)B,3;");
    assert_eq!(threeway(&["map-from-tree", s(&garbled)]).status.code(), Some(2));
    let two_way = file(&dir, "w.tsv", fixtures::P2_FAILURE_PAIRS);
    assert_eq!(threeway(&["check", "--conditions", "m", s(&two_way)]).status.code(), Some(2));
    assert_eq!(threeway(&["check", s(&dir.path().join("missing"))]).status.code(), Some(2));
}

#[test]
fn two_way_maps_are_checked_and_reconstructed() {
    let dir = TempDir::new().unwrap();
    let p3 = file(&dir, "w.tsv", fixtures::P3_FAILURE_PAIRS);
    let o = threeway(&["check", s(&p3)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("U2\t"));
    assert_eq!(threeway(&["reconstruct", s(&p3)]).status.code(), Some(1));

    let tree = file(&dir, "t.nwk", fixtures::SAMPLE_ROOTED);
    let map = dir.path().join("d.tsv");
    assert_eq!(threeway(&["map-from-tree", "--two-way", s(&tree), "-o", s(&map)]).status.code(), Some(0));
    let o = threeway(&["reconstruct", s(&map)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("((1,2)B,(3,4)B,5)A;"));
}
