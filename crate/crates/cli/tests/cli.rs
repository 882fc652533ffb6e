use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

use ordtop::constructions::generate_p;
use ordtop::cutspace::{Fragment, FragmentJson};
use ordtop::{FiniteLattice, FinitePoset, LatticeJson, PosetJson};

const TWO_CHAINS: &str = r#"{"elements":["a","b","c","d"],"le":[["a","b"],["c","d"]]}"#;
const M3: &str =
    r#"{"elements":["0","a","b","c","1"],"le":[["0","a"],["0","b"],["0","c"],["a","1"],["b","1"],["c","1"]]}"#;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Out {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn run(args: &[&str], stdin: &str) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ordtop").chain(args.iter().copied());
    let code = ordtop_cli::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ordtop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn components_of_two_chains() {
    let path = temp_file("two_chains.json", TWO_CHAINS);
    let out = run(&["poset", "components", "--in", path.to_str().unwrap()], "");
    assert_eq!(out.code, 0);
    let r = out.json();
    assert_eq!(r["verdict"], "info");
    assert_eq!(r["details"]["count"], 2);
    assert_eq!(r["details"]["components"][0], serde_json::json!(["a", "b"]));
}

#[test]
fn generated_p_passes_its_verifier() {
    let gen = run(&["gen", "P", "--depth", "1", "--width", "2"], "");
    assert_eq!(gen.code, 0);
    let out = run(&["poset", "verify-P"], &gen.stdout);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let d = &out.json()["details"];
    assert_eq!(d["elements"], 7);
    assert_eq!(d["axioms"]["components"], 1);
    assert_eq!(d["chains"]["passes"], true);
    assert_eq!(d["cones"]["passes"], true);
}

#[test]
fn deeper_truncations_fail_only_the_literal_cone_form() {
    let gen = run(&["gen", "P", "--depth", "2", "--width", "2"], "");
    let out = run(&["poset", "verify-P"], &gen.stdout);
    assert_eq!(out.code, 1);
    let d = &out.json()["details"];
    assert_eq!(d["axioms"]["passes"], true);
    assert_eq!(d["chains"]["passes"], true);
    assert_eq!(d["cones"]["passes"], false);
    assert_eq!(d["cones"]["by_length"]["passes"], true);
}

#[test]
fn m3_spectrum_reports_a_violating_triple() {
    let path = temp_file("m3.json", M3);
    let out = run(&["lattice", "spectrum", "--in", path.to_str().unwrap()], "");
    assert_eq!(out.code, 1);
    let r = out.json();
    assert_eq!(r["verdict"], "fail");
    let triple: Vec<&str> = r["details"]["violating_triple"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    // any three distinct atoms break distributivity in M3
    assert_eq!(triple.len(), 3);
    assert!(triple.iter().all(|t| ["a", "b", "c"].contains(t)));
    assert!(triple[0] != triple[1] && triple[1] != triple[2] && triple[0] != triple[2]);
}

#[test]
fn lattice_check_and_ideals_on_a_chain() {
    let chain = r#"{"poset":{"elements":["0","m","1"],"le":[["0","m"],["m","1"]]}}"#;
    let check = run(&["lattice", "check"], chain);
    assert_eq!(check.code, 0);
    assert_eq!(check.json()["details"]["bottom"], "0");
    let ideals = run(&["lattice", "ideals"], chain);
    assert_eq!(ideals.json()["details"]["prime_ideals"], serde_json::json!([["0"], ["0", "m"]]));
    let not_lattice = run(&["lattice", "check"], TWO_CHAINS);
    assert_eq!(not_lattice.code, 1);
}

#[test]
fn usage_errors_name_the_flag() {
    let out = run(&["gen", "P", "--width", "2"], "");
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--depth"), "{}", out.stderr);
    let out = run(&["poset", "components", "--bogus"], TWO_CHAINS);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("--bogus"), "{}", out.stderr);
    let out = run(&["poset", "components"], "{not json");
    assert_eq!(out.code, 2);
    let out = run(&["poset", "downset", "--set", "zz"], TWO_CHAINS);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("zz"));
    assert_eq!(run(&["--help"], "").code, 0);
}

#[test]
fn emitted_json_reloads_to_equal_values() {
    let gen = run(&["gen", "P", "--depth", "2", "--width", "2"], "");
    let json: PosetJson = serde_json::from_value(gen.json()["details"]["poset"].clone()).unwrap();
    assert_eq!(FinitePoset::from_json(&json).unwrap(), generate_p(2, 2, 4096).unwrap());

    let chain = r#"{"poset":{"elements":["0","m","1"],"le":[["0","m"],["m","1"]]}}"#;
    let rt = run(&["lattice", "roundtrip"], chain);
    assert_eq!(rt.code, 0);
    let lj: LatticeJson = serde_json::from_value(rt.json()["details"]["lattice"].clone()).unwrap();
    let l = FiniteLattice::from_json(&lj).unwrap();
    assert_eq!(l.len(), 3);
    assert_eq!(l.to_json(), lj);

    let build = run(&["cutspace", "build", "--depth", "2", "--width", "2", "--seed", "9"], "");
    assert_eq!(build.code, 0);
    let fj: FragmentJson = serde_json::from_value(build.json()["details"]["fragment"].clone()).unwrap();
    assert_eq!(Fragment::from_json(&fj).unwrap().to_json(), fj);
}

#[test]
fn report_pipes_into_the_next_command() {
    let sub = run(&["topo", "subbase"], TWO_CHAINS);
    let pr = run(&["topo", "priestley"], &sub.stdout);
    assert_eq!(pr.code, 0);
    assert_eq!(pr.json()["details"]["topology"], "given");
    let gen = run(&["topo", "generate"], &sub.stdout);
    assert_eq!(gen.json()["details"]["count"], 16);

    let frag = run(&["cutspace", "build", "--depth", "1", "--width", "2"], "");
    let iso = run(&["cutspace", "iso"], &frag.stdout);
    assert_eq!(iso.code, 0);
    assert_eq!(iso.json()["witnesses"]["mapping"][0], serde_json::json!(["x", "p"]));
}

#[test]
fn cover_certificates() {
    let out = run(&["topo", "cover-certify", "--a", "b", "--b", "c"], TWO_CHAINS);
    let r = out.json();
    assert_eq!(r["details"]["kind"], "cross-component");
    assert_eq!(r["details"]["witness_size"], 2);
    let out = run(&["topo", "cover-certify", "--a", "b"], TWO_CHAINS);
    let r = out.json();
    assert_eq!(out.code, 0);
    assert_eq!(r["details"]["covers"], false);
    assert_eq!(r["witnesses"]["certificate"]["uncovered"], serde_json::json!(["a", "b"]));
}

#[test]
fn union_subbase_of_discrete_parts() {
    let parts = r#"{"parts":[{"poset":{"elements":["a","b"],"le":[["a","b"]]}},{"poset":{"elements":["c"],"le":[]}}]}"#;
    let out = run(&["topo", "union-subbase", "--part", "0", "--point", "b"], parts);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = out.json();
    assert_eq!(r["details"]["priestley"]["failures"], serde_json::json!([]));
    assert_eq!(r["details"]["offsets"], serde_json::json!([0, 2]));
    let bad = run(&["topo", "union-subbase", "--part", "2", "--point", "b"], parts);
    assert_eq!(bad.code, 2);
}

#[test]
fn separation_verdicts() {
    let ok = run(
        &["cutspace", "separate", "--depth", "1", "--width", "2", "--u", "x", "--v", "x[0]"],
        "",
    );
    assert_eq!(ok.code, 0);
    let r = ok.json();
    assert_eq!(r["details"]["check"]["source_inside"], true);
    assert_eq!(r["details"]["check"]["target_outside"], true);
    assert_eq!(r["details"]["check"]["decreasing"], true);
    let below = run(
        &["cutspace", "separate", "--depth", "1", "--width", "2", "--u", "x[0]", "--v", "x"],
        "",
    );
    assert_eq!(below.code, 1);
    let jumps = run(
        &["cutspace", "separate", "--depth", "1", "--width", "1", "--u", "(0,1/2)", "--v", "(0,1/2]"],
        "",
    );
    assert_eq!(jumps.code, 0);
    assert_eq!(jumps.json()["witnesses"]["blocks"], serde_json::json!([["0/1", "1/2"]]));
}

#[test]
fn out_flag_and_pretty_text() {
    let path = temp_file("report.json", "");
    let out = run(&["poset", "components", "--out", path.to_str().unwrap()], TWO_CHAINS);
    assert_eq!(out.code, 0);
    assert!(out.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["details"]["count"], 2);
    let pretty = run(&["poset", "components", "--pretty"], TWO_CHAINS);
    assert!(pretty.stdout.starts_with("command: poset components\nverdict: info\n"));
}

#[test]
fn binary_pipeline() {
    let exe = env!("CARGO_BIN_EXE_ordtop");
    let gen = Command::new(exe).args(["gen", "P", "--depth", "1", "--width", "2"]).output().unwrap();
    assert!(gen.status.success());
    let mut child = Command::new(exe)
        .args(["poset", "verify-P"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(&gen.stdout).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}
