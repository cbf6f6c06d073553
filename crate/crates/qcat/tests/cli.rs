use qcat::category::{codiscrete, discrete, nerve, nerve_map, poset, Functor};
use qcat::sset::{enumerate_maps, map_to_json, point, to_json_string, Constraints};
use serde_json::Value;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::sync::Arc;

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).display().to_string()
}

fn qc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qc")).args(args).output().unwrap()
}

fn qc_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn hom_on_the_z2_nerve() {
    let o = qc(&["hom", &corpus("nerve-z2.json"), "--a", "x", "--b", "x", "--model", "R", "--max-dim", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("level_sizes: [2,2,2,2,2]"), "{}", stdout(&o));
}

#[test]
fn hom_models_agree_in_json() {
    for model in ["R", "L", "cyl", "E"] {
        let o = qc(&["hom", &corpus("nerve-span3.json"), "--a", "a", "--b", "c", "--model", model, "--max-dim", "3", "--format", "json"]);
        assert_eq!(o.status.code(), Some(0), "{model}");
        let v = json_out(&o);
        assert_eq!(v["pi0"], 2, "{model}");
        assert_eq!(v["level_sizes"], serde_json::json!([2, 2, 2, 2]), "{model}");
    }
}

#[test]
fn hollow_triangle_is_not_fibrant() {
    let o = qc(&["check-fibrant", &corpus("boundary2.json"), "--dim", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: failure"));
    let o = qc(&["check-fibrant", &corpus("nerve-span3.json"), "--dim", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let o = qc(&["check-fibrant", &corpus("nerve-span3.json"), "--dim", "2", "--kan"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn certificates_round_trip_through_a_pipe() {
    let gen = qc(&["cert", "gen", "spine-simplex", "3"]);
    assert_eq!(gen.status.code(), Some(0));
    let ok = qc_stdin(&["cert", "verify", "-"], &gen.stdout);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));

    let mut cert: Value = serde_json::from_slice(&gen.stdout).unwrap();
    cert["steps"].as_array_mut().unwrap().remove(0);
    let bad = qc_stdin(&["cert", "verify", "-"], cert.to_string().as_bytes());
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("valid: false"));
}

#[test]
fn several_certificates_come_as_an_array() {
    let gen = qc(&["cert", "gen", "cyl-squash", "2"]);
    assert_eq!(gen.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&gen.stdout).unwrap();
    assert!(v.as_array().is_some_and(|a| a.len() > 1));
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("certs.json");
    std::fs::write(&p, &gen.stdout).unwrap();
    assert_eq!(qc(&["cert", "verify", p.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{").unwrap();
    assert_eq!(qc(&["homology", bad.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(qc(&["homology", "/nonexistent/x.json"]).status.code(), Some(3));
    assert_eq!(qc(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(qc(&["--help"]).status.code(), Some(0));

    // a hollow triangle that may not be extended has no coskeletal bound
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(corpus("boundary2.json")).unwrap()).unwrap();
    v["stable"] = Value::Bool(false);
    let open = dir.path().join("open.json");
    std::fs::write(&open, v.to_string()).unwrap();
    let o = qc(&["hom", open.to_str().unwrap(), "--a", "0", "--b", "1", "--model", "E"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn build_matches_the_corpus_and_writes_out() {
    let o = qc(&["build", "delta2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), std::fs::read_to_string(corpus("delta2.json")).unwrap());

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let recipe = r#"{"op":"product","left":{"op":"delta","n":1,"trunc":3},"right":{"op":"delta","n":1,"trunc":3}}"#;
    let o = qc(&["build", recipe, "--out", out.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["nondegenerate"], serde_json::json!([4, 5, 2, 0]));
    assert!(std::fs::read_to_string(out).unwrap().contains("(01,01)"));
}

#[test]
fn quasi_isos_homotopy_category_and_core() {
    let o = qc(&["quasi-iso", &corpus("nerve-span3.json"), "--format", "json"]);
    let v = json_out(&o);
    assert_eq!(v["edges"]["f"], "no");
    assert_eq!(v["edges"]["ida"], "yes");
    for mode in ["providers", "sk2e1", "ho"] {
        let o = qc(&["quasi-iso", &corpus("nerve-groupoid2.json"), "--edge", "pq", "--mode", mode, "--format", "json"]);
        assert_eq!(json_out(&o)["edges"]["pq"], "yes", "{mode}");
    }
    let o = qc(&["ho-cat", &corpus("nerve-span3.json"), "--format", "json"]);
    let v = json_out(&o);
    assert_eq!((v["objects"].as_u64(), v["morphisms"].as_u64(), v["iso_classes"].as_u64()), (Some(3), Some(7), Some(3)));
    let o = qc(&["j", &corpus("nerve-span3.json"), "--format", "json"]);
    assert_eq!(json_out(&o)["level_sizes"], serde_json::json!([3, 3, 3, 3, 3]));
}

#[test]
fn homology_of_the_circle_and_rp() {
    let o = qc(&["homology", &corpus("boundary2.json"), "--max-dim", "2", "--format", "json"]);
    assert_eq!(json_out(&o)["groups"], serde_json::json!(["Z", "Z", "0"]));
    let o = qc(&["homology", &corpus("nerve-z2.json"), "--max-dim", "4", "--format", "json"]);
    assert_eq!(json_out(&o)["groups"], serde_json::json!(["Z", "Z/2", "0", "Z/2", "0"]));
}

#[test]
fn relative_maps_and_squares() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("boundary.json");
    std::fs::write(&b, r#"{"sub": ["0", "1"], "assign": {"0": "x", "1": "x"}}"#).unwrap();
    let o = qc(&[
        "relmap",
        &corpus("nerve-z2.json"),
        "--base",
        &corpus("delta1.json"),
        "--boundary",
        b.to_str().unwrap(),
        "--max-dim",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["level_sizes"], serde_json::json!([2, 2, 2, 2]));

    let o = qc(&["relmap", &corpus("nerve-span3.json"), "--square", "h,k", "--max-dim", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("holds: true"));
    let o = qc(&["relmap", &corpus("nerve-span3.json")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn necklaces_and_comparison() {
    let o = qc(&["necklace", &corpus("nerve-z2.json"), "--a", "x", "--b", "x", "--max-vertices", "2", "--max-dim", "2", "--format", "json"]);
    let v = json_out(&o);
    assert_eq!(v["pi0"], 2);
    let o = qc(&["compare", &corpus("nerve-groupoid2.json"), "--a", "p", "--b", "q", "--max-dim", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("agree: true"));
}

fn write_map(dir: &Path, name: &str, f: &qcat::sset::SMap) -> PathBuf {
    std::fs::write(dir.join("source.json"), to_json_string(f.source())).unwrap();
    std::fs::write(dir.join("target.json"), to_json_string(f.target())).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, map_to_json(f, Some("source.json"), Some("target.json")).to_string()).unwrap();
    p
}

#[test]
fn dk_check_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let x = Arc::new(nerve(&poset(1), 5).unwrap());
    let y = Arc::new(point().extend_to(5).unwrap());
    let f = enumerate_maps(&x, &y, &Constraints::new()).unwrap().remove(0);
    let p = write_map(dir.path(), "collapse.json", &f);
    let o = qc(&["dk-check", p.to_str().unwrap(), "--max-dim", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_out(&o)["witness"]["kind"], "iso_classes");

    let dir = tempfile::tempdir().unwrap();
    let g = codiscrete(&["p", "q"]);
    let t = discrete(&["*"]);
    let fun = Functor { obj: vec![0, 0], mor: vec![0; g.num_morphisms()] };
    let (ng, nt) = (Arc::new(nerve(&g, 5).unwrap()), Arc::new(nerve(&t, 5).unwrap()));
    let e = nerve_map(&fun, &ng, &nt, &g, &t).unwrap();
    let p = write_map(dir.path(), "equiv.json", &e);
    let o = qc(&["dk-check", p.to_str().unwrap(), "--max-dim", "3"]);
    assert_eq!(o.status.code(), Some(0));
}
