use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn dialnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dialnet"))
        .args(args)
        .current_dir(fixture(""))
        .env_remove("DIALNET_CAP")
        .output()
        .expect("dialnet runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn valid_morphism_exits_zero() {
    let out = dialnet(&["check", "morphism", "obj_half.json", "obj_full.json", "half_to_full.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["verdict"], "valid");
}

#[test]
fn violated_inequality_reports_witness() {
    let out = dialnet(&["check", "morphism", "obj_full.json", "obj_half.json", "full_to_half.json"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["verdict"], "invalid");
    assert_eq!(r["witness"]["u"], "u");
    assert_eq!(r["witness"]["y"], "y");
    assert_eq!(r["witness"]["source_degree"], "1/1");
    assert_eq!(r["witness"]["target_degree"], "1/2");
}

#[test]
fn malformed_degree_is_an_input_error() {
    let out = dialnet(&["check", "object", "bad_degree.json"]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("alpha[0][0]"), "{err}");
    assert!(err.contains("7/5"), "{err}");
}

#[test]
fn unparsable_file_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"U\": [\"u\"],\n \"X\": [}").unwrap();
    let out = dialnet(&["check", "object", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn tensor_of_singletons_is_a_singleton() {
    let out = dialnet(&["build", "tensor", "obj_full.json", "obj_half.json"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["U"].as_array().unwrap().len(), 1);
    assert_eq!(r["X"].as_array().unwrap().len(), 1);
    assert_eq!(r["alpha"], serde_json::json!([["1/2"]]));
}

#[test]
fn hom_carrier_sizes() {
    // (|U|, |X|) per fixture.
    let sizes = [("obj_a.json", 2u32, 1u32), ("obj_b.json", 1, 2), ("obj_c.json", 1, 1)];
    for &(a, u, x) in &sizes {
        for &(b, v, y) in &sizes {
            let r = report(&dialnet(&["build", "hom", a, b]));
            let left = v.pow(u) * x.pow(y);
            assert_eq!(r["U"].as_array().unwrap().len(), left as usize, "{a} ⊸ {b}");
            assert_eq!(r["X"].as_array().unwrap().len(), (u * y) as usize, "{a} ⊸ {b}");
        }
    }
}

#[test]
fn curry_uncurry_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let curried = dir.path().join("curried.json");
    let uncurried = dir.path().join("uncurried.json");
    let objs = ["obj_a.json", "obj_b.json", "obj_c.json"];
    let mut args = vec!["build", "curry"];
    args.extend(objs);
    args.extend(["tensor_to_c.json", "--out", curried.to_str().unwrap()]);
    assert_eq!(code(&dialnet(&args)), 0);

    let mut args = vec!["build", "uncurry"];
    args.extend(objs);
    args.extend([curried.to_str().unwrap(), "--out", uncurried.to_str().unwrap()]);
    assert_eq!(code(&dialnet(&args)), 0);

    let mut args = vec!["build", "curry"];
    args.extend(objs);
    args.push(uncurried.to_str().unwrap());
    let again = dialnet(&args);
    assert_eq!(code(&again), 0);
    assert_eq!(again.stdout, std::fs::read(&curried).unwrap());

    let original: Value = serde_json::from_str(&std::fs::read_to_string(fixture("tensor_to_c.json")).unwrap()).unwrap();
    let back: Value = serde_json::from_str(&std::fs::read_to_string(&uncurried).unwrap()).unwrap();
    assert_eq!(original, back);
}

#[test]
fn build_is_deterministic() {
    let a = dialnet(&["build", "hom", "obj_a.json", "obj_b.json"]);
    let b = dialnet(&["build", "hom", "obj_a.json", "obj_b.json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cap_from_environment_is_a_resource_limit() {
    let out = Command::new(env!("CARGO_BIN_EXE_dialnet"))
        .args(["build", "hom", "obj_a.json", "obj_a.json"])
        .current_dir(fixture(""))
        .env("DIALNET_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    let out = dialnet(&["--cap", "3", "build", "tensor", "obj_a.json", "obj_b.json"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn producer_consumer_trace() {
    let out = dialnet(&[
        "run",
        "producer_consumer.json",
        "producer_consumer_marking.json",
        "--schedule",
        "produce,consume",
    ]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["event"], "produce");
    assert_eq!(lines[0]["marking_after"]["buffer"], "1/1");
    assert_eq!(lines[1]["marking_after"]["done"], "1/1");
    assert_eq!(lines[1]["marking_after"]["buffer"], "0/1");
}

#[test]
fn empty_schedule_gives_empty_trace() {
    let out = dialnet(&["run", "producer_consumer.json", "producer_consumer_marking.json"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let out = dialnet(&["run", "producer_consumer.json", "producer_consumer_marking.json", "--schedule", ""]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
}

#[test]
fn threshold_above_enabledness_is_not_enabled() {
    let out = dialnet(&["run", "dim_net.json", "dim_marking.json", "--schedule", "e", "--threshold", "1"]);
    assert_eq!(code(&out), 1);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("step 0") && err.contains("2/5"), "{err}");
    let out = dialnet(&["run", "dim_net.json", "dim_marking.json", "--schedule", "e"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn unknown_event_is_an_input_error() {
    let out = dialnet(&["run", "dim_net.json", "dim_marking.json", "--schedule", "nope"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn explore_counts_reachable_markings() {
    let out = dialnet(&["run", "producer_consumer.json", "producer_consumer_marking.json", "--explore", "3"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["nodes"].as_array().unwrap().len(), 3);
}

#[test]
fn topo_reports() {
    let out = dialnet(&["topo", "closure", "support_level_only.json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["verdict"], "support-level only");

    let out = dialnet(&["topo", "closure", "crisp_sierpinski.json"]);
    assert_eq!(report(&out)["verdict"], "exact fuzzy topology");

    let out = dialnet(&["topo", "axioms", "crisp_sierpinski.json", "--all-subsets"]);
    assert_eq!(code(&out), 0);

    let out = dialnet(&["topo", "extent", "crisp_sierpinski.json", "--open", "open"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["extents"]["open"]["in"], "1/1");

    let out = dialnet(&["topo", "continuity", "crisp_sierpinski.json", "crisp_sierpinski.json", "sierpinski_maps.json"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn small_law_suite_passes_and_mutation_fails() {
    let base = ["laws", "--max-size", "1", "--family", "dial-standard"];
    let out = dialnet(&base);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["passed"], true);

    let mut args = base.to_vec();
    args.extend(["--law", "adjunction", "--mutate-hom"]);
    let out = dialnet(&args);
    assert_eq!(code(&out), 1);
}

#[test]
fn zero_size_suite_is_vacuous() {
    let out = dialnet(&["laws", "--max-size", "0"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert!(!r["warnings"].as_array().unwrap().is_empty());
}
