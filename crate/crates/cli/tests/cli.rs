//! End-to-end command-line behavior: exit codes, report shapes, pipelines,
//! and byte-level determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_nervecheck"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("binary spawns");
    if let Some(data) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(data.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("binary terminates")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({}): {}",
            e,
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn gen(args: &[&str]) -> String {
    let out = run(args, None);
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn bound_on_e1_passes_with_exit_zero() {
    let doc = gen(&["gen", "e1"]);
    let out = run(&["bound", "--dim", "1"], Some(&doc));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let b = &v["bounds"][0];
    assert_eq!(b["epsilonStar"], "1");
    assert_eq!(b["dB"], "1");
    assert_eq!(b["bound"], "2");
    assert_eq!(b["verdict"], true);
    assert_eq!(b["blowupAgrees"], true);
}

#[test]
fn interleave_below_goodness_reports_the_witness_and_exits_two() {
    let doc = gen(&["gen", "e1"]);
    let out = run(
        &["interleave", "--dim", "1", "--eps", "0.5", "--verify"],
        Some(&doc),
    );
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["type"], "NotEpsGood");
    assert_eq!(v["error"]["v"], serde_json::json!([0, 1]));
    assert_eq!(v["error"]["alpha"], "0");
    assert_eq!(v["error"]["dim"], 0);
}

#[test]
fn interleave_at_default_eps_verifies_everything() {
    let doc = gen(&["gen", "e1"]);
    let out = run(&["interleave", "--dim", "1", "--verify"], Some(&doc));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["identities"]["allPass"], true);
    assert_eq!(v["identities"]["epsilon"], "1");
    assert_eq!(v["identities"]["shift"], "2");
    let scales = v["identities"]["scales"].as_array().unwrap();
    assert_eq!(scales.len(), 7);
    for s in scales {
        assert_eq!(s["checks"].as_array().unwrap().len(), 5);
    }
}

#[test]
fn gen_tight_piped_to_bound_passes_both_dims() {
    let doc = gen(&["gen", "tight", "--n", "2"]);
    let out = run(&["bound", "--dim", "0,1"], Some(&doc));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["family"]["name"], "tight");
    assert_eq!(v["family"]["nominalEpsilon"], "1");
    assert_eq!(v["family"]["nominalDim"], 2);
    let rows = v["bounds"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["verdict"] == true));
}

#[test]
fn goodness_reports_witnesses() {
    let doc = gen(&["gen", "e1"]);
    let out = run(&["goodness", "--dim", "1"], Some(&doc));
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["goodness"]["epsilonStar"], "1");
    let witnesses = v["goodness"]["witnesses"].as_array().unwrap();
    assert!(witnesses
        .iter()
        .any(|w| w["v"] == serde_json::json!([0, 1]) && w["dim"] == 0));
    assert!(witnesses
        .iter()
        .any(|w| w["v"] == serde_json::json!([0]) && w["dim"] == 1));
}

#[test]
fn malformed_input_exits_one() {
    let out = run(&["bound", "--dim", "1"], Some("not json"));
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn diagram_csv_table() {
    let doc = gen(&["gen", "e1"]);
    let out = run(
        &["diagram", "--target", "space", "--dim", "1", "--csv"],
        Some(&doc),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "dim,birth,death\n1,0,2\n");
}

#[test]
fn diagram_targets_cover_every_filtration() {
    let doc = gen(&["gen", "e1"]);
    for target in ["space", "nerve", "blowup", "shifted-nerve"] {
        let out = run(&["diagram", "--target", target, "--dim", "1"], Some(&doc));
        assert_eq!(out.status.code(), Some(0), "target {}", target);
    }
    let out = run(
        &[
            "diagram",
            "--target",
            "intersection",
            "--v",
            "0,1",
            "--dim",
            "1",
        ],
        Some(&doc),
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let bars = &v["diagrams"]["intersection{0,1}"];
    assert_eq!(bars[0]["dim"], 0);
    assert_eq!(bars[0]["birth"], "0");
    assert_eq!(bars[0]["death"], "1");
}

#[test]
fn bottleneck_between_diagram_files() {
    let dir = tempfile::tempdir().unwrap();
    let doc = gen(&["gen", "tight", "--n", "1"]);
    let space = run(&["diagram", "--target", "space", "--dim", "0"], Some(&doc));
    let nerve = run(&["diagram", "--target", "nerve", "--dim", "0"], Some(&doc));
    let pa = dir.path().join("space.json");
    let pb = dir.path().join("nerve.json");
    std::fs::write(&pa, &space.stdout).unwrap();
    std::fs::write(&pb, &nerve.stdout).unwrap();
    let out = run(
        &[
            "bottleneck",
            pa.to_str().unwrap(),
            pb.to_str().unwrap(),
            "--dim",
            "0",
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["bottleneck"], "2");
}

#[test]
fn same_seed_generates_identical_documents() {
    let a = gen(&["gen", "random", "--seed", "42", "--flavor", "perturbed"]);
    let b = gen(&["gen", "random", "--seed", "42", "--flavor", "perturbed"]);
    assert_eq!(a, b);
    let c = gen(&["gen", "random", "--seed", "43", "--flavor", "perturbed"]);
    assert_ne!(a, c);
}

#[test]
fn reports_are_deterministic_modulo_timing() {
    let doc = gen(&["gen", "random", "--seed", "3", "--flavor", "perturbed"]);
    let strip = |out: Output| {
        let mut v = stdout_json(&out);
        v.as_object_mut().unwrap().remove("timingMs");
        v
    };
    let a = strip(run(&["bound", "--dim", "0,1"], Some(&doc)));
    let b = strip(run(&["bound", "--dim", "0,1"], Some(&doc)));
    assert_eq!(a, b);
}
