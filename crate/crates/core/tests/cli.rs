use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_counterpair"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn check_reports_oracle_and_predicates() {
    let out = run(&["check", r#"{"t1":[1],"t2":[2]}"#]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["injective"], true);
    assert_eq!(v["pred_theorem"], true);

    let out = run(&["check", r#"{"t1":[2],"t2":[1]}"#]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["injective"], false);
    assert_eq!(v["pred_theorem"], false);
    assert_eq!(v["rank"].as_u64().unwrap() + 1, v["k"].as_u64().unwrap());
}

#[test]
fn check_key_order_is_fixed() {
    let out = run(&["check", r#"{"t3":[2]}"#]);
    assert_eq!(
        stdout(&out),
        "{\"k\":1,\"rank\":1,\"injective\":true,\"pred_theorem\":true,\"pred_proof\":true}\n"
    );
}

#[test]
fn codim_of_single_jordan_block() {
    let out = run(&["codim", r#"{"eigen":[{"lambda":["1","0"],"sizes":[3]}]}"#]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3");
}

#[test]
fn malformed_input_exits_with_two() {
    for args in [
        vec!["check", r#"{"t1":[2,1]}"#],
        vec!["check", r#"{"t5":[1]}"#],
        vec!["check", "{not json"],
        vec!["codim", r#"{"eigen":[{"lambda":["0","0"],"sizes":[1]}]}"#],
        vec!["check", "/nonexistent/spec.json"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
    assert_eq!(run(&["check", "{}", "--bogus"]).status.code(), Some(2));
}

#[test]
fn spec_from_file() {
    let dir = std::env::temp_dir().join(format!("counterpair-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.json");
    std::fs::write(&path, r#"{"t1":[1],"t2":[1]}"#).unwrap();
    let out = run(&["codim", path.to_str().unwrap()]);
    assert_eq!(stdout(&out).trim(), "4");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn template_is_one_based() {
    let out = run(&["template", r#"{"t1":[1],"t2":[1]}"#]);
    assert_eq!(
        stdout(&out).trim(),
        r#"{"k":4,"stars":[{"matrix":"A","row":2,"col":2},{"matrix":"B","row":1,"col":1},{"matrix":"B","row":1,"col":2},{"matrix":"B","row":2,"col":1}]}"#
    );
}

#[test]
fn randomize_recover_and_equiv() {
    let spec = r#"{"eigen":[{"lambda":["3","0"],"sizes":[2]}],"t3":[2],"t4":[3]}"#;
    let pair = stdout(&run(&["canon-build", spec]));
    let scrambled = stdout(&run(&["randomize", pair.trim(), "--seed", "11"]));
    assert_ne!(pair, scrambled);
    let again = stdout(&run(&["randomize", pair.trim(), "--seed", "11"]));
    assert_eq!(scrambled, again);

    let out = run(&["recover", scrambled.trim(), "--eigs", r#"[["3","0"]]"#]);
    assert!(out.status.success());
    let got: counterpair::CanonicalSpec = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(got, counterpair::CanonicalSpec::from_json(spec).unwrap());

    let out = run(&["recover", scrambled.trim()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing eigenvalue"));

    let eq = run(&[
        "equiv",
        pair.trim(),
        scrambled.trim(),
        "--eigs",
        r#"[["3","0"]]"#,
    ]);
    assert_eq!(eq.status.code(), Some(0));
    assert_eq!(stdout(&eq).trim(), "true");
}

#[test]
fn type_three_and_four_are_not_equivalent() {
    let p = stdout(&run(&["canon-build", r#"{"t3":[2]}"#]));
    let q = stdout(&run(&["canon-build", r#"{"t4":[2]}"#]));
    let out = run(&["equiv", p.trim(), q.trim()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out).trim(), "false");
}

#[test]
fn reduce_emits_params_and_tangent_parts() {
    let pert = r#"{"A":{"rows":2,"cols":2,"entries":[["1","0"],["2","0"],["3","0"],["1/2","0"]]},"B":{"rows":2,"cols":2,"entries":[["1","0"],["0","1"],["0","0"],["-1","0"]]}}"#;
    let out = run(&["reduce", r#"{"t1":[1],"t2":[1]}"#, pert]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["params"].as_array().unwrap().len(), 4);
    assert_eq!(v["x"]["rows"], 2);
    assert_eq!(
        run(&["reduce", r#"{"t1":[1]}"#, pert]).status.code(),
        Some(2)
    );
}

#[test]
fn sweep_writes_csv_and_is_byte_stable() {
    let dir = std::env::temp_dir().join(format!("counterpair-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (p1, p2) = (dir.join("a.csv"), dir.join("b.csv"));
    let out = run(&[
        "sweep",
        "--max-size",
        "4",
        "--max-blocks",
        "2",
        "--out",
        p1.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let summary: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(summary["verdict"], "theorem_predicate");
    run(&[
        "sweep",
        "--max-size",
        "4",
        "--max-blocks",
        "2",
        "--out",
        p2.to_str().unwrap(),
        "--progress",
    ]);
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "spec_id,spec_json,m,n,k,rank_phi,injective,pred_theorem,pred_proof,agree_theorem,agree_proof"
    );
    assert_eq!(
        text.lines().count(),
        1 + summary["rows"].as_u64().unwrap() as usize
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn induced_map_matrix() {
    let out = run(&["induced", r#"{"t1":[1],"t2":[1]}"#]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!((v["k"].as_u64(), v["rank"].as_u64()), (Some(4), Some(3)));
    assert_eq!(v["matrix"]["rows"], 4);
}
