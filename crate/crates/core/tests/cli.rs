use coxfold::cli::run;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn coxfold(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("coxfold").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn orbits_of_f4_flip() {
    let (code, out, _) = coxfold(&["orbits", "--graph", &data("f4.json"), "--symmetry", &data("f4_flip.json")]);
    assert_eq!(code, 0);
    assert_eq!(out, "O_a1 {a1, a4} finite, type I\nO_a2 {a2, a3} finite, type II_4\n");
}

#[test]
fn empty_symmetry_list_gives_singletons() {
    let (code, out, _) =
        coxfold(&["orbits", "--graph", &data("a3.json"), "--symmetry", &data("empty.json"), "--format", "json"]);
    assert_eq!(code, 0);
    let docs: serde_json::Value = serde_json::from_str(&out).unwrap();
    let names: Vec<&str> = docs.as_array().unwrap().iter().map(|d| d["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["O_a1", "O_a2", "O_a3"]);
}

#[test]
fn malformed_json_exits_2() {
    let (code, _, err) = coxfold(&["orbits", "--graph", &data("malformed.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("graph JSON"));
}

#[test]
fn label_breaking_symmetry_exits_2() {
    let (code, _, err) = coxfold(&["orbits", "--graph", &data("f4.json"), "--symmetry", &data("bad_label_symmetry.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("does not preserve"));
}

#[test]
fn f4_fold_dot() {
    let (code, out, _) =
        coxfold(&["fold", "--graph", &data("f4.json"), "--symmetry", &data("f4_flip.json"), "--format", "dot"]);
    assert_eq!(code, 0);
    assert_eq!(out, "graph folded {\n  \"O_a1\";\n  \"O_a2\";\n  \"O_a1\" -- \"O_a2\" [label=\"8\"];\n}\n");
}

#[test]
fn e6_fold_json() {
    let (code, out, _) = coxfold(&["fold", "--graph", &data("e6.json"), "--symmetry", &data("e6_flip.json")]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 4);
    let mut labels: Vec<u64> = doc["graph"]["edges"].as_array().unwrap().iter().map(|e| e["m"].as_u64().unwrap()).collect();
    labels.sort_unstable();
    assert_eq!(labels, [3, 3, 4]);
    let words: Vec<Vec<&str>> = doc["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["word"].as_array().unwrap().iter().map(|w| w.as_str().unwrap()).collect())
        .collect();
    assert_eq!(words, [vec!["e1", "e6"], vec!["e2"], vec!["e3", "e5"], vec!["e4"]]);
}

#[test]
fn infinite_edge_fold_warns() {
    let (code, out, err) = coxfold(&["fold", "--graph", &data("inf_dihedral.json"), "--symmetry", &data("inf_dihedral_flip.json")]);
    assert_eq!(code, 0);
    assert!(err.starts_with("warning:"));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(doc["vertices"].as_array().unwrap().is_empty());
}

#[test]
fn verify_modes() {
    let (code, out, _) = coxfold(&["verify", "--graph", &data("a3.json"), "--symmetry", &data("a3_flip.json"), "--format", "json"]);
    assert_eq!(code, 0);
    let r: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["mode"], "oracle");
    assert_eq!((r["order_w"].as_u64(), r["order_fixed"].as_u64()), (Some(24), Some(8)));
    assert_eq!(r["passed"], true);

    let (code, out, _) = coxfold(&[
        "verify",
        "--graph",
        &data("affine_a2.json"),
        "--symmetry",
        &data("affine_a2_reflection.json"),
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let r: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["mode"], "property");
    assert_eq!(r["labels"][0]["m_tilde"], "inf");

    let (code, out, _) = coxfold(&["verify", "--graph", &data("f4.json"), "--symmetry", &data("f4_flip.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("|W| = 1152, |W^G| = 16"));
}

#[test]
fn cap_switches_to_property_mode() {
    let (code, out, _) =
        coxfold(&["verify", "--graph", &data("f4.json"), "--symmetry", &data("f4_flip.json"), "--cap", "100"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("mode: property"));
}

#[test]
fn repr_outputs() {
    let (code, out, _) = coxfold(&["repr", "--graph", &data("a2.json")]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let close = |v: &serde_json::Value, expected: [[f64; 2]; 2]| {
        let rows: Vec<Vec<f64>> = serde_json::from_value(v.clone()).unwrap();
        rows.iter().flatten().zip(expected.iter().flatten()).all(|(a, b)| (a - b).abs() < 1e-12)
    };
    assert!(close(&doc["a1"], [[-1.0, 1.0], [0.0, 1.0]]));
    assert!(close(&doc["a2"], [[1.0, 0.0], [1.0, -1.0]]));

    let (code, out, _) = coxfold(&["repr", "--graph", &data("single.json")]);
    assert_eq!(code, 0);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&out).unwrap()["s"], serde_json::json!([[-1.0]]));

    let (code, _, err) = coxfold(&["repr", "--graph", &data("a2.json"), "--root-basis", &data("a2_bad_norm.json")]);
    assert_eq!(code, 6);
    assert!(err.contains("condition (a)"));
}

#[test]
fn automorphisms_round_trip_as_symmetry_input() {
    let (code, out, _) = coxfold(&["automorphisms", "--graph", &data("d4.json")]);
    assert_eq!(code, 0);
    let docs: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(docs.as_array().unwrap().len(), 6);
    let dir = std::env::temp_dir().join(format!("coxfold-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("d4_all.json");
    std::fs::write(&path, &out).unwrap();
    let (code, out, _) = coxfold(&["fold", "--graph", &data("d4.json"), "--symmetry", path.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.contains("[label=\"6\"]"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn bad_options_exit_2() {
    assert_eq!(coxfold(&["fold", "--graph", &data("f4.json"), "--k-max", "2"]).0, 2);
    assert_eq!(coxfold(&["fold", "--graph", &data("f4.json"), "--tolerance", "0"]).0, 2);
    assert_eq!(coxfold(&["fold", "--graph", &data("f4.json"), "--cap", "0"]).0, 2);
    assert_eq!(coxfold(&["repr", "--graph", &data("f4.json"), "--format", "dot"]).0, 2);
    assert_eq!(coxfold(&["fold", "--graph", &data("missing.json")]).0, 2);
    assert_eq!(coxfold(&["--help"]).0, 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["fold", "--graph", &data("e6.json"), "--symmetry", &data("e6_flip.json")];
    let bin = env!("CARGO_BIN_EXE_coxfold");
    let a = std::process::Command::new(bin).args(args).output().unwrap();
    let b = std::process::Command::new(bin).args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, coxfold(&args).1.into_bytes());
}

#[test]
fn cap_from_environment() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_coxfold"))
        .args(["verify", "--graph", &data("f4.json"), "--symmetry", &data("f4_flip.json")])
        .env("COXFOLD_CAP", "50")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("mode: property"));
}
