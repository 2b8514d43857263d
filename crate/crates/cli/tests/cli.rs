use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jordan-cr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn table_rows() {
    let rows = json(&["table", "--family", "hermC", "--rank", "3"]);
    let row = &rows[0];
    assert_eq!(row["sl_omega"]["computed"], 16);
    assert_eq!(row["aut_h"]["computed"], 35);
    assert_eq!(row["pass"], true);

    let albert = &json(&["table", "--family", "albert"])[0];
    assert_eq!(albert["der"]["computed"], 52);
    assert_eq!(albert["sl_omega"]["computed"], 78);
    assert_eq!(albert["aut_h"]["computed"], 133);

    let spin = &json(&["table", "--family", "spin", "--n", "1"])[0];
    assert_eq!(spin["aut_h"]["computed"], 10);
}

#[test]
fn analyze_light_cone() {
    let r = json(&["analyze", "--family", "hermR", "--rank", "2", "--p", "1", "--q", "0"]);
    assert_eq!(r["nondegeneracy_order"], 2);
    assert_eq!(r["aut_germ_dim"], 5);
    assert_eq!(r["minimal"], true);
    assert_eq!(r["chain_dims"], serde_json::json!([2, 1, 0]));
    assert!(r.get("elapsed_seconds").is_none());

    let timed = json(&["analyze", "--family", "hermR", "--rank", "2", "--p", "1", "--q", "0", "--timing"]);
    assert!(timed["elapsed_seconds"].is_number());
}

#[test]
fn analyze_degenerate_and_open_tubes() {
    let real = json(&["analyze", "--family", "hermC", "--rank", "2", "--p", "0", "--q", "0"]);
    assert_eq!(real["nondegeneracy_order"], 0);
    assert_eq!(real["order_is_convention"], true);
    assert_eq!(real["aut_germ_dim"], Value::Null);
    let open = json(&["analyze", "--family", "hermC", "--rank", "2", "--p", "1", "--q", "1"]);
    assert_eq!(open["nondegeneracy_order"], "not_finitely_nondegenerate");
}

#[test]
fn orbit_and_spectral() {
    let o = json(&["orbit", "--family", "hermR", "--rank", "3", "--element", "diag(1,-2,0)"]);
    assert_eq!(o, serde_json::json!({"p": 1, "q": 1}));
    let s = json(&["spectral", "--family", "spin", "--n", "2", "--element", "[1,0.5,0,0]"]);
    assert_eq!(s["eigenvalues"], serde_json::json!([1.5, 0.5]));
    assert_eq!(s["generic_norm"], 0.75);
}

#[test]
fn nondegen_by_element() {
    let r = json(&["nondegen", "--family", "hermC", "--rank", "3", "--element", "diag(2,0,0)"]);
    assert_eq!(r["order"], 2);
    assert_eq!(r["chain_dims"][2], 0);
}

#[test]
fn flow_example() {
    let r = json(&["flow", "--v", "1", "--c", "i", "--t", "1"]);
    assert_eq!(r["coefficients"], serde_json::json!([[0.0, 0.5]]));
    let text = run(&["flow", "--v", "1", "--c", "i", "--t", "1"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("0.5i"));
}

#[test]
fn siegel_examples() {
    let r = json(&["siegel", "--isotropy", "--s", "diag(1,0)"]);
    assert_eq!(r["isotropy_dimension"], 5);
    let z = json(&["siegel", "--a", "[[1,0],[0,1]]", "--z", "[[[0,1]]]"]);
    assert_eq!(z, serde_json::json!([[[0.0, 1.0]]]));
}

#[test]
fn exit_codes() {
    let bad_signature = run(&["analyze", "--family", "hermR", "--rank", "2", "--p", "2", "--q", "1"]);
    assert_eq!(bad_signature.status.code(), Some(2));
    let bad_json = run(&["orbit", "--family", "hermR", "--rank", "2", "--element", "[1, 2,"]);
    assert_eq!(bad_json.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_json.stderr).contains("line 1 column"));
    let unknown = run(&["analyze", "--family", "octo"]);
    assert_eq!(unknown.status.code(), Some(2));
    let not_symplectic = run(&["siegel", "--a", "[[2,0],[0,1]]", "--z", "[[[0,1]]]"]);
    assert_eq!(not_symplectic.status.code(), Some(2));
    let outside = run(&["siegel", "--a", "[[1,0],[0,1]]", "--z", "[[[0,-1]]]"]);
    assert_eq!(outside.status.code(), Some(2));
    let borderline = run(&["orbit", "--family", "hermR", "--rank", "2", "--element", "diag(1,9e-9)"]);
    assert_eq!(borderline.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&borderline.stderr).contains("borderline"));
}

#[test]
fn json_output_is_deterministic() {
    let args = ["analyze", "--family", "hermC", "--rank", "3", "--p", "1", "--q", "1", "--seed", "4", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let value: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(value["crdim"], 8);
    assert_eq!(value["levi_kernel_dim"], 4);
}
