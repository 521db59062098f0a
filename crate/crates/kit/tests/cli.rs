use std::io::Write;
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde::Serialize;

use onsager_kit::report::*;

fn kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onsager-kit")).args(args).output().expect("binary runs")
}

fn kit_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onsager-kit")).args(args).env(key, val).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Parses the report, checks `schema`, and checks that emitting and parsing
/// again gives the same value.
fn round_trip<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(o: &Output) -> T {
    let text = stdout(o);
    let raw: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(raw["schema"], serde_json::json!(1));
    let x: T = serde_json::from_str(&text).unwrap();
    let again: T = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
    assert_eq!(x, again);
    x
}

fn matrix_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn eval_example() {
    let o = kit(&["eval", "--preset", "A2", "[B1,[B1,B2]]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "ψ([B1,[B1,B2]]) = -y(α2)");
    let r: EvalReport = round_trip(&kit(&["eval", "--preset", "A2", "--json", "[B1,[B1,B2]]"]));
    assert_eq!(r.rhs, vec![IdxTerm { idx: Idx { root: vec![0, 1], level: None, i: None }, coeff: -1 }]);
}

#[test]
fn eval_affine_uses_zero_label() {
    let r: EvalReport = round_trip(&kit(&["eval", "--preset", "A1~", "--json", "[B0,B1]"]));
    // [Y_0, Y_1] = [y(-α1+δ), y(α1)] = -y(δ)
    assert_eq!(r.rhs.len(), 1);
    assert_eq!(r.rhs[0].idx, Idx { root: vec![0], level: Some(1), i: Some(1) });
    assert_eq!(r.rhs[0].coeff.abs(), 1);
}

#[test]
fn coeffs_table() {
    let o = kit(&["coeffs", "--a", "-2", "--rmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    // (0, -3a-2, 0, 1) and (0, 15a²+50a+24, 0, -10a-20, 0, 1) at a = -2
    assert!(text.contains("r = 3: (0, 4, 0, 1)"));
    assert!(text.contains("r = 5: (0, -16, 0, 0, 0, 1)"));
    let r: CoeffsReport = round_trip(&kit(&["coeffs", "--a", "-2", "--rmax", "5", "--json"]));
    assert_eq!(r.rows.len(), 6);
    assert_eq!(r.rows[2].c.iter().map(|n| n.as_i64().unwrap()).collect::<Vec<_>>(), vec![2, 0, 1]);

    let sym = stdout(&kit(&["coeffs", "--rmax", "5"]));
    assert!(sym.contains("r = 5: (0, 15a^2+50a+24, 0, -10a-20, 0, 1)"));
    let r: CoeffsReport = round_trip(&kit(&["coeffs", "--rmax", "4", "--json"]));
    assert_eq!(r.symbolic.len(), 5);
}

#[test]
fn large_coefficients_stay_exact() {
    let r: CoeffsReport = round_trip(&kit(&["coeffs", "--a", "-1", "--rmax", "40", "--json"]));
    let big = r.rows[40].c[0].to_string();
    assert!(big.len() > 19, "{big}");
}

#[test]
fn relations_report() {
    let o = kit(&["relations", "--preset", "A1~"]);
    let text = stdout(&o);
    assert!(text.contains("[B0,[B0,[B0,B1]]] + 4·[B0,B1] = 0"));
    let r: RelationsReport = round_trip(&kit(&["relations", "--preset", "G2", "--json"]));
    assert_eq!(r.relations.len(), 2);
    assert_eq!(r.relations[0].a, -3);
}

#[test]
fn matrix_file_matches_preset() {
    let f = matrix_file("# A2\n2 -1\n-1 2\n");
    let path = f.path().to_str().unwrap();
    let a: RelationsReport = round_trip(&kit(&["relations", "--matrix-file", path, "--json"]));
    let b: RelationsReport = round_trip(&kit(&["relations", "--preset", "A2", "--json"]));
    assert_eq!(a, b);
    assert_eq!(kit(&["verify", "--matrix-file", path]).status.code(), Some(0));
}

#[test]
fn matrix_file_reordered_affine() {
    // C2~ with the affine node last
    let f = matrix_file("2 -1 0\n-2 2 -2\n0 -1 2\n");
    let path = f.path().to_str().unwrap();
    let o = kit(&["verify", "--matrix-file", path]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn roots_report() {
    let r: RootsReport = round_trip(&kit(&["roots", "--preset", "G2", "--json"]));
    assert_eq!(r.roots.len(), 6);
    assert_eq!(r.roots.iter().map(|x| x.height).max(), Some(5));
    let r: RootsReport = round_trip(&kit(&["roots", "--preset", "A1~", "--height", "3", "--json"]));
    let hs: Vec<i64> = r.roots.iter().map(|x| x.height).collect();
    assert_eq!(hs, vec![1, 1, 2, 3, 3]);
}

#[test]
fn structconst_report() {
    let r: StructReport = round_trip(&kit(&["structconst", "--preset", "C2", "--json"]));
    let e = r.n_table.iter().find(|e| e.alpha == vec![1, 0] && e.beta == vec![1, 1]).unwrap();
    assert_eq!(e.n.abs(), 2);
    let raw: serde_json::Value = serde_json::from_str(&stdout(&kit(&["structconst", "--preset", "C2", "--json"]))).unwrap();
    assert!(raw["n_table"][0].get("N").is_some());
    let r: StructReport = round_trip(&kit(&["structconst", "--preset", "A1~", "--json"]));
    assert!(r.onsager.iter().any(|b| b.lhs == "[A_0, A_1]" && b.rhs == "G_1"));
    assert!(r.onsager.iter().any(|b| b.lhs == "[G_1, G_2]" && b.rhs == "0"));
}

#[test]
fn verify_affine_a1() {
    let o = kit(&["verify", "--preset", "A1~"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PASS  Dolan-Grady relations"));
    assert!(text.contains("PASS  Onsager structure constants"));
    let r: VerifyReport = round_trip(&kit(&["verify", "--preset", "A1~", "--json"]));
    assert!(r.passed);
}

#[test]
fn verify_failure_exits_one() {
    // a window of height 1 leaves generators unconstrained
    let o = kit(&["verify", "--preset", "C2~", "--height", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL  character space dimension equals |E_A|"));
}

#[test]
fn chars_report() {
    let r: CharsReport = round_trip(&kit(&["chars", "--preset", "C2~", "--json"]));
    assert_eq!(r.even_columns, vec![0, 2]);
    assert_eq!(r.dimension, 2);
    assert!(r.explicit_basis);
    let r: CharsReport = round_trip(&kit(&["chars", "--preset", "A2", "--json"]));
    assert_eq!(r.dimension, 0);
    assert!(r.even_columns.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(kit(&["roots", "--preset", "Q7"]).status.code(), Some(2));
    assert_eq!(kit(&["roots"]).status.code(), Some(2));
    let f = matrix_file("2 -1\n-1 2\n");
    let path = f.path().to_str().unwrap();
    assert_eq!(kit(&["roots", "--preset", "A2", "--matrix-file", path]).status.code(), Some(2));
    assert_eq!(kit(&["eval", "--preset", "A2", "[B1 B2]"]).status.code(), Some(2));
    assert_eq!(kit(&["eval", "--preset", "A2", "[B1,B3]"]).status.code(), Some(2));
    assert_eq!(kit(&["verify", "--preset", "A2", "--jmax", "0"]).status.code(), Some(2));
    let bad = matrix_file("2 1\n-1 2\n");
    assert_eq!(kit(&["roots", "--matrix-file", bad.path().to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(kit(&["roots", "--matrix-file", "/nonexistent/matrix.txt"]).status.code(), Some(2));
    // hyperbolic: relations exist, roots do not
    let hyp = matrix_file("2 -3\n-3 2\n");
    let hp = hyp.path().to_str().unwrap();
    assert_eq!(kit(&["relations", "--matrix-file", hp]).status.code(), Some(0));
    assert_eq!(kit(&["roots", "--matrix-file", hp]).status.code(), Some(2));
}

#[test]
fn thread_setting() {
    let one = kit_env(&["verify", "--preset", "C2", "--json"], "ONSAGER_KIT_THREADS", "1");
    let four = kit_env(&["verify", "--preset", "C2", "--json"], "ONSAGER_KIT_THREADS", "4");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
    assert_eq!(kit_env(&["verify", "--preset", "C2"], "ONSAGER_KIT_THREADS", "many").status.code(), Some(2));
}
