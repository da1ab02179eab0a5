use std::process::Command;

use cyclodist_cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut argv = vec!["cyclodist".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn coeff_of_phi_105() {
    let (code, out, _) = run(&["coeff", "--n", "105", "--k", "7"]);
    assert_eq!((code, out.as_str()), (0, "-2\n"));
    for m in ["series", "partition"] {
        assert_eq!(run(&["coeff", "--n", "105", "--k", "7", "--method", m]).1, "-2\n");
    }
}

#[test]
fn table3_contains_e15() {
    let (code, out, _) = run(&["table", "--id", "3", "--kmax", "20"]);
    assert_eq!(code, 0);
    assert!(out.contains("| k=15 | 2287/20160 |"));
    assert_eq!(run(&["table3", "--kmax", "20"]).1, out);
}

#[test]
fn prime_density_csv_matches_table6_column() {
    let (code, out, _) = run(&["density", "prime", "--k", "15", "--format", "csv"]);
    assert_eq!(code, 0);
    let exact: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(
        exact,
        ["9A/19", "6A/19", "2A/19", "12A/95", "12A/475", "8A/95", "8A/475", "8A/285", "8A/1425", "1-561A/475"]
    );
}

#[test]
fn empirical_csv_columns() {
    let (code, out, _) = run(&["empirical", "--stat", "s2", "--nprimes", "10000", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out, "value,count,frequency\n-1,930,0.093000\n0,6261,0.626100\n1,2809,0.280900\n");
}

#[test]
fn empirical_json_mirrors_report() {
    let (_, out, _) = run(&["empirical", "--stat", "mu", "--x", "100", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["population"], 25);
    assert_eq!(v["total"], 25);
}

#[test]
fn oracle_sym_p7() {
    let (code, out, _) = run(&["oracle", "sym", "--p", "7", "--kmax", "4", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("k,s_k,S_k\n1,1,1\n2,1,6\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["coeff", "--n", "5"]).0, 2);
    assert_eq!(run(&["coeff", "--n", "5", "--k", "1", "--bogus"]).0, 2);
    assert_eq!(run(&["empirical", "--stat", "mu", "--nprimes", "5", "--x", "100"]).0, 2);
    assert_eq!(run(&["coeff", "--n", "0", "--k", "1"]).0, 2);
    assert_eq!(run(&["table", "--id", "12"]).0, 2);
    assert_eq!(run(&["poly", "--n", "1000003"]).0, 3);
    let (code, _, err) = run(&["oracle", "roots", "--p", "9"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error[domain]"));
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn unwritable_out_dir_is_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    std::fs::write(&file, "x").unwrap();
    let (code, _, _) = run(&["reproduce-all", "--out", file.join("sub").to_str().unwrap()]);
    assert_eq!(code, 3);
}

#[test]
fn table11_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t11.json");
    let (code, out, _) = run(&["table11", "--kmax", "8", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["label"] == "bracket k=7" && r["exact"] == "224"));
    assert!(rows.iter().any(|r| r["label"] == "bracket k=8" && r["exact"] == "1344"));
}

#[test]
fn output_is_deterministic_across_threads() {
    let a = run(&["--threads", "1", "empirical", "--stat", "a", "--k", "7", "--nprimes", "20000"]).1;
    let b = run(&["--threads", "3", "empirical", "--stat", "a", "--k", "7", "--nprimes", "20000"]).1;
    assert_eq!(a, b);
    assert!(!a.contains("| -2 |"));
}

#[test]
fn misc_subcommands() {
    assert_eq!(run(&["poly", "--n", "6"]).1, "1 -1 1\n");
    assert_eq!(run(&["rama", "--n", "4", "--m", "2"]).1, "-2\n");
    assert_eq!(run(&["rama", "--n", "12", "--m", "12", "--direct"]).1, "4\n");
    assert_eq!(run(&["mean", "--k", "10"]).1, "31/160\n");
    assert_eq!(run(&["mean", "--k", "16", "--method", "partition"]).1, "733/4032\n");
    assert_eq!(run(&["avg", "prime", "--k", "30"]).1, "126A/19\n");
    assert_eq!(run(&["moment", "prime", "--k", "8", "--z", "1"]).1, "4A\n");
    assert!(run(&["valueset", "--k", "7"]).1.contains("| odd_only | [-2] |"));
    assert!(run(&["s-density", "--k", "3"]).1.contains("| -1 | 1/15 | ARTIN | A/15 |"));
    assert!(run(&["a-density", "--k", "7"]).1.contains("average: A/190"));
    assert!(run(&["constants"]).1.contains("| A | 0.37395581"));
    assert_eq!(run(&["construct", "--v", "-3"]).0, 0);
    let (code, out, _) = run(&["moller", "--kmax", "35", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.contains("\n33,") && out.lines().filter(|l| l.contains(",false,")).count() == 2);
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclodist")).args(["coeff", "--n", "105", "--k", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "-2\n");
    let bad = Command::new(env!("CARGO_BIN_EXE_cyclodist")).args(["coeff"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
