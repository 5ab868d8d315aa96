use std::path::PathBuf;
use std::process::{Command, Output};

use bsloc_core::json::{eta_to_json, gkm_to_json, SubsetFunctionJson, WFunctionJson};
use bsloc_core::verify::{random_eta, random_x_polynomial, rng};
use bsloc_core::{BottSamelson, FormalGroupAlgebra, FormalGroupLaw, RootDatum};

fn bsloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bsloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("bsloc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn restrict_rank_two_rows() {
    for fgl in ["additive", "multiplicative"] {
        let o = bsloc(&["restrict", "--type", "A2", "--seq", "1,2", "--fgl", fgl]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        assert!(
            out.contains("j*(η_{1}) = x_{-a1}*f_{00} + x_{-a1}*f_{01}\n"),
            "{out}"
        );
        assert!(
            out.contains("j*(η_{2}) = x_{-a2}*f_{00} + x_{-a1-a2}*f_{10}\n"),
            "{out}"
        );
    }
}

#[test]
fn restrict_empty_sequence_is_identity() {
    let o = bsloc(&["restrict", "--type", "A2", "--seq", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("j*(η_∅) = f_{}\n"));
}

#[test]
fn restrict_a3_full_matrix() {
    let o = bsloc(&[
        "restrict", "--type", "A3", "--seq", "1,2,3", "--format", "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows
        .iter()
        .all(|r| r["values"].as_array().unwrap().len() == 8));
    assert_eq!(v["skew_triangular"], true);
}

#[test]
fn relations_match_golden_files() {
    let o = bsloc(&["relations", "--type", "A3", "--seq", "1,2,3"]);
    assert_eq!(stdout(&o), golden("sl4_relations_additive.txt"));
    let o = bsloc(&[
        "relations",
        "--type",
        "A3",
        "--seq",
        "1,2,3",
        "--fgl",
        "multiplicative",
        "--trunc",
        "4",
    ]);
    assert_eq!(stdout(&o), golden("sl4_relations_multiplicative_n4.txt"));
}

#[test]
fn first_relation_and_empty_sequence() {
    for seq in ["2,1,2", "1,2", "1,1,1"] {
        let o = bsloc(&[
            "relations",
            "--type",
            "B2",
            "--seq",
            seq,
            "--fgl",
            "multiplicative",
        ]);
        let first = format!("η_{{1}}^2 = x_{{-a{}}}*η_{{1}}\n", &seq[..1]);
        assert!(stdout(&o).contains(&first), "{}", stdout(&o));
    }
    let o = bsloc(&["relations", "--type", "A2", "--seq", "", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["relations"].as_array().unwrap().len(), 0);
}

#[test]
fn pushforward_examples() {
    let o = bsloc(&["pushforward", "--type", "A1", "--seq", "1", "--subset", ""]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("  e: 1\n  s1: 1\n"));
    let o = bsloc(&[
        "pushforward",
        "--type",
        "A1",
        "--seq",
        "1",
        "--subset",
        "full",
    ]);
    assert!(stdout(&o).contains("  e: x_{-a1}\n  s1: 0\n"));
    let o = bsloc(&[
        "pushforward",
        "--type",
        "A2",
        "--seq",
        "1,2",
        "--subset",
        "2",
        "--verify",
        "--fgl",
        "multiplicative",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("three-way agreement: pass"));
    assert!(stdout(&o).contains("integral: yes"));
}

#[test]
fn pushforward_json_reparses() {
    let o = bsloc(&[
        "pushforward",
        "--type",
        "B2",
        "--seq",
        "1,2",
        "--subset",
        "1",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let f: WFunctionJson = serde_json::from_value(v["value"].clone()).unwrap();
    assert_eq!(serde_json::to_value(&f).unwrap(), v["value"]);
    assert_eq!(f.entries.len(), 8);
}

#[test]
fn gkm_round_trip_from_restrict_row() {
    let row = scratch("row.json");
    let o = bsloc(&[
        "restrict",
        "--type",
        "A2",
        "--seq",
        "1,2",
        "--subset",
        "1",
        "--fgl",
        "multiplicative",
        "--format",
        "json",
        "--out",
        row.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let parsed: SubsetFunctionJson =
        serde_json::from_str(&std::fs::read_to_string(&row).unwrap()).unwrap();
    assert_eq!(parsed.basis, "fixed");
    let o = bsloc(&[
        "gkm",
        "--type",
        "A2",
        "--fgl",
        "multiplicative",
        "--input",
        row.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(
        out.contains("η-expansion: η_{1}\n") && out.contains("round trip: exact"),
        "{out}"
    );
}

#[test]
fn gkm_failure_reports_witness() {
    let alg = FormalGroupAlgebra::new(
        RootDatum::named("A2").unwrap(),
        FormalGroupLaw::additive(),
        6,
    )
    .unwrap();
    let bs = BottSamelson::new(alg.clone(), vec![1, 2]).unwrap();
    // η_1 restricted, with the value at {1} replaced by x_{ω_1}
    let mut g = bs.restrict_eta(bsloc_core::Subset(1)).unwrap();
    g.set(bsloc_core::Subset(1), alg.var(1).unwrap());
    let path = scratch("bad.json");
    std::fs::write(
        &path,
        serde_json::to_string(&gkm_to_json(bs.seq(), &g)).unwrap(),
    )
    .unwrap();
    let o = bsloc(&[
        "gkm",
        "--type",
        "A2",
        "--trunc",
        "6",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["check"], "fail");
    assert_eq!(v["witness"]["l1"], 1);
    assert_eq!(v["witness"]["l2"], 0);
    assert_eq!(v["witness"]["k"], 1);
}

#[test]
fn gkm_reconstructs_distinct_letter_products() {
    let alg = FormalGroupAlgebra::new(
        RootDatum::named("A3").unwrap(),
        FormalGroupLaw::multiplicative(),
        6,
    )
    .unwrap();
    let bs = BottSamelson::new(alg.clone(), vec![2, 1, 3]).unwrap();
    let mut r = rng(11);
    let v = random_eta(&alg, &mut r, 3);
    let u = random_x_polynomial(&alg, &mut r, 2);
    let g = bs.eta_to_gkm(&v).unwrap().mul(&bs.char_restrict(&u));
    let path = scratch("image.json");
    std::fs::write(
        &path,
        serde_json::to_string(&gkm_to_json(bs.seq(), &g)).unwrap(),
    )
    .unwrap();
    let o = bsloc(&[
        "gkm",
        "--type",
        "A3",
        "--fgl",
        "multiplicative",
        "--trunc",
        "6",
        "--input",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(out["check"], "pass");
    assert_eq!(out["round_trip"], true);
    let expected = bs.gkm_to_eta(&g).unwrap();
    assert_eq!(
        out["eta"],
        serde_json::to_value(eta_to_json(bs.seq(), &expected)).unwrap()
    );
}

#[test]
fn chevalley_holds() {
    let o = bsloc(&[
        "chevalley",
        "--type",
        "B2",
        "--seq",
        "1,2,1",
        "--fgl",
        "multiplicative",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o)
            .matches("pointwise on W (8 points): pass")
            .count(),
        2
    );
}

#[test]
fn verify_exit_codes() {
    for fgl in ["additive", "multiplicative"] {
        let o = bsloc(&["verify", "--type", "A2", "--fgl", fgl, "--samples", "4"]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let o = bsloc(&[
        "verify",
        "--type",
        "A2",
        "--fgl",
        "multiplicative",
        "--trunc",
        "2",
        "--samples",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.contains("PREC "));
    assert!(!out.contains("FAIL "), "{out}");
}

#[test]
fn config_errors_exit_one() {
    for args in [
        &["restrict", "--type", "A9", "--seq", "1"][..],
        &["restrict", "--type", "A2", "--seq", "1,3"],
        &["restrict", "--type", "A2", "--seq", "1", "--trunc", "1"],
        &["restrict", "--type", "A2"],
        &["restrict", "--seq", "1"],
        &[
            "pushforward",
            "--type",
            "A2",
            "--seq",
            "1,2",
            "--subset",
            "4",
        ],
        &["gkm", "--type", "A2"],
        &["bogus"],
    ] {
        assert_eq!(bsloc(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = [
        "verify",
        "--type",
        "B2",
        "--fgl",
        "multiplicative",
        "--seed",
        "5",
        "--samples",
        "3",
        "--format",
        "json",
    ];
    let a = bsloc(&args);
    let b = bsloc(&args);
    assert_eq!(a.stdout, b.stdout);
    let c = bsloc(&[
        "verify",
        "--type",
        "B2",
        "--fgl",
        "multiplicative",
        "--seed",
        "6",
        "--samples",
        "3",
        "--format",
        "json",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn files_for_datum_and_law() {
    let cartan = scratch("b2.toml");
    std::fs::write(&cartan, "name = \"B2\"\ncartan = [[2, -2], [-1, 2]]\n").unwrap();
    let law = scratch("law.json");
    let fgl = FormalGroupLaw::multiplicative();
    std::fs::write(&law, bsloc_core::json::fgl_to_json(&fgl).to_string()).unwrap();
    let a = bsloc(&[
        "roots",
        "--cartan-file",
        cartan.to_str().unwrap(),
        "--fgl-file",
        law.to_str().unwrap(),
    ]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("|W| = 8"));
}

#[test]
fn roots_lists_fixed_point_data() {
    let o = bsloc(&[
        "roots",
        "--type",
        "A2",
        "--seq",
        "1,2",
        "--fgl",
        "multiplicative",
    ]);
    let out = stdout(&o);
    assert!(
        out.contains("L = 10 v = s1  weights [a1, -a1-a2]  x_{I,L} = x_{-a1-a2}*x_{a1}"),
        "{out}"
    );
    assert!(
        out.contains("L = 11 v = s1·s2  weights [a1, a1+a2]  x_{I,L} = x_{a1}*x_{a1+a2}"),
        "{out}"
    );
}
