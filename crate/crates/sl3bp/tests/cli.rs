use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use sl3bp::characters::{qhr_character, QSeries};
use sl3bp::fusion::{bp_fusion, kac_walton_table, verlinde_wzw};
use sl3bp::io::{fusion_table_from_json, parse_label, smatrix_from_json};
use sl3bp::modular::bp_smatrix;
use sl3bp::weights::Label;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl3bp")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn read_fixture(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

#[test]
fn golden_fusion_tables() {
    for u in 3..=7 {
        let golden = fusion_table_from_json(&read_fixture(&format!("fusion_u{u}.json"))).unwrap();
        assert_eq!(verlinde_wzw(u).unwrap(), golden, "verlinde u={u}");
        assert_eq!(kac_walton_table(u).unwrap(), golden, "kac-walton u={u}");
        if u % 2 == 1 {
            assert_eq!(bp_fusion(u).unwrap(), golden, "bp u={u}");
        }
    }
}

#[test]
fn golden_matrix_and_character() {
    let (u, alg, s) = smatrix_from_json(&read_fixture("smatrix_bp_u5.json"), |u, l| parse_label(l, Some(u))).unwrap();
    assert_eq!((u, alg.as_str()), (5, "bp"));
    assert_eq!(s, bp_smatrix(5).unwrap());
    let ch = QSeries::from_json(&read_fixture("character_bp_u5_011.json")).unwrap();
    assert_eq!(ch, qhr_character(5, &Label::new(0, 1, 1), 10).unwrap());
}

#[test]
fn output_is_deterministic_and_matches_fixtures() {
    let a = run(&["s-matrix", "--algebra", "bp", "--u", "5"]);
    let b = run(&["s-matrix", "--algebra", "bp", "--u", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap(), std::fs::read_to_string(fixture("smatrix_bp_u5.json")).unwrap());
    let f = run(&["fusion", "--u", "7", "--method", "kac-walton"]);
    assert_eq!(String::from_utf8(f.stdout).unwrap(), std::fs::read_to_string(fixture("fusion_u7.json")).unwrap());
}

#[test]
fn spec_examples() {
    let o = run(&["s-matrix", "--algebra", "bp", "--u", "3"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["labels"].as_array().unwrap().len(), 1);
    assert_eq!(v["entries"][0][0]["coeffs"][0], "1");
    assert_eq!(v["complex"][0][0][0], 1.0);

    let v = json(&run(&["s-matrix", "--algebra", "wzw", "--u", "4"]));
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
    assert!(v["entries"].as_array().unwrap().iter().all(|r| r.as_array().unwrap().len() == 3));

    assert_eq!(run(&["fusion", "--u", "5", "--method", "verlinde", "--compare"]).status.code(), Some(0));

    let o = run(&["groth-fusion", "--u", "5", "--left", "Lw0:2,0,0", "--right", "Lw0:0,1,1"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["classes"][0]["label"], "L0:0,1,1:g=0,0");
    assert_eq!(v["classes"][0]["coeff"], 1);

    let o = run(&["verify", "--u", "5", "--suite", "galois"]);
    assert!(o.status.success());
    assert!(json(&o)["checks"][0]["detail"].as_str().unwrap().starts_with("36 pairs, 0 failures"));

    let o = run(&["verify", "--u", "7", "--suite", "fusion"]);
    assert!(o.status.success());
    assert!(json(&o)["checks"][0]["detail"].as_str().unwrap().starts_with("3375 triples"));

    let o = run(&["verify", "s-transform", "--u", "5", "--tau", "0+1i", "--zeta", "0.1", "--order", "25", "--tol", "1e-8"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["passed"], true);

    let o = run(&["character", "--module", "bp", "--u", "5", "--lambda", "0,1,1", "--order", "25", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["qOffset"], "4/15");
    assert_eq!(v["terms"]["0"]["0"], 1);
    assert_eq!(v["terms"]["0"]["-1"], 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["s-matrix", "--algebra", "bp", "--u", "4"]).status.code(), Some(2));
    assert_eq!(run(&["s-matrix", "--u", "x"]).status.code(), Some(2));
    assert_eq!(run(&["groth-fusion", "--u", "5", "--left", "Q:1", "--right", "L0:0,1,1"]).status.code(), Some(2));
    assert_eq!(run(&["fusion", "--u", "5", "--format", "csv"]).status.code(), Some(2));
    let short = run(&["verify", "s-transform", "--u", "5", "--tau", "0+0.3i", "--zeta", "0.1", "--order", "3"]);
    assert_eq!(short.status.code(), Some(1));
    assert_eq!(run(&["admissible", "--u", "9"]).status.code(), Some(0));
}

#[test]
fn config_file_and_csv() {
    let dir = std::env::temp_dir().join(format!("sl3bp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.conf");
    std::fs::write(&cfg, "# defaults\nu = 5\nformat = csv\nexact = false\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let o = run(&["s-matrix", "--config", cfg, "--algebra", "bp"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert_eq!(text.lines().nth(1).unwrap().split(',').count(), 3 + 12);
    let o = run(&["s-matrix", "--config", cfg, "--algebra", "wzw", "--u", "4", "--format", "json"]);
    assert_eq!(json(&o)["u"], 4);
    let out = dir.join("t.json");
    let o = run(&["t-matrix", "--config", cfg, "--format", "json", "--out", out.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["phases"].as_array().unwrap().len(), 6);
    std::fs::write(dir.join("bad.conf"), "u 5\n").unwrap();
    assert_eq!(run(&["s-matrix", "--config", dir.join("bad.conf").to_str().unwrap()]).status.code(), Some(2));
}
