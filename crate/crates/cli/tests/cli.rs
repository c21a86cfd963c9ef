use std::process::Command;

use hasse_cli::digits::format_elem;
use hasse_cli::{cmd_case, cmd_sweep, CaseOptions, Engine};
use hasse_core::expsum::FamilySpec;
use hasse_core::Budget;

fn hasse() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hasse"))
}

#[test]
fn case_reports_a_verdict_for_nondegenerate_input() {
    let e = Engine::new(Budget::default(), None);
    let rec = cmd_sweep(&e, 7, 1, 3, &CaseOptions::default(), 1).unwrap();
    let r = rec.nondegenerate().next().expect("p = 7 has nondegenerate quadruples");
    assert!(r.np_eq_hp.is_some());
    assert_eq!(r.h_le1, *r.h_full.as_ref().unwrap());
    assert_eq!(r.breakpoints.iter().map(|b| b.index).collect::<Vec<_>>(), vec![1, 5, 11, 15]);
    let j = r.to_json();
    for key in ["spec", "nondegenerate", "h_le1", "h_full", "breakpoints", "np_eq_hp", "ms"] {
        assert!(j.get(key).is_some(), "missing {key}");
    }
    assert_eq!(j["breakpoints"][2]["source"], "symmetry");
}

#[test]
fn case_in_f9_matches_the_hasse_value() {
    let e = Engine::new(Budget::default(), None);
    let rec = cmd_sweep(&e, 3, 2, 2, &CaseOptions::default(), 1).unwrap();
    assert_eq!(rec.reports.len(), 512);
    assert!(rec.nondegenerate().count() > 0);
    for r in rec.nondegenerate() {
        assert_eq!(r.np_eq_hp, Some(!r.h_full.as_ref().unwrap().is_zero()));
    }
    assert_eq!(rec.gnp_is_hodge(), Some(true));
}

#[test]
fn reports_are_deterministic() {
    let e = Engine::new(Budget::default(), None);
    let spec = FamilySpec::from_indices(7, 1, &[1, 2, 4]).unwrap();
    let mut a = cmd_case(&e, &spec, &CaseOptions::default()).unwrap().to_json();
    let mut b = cmd_case(&e, &spec, &CaseOptions::default()).unwrap().to_json();
    a["ms"] = 0.into();
    b["ms"] = 0.into();
    assert_eq!(a, b);
    let f = spec.field();
    assert_eq!(a["h_le1"], format_elem(f, &hasse_core::dwork::hasse_closed_le1(f, spec.coeffs()).unwrap()));
}

#[test]
fn binary_case_and_exit_codes() {
    let out = hasse()
        .args(["case", "--p", "5", "--n", "2", "--coeffs", "1,1,1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["nondegenerate"], false);
    assert!(v["np_eq_hp"].is_null());

    let bad = hasse().args(["case", "--p", "5", "--n", "2", "--coeffs", "1,1"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let usage = hasse().args(["case", "--p", "5"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let budget = hasse()
        .args(["sweep", "--p", "7", "--n", "3", "--budget-steps", "10"])
        .output()
        .unwrap();
    assert_eq!(budget.status.code(), Some(2));
}

#[test]
fn binary_verify_reports_failures_with_exit_1() {
    let ok = hasse().args(["verify", "ex4.1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let fail = hasse().args(["verify", "ex4.3"]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fail.stdout).contains("FAIL"));
}

#[test]
fn binary_polygon_hasse_and_sing() {
    let out = hasse().args(["polygon", "--n", "3"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("5 4\n11 16\n"));
    let out = hasse().args(["hasse", "--p", "5", "--n", "2", "--coeffs", "1,1,1"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "h_le1 4\nh_full 4\n");
    let out = hasse().args(["hasse", "--p", "3", "--n", "2", "--symbolic"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
    let out = hasse().args(["sing", "--p", "5", "--n", "2"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "[0:1:2]\n[0:1:3]\n[1:0:2]\n[1:0:3]\n");
}

#[test]
fn cache_dir_roundtrip() {
    let dir = std::env::temp_dir().join(format!("hasse_cache_test_{}", std::process::id()));
    // (1,1,2) is non-degenerate at p = 5, so the case needs tables
    let spec = FamilySpec::from_indices(5, 1, &[1, 1, 2]).unwrap();
    let first = cmd_case(&Engine::new(Budget::default(), Some(dir.clone())), &spec, &CaseOptions::default()).unwrap();
    assert!(first.nondegenerate);
    assert!(dir.join("klo_p5_a1_k1.tbl").exists());
    let second = cmd_case(&Engine::new(Budget::default(), Some(dir.clone())), &spec, &CaseOptions::default()).unwrap();
    assert_eq!(first.np_eq_hp, second.np_eq_hp);
    assert_eq!(first.lpoly, second.lpoly);
    std::fs::remove_dir_all(dir).unwrap();
}
