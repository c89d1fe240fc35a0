//! End-to-end runs: determinism of the full report and CLI exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use workbench::pipeline::{run_pipeline, SummaryRow};
use workbench::registry::{load_registry, registry_dir};

#[test]
fn report_is_deterministic() {
    let reg = load_registry(&registry_dir()).unwrap();
    let a = serde_json::to_string(&run_pipeline(&reg)).unwrap();
    let b = serde_json::to_string(&run_pipeline(&reg)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn ten_line_rows() {
    let reg = load_registry(&registry_dir()).unwrap();
    let s = run_pipeline(&reg).summary;
    let row = |n3, comb, ng, g, fl, irr| SummaryRow {
        lines: 10,
        triples: n3,
        combinatorial: comb,
        non_geometric: ng,
        geometric: g,
        flagged: fl,
        irreducible_or_conjugate: irr,
        errors: 0,
    };
    let ten: Vec<_> = s.rows.iter().filter(|r| r.lines == 10).cloned().collect();
    assert_eq!(ten, vec![row(10, 10, 1, 9, 0, 9), row(11, 37, 4, 33, 1, 32), row(12, 22, 5, 17, 8, 9), row(13, 2, 2, 0, 0, 0)]);
    assert_eq!((s.total.combinatorial, s.total.geometric, s.total.flagged), (71, 59, 9));
}

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("workbench-{}-{}", tag, std::process::id()));
    let _ = fs::remove_dir_all(&d);
    fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_workbench")).args(args).output().unwrap().status.code().unwrap()
}

fn copy_entry(name: &str, to: &Path, expected: &str) -> String {
    let src = registry_dir().join(format!("{}.cfg", name));
    let dst = to.join(format!("{}.cfg", name));
    fs::copy(src, &dst).unwrap();
    fs::write(to.join("expected.json"), format!("{{\"{}\": {}}}", name, expected)).unwrap();
    dst.to_string_lossy().into_owned()
}

#[test]
fn cli_exit_codes() {
    let good = registry_dir().join("(10_3).ii.cfg");
    let good = good.to_str().unwrap();
    assert_eq!(run(&["validate", good]), 0);
    assert_eq!(run(&["classify", good]), 0);

    let d = scratch("tampered");
    let f = copy_entry("(10_3).ii", &d, r#"{"constraints": ["2*b + 1"], "dimension": 2, "verdict": "positive_dim", "zariski_flag": false}"#);
    assert_eq!(run(&["classify", &f]), 2);

    let d = scratch("invalid");
    let bad = d.join("bad.cfg");
    fs::write(&bad, "lines: 3 triples: 1\nL1: e1\nL2: e1\nL3: e2\n").unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]), 3);
}
