use std::path::Path;
use std::process::{Command, Output};

use minsum_lbp::cli::{
    read_json, write_json, OracleReport, RegionsReport, RunReport, SweepSummary, TreeReport,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minsum-lbp"))
        .args(args)
        .output()
        .unwrap()
}

fn run_json<T: DeserializeOwned + Serialize + PartialEq + std::fmt::Debug>(
    args: &[&str],
    code: i32,
) -> T {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let mut all = args.to_vec();
    all.extend(["--json", path.to_str().unwrap()]);
    let out = bin(&all);
    assert_eq!(
        out.status.code(),
        Some(code),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: T = read_json(&path).unwrap();
    let again = dir.path().join("again.json");
    write_json(&again, &report).unwrap();
    assert_eq!(read_json::<T>(&again).unwrap(), report);
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        std::fs::read_to_string(&again).unwrap()
    );
    report
}

#[test]
fn run_writes_report() {
    let r: RunReport = run_json(&["run", "B2:+++---------", "--trace"], 0);
    assert_eq!(r.n, 2);
    assert_eq!(r.matches, Some(true));
    assert!(r.first_stable_iteration.unwrap() <= 4);
    assert_eq!(r.estimates["1,1"], -2);
    assert_eq!(r.trace.unwrap().len(), r.n_max + 1);
}

#[test]
fn verify_and_lemmas_pass() {
    let v: SweepSummary = run_json(&["verify", "2"], 0);
    assert_eq!((v.boundaries_tested, v.violations), (132, 0));
    let d: SweepSummary = run_json(&["verify", "3", "--dedup-symmetry", "--jobs", "2"], 0);
    assert_eq!(d.boundaries_tested, 20);
    let s: SweepSummary = run_json(&["verify", "5", "--sample", "25", "--seed", "3"], 0);
    assert_eq!(s.boundaries_tested, 25);
    let l: SweepSummary = run_json(&["lemmas", "2", "--max-n0", "2"], 0);
    assert!(l.passed());
    assert_eq!(l.proof_replays, Some(132));
    assert!(l.lemma_counts.unwrap().fc_hypotheses > 0);
}

#[test]
fn regions_and_oracle() {
    let r: RegionsReport = run_json(&["regions", "B3:++++++----------"], 0);
    assert_eq!(r.oracle_agrees, Some(true));
    assert_eq!(r.field["1,1"], 0);
    let o: OracleReport = run_json(
        &[
            "oracle",
            "B3:++++++----------",
            "--method",
            "enum",
            "--global",
        ],
        0,
    );
    assert_eq!(o.cross_check, Some(true));
    assert_eq!(o.global_minimum, 4);
    assert!(o.global_solutions.unwrap() >= 2);
}

#[test]
fn tree_file_and_random() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("t.txt");
    std::fs::write(&spec, "# path\nboundary l +1\nboundary r -1\ninterior a\ninterior b\ninterior c\nedge l a\nedge a b\nedge b c\nedge c r\n").unwrap();
    let t: TreeReport = run_json(&["tree", spec.to_str().unwrap()], 0);
    assert_eq!((t.trees, t.failures), (1, 0));
    assert_eq!(t.runs[0].estimates["b"], 0);
    let r: TreeReport = run_json(&["tree", "--random", "30", "--seed", "9"], 0);
    assert_eq!((r.trees, r.failures), (30, 0));
}

#[test]
fn errors_exit_two() {
    for args in [
        &["run", "B2:+++"][..],
        &["run", "B1:+-x-----"],
        &[
            "oracle",
            "B6:+-----------------------------",
            "--method",
            "enum",
        ],
        &["regions", "B1:+-+-----"],
        &["tree"],
    ] {
        let out = bin(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    assert!(!Path::new("out.json").exists());
}
