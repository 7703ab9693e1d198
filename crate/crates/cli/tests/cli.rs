use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use hemicone::cone::ConeV;
use hemicone::io::{read_ext, read_ine};
use hemicone::symmetry::SymmetricGroup;

fn hemicone(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hemicone"))
        .arg("--cache-dir")
        .arg(cache)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "exit {:?}: {}",
        o.status.code(),
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn nhm52_facet_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&hemicone(
        dir.path(),
        &[
            "table", "--family", "nhm", "--n", "5", "--m", "2", "--side", "facets",
        ],
    ));
    let rows: Vec<Vec<&str>> = out.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3, "{out}");
    let sizes: Vec<&str> = rows[1..].iter().map(|r| *r.last().unwrap()).collect();
    let mut sorted = sizes.clone();
    sorted.sort();
    assert_eq!(sorted, vec!["10", "20"]);
    assert!(
        out.contains("T_{123,4}") || out.contains("N_{123}"),
        "{out}"
    );
}

#[test]
fn p63_diameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&hemicone(
        dir.path(),
        &["diameter", "--family", "p", "--n", "6", "--m", "3"],
    ));
    assert!(out.contains("skeleton\t2"), "{out}");
    assert!(out.contains("ridge\t3"), "{out}");
}

#[test]
fn ceiling_exits_3_and_leaves_a_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let o = hemicone(
        dir.path(),
        &[
            "--max-rays",
            "500",
            "facets",
            "--family",
            "p",
            "--n",
            "6",
            "--m",
            "2",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let snapshots: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".snapshot.json"))
        .collect();
    assert_eq!(snapshots.len(), 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains('≥') || err.contains("at least"), "{err}");
}

#[test]
fn cached_result_matches_a_fresh_run() {
    let cached = tempfile::tempdir().unwrap();
    let fresh = tempfile::tempdir().unwrap();
    let args = [
        "rays", "--family", "hm", "--n", "5", "--m", "2", "--format", "json",
    ];
    let first = stdout(&hemicone(cached.path(), &args));
    let entries = fs::read_dir(cached.path()).unwrap().count();
    assert_eq!(entries, 1);
    let second = stdout(&hemicone(cached.path(), &args));
    let other = stdout(&hemicone(fresh.path(), &args));
    assert_eq!(first, second);
    assert_eq!(first, other);
}

#[test]
fn ine_and_ext_reread() {
    let dir = tempfile::tempdir().unwrap();
    let ext = stdout(&hemicone(
        dir.path(),
        &[
            "rays", "--family", "hm", "--n", "5", "--m", "2", "--format", "ext",
        ],
    ));
    let v: ConeV<i64> = read_ext(ext.as_bytes()).unwrap();
    assert_eq!(v.len(), 92);
    let group = SymmetricGroup::new(&v.index);
    assert_eq!(group.decompose(&v.rays).len(), 6);

    let ine = stdout(&hemicone(
        dir.path(),
        &[
            "facets", "--family", "nhm", "--n", "6", "--m", "3", "--format", "ine",
        ],
    ));
    let h = read_ine::<i64, _>(ine.as_bytes()).unwrap();
    assert_eq!(h.len(), 45);
    assert_eq!(h.index.n(), 6);

    let path = dir.path().join("p52.ine");
    stdout(&hemicone(
        dir.path(),
        &[
            "-o",
            path.to_str().unwrap(),
            "facets",
            "--family",
            "p",
            "--n",
            "5",
            "--m",
            "2",
            "--format",
            "ine",
        ],
    ));
    let h = hemicone::io::load_ine::<i64>(&path).unwrap();
    assert_eq!(h.len(), 120);
}

#[test]
fn invalid_configuration_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = hemicone(
        dir.path(),
        &["build", "--family", "nhm", "--n", "3", "--m", "2"],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = hemicone(dir.path(), &["summary", "--rows", "xyz:5:2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_accepts_a_computed_cone_and_classifies_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&hemicone(
        dir.path(),
        &["verify", "--family", "nhm", "--n", "5", "--m", "2"],
    ));
    assert!(out.contains("PASS") && !out.contains("FAIL"), "{out}");
    let ok = hemicone(
        dir.path(),
        &[
            "verify",
            "--family",
            "nhm",
            "--n",
            "5",
            "--m",
            "2",
            "--partition",
            "1,23,45",
        ],
    );
    assert!(ok.status.success());
    let not = hemicone(
        dir.path(),
        &[
            "verify",
            "--family",
            "hm",
            "--n",
            "5",
            "--m",
            "2",
            "--vector",
            "1,1,1,1,1,1,1,1,1,1",
        ],
    );
    assert_eq!(not.status.code(), Some(1));
}

#[test]
fn rgraph_of_a_partition_is_dot() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&hemicone(
        dir.path(),
        &["rgraph", "--m", "2", "--n", "6", "--partition", "1,2,3456"],
    ));
    assert!(out.starts_with("graph") || out.contains("graph "), "{out}");
    assert_eq!(out.matches(" -- ").count(), 6, "{out}");
}

#[test]
fn summary_of_small_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&hemicone(
        dir.path(),
        &["summary", "--rows", "nhm:5:2,p:5:1"],
    ));
    assert!(out.contains("NHM_5^2\t10\t37(3)\t30(2)\t2; 2"), "{out}");
    assert!(out.contains("CUT_5\t10\t15(2)\t40(2)\t1; 2"), "{out}");
}
