use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name)
}

fn huosp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_huosp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn mine_example(out: &Path, extra: &[&str]) -> Output {
    let qdb = data("example.qdb");
    let ut = data("example.ut");
    let mut args = vec![
        "mine",
        "--input",
        s(&qdb),
        "--utility-table",
        s(&ut),
        "--minsup-abs",
        "2",
        "--minuo",
        "0.4",
        "--output",
        s(out),
    ];
    args.extend_from_slice(extra);
    huosp(&args)
}

#[test]
fn mine_writes_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let o = mine_example(&out, &["--variant", "pes"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[0], "a b -1 -2 #SUP: 2 #UO: 0.516026");
}

#[test]
fn all_variants_write_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for v in ["simple", "peuo", "tpuo", "pes"] {
        let out = dir.path().join(format!("{v}.txt"));
        assert!(mine_example(&out, &["--variant", v]).status.success());
        files.push(fs::read(&out).unwrap());
    }
    assert!(files.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn relative_support_and_stats_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let stats = dir.path().join("s.json");
    let qdb = data("example.qdb");
    let ut = data("example.ut");
    let o = huosp(&[
        "mine",
        "--input",
        s(&qdb),
        "--utility-table",
        s(&ut),
        "--minsup",
        "0.4",
        "--minuo",
        "0.4",
        "--output",
        s(&out),
        "--stats",
        s(&stats),
    ]);
    assert!(o.status.success());
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 8);
    let json = fs::read_to_string(&stats).unwrap();
    assert!(json.contains("\"minsup\": 2"));
    assert!(json.contains("\"variant\": \"pes\""));
}

#[test]
fn invalid_minuo_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let qdb = data("example.qdb");
    let o = huosp(&[
        "mine",
        "--input",
        s(&qdb),
        "--minsup-abs",
        "2",
        "--minuo",
        "1.5",
        "--output",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("(0, 1]"));
}

#[test]
fn both_support_forms_is_a_usage_error() {
    let qdb = data("example.qdb");
    let o = huosp(&[
        "mine",
        "--input",
        s(&qdb),
        "--minsup",
        "0.5",
        "--minsup-abs",
        "2",
        "--minuo",
        "0.4",
        "--output",
        "x",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = huosp(&[
        "mine",
        "--input",
        s(&qdb),
        "--minuo",
        "0.4",
        "--output",
        "x",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corrupted_sutility_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let qdb = data("corrupted_sutility.qdb");
    let ut = data("example.ut");
    let args = [
        "mine",
        "--input",
        s(&qdb),
        "--utility-table",
        s(&ut),
        "--minsup-abs",
        "2",
        "--minuo",
        "0.4",
        "--output",
        s(&out),
    ];
    let o = huosp(&args);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("declared utility 14"));

    let mut permissive = args.to_vec();
    permissive.push("--permissive");
    assert!(huosp(&permissive).status.success());
}

#[test]
fn verify_example_and_random() {
    let qdb = data("example.qdb");
    let ut = data("example.ut");
    let o = huosp(&[
        "verify",
        "--input",
        s(&qdb),
        "--utility-table",
        s(&ut),
        "--minsup-abs",
        "2",
        "--minuo",
        "0.4",
    ]);
    assert!(o.status.success());
    assert_eq!(
        String::from_utf8_lossy(&o.stdout).trim(),
        "5/5 agree, 7 patterns"
    );

    let o = huosp(&["verify", "--random", "3", "--seed", "11"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_rejects_oversized_input() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("big");
    assert!(huosp(&[
        "gen",
        "--sequences",
        "20",
        "--items",
        "10",
        "--out-prefix",
        s(&prefix)
    ])
    .status
    .success());
    let qdb = dir.path().join("big.qdb");
    let ut = dir.path().join("big.ut");
    let o = huosp(&[
        "verify",
        "--input",
        s(&qdb),
        "--utility-table",
        s(&ut),
        "--minsup-abs",
        "2",
        "--minuo",
        "0.4",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for p in [&a, &b] {
        assert!(huosp(&[
            "gen",
            "--sequences",
            "100",
            "--items",
            "50",
            "--seed",
            "9",
            "--out-prefix",
            s(p)
        ])
        .status
        .success());
    }
    for ext in ["qdb", "ut"] {
        assert_eq!(
            fs::read(dir.path().join(format!("a.{ext}"))).unwrap(),
            fs::read(dir.path().join(format!("b.{ext}"))).unwrap()
        );
    }
    let o = huosp(&["gen", "--sequences", "0", "--out-prefix", s(&a)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn threads_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("d");
    assert!(huosp(&[
        "gen",
        "--sequences",
        "500",
        "--items",
        "100",
        "--seed",
        "4",
        "--out-prefix",
        s(&prefix)
    ])
    .status
    .success());
    let qdb = dir.path().join("d.qdb");
    let ut = dir.path().join("d.ut");
    let mut outputs = Vec::new();
    for threads in ["1", "4", "1"] {
        let out = dir.path().join(format!("r{}.txt", outputs.len()));
        let o = huosp(&[
            "mine",
            "--input",
            s(&qdb),
            "--utility-table",
            s(&ut),
            "--minsup",
            "0.02",
            "--minuo",
            "0.1",
            "--threads",
            threads,
            "--output",
            s(&out),
        ]);
        assert!(o.status.success());
        outputs.push(fs::read(&out).unwrap());
    }
    assert!(outputs[0].len() > 100);
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
}

#[test]
fn bench_writes_one_row_per_cell() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("d");
    assert!(huosp(&[
        "gen",
        "--sequences",
        "200",
        "--items",
        "60",
        "--seed",
        "2",
        "--out-prefix",
        s(&prefix)
    ])
    .status
    .success());
    let qdb = dir.path().join("d.qdb");
    let ut = dir.path().join("d.ut");
    let csv = dir.path().join("bench.csv");
    let o = huosp(&[
        "bench",
        "--input",
        s(&qdb),
        "--utility-table",
        s(&ut),
        "--minsup-list",
        "0.1,0.15,30",
        "--minuo-list",
        "0.1,0.2",
        "--out",
        s(&csv),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("variant,minsup,minuo,candidates,huosps,ms"));
    assert_eq!(lines.len(), 1 + 4 * 3 * 2);
}
