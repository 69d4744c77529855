use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use serde::Serialize;
use tempfile::TempDir;

use spanprog::analysis::ScanTable;
use spanprog::cli::{BoundsReport, EvalReport, WitnessReport, CSV_HEADER};
use spanprog::numeric::Rational;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let files = [
            ("c3.edges", "3 3\n1 2\n2 3\n3 1\n"),
            ("c4.edges", "4 4\n1 2\n2 3\n3 4\n4 1\n"),
            ("k3.edges", "3 3\n1 2\n1 3\n2 3\n"),
            ("path3.edges", "3 2\n1 2\n2 3\n"),
            ("empty4.edges", "4 0\n"),
            ("single.edges", "1 0\n"),
            ("twotriangles.edges", "6 6\n1 2\n2 3\n3 1\n4 5\n5 6\n6 4\n"),
            ("c4.matrix", "0 1 0 1\n1 0 1 0\n0 1 0 1\n1 0 1 0\n"),
            ("bad.edges", "3 2\n1 2\n2 x\n"),
            ("asym.matrix", "0 1 0\n0 0 1\n0 1 0\n"),
        ];
        for (name, text) in files {
            std::fs::write(dir.path().join(name), text).unwrap();
        }
        Self { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_spanprog"))
            .args(args)
            .current_dir(self.dir.path())
            .output()
            .unwrap()
    }

    fn json<T: DeserializeOwned + Serialize>(&self, args: &[&str]) -> (T, Output) {
        let mut all = args.to_vec();
        all.extend(["--format", "json"]);
        let out = self.run(&all);
        assert!(
            matches!(out.status.code(), Some(0 | 1)),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let text = String::from_utf8(out.stdout.clone()).unwrap();
        let value: T = serde_json::from_str(&text).unwrap();
        assert_eq!(
            serde_json::to_string_pretty(&value).unwrap() + "\n",
            text,
            "json round trip for {args:?}"
        );
        (value, out)
    }
}

fn rat(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn eval_p1_reports_bipartite_for_even_cycle() {
    let f = Fixture::new();
    let (r, out): (EvalReport, _) = f.json(&["eval", "--program", "p1", "--graph", "c4.edges"]);
    assert_eq!(r.value, 0);
    assert_eq!(r.verdict, "bipartite");
    assert!(r.oracle_agrees);
    assert_eq!(out.status.code(), Some(0));

    let (r, _): (EvalReport, _) = f.json(&["eval", "--program", "p1", "--graph", "c3.edges"]);
    assert_eq!((r.value, r.verdict.as_str()), (1, "not bipartite"));
}

#[test]
fn eval_p2_reports_connected_triangle() {
    let f = Fixture::new();
    let (r, _): (EvalReport, _) = f.json(&["eval", "--program", "p2", "--graph", "k3.edges"]);
    assert_eq!((r.value, r.verdict.as_str()), (1, "connected"));
    let (r, _): (EvalReport, _) = f.json(&["eval", "--program", "p2", "--graph", "empty4.edges"]);
    assert_eq!((r.value, r.verdict.as_str()), (0, "disconnected"));
}

#[test]
fn eval_p2_single_vertex_is_trivially_connected() {
    let f = Fixture::new();
    let (r, out): (EvalReport, _) = f.json(&["eval", "--program", "p2", "--graph", "single.edges"]);
    assert_eq!(r.value, 1);
    assert!(r.note.is_some());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn eval_st_on_path() {
    let f = Fixture::new();
    let (r, _): (EvalReport, _) = f.json(&[
        "eval",
        "--program",
        "st",
        "--s",
        "1",
        "--t",
        "3",
        "--graph",
        "path3.edges",
    ]);
    assert_eq!(r.value, 1);
    assert_eq!((r.s, r.t), (Some(1), Some(3)));
    let out = f.run(&[
        "eval",
        "--program",
        "st",
        "--s",
        "1",
        "--t",
        "4",
        "--graph",
        "path3.edges",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = f.run(&["eval", "--program", "st", "--graph", "path3.edges"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn adjacency_matrix_input() {
    let f = Fixture::new();
    let (r, _): (EvalReport, _) = f.json(&["eval", "--program", "p1", "--graph", "c4.matrix"]);
    assert_eq!(r.input, "n=4:1-2,1-4,2-3,3-4");
    let (r, _): (EvalReport, _) = f.json(&[
        "eval",
        "--program",
        "p1",
        "--graph",
        "c4.matrix",
        "--input-format",
        "matrix",
    ]);
    assert_eq!(r.value, 0);
}

#[test]
fn witness_triangle_is_positive_below_two() {
    let f = Fixture::new();
    let (r, _): (WitnessReport, _) = f.json(&[
        "witness",
        "--program",
        "p1",
        "--graph",
        "c3.edges",
        "--full",
    ]);
    assert_eq!(r.side.to_string(), "positive");
    assert!(r.size < rat("2"));
    assert_eq!(r.size, rat("5/6"));
    assert_eq!(r.coefficients.as_ref().unwrap().len(), 21);
}

#[test]
fn witness_empty_graph_negative_at_most_n() {
    let f = Fixture::new();
    let (r, _): (WitnessReport, _) = f.json(&[
        "witness",
        "--program",
        "p2",
        "--graph",
        "empty4.edges",
        "--full",
    ]);
    assert_eq!(r.side.to_string(), "negative");
    assert!(r.size <= rat("4"));
    assert!(r.functional.is_some());
}

#[test]
fn witness_compare_against_constructed() {
    let f = Fixture::new();
    let (r, out): (WitnessReport, _) = f.json(&[
        "witness",
        "--program",
        "p1",
        "--graph",
        "c4.edges",
        "--compare-paper",
    ]);
    let c = r.constructed.unwrap();
    assert!(r.size <= c.size);
    assert!(c.size <= rat("68"));
    assert!(c.optimal_within);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn witness_cross_check_agrees() {
    let f = Fixture::new();
    for args in [
        [
            "witness",
            "--program",
            "p1",
            "--graph",
            "c4.edges",
            "--cross-check",
        ],
        [
            "witness",
            "--program",
            "p2",
            "--graph",
            "twotriangles.edges",
            "--cross-check",
        ],
        [
            "witness",
            "--program",
            "p1",
            "--graph",
            "c3.edges",
            "--cross-check",
        ],
    ] {
        let (r, out): (WitnessReport, _) = f.json(&args);
        let c = r.cross_check.unwrap();
        assert!(c.agree, "{args:?}: {c:?}");
        assert_eq!(c.tolerance, 1e-9);
        assert_eq!(out.status.code(), Some(0));
    }
}

#[test]
fn bounds_two_triangles() {
    let f = Fixture::new();
    let (r, out): (BoundsReport, _) =
        f.json(&["bounds", "--program", "p2", "--graph", "twotriangles.edges"]);
    assert!(r.pass);
    assert!(r
        .rows
        .iter()
        .all(|row| row.side.to_string() == "negative" && row.pass));
    assert_eq!(r.rows[0].bound, rat("6"));
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn scan_cycles_slope_within_limit() {
    let f = Fixture::new();
    let (t, out): (ScanTable, _) = f.json(&[
        "scan",
        "--program",
        "p1",
        "--family",
        "cycles",
        "--n",
        "3..13",
    ]);
    assert_eq!(t.rows.first().unwrap().n, 3);
    assert_eq!(t.rows.last().unwrap().n, 13);
    assert!(t.slope.unwrap() <= 1.65);
    assert!(t.all_pass());
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn scan_failure_sets_exit_one() {
    let f = Fixture::new();
    let (t, out): (ScanTable, _) = f.json(&[
        "scan",
        "--program",
        "p1",
        "--family",
        "gnp",
        "--p",
        "0.3",
        "--n",
        "4..8",
        "--samples",
        "20",
        "--seed",
        "2",
    ]);
    assert!(!t.slope_pass);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_has_fixed_columns() {
    let f = Fixture::new();
    let header = CSV_HEADER.join(",");
    for args in [
        vec!["eval", "--program", "p1", "--graph", "c4.edges"],
        vec![
            "witness",
            "--program",
            "p1",
            "--graph",
            "c4.edges",
            "--compare-paper",
        ],
        vec!["bounds", "--program", "p1", "--graph", "c4.edges"],
        vec!["scan", "--program", "p2", "--n", "2..6"],
    ] {
        let mut all = args.clone();
        all.extend(["--format", "csv"]);
        let out = f.run(&all);
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(header.as_str()), "{args:?}");
        assert!(lines.count() >= 1);
    }
}

#[test]
fn malformed_graph_exits_two_with_line() {
    let f = Fixture::new();
    let out = f.run(&["eval", "--program", "p1", "--graph", "bad.edges"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = f.run(&["eval", "--program", "p1", "--graph", "asym.matrix"]);
    assert_eq!(out.status.code(), Some(2));

    let out = f.run(&["eval", "--program", "p1", "--graph", "missing.edges"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_parameters_exit_three() {
    let f = Fixture::new();
    for args in [
        vec!["scan", "--program", "p2", "--n", "1..3"],
        vec!["scan", "--program", "st", "--n", "3..5"],
        vec!["gen", "--family", "cycle", "--n", "5", "--len", "7"],
        vec!["gen", "--family", "gnp", "--n", "5"],
        vec!["witness", "--program", "p2", "--graph", "single.edges"],
        vec![
            "bounds",
            "--program",
            "st",
            "--s",
            "1",
            "--t",
            "2",
            "--graph",
            "c4.edges",
        ],
    ] {
        let out = f.run(&args);
        assert_eq!(out.status.code(), Some(3), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn exactly_one_input_source() {
    let f = Fixture::new();
    let both = f.run(&[
        "eval",
        "--program",
        "p1",
        "--graph",
        "c4.edges",
        "--family",
        "path",
        "--n",
        "3",
    ]);
    assert_ne!(both.status.code(), Some(0));
    let neither = f.run(&["eval", "--program", "p1"]);
    assert_ne!(neither.status.code(), Some(0));
    let generated = f.run(&["eval", "--program", "p1", "--family", "path", "--n", "3"]);
    assert_eq!(generated.status.code(), Some(0));
}

#[test]
fn tolerance_must_be_positive() {
    let f = Fixture::new();
    for bad in ["0", "-1e-9", "nan"] {
        let out = f.run(&[
            "witness",
            "--program",
            "p1",
            "--graph",
            "c3.edges",
            "--tolerance",
            bad,
        ]);
        assert_ne!(out.status.code(), Some(0), "{bad}");
    }
}

fn gen_file(f: &Fixture, seed: &str, name: &str) -> String {
    let out = f.run(&[
        "gen", "--family", "gnp", "--n", "8", "--p", "0.4", "--seed", seed, "--out", name,
    ]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::read_to_string(f.path(name)).unwrap()
}

#[test]
fn gen_is_deterministic_per_seed() {
    let f = Fixture::new();
    let a = gen_file(&f, "1", "a.edges");
    let b = gen_file(&f, "1", "b.edges");
    let c = gen_file(&f, "2", "c.edges");
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert!(a.starts_with("8 "));
    // The generated file reads back as the same graph.
    let (r, _): (EvalReport, _) = f.json(&["eval", "--program", "p1", "--graph", "a.edges"]);
    let (s, _): (EvalReport, _) = f.json(&[
        "eval",
        "--program",
        "p1",
        "--family",
        "gnp",
        "--n",
        "8",
        "--p",
        "0.4",
        "--seed",
        "1",
    ]);
    assert_eq!(r.input, s.input);
}

#[test]
fn out_flag_writes_report() {
    let f = Fixture::new();
    let out = f.run(&[
        "bounds",
        "--program",
        "p1",
        "--graph",
        "c3.edges",
        "--format",
        "json",
        "--out",
        "r.json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(Path::new(&f.path("r.json"))).unwrap();
    let r: BoundsReport = serde_json::from_str(&text).unwrap();
    assert!(r.pass);
}
