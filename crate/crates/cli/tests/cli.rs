//! End-to-end checks of the `cone` binary: output formats, exit codes, and
//! byte-level determinism.

use std::path::Path;
use std::process::{Command, Output};

fn cone() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cone"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    cone()
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn curves_emits_the_figure_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["curves", "--kinds", "cone,parabolic-cone", "--zmin", "0", "--zmax", "2", "--steps", "3"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "z,cone,cone_deriv,parabolic-cone,parabolic-cone_deriv");
    // Shared zeros and peak: both kinds give 0, 1, 0 at z = 0, 1, 2; the
    // parabolic cone's derivative at 0 is 2.
    assert_eq!(lines[1], "0,0,1,0,2");
    assert_eq!(lines[2], "1,1,0,1,0");
    assert_eq!(lines[3], "2,0,-1,0,-2");
}

#[test]
fn curves_rejects_unknown_kind_with_the_valid_names() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["curves", "--kinds", "maxout"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("maxout"), "{err}");
    assert!(err.contains("parabolic-cone"), "{err}");
}

#[test]
fn curves_usage_error_leaves_no_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("curves.csv");
    let out = run_in(
        dir.path(),
        &["curves", "--zmin", "2", "--zmax", "1", "--out", target.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!target.exists(), "usage error must not create output files");
}

#[test]
fn unknown_flags_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["curves", "--frobnicate", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn xor_prints_a_five_column_stats_row_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["xor", "--kind", "cone", "--trials", "2", "--epochs", "50", "--out-dir", "run"],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    for col in ["Mean", "Median", "Std. Dev.", "Best", "Worst"] {
        assert!(header.contains(col), "missing {col} in {header}");
    }
    assert!(text.lines().nth(1).unwrap().starts_with("Cone"));
    assert!(dir.path().join("run/xor-cone_summary.csv").exists());
    assert!(dir.path().join("run/xor-cone_trials.csv").exists());
    assert!(dir.path().join("run/xor-cone_cone_trial0_curve.csv").exists());
}

#[test]
fn bench_with_missing_data_directory_exits_one_with_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["bench", "--data", "no/such/dir"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("no/such/dir"), "{}", stderr(&out));
}

#[test]
fn identical_invocations_produce_byte_identical_csvs() {
    let dir = tempfile::tempdir().unwrap();
    for sub in ["a", "b"] {
        let out = run_in(
            dir.path(),
            &[
                "annulus", "--kind", "cone", "--hidden", "2", "--trials", "2", "--epochs", "30",
                "--n-per-class", "40", "--seed", "9", "--out-dir", sub,
            ],
        );
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let mut compared = 0;
    for entry in std::fs::read_dir(dir.path().join("a")).unwrap() {
        let name = entry.unwrap().file_name();
        let a = std::fs::read(dir.path().join("a").join(&name)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(&name)).unwrap();
        assert_eq!(a, b, "{name:?} differs between identical runs");
        compared += 1;
    }
    assert!(compared >= 2);
}

#[test]
fn boundary_pgm_and_csv_encode_the_same_grid() {
    let dir = tempfile::tempdir().unwrap();
    for (fmt, name) in [("csv", "g.csv"), ("pgm", "g.pgm")] {
        let out = run_in(
            dir.path(),
            &[
                "boundary", "--analytic", "cone:1,0:0", "--bounds", "-1,3,-1,1",
                "--resolution", "101", "--format", fmt, "--out", name,
            ],
        );
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let pgm = std::fs::read(dir.path().join("g.pgm")).unwrap();
    let header: Vec<&str> = std::str::from_utf8(&pgm[..15])
        .unwrap()
        .split_ascii_whitespace()
        .collect();
    assert_eq!(header, ["P5", "101", "101", "255"]);

    let pixels = &pgm[pgm.len() - 101 * 101..];
    let csv = std::fs::read_to_string(dir.path().join("g.csv")).unwrap();
    let cells: Vec<u8> = csv
        .lines()
        .flat_map(|l| l.split(',').map(|c| c.parse::<u8>().unwrap()))
        .collect();
    assert_eq!(cells.len(), 101 * 101);
    // Same labels behind both encodings: 0 -> 0, 1 -> 127, 2 -> 255.
    for (px, cell) in pixels.iter().zip(&cells) {
        let want = match cell {
            0 => 0u8,
            1 => 127,
            2 => 255,
            other => panic!("unexpected label {other}"),
        };
        assert_eq!(*px, want);
    }
}

#[test]
fn boundary_positive_band_sits_between_the_planes() {
    // Analytic cone neuron w=(1,0), b=0 over [-1,3]^2: positive labels
    // exactly where 0 < x < 2.
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "boundary", "--analytic", "cone:1,0:0", "--bounds", "-1,3,-1,3",
            "--resolution", "101", "--format", "csv", "--out", "band.csv",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("band.csv")).unwrap();
    for line in csv.lines() {
        for (col, cell) in line.split(',').enumerate() {
            let x = -1.0 + (col as f64) * 4.0 / 100.0;
            let want = if (x - 0.0).abs() < 1e-12 || (x - 2.0).abs() < 1e-12 {
                "2"
            } else if x > 0.0 && x < 2.0 {
                "1"
            } else {
                "0"
            };
            assert_eq!(cell, want, "column {col} at x={x}");
        }
    }
}

#[test]
fn boundary_requires_exactly_one_source() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["boundary", "--out", "g.pgm"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_in(
        dir.path(),
        &["boundary", "--model", "m.bin", "--analytic", "cone:1,0:0", "--out", "g.pgm"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn boundary_unreadable_model_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("junk.bin"), b"not a model").unwrap();
    let out = run_in(
        dir.path(),
        &["boundary", "--model", "junk.bin", "--format", "pgm", "--out", "g.pgm"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("magic") || stderr(&out).contains("malformed"));
}

#[test]
fn train_then_eval_round_trips_a_model() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "train", "--dataset", "xor", "--arch", "1", "--kinds", "cone",
            "--epochs", "3000", "--lr", "0.01", "--seed", "0", "--out", "xor.bin",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("xor.bin").exists());

    let out = run_in(dir.path(), &["eval", "--model", "xor.bin", "--dataset", "xor"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("test_acc 1.0000"), "{}", stdout(&out));
}

#[test]
fn csv_pipeline_trains_normalizes_and_evaluates() {
    let dir = tempfile::tempdir().unwrap();
    let mut body = String::from("x,y,label\n");
    for i in 0..120 {
        let x = (i % 40) as f64 / 10.0;
        let side = i % 2;
        let y = if side == 0 { x + 2.0 } else { x - 2.0 };
        body.push_str(&format!("{x},{y},{side}\n"));
    }
    std::fs::write(dir.path().join("points.csv"), body).unwrap();

    let out = run_in(
        dir.path(),
        &[
            "train", "--dataset", "csv", "--data", "points.csv", "--label-col", "label",
            "--split", "0.8", "--normalize", "--arch", "4", "--kinds", "tanh",
            "--epochs", "300", "--lr", "0.05", "--seed", "0", "--out", "m.bin",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("class histogram"));

    let out = run_in(
        dir.path(),
        &[
            "eval", "--model", "m.bin", "--dataset", "csv", "--data", "points.csv",
            "--label-col", "label", "--split", "0.8", "--normalize", "--seed", "0",
        ],
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let test_acc: f64 = text
        .split("test_acc ")
        .nth(1)
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!(test_acc >= 0.95, "separable blobs should evaluate cleanly: {text}");
}

#[test]
fn config_file_fills_unset_flags_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.conf"), "steps=3\nzmin=0\nzmax=2\nkinds=cone\n").unwrap();
    let from_config = run_in(dir.path(), &["curves", "--config", "run.conf"]);
    assert!(from_config.status.success());
    assert_eq!(stdout(&from_config).lines().count(), 4);

    let overridden = run_in(dir.path(), &["curves", "--config", "run.conf", "--steps", "5"]);
    assert_eq!(stdout(&overridden).lines().count(), 6);
}

#[test]
fn out_dir_env_var_is_the_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let out = cone()
        .current_dir(dir.path())
        .env("CONE_OUT_DIR", "from-env")
        .args(["xor", "--trials", "1", "--epochs", "5"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(dir.path().join("from-env/xor-cone_summary.csv").exists());
}
