//! End-to-end tests of the `modgame` binary: file formats, round-trips,
//! exit codes, and determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use modgame::analysis::classify_all;
use modgame::integrate::{basin_map, simulate, BasinLabel};
use modgame::{ModelParams, ReducedState};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_modgame"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("modgame-cli-{name}"));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn parse_csv(path: &Path) -> (String, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn f(field: &str) -> f64 {
    field.parse().unwrap()
}

#[test]
fn equilibria_report_round_trips_against_the_library() {
    let dir = workdir("eq");
    let out_path = dir.join("eq.json");
    run_ok(&[
        "equilibria",
        "--np",
        "0.9",
        "--a",
        "7",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["model"], "standard");
    assert_eq!(report["np"].as_f64().unwrap().to_bits(), 0.9f64.to_bits());

    let expected = classify_all(&ModelParams::new(0.9, 7.0).unwrap());
    let rows = report["equilibria"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    for (row, e) in rows.iter().zip(&expected) {
        assert_eq!(row["index"].as_u64().unwrap() as u8, e.index);
        assert_eq!(row["x"].as_f64().unwrap().to_bits(), e.x.to_bits());
        assert_eq!(row["z"].as_f64().unwrap().to_bits(), e.z.to_bits());
        assert_eq!(row["spurious"].as_bool().unwrap(), e.spurious);
        match e.eigenvalues {
            None => assert!(row["eigenvalues"].is_null()),
            Some(eig) => {
                for (k, l) in eig.iter().enumerate() {
                    let je = &row["eigenvalues"][k];
                    assert_eq!(je["re"].as_f64().unwrap().to_bits(), l.re.to_bits());
                    assert_eq!(je["im"].as_f64().unwrap().to_bits(), l.im.to_bits());
                }
            }
        }
        match e.classification {
            None => assert!(row["classification"].is_null()),
            Some(c) => assert_eq!(row["classification"], c.to_string()),
        }
    }
    // reference classifications
    assert_eq!(rows[0]["classification"], "stable-node");
    assert_eq!(rows[3]["classification"], "stable-node");
    assert_eq!(rows[8]["classification"], "unstable-node");
    assert!((rows[8]["x"].as_f64().unwrap() - 17.0 / 27.0).abs() < 1e-12);
    assert!((rows[8]["z"].as_f64().unwrap() - 5.0 / 12.0).abs() < 1e-12);
}

#[test]
fn equilibria_marks_interior_spurious_under_strong_punishment() {
    let dir = workdir("eq12");
    let out_path = dir.join("eq.json");
    run_ok(&[
        "equilibria",
        "--np",
        "0.9",
        "--a",
        "12",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    let row9 = &report["equilibria"][8];
    assert_eq!(row9["spurious"], true);
    assert!(row9["eigenvalues"].is_null());
}

#[test]
fn trajectory_file_round_trips_bit_exactly() {
    let dir = workdir("traj");
    let out_path = dir.join("t.csv");
    run_ok(&[
        "simulate",
        "--np",
        "0.9",
        "--a",
        "12",
        "--x0",
        "0.03",
        "--z0",
        "0.99",
        "--T",
        "5",
        "--dt",
        "0.01",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let (header, rows) = parse_csv(&out_path);
    assert_eq!(header, "t,x,z");
    let p = ModelParams::new(0.9, 12.0).unwrap();
    let expected = simulate(&p, ReducedState::new(0.03, 0.99).unwrap(), 5.0, 0.01).unwrap();
    assert_eq!(rows.len(), expected.samples.len());
    for (row, (t, s)) in rows.iter().zip(&expected.samples) {
        assert_eq!(f(&row[0]).to_bits(), t.to_bits());
        assert_eq!(f(&row[1]).to_bits(), s.x().to_bits());
        assert_eq!(f(&row[2]).to_bits(), s.z().to_bits());
    }
}

#[test]
fn self_regulating_run_is_labeled_utopia() {
    let dir = workdir("utopia");
    let out = run_ok(&[
        "simulate",
        "--np",
        "0.9",
        "--a",
        "12",
        "--x0",
        "0.03",
        "--z0",
        "0.99",
        "--stride",
        "100",
        "--out",
        dir.join("t.csv").to_str().unwrap(),
    ]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("omega-limit label: utopia"), "{stdout}");
}

#[test]
fn corner_start_stays_constant() {
    let dir = workdir("corner");
    let out_path = dir.join("t.csv");
    run_ok(&[
        "simulate",
        "--np",
        "0.9",
        "--a",
        "7",
        "--x0",
        "1",
        "--z0",
        "1",
        "--T",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let (_, rows) = parse_csv(&out_path);
    for row in &rows {
        assert_eq!(f(&row[1]), 1.0);
        assert_eq!(f(&row[2]), 1.0);
    }
}

#[test]
fn degenerate_epidemic_keeps_np_constant() {
    let dir = workdir("epi0");
    let out_path = dir.join("t.csv");
    run_ok(&[
        "simulate",
        "--model",
        "epidemic",
        "--np",
        "0.9",
        "--a",
        "7",
        "--beta",
        "0",
        "--rho",
        "0",
        "--mu",
        "0",
        "--x0",
        "0.5",
        "--z0",
        "0.5",
        "--T",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let (header, rows) = parse_csv(&out_path);
    assert_eq!(header, "t,x,z,np");
    for row in &rows {
        assert_eq!(f(&row[3]), 0.9);
    }
}

#[test]
fn coarse_basin_labels_split_at_the_separatrix() {
    let dir = workdir("basin2");
    let out_path = dir.join("b.csv");
    let out = run_ok(&[
        "basin",
        "--np",
        "0.9",
        "--a",
        "7",
        "--grid",
        "2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let (header, rows) = parse_csv(&out_path);
    assert_eq!(header, "x,z,label");
    assert_eq!(rows.len(), 4);
    for row in &rows {
        let expect = if f(&row[0]) < 0.5 {
            "dystopia"
        } else {
            "utopia"
        };
        assert_eq!(row[2], expect, "cell ({}, {})", row[0], row[1]);
    }
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains("analytic separatrix x* = 0.629630"),
        "{stdout}"
    );

    // file labels round-trip against the library map
    let map = basin_map(&ModelParams::new(0.9, 7.0).unwrap(), 2).unwrap();
    for row in &rows {
        let ix = if f(&row[0]) < 0.5 { 0 } else { 1 };
        let iz = if f(&row[1]) < 0.5 { 0 } else { 1 };
        let label: BasinLabel = row[2].parse().unwrap();
        assert_eq!(label, map.label(ix, iz));
        assert_eq!(f(&row[0]).to_bits(), map.cell_center(ix).to_bits());
    }
}

#[test]
fn portrait_grid_has_fixed_corners_and_a_sign_flip() {
    let dir = workdir("portrait");
    let out_path = dir.join("p.csv");
    // 28 nodes put x = 16/27, 17/27, 18/27 exactly on the grid
    run_ok(&[
        "portrait",
        "--np",
        "0.9",
        "--a",
        "7",
        "--grid",
        "28",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let (header, rows) = parse_csv(&out_path);
    assert_eq!(header, "x,z,xdot,zdot");
    assert_eq!(rows.len(), 28 * 28);
    let mut left = None;
    let mut right = None;
    for row in &rows {
        let (x, z, dx, dz) = (f(&row[0]), f(&row[1]), f(&row[2]), f(&row[3]));
        if (x == 0.0 || x == 1.0) && (z == 0.0 || z == 1.0) {
            assert_eq!(dx.abs(), 0.0);
            assert_eq!(dz.abs(), 0.0);
        }
        if (z - 0.5).abs() < 0.02 {
            if (x - 16.0 / 27.0).abs() < 1e-12 {
                left = Some(dx);
            }
            if (x - 18.0 / 27.0).abs() < 1e-12 {
                right = Some(dx);
            }
        }
    }
    assert!(left.expect("left column sampled") < 0.0);
    assert!(right.expect("right column sampled") > 0.0);
}

#[test]
fn portrait_svg_is_byte_stable() {
    let dir = workdir("svg");
    let svg1 = dir.join("p1.svg");
    let svg2 = dir.join("p2.svg");
    for svg in [&svg1, &svg2] {
        run_ok(&[
            "portrait",
            "--np",
            "0.9",
            "--a",
            "7",
            "--grid",
            "15",
            "--out",
            dir.join("p.csv").to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ]);
    }
    let a = fs::read(&svg1).unwrap();
    let b = fs::read(&svg2).unwrap();
    assert!(!a.is_empty() && a == b);
    assert!(String::from_utf8(a).unwrap().starts_with("<svg"));
}

#[test]
fn sweep_reports_dual_stability_across_the_window() {
    let dir = workdir("sweep");
    let out_path = dir.join("s.csv");
    run_ok(&[
        "sweep",
        "--np",
        "0.9",
        "--a-range",
        "5:11:61",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let (header, rows) = parse_csv(&out_path);
    assert_eq!(
        header,
        "np,a,utopia_stable,dystopia_stable,interior_exists,corner01_stable,corner10_stable"
    );
    assert_eq!(rows.len(), 61);
    for row in &rows {
        assert_eq!(row[2], "true", "utopia unstable at a = {}", row[1]);
        assert_eq!(row[3], "true", "dystopia unstable at a = {}", row[1]);
    }
}

#[test]
fn sweep_reproduces_the_utopia_stability_frontier() {
    let dir = workdir("frontier");
    let out_path = dir.join("s.csv");
    run_ok(&[
        "sweep",
        "--np-range",
        "0.2:0.8:4",
        "--a-range",
        "0.1:10:100",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let (_, rows) = parse_csv(&out_path);
    for row in &rows {
        let (np, a) = (f(&row[0]), f(&row[1]));
        let frontier = np / (2.0 * (1.0 - np));
        if (a - frontier).abs() > 1e-9 {
            assert_eq!(
                row[2] == "true",
                a > frontier,
                "frontier violated at np = {np}, a = {a}"
            );
        }
    }
}

#[test]
fn checked_in_configs_drive_the_figure_scenarios() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = workdir("configs");

    let out = run_ok(&[
        "simulate",
        "--config",
        configs.join("standard-a12.toml").to_str().unwrap(),
        "--stride",
        "100",
        "--out",
        dir.join("t.csv").to_str().unwrap(),
    ]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("omega-limit label: utopia"));

    run_ok(&[
        "portrait",
        "--config",
        configs.join("standard-a7.toml").to_str().unwrap(),
        "--grid",
        "15",
        "--out",
        dir.join("p.csv").to_str().unwrap(),
    ]);

    let out = run_ok(&[
        "portrait",
        "--config",
        configs.join("incentives-a15.toml").to_str().unwrap(),
        "--grid",
        "15",
        "--out",
        dir.join("pi.csv").to_str().unwrap(),
    ]);
    // the incentives scenario carries a non-corner equilibrium; the
    // command must surface it
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .contains("non-corner equilibria"));
}

#[test]
fn config_file_values_yield_to_flags() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = workdir("override");
    let out_path = dir.join("eq.json");
    run_ok(&[
        "equilibria",
        "--config",
        configs.join("standard-a7.toml").to_str().unwrap(),
        "--a",
        "12",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["a"].as_f64().unwrap(), 12.0);
    assert_eq!(report["equilibria"][8]["spurious"], true);
}

#[test]
fn config_errors_exit_with_code_2() {
    let dir = workdir("badcfg");
    let bad = dir.join("bad.toml");
    fs::write(&bad, "np = 0.9\na = 7.0\nbogus = 1\n").unwrap();
    let out = bin()
        .args(["equilibria", "--config", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    // missing required parameter
    let out = bin().args(["equilibria", "--a", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // out-of-range parameter
    let out = bin()
        .args(["equilibria", "--np", "1.5", "--a", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // unsupported model for this command
    let out = bin()
        .args([
            "equilibria",
            "--model",
            "incentives",
            "--np",
            "0.9",
            "--a",
            "7",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // invalid integration step
    let out = bin()
        .args([
            "simulate", "--np", "0.9", "--a", "7", "--x0", "0.5", "--z0", "0.5", "--dt", "0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_code_3() {
    let out = bin()
        .args([
            "basin",
            "--np",
            "0.9",
            "--a",
            "7",
            "--grid",
            "2",
            "--out",
            "/nonexistent-dir/x.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
