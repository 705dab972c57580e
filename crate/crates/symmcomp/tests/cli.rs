//! Integration tests of the command-line surface: bundled configs,
//! exit codes, mesh generation/refinement round-trips, idempotence.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_symmcomp")
}

fn manifest_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn work_dir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn run_disk_equality_config() {
    let dir = work_dir("disk_equality");
    let out = Command::new(bin())
        .current_dir(&dir)
        .args(["run", manifest_path("configs/disk_equality.cfg").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    // margins collapse to discretization error on the equality config
    let report = std::fs::read_to_string(dir.join("out/disk_equality/report.json")).unwrap();
    let reports: serde_json::Value = serde_json::from_str(&report).unwrap();
    for rep in reports.as_array().unwrap() {
        for row in rep["rows"].as_array().unwrap() {
            if row["informational"].as_bool().unwrap() {
                continue;
            }
            let margin = row["margin"].as_f64().unwrap();
            let rhs = row["rhs"].as_f64().unwrap().abs().max(1.0);
            assert!(
                margin.abs() / rhs < 6e-3,
                "equality margin not small: {row}"
            );
        }
    }
}

#[test]
fn run_square_config_positive_margins() {
    let dir = work_dir("square_cfg");
    let out = Command::new(bin())
        .current_dir(&dir)
        .args(["run", manifest_path("configs/square_comparison.cfg").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = std::fs::read_to_string(dir.join("out/square_comparison/report.json")).unwrap();
    let reports: serde_json::Value = serde_json::from_str(&report).unwrap();
    let mut strict = 0;
    for rep in reports.as_array().unwrap() {
        assert_eq!(rep["pass"], serde_json::Value::Bool(true));
        for row in rep["rows"].as_array().unwrap() {
            let name = row["name"].as_str().unwrap();
            // the comparison rows are strict on this domain; the level
            // measure row saturates exactly by construction
            if !row["informational"].as_bool().unwrap()
                && name.contains("<=")
                && !name.starts_with("level measure")
            {
                assert!(row["margin"].as_f64().unwrap() > 0.0, "{row}");
                strict += 1;
            }
        }
    }
    assert!(strict >= 4, "expected several strict comparison rows");
    // second invocation produces byte-identical reports
    let before = std::fs::read(dir.join("out/square_comparison/report.json")).unwrap();
    let again = Command::new(bin())
        .current_dir(&dir)
        .args(["run", manifest_path("configs/square_comparison.cfg").to_str().unwrap()])
        .output()
        .unwrap();
    assert!(again.status.success());
    let after = std::fs::read(dir.join("out/square_comparison/report.json")).unwrap();
    assert_eq!(before, after, "reports are not byte-identical across runs");

    // report summary over the output tree
    let summary = Command::new(bin())
        .current_dir(&dir)
        .args(["report", "--dir", "out"])
        .output()
        .unwrap();
    assert!(summary.status.success());
    let text = String::from_utf8_lossy(&summary.stdout);
    assert!(text.contains("overall: PASS"), "{text}");
}

#[test]
fn hypothesis_violation_exits_3() {
    let dir = work_dir("bad_ell");
    let cfg = dir.join("bad.cfg");
    std::fs::write(
        &cfg,
        "[domain]\nshape = square\na = 1.0\nh = 0.4\n\n[params]\nn = 2\np = 2.0\nell = -3.0\n",
    )
    .unwrap();
    let out = Command::new(bin())
        .current_dir(&dir)
        .args(["run", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("(H2)"), "stderr: {stderr}");
}

#[test]
fn solver_non_convergence_exits_4() {
    // p = 3 with a zero Newton budget cannot reach the weak-form residual
    let dir = work_dir("no_converge");
    let cfg = dir.join("stall.cfg");
    std::fs::write(
        &cfg,
        "[domain]\nshape = square\na = 1.0\nh = 0.4\n\n[params]\np = 3.0\nell = -1.0\n\n\
         [solver]\nmax_newton = 0\n\n[verify]\nchecks = norm_comparison\nlorentz = false\n",
    )
    .unwrap();
    let out = Command::new(bin())
        .current_dir(&dir)
        .env("SYMMCOMP_THREADS", "1")
        .args(["run", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(4),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn config_parse_error_exits_2() {
    let dir = work_dir("bad_syntax");
    let cfg = dir.join("bad.cfg");
    std::fs::write(&cfg, "[domain]\nshape square\n").unwrap();
    let out = Command::new(bin())
        .current_dir(&dir)
        .args(["run", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mesh_and_refine_roundtrip() {
    let dir = work_dir("mesh_cmd");
    let mesh_path = dir.join("disk.symmmesh");
    let out = Command::new(bin())
        .args(["mesh", "disk r=1 h=0.05", "-o", mesh_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let mesh = symmcomp::TriMesh::load(&mesh_path).unwrap();
    // |Ω|_ℓ within 1e-3 of 2π at ℓ = -1
    let measure = symmcomp::geometry::weighted_measure(&mesh, -1.0).unwrap();
    assert!(
        (measure - 2.0 * std::f64::consts::PI).abs() < 1e-3,
        "measure {measure}"
    );
    // refine twice: 16x triangle count
    let r1 = dir.join("disk1.symmmesh");
    let r2 = dir.join("disk2.symmmesh");
    assert!(Command::new(bin())
        .args(["refine", mesh_path.to_str().unwrap(), "-o", r1.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    assert!(Command::new(bin())
        .args(["refine", r1.to_str().unwrap(), "-o", r2.to_str().unwrap()])
        .status()
        .unwrap()
        .success());
    let fine = symmcomp::TriMesh::load(&r2).unwrap();
    assert_eq!(fine.triangles().len(), 16 * mesh.triangles().len());
    // serialization round-trip is the identity
    assert_eq!(fine.to_text(), symmcomp::TriMesh::parse_text(&fine.to_text()).unwrap().to_text());
}

#[test]
fn square_offset_origin_check_passes() {
    let dir = work_dir("mesh_sq");
    let mesh_path = dir.join("sq.symmmesh");
    let out = Command::new(bin())
        .args(["mesh", "square a=1 offset=(0,0) h=0.25", "-o", mesh_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let mesh = symmcomp::TriMesh::load(&mesh_path).unwrap();
    assert!(mesh.boundary_origin_distance() > 0.5);
    // unknown shape is a usage error
    let bad = Command::new(bin())
        .args(["mesh", "heptagon a=1", "-o", dir.join("x").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
