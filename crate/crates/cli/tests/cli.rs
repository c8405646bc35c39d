//! End-to-end tests of the `cpolder` binary: exit codes, CSV shape,
//! determinism across worker counts, unit-system round trips, and the
//! failure-reporting contract.

mod common;

use casimir_polder::units::UnitSystem;
use common::{log_log_slope, run, scratch, write_config, Csv};

const FREE_SWEEP: &str = "\
units.system = natural
atom_a.transition = 1.0 1.0
atom_a.gamma = 1e-3
bath.temperature = 0.05
geometry.kind = free
sweep.variable = separation
sweep.start = 40
sweep.stop = 80
sweep.points = 4
sweep.spacing = log
method.choice = auto
";

#[test]
fn free_sweep_happy_path_is_deterministic() {
    let dir = scratch("free_sweep_happy_path");
    let cfg = write_config(&dir, "sweep.cfg", FREE_SWEEP);
    let out1 = dir.join("a.csv");
    let out2 = dir.join("b.csv");

    let (code, _, stderr) =
        run(&["sweep", "--config", &cfg, "--out", out1.to_str().unwrap()]);
    assert_eq!(code, 0, "stderr: {stderr}");
    let (code, _, _) = run(&[
        "sweep",
        "--config",
        &cfg,
        "--jobs",
        "3",
        "--out",
        out2.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let text1 = std::fs::read_to_string(&out1).unwrap();
    let text2 = std::fs::read_to_string(&out2).unwrap();
    assert_eq!(text1, text2, "output must not depend on --jobs");
    assert!(
        text1.starts_with("# schema: cpolder.sweep.free.v1"),
        "schema must be the first line"
    );

    let csv = Csv::parse(&text1);
    assert!(csv.comments.iter().any(|c| c.contains("units: natural")));
    assert_eq!(csv.rows.len(), 4);
    for i in 0..4 {
        assert!(csv.num(i, "W_total") < 0.0, "attractive potential");
        assert!(csv.num(i, "error_estimate") >= 0.0);
        assert!(!csv.text(i, "method").is_empty());
        assert!(!csv.text(i, "regime").is_empty());
    }
    // Log spacing hits the endpoints exactly.
    assert_eq!(csv.num(0, "R"), 40.0);
    assert_eq!(csv.num(3, "R"), 80.0);
}

#[test]
fn sweep_writes_csv_to_stdout_by_default() {
    let dir = scratch("sweep_stdout");
    let cfg = write_config(&dir, "sweep.cfg", FREE_SWEEP);
    let (code, stdout, _) = run(&["sweep", "--config", &cfg]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("# schema: cpolder.sweep.free.v1"));
}

#[test]
fn timestamp_flag_adds_a_comment_line() {
    let dir = scratch("timestamp_flag");
    let cfg = write_config(&dir, "sweep.cfg", FREE_SWEEP);
    let (code, plain, _) = run(&["sweep", "--config", &cfg]);
    assert_eq!(code, 0);
    let (code, stamped, _) = run(&["sweep", "--config", &cfg, "--timestamp"]);
    assert_eq!(code, 0);
    assert!(!plain.contains("# generated:"));
    assert!(stamped.contains("# generated:"));
    let strip = |s: &str| {
        s.lines()
            .filter(|l| !l.starts_with("# generated:"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&plain), strip(&stamped));
}

#[test]
fn missing_atom_block_is_a_config_error() {
    let dir = scratch("missing_atom_block");
    let cfg = write_config(
        &dir,
        "bad.cfg",
        "geometry.kind = free\ngeometry.separation = 10\nbath.temperature = 0\n",
    );
    let out = dir.join("never.csv");
    let (code, _, stderr) =
        run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("atom_a"), "stderr names the missing block: {stderr}");
    assert!(!out.exists(), "no output on config errors");
}

#[test]
fn sweep_rejects_method_all() {
    let dir = scratch("sweep_rejects_all");
    let cfg =
        write_config(&dir, "all.cfg", &FREE_SWEEP.replace("method.choice = auto", "method.choice = all"));
    let (code, _, stderr) = run(&["sweep", "--config", &cfg]);
    assert_eq!(code, 2);
    assert!(stderr.contains("compare"), "points at the compare verb: {stderr}");
}

#[test]
fn compare_requires_method_all() {
    let dir = scratch("compare_requires_all");
    let cfg = write_config(&dir, "auto.cfg", FREE_SWEEP);
    let (code, _, stderr) = run(&["compare", "--config", &cfg]);
    assert_eq!(code, 2);
    assert!(stderr.contains("method.choice = all"), "stderr: {stderr}");
}

#[test]
fn out_of_range_tolerance_is_a_config_error() {
    let dir = scratch("bad_tolerance");
    let cfg = write_config(&dir, "sweep.cfg", FREE_SWEEP);
    let (code, _, stderr) = run(&["sweep", "--config", &cfg, "--tol", "0.5"]);
    assert_eq!(code, 2);
    assert!(!stderr.is_empty());
}

#[test]
fn undamped_full_integral_fails_with_partial_output() {
    let dir = scratch("undamped_full");
    let cfg = write_config(
        &dir,
        "undamped.cfg",
        "\
atom_a.transition = 1.0 1.0
bath.temperature = 0.05
geometry.kind = free
sweep.variable = separation
sweep.start = 10
sweep.stop = 20
sweep.points = 2
sweep.spacing = log
method.choice = full
",
    );
    let out = dir.join("partial.csv");
    let (code, _, stderr) =
        run(&["sweep", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert!(stderr.contains("partial output"), "stderr: {stderr}");
    let csv = Csv::parse(&std::fs::read_to_string(&out).unwrap());
    assert_eq!(csv.rows.len(), 2, "the grid is kept, failures marked in place");
    for i in 0..2 {
        assert_eq!(csv.text(i, "W_total"), "nan");
        assert!(csv.text(i, "note").starts_with("error:"));
    }
}

#[test]
fn wall_sweep_reports_consistent_channel_terms() {
    let dir = scratch("wall_sweep_terms");
    let cfg = write_config(
        &dir,
        "wall.cfg",
        "\
atom_a.transition = 1.0 1.0
atom_a.gamma = 1e-3
bath.temperature = 0.5
geometry.kind = wall
geometry.atom_a = 0 0 30
geometry.atom_b = 25 0 40
sweep.variable = scale
sweep.start = 1
sweep.stop = 2
sweep.points = 3
sweep.spacing = linear
method.choice = auto
",
    );
    let (code, stdout, stderr) = run(&["sweep", "--config", &cfg]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.starts_with("# schema: cpolder.sweep.wall.v1"));
    let csv = Csv::parse(&stdout);
    assert_eq!(csv.rows.len(), 3);
    for i in 0..3 {
        let total = csv.num(i, "W_total");
        let sum = csv.num(i, "W_direct") + csv.num(i, "W_image") + csv.num(i, "W_cross");
        assert!(
            (total - sum).abs() <= 1e-10 * total.abs(),
            "row {i}: total {total} vs channel sum {sum}"
        );
        assert!(csv.num(i, "Rbar") > csv.num(i, "R"));
    }
    // Linear scale sweep: R doubles from the first to the last row
    // (up to the 12-significant-digit CSV quantization).
    let r0 = csv.num(0, "R");
    let r2 = csv.num(2, "R");
    assert!((r2 / r0 - 2.0).abs() < 5e-12);
}

#[test]
fn compare_far_zone_point_populates_far_columns() {
    let dir = scratch("compare_far");
    let cfg = write_config(
        &dir,
        "far.cfg",
        "\
atom_a.transition = 1.0 1.0
atom_a.gamma = 1e-3
bath.temperature = 0.15915494309189535
geometry.kind = free
geometry.separation = 40
method.choice = all
",
    );
    let (code, stdout, stderr) = run(&["compare", "--config", &cfg]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.starts_with("# schema: cpolder.compare.free.v1"));
    let csv = Csv::parse(&stdout);
    assert_eq!(csv.rows.len(), 1);
    assert_eq!(csv.text(0, "regime"), "far-zone-high-t");
    assert_eq!(csv.text(0, "W_near"), "", "near-zone form not applicable here");
    assert!(csv.num(0, "W_far_qr") < 0.0);
    assert!(csv.num(0, "W_limit") < 0.0);
    assert!(csv.num(0, "dev_far_qr_limit") <= 1e-3);
    assert_eq!(csv.text(0, "flags"), "", "all cross-checks agree: {stdout}");
}

#[test]
fn compare_near_zone_point_populates_near_column() {
    let dir = scratch("compare_near");
    let cfg = write_config(
        &dir,
        "near.cfg",
        "\
atom_a.transition = 1.0 1.0
atom_a.gamma = 3e-3
bath.temperature = 0
geometry.kind = free
geometry.separation = 1e-3
method.choice = all
",
    );
    let (code, stdout, stderr) = run(&["compare", "--config", &cfg]);
    assert_eq!(code, 0, "stderr: {stderr}");
    let csv = Csv::parse(&stdout);
    assert_eq!(csv.rows.len(), 1);
    assert_eq!(csv.text(0, "regime"), "near-zone");
    assert_eq!(csv.text(0, "W_far_qr"), "");
    assert_eq!(csv.text(0, "W_limit"), "");
    assert!(csv.num(0, "W_near") < 0.0);
    assert!(csv.num(0, "dev_full_near") <= 2e-2);
    assert_eq!(csv.text(0, "flags"), "", "all cross-checks agree: {stdout}");
}

#[test]
fn regime_verb_describes_the_mixed_wall_regime() {
    let dir = scratch("regime_mixed");
    let cfg = write_config(
        &dir,
        "mixed.cfg",
        "\
atom_a.transition = 1.0 1.0
bath.temperature = 0.00015915494309189535
geometry.kind = wall
geometry.atom_a = 0 0 5100
geometry.atom_b = 0 0 5120
",
    );
    let (code, stdout, stderr) = run(&["regime", "--config", &cfg]);
    assert_eq!(code, 0, "stderr: {stderr}");
    assert!(stdout.contains("regime: far-zone-mixed"), "{stdout}");
    assert!(stdout.contains("Rbar"));
    assert!(stdout.contains("direct term dominates"));
}

#[test]
fn selftest_verb_passes() {
    let (code, stdout, stderr) = run(&["selftest"]);
    assert_eq!(code, 0, "stderr: {stderr}\nstdout: {stdout}");
    assert!(stdout.contains("PASS quadrature/"));
    assert!(stdout.contains("oracle/bootstrap-identity"));
    assert!(!stdout.contains("FAIL"));
    assert!(stdout.contains("checks passed"));
}

#[test]
fn temperature_sweep_varies_the_thermal_length() {
    let dir = scratch("temperature_sweep");
    let cfg = write_config(
        &dir,
        "temp.cfg",
        "\
atom_a.transition = 1.0 1.0
atom_a.gamma = 1e-3
geometry.kind = free
geometry.separation = 30
sweep.variable = temperature
sweep.start = 0.05
sweep.stop = 0.2
sweep.points = 3
sweep.spacing = log
method.choice = auto
",
    );
    let (code, stdout, stderr) = run(&["sweep", "--config", &cfg]);
    assert_eq!(code, 0, "stderr: {stderr}");
    let csv = Csv::parse(&stdout);
    assert_eq!(csv.rows.len(), 3);
    assert!(csv.num(0, "T") < csv.num(2, "T"));
    assert!(csv.num(0, "lambda_T") > csv.num(2, "lambda_T"));
    // Hotter bath at fixed R pushes the potential deeper (classically ∝ T).
    assert!(csv.num(2, "W_total") < csv.num(0, "W_total"));
    let slope = log_log_slope(&[
        (csv.num(0, "T"), csv.num(0, "W_total")),
        (csv.num(1, "T"), csv.num(1, "W_total")),
        (csv.num(2, "T"), csv.num(2, "W_total")),
    ]);
    assert!((slope - 1.0).abs() < 0.05, "high-T potential is linear in T, slope {slope}");
}

#[test]
fn cgs_and_natural_runs_agree_after_conversion() {
    let dir = scratch("cgs_roundtrip");
    let natural = write_config(
        &dir,
        "natural.cfg",
        "\
units.system = natural
atom_a.transition = 1.0 1.0
atom_a.gamma = 1e-3
bath.temperature = 0.05
geometry.kind = free
geometry.separation = 30
method.choice = auto
",
    );
    let us = UnitSystem::gaussian_cgs(1e-4).unwrap();
    let cgs_text = format!(
        "\
units.system = cgs
units.length_cm = 1e-4
atom_a.transition = {:.17e} {:.17e}
atom_a.gamma = {:.17e}
bath.temperature = {:.17e}
geometry.kind = free
geometry.separation = {:.17e}
method.choice = auto
",
        us.wavenumber_out(1.0),
        us.dipole_squared_out(1.0),
        us.wavenumber_out(1e-3),
        us.temperature_out(0.05),
        us.length_out(30.0),
    );
    let cgs = write_config(&dir, "cgs.cfg", &cgs_text);

    let (code, nat_out, stderr) = run(&["sweep", "--config", &natural]);
    assert_eq!(code, 0, "stderr: {stderr}");
    let (code, cgs_out, stderr) = run(&["sweep", "--config", &cgs]);
    assert_eq!(code, 0, "stderr: {stderr}");

    assert!(cgs_out.contains("units: gaussian-cgs"));
    let nat = Csv::parse(&nat_out);
    let cgs = Csv::parse(&cgs_out);
    let w_nat = nat.num(0, "W_total");
    let w_back = us.energy_in(cgs.num(0, "W_total"));
    assert!(
        (w_back / w_nat - 1.0).abs() <= 1e-9,
        "natural {w_nat} vs converted {w_back}"
    );
    let r_back = us.length_in(cgs.num(0, "R"));
    assert!((r_back / 30.0 - 1.0).abs() <= 1e-11);
}
