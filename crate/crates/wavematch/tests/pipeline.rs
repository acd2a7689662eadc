//! End-to-end behavior: CLI round trips, brute-force surface checks,
//! and binary smoke tests.

mod common;

use std::process::Command;

use wavematch::io::load_recording;
use wavematch::{
    prd_surface, synthesize, CompressionConfig, GridSpec, LevelsPolicy, PollenPoint,
    SurfaceEvaluator, SyntheticSpec,
};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wavematch"))
}

#[test]
fn gen_then_load_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rec.csv");
    let out = bin()
        .args(["gen", "--out"])
        .arg(&path)
        .args(["--channels", "3", "--seed", "9", "--duration", "50"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rec = load_recording(&path, 0.1).unwrap();
    assert_eq!(rec.channels.len(), 3);
    assert_eq!(rec.channels[0].len(), 500);
    // channel 1 must reproduce a direct synthesis with the same seed
    let direct = synthesize(&SyntheticSpec {
        duration_s: 50.0,
        seed: 9,
        ..SyntheticSpec::canine_preset(9)
    })
    .unwrap();
    for (a, b) in rec.channels[0].samples().iter().zip(direct.samples()) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn surface_minimum_matches_brute_force_loop() {
    let raw = synthesize(&SyntheticSpec {
        duration_s: 25.6,
        ..SyntheticSpec::canine_preset(5)
    })
    .unwrap();
    let ev = SurfaceEvaluator::new(
        &raw,
        CompressionConfig::new(4.0).unwrap(),
        5.0 / 60.0,
        LevelsPolicy::Fixed(5),
    )
    .unwrap();
    let grid = GridSpec::full_plane(9).unwrap();
    let surface = prd_surface(&ev, grid).unwrap();

    let mut best = (f64::INFINITY, 0.0, 0.0);
    for ia in 0..9 {
        for ib in 0..9 {
            let (a, b) = (grid.a_value(ia), grid.b_value(ib));
            let prd = ev.eval(PollenPoint::new(a, b).unwrap()).unwrap();
            if prd < best.0 {
                best = (prd, a, b);
            }
        }
    }
    let (a, b, prd) = surface.minimum();
    assert!((prd - best.0).abs() < 1e-12);
    assert!((a - best.1).abs() < 1e-12 && (b - best.2).abs() < 1e-12);
}

#[test]
fn scales_binary_reports_canine_haar_depth() {
    let out = bin()
        .args(["scales", "--wavelet", "haar", "--species", "canine"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("J0 = 7"), "{stdout}");
    assert!(stdout.contains("haar"), "{stdout}");
}

#[test]
fn compress_binary_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "a,b\n1.0,oops\n").unwrap();
    let out = bin()
        .args(["compress", "--input"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn match_binary_config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.conf");
    std::fs::write(
        &cfg_path,
        "cr = 3,5\ngrid = 7   # coarse desk run\nrefine = false\nseed = 4\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["match", "--synthetic", "1", "--config"])
        .arg(&cfg_path)
        .args(["--cr", "3"]) // flag beats the config file
        .arg("--out-dir")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("surface_cr3.csv").exists());
    assert!(!out_dir.join("surface_cr5.csv").exists());
    assert!(out_dir.join("match.json").exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("match.json")).unwrap())
            .unwrap();
    assert_eq!(report["grid_resolution"], 7);
    assert_eq!(report["refined"], false);
    assert_eq!(report["results"].as_array().unwrap().len(), 1);
    assert_eq!(report["table2_units"], "pi_normalized");
}
