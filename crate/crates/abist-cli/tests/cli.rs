//! End-to-end tests of the `abist` binary: exit codes, file artifacts,
//! canonical-JSON round trips, and the documented example behaviors.

use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_abist"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("spawn abist")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Rows of a field CSV: (x, reA, imA, B).
fn read_csv(path: &Path) -> Vec<(f64, f64, f64, f64)> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('x') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
            (f[0], f[1], f[2], f[3])
        })
        .collect()
}

// ---- scatter -------------------------------------------------------------

#[test]
fn scatter_zero_profile_gives_unit_s11_and_canonical_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "zero"},
            "grid": {"x_min": -10.0, "x_max": 10.0, "n": 64},
            "spectrum_box": {"re_min": -1.0, "re_max": 1.0, "im_min": 0.05, "im_max": 0.6}
        })
        .to_string(),
    );
    let out = run_in(
        dir.path(),
        &["scatter", "--config", cfg.to_str().unwrap(), "--kmin", "-2", "--kmax", "2", "--nk", "41"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let doc = read_json(&dir.path().join("scattering.json"));
    for s in doc["s11"].as_array().unwrap() {
        assert!((s[0].as_f64().unwrap() - 1.0).abs() < 1e-13);
        assert!(s[1].as_f64().unwrap().abs() < 1e-13);
    }
    for s in doc["s12"].as_array().unwrap() {
        assert!(s[0].as_f64().unwrap().abs() < 1e-14);
        assert!(s[1].as_f64().unwrap().abs() < 1e-14);
    }
    assert!(doc["modes"].as_array().unwrap().is_empty());

    // canonical round trip is byte-identical
    let bytes1 = std::fs::read(dir.path().join("scattering.json")).unwrap();
    let reread = abist_core::json::read_scattering(&dir.path().join("scattering.json")).unwrap();
    let again = dir.path().join("again.json");
    abist_core::json::write_scattering(&again, &reread).unwrap();
    assert_eq!(bytes1, std::fs::read(again).unwrap());
}

#[test]
fn scatter_small_sech_records_unitarity_residual() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "sech", "amplitude": 0.01},
            "grid": {"x_min": -30.0, "x_max": 30.0, "n": 1501},
            "kmin": 0.2, "kmax": 2.2, "nk": 41,
            "spectrum_box": {"re_min": -1.0, "re_max": 1.0, "im_min": 0.05, "im_max": 0.6}
        })
        .to_string(),
    );
    let out = run_in(dir.path(), &["scatter", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc = read_json(&dir.path().join("scattering.json"));
    let resid = doc["unitarity_residual_max"].as_f64().unwrap();
    assert!(resid < 1e-8, "unitarity residual {resid}");
    assert!(doc["modes"].as_array().unwrap().is_empty());
}

#[test]
fn scatter_rejects_non_decaying_tail() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "sech", "amplitude": 1.0, "center": 30.0},
            "grid": {"x_min": -30.0, "x_max": 30.0, "n": 256}
        })
        .to_string(),
    );
    let out = run_in(dir.path(), &["scatter", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("tail is not decaying"),
        "stderr must name the violated invariant: {}",
        stderr(&out)
    );
}

// ---- spectrum ------------------------------------------------------------

#[test]
fn spectrum_finds_the_soliton_pole() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "soliton", "k": [0.5, 0.5], "c": [0.0, -1.0]},
            "grid": {"x_min": -25.0, "x_max": 25.0, "n": 1001},
            "spectrum_box": {"re_min": 0.3, "re_max": 0.7, "im_min": 0.3, "im_max": 0.7}
        })
        .to_string(),
    );
    let out = run_in(dir.path(), &["spectrum", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc = read_json(&dir.path().join("spectrum.json"));
    let modes = doc["modes"].as_array().unwrap();
    assert_eq!(modes.len(), 1);
    let k = &modes[0]["k"];
    assert!((k[0].as_f64().unwrap() - 0.5).abs() < 1e-4);
    assert!((k[1].as_f64().unwrap() - 0.5).abs() < 1e-4);
}

// ---- soliton -------------------------------------------------------------

#[test]
fn soliton_empty_modes_writes_zero_field() {
    let dir = tempfile::tempdir().unwrap();
    let modes = write(dir.path(), "modes.json", r#"{"alpha": -2.0, "beta": 1.0, "modes": []}"#);
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({"grid": {"x_min": -10.0, "x_max": 10.0, "n": 64}}).to_string(),
    );
    let out = run_in(
        dir.path(),
        &["soliton", modes.to_str().unwrap(), "--config", cfg.to_str().unwrap(), "--t", "1.5"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let rows = read_csv(&dir.path().join("field.csv"));
    assert_eq!(rows.len(), 64);
    for (_, re, im, b) in rows {
        assert_eq!(re, 0.0);
        assert_eq!(im, 0.0);
        assert_eq!(b, 0.0);
    }
}

#[test]
fn soliton_single_mode_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let modes = write(
        dir.path(),
        "modes.json",
        &json!({"alpha": -2.0, "beta": 1.0, "modes": [{"k": [0.5, 0.5], "c": [0.0, -1.0]}]})
            .to_string(),
    );
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({"grid": {"x_min": -20.0, "x_max": 20.0, "n": 501}}).to_string(),
    );
    let out = run_in(
        dir.path(),
        &["soliton", modes.to_str().unwrap(), "--config", cfg.to_str().unwrap(), "--t", "0.4"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    for (x, re, im, b) in read_csv(&dir.path().join("field.csv")) {
        let (a_want, b_want) =
            abist_core::soliton::one_soliton_closed(num_complex::Complex64::new(0.5, 0.5), x, 0.4, -2.0, 1.0);
        assert!((re - a_want.re).abs() < 1e-8, "A.re at x = {x}");
        assert!((im - a_want.im).abs() < 1e-8, "A.im at x = {x}");
        assert!((b - b_want).abs() < 1e-6, "B at x = {x}");
    }
}

#[test]
fn soliton_rejects_malformed_complex_pair() {
    let dir = tempfile::tempdir().unwrap();
    let modes = write(
        dir.path(),
        "modes.json",
        r#"{"alpha": -2.0, "beta": 1.0, "modes": [{"k": "0.5+0.5i", "c": [0.0, -1.0]}]}"#,
    );
    let out = run_in(dir.path(), &["soliton", modes.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("[re, im]"), "stderr: {}", stderr(&out));
}

// ---- evolve --------------------------------------------------------------

#[test]
fn evolve_zero_data_stays_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "zero"},
            "grid": {"x_min": -10.0, "x_max": 10.0, "n": 64}
        })
        .to_string(),
    );
    let out = run_in(
        dir.path(),
        &["evolve", "--config", cfg.to_str().unwrap(), "--dt", "0.01", "--t-final", "0.05"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let meta = read_json(&dir.path().join("trajectory/meta.json"));
    assert_eq!(meta["dt"].as_f64().unwrap(), 0.01);
    assert!(meta.get("peak_speed").is_none());
    for entry in std::fs::read_dir(dir.path().join("trajectory")).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().and_then(|e| e.to_str()) == Some("csv") {
            for (_, re, im, b) in read_csv(&p) {
                assert_eq!((re, im, b), (0.0, 0.0, 0.0));
            }
        }
    }
}

#[test]
fn evolve_soliton_reports_unit_peak_speed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "soliton", "k": [0.5, 0.5], "c": [0.0, -1.0]},
            "grid": {"x_min": -27.0, "x_max": 33.0, "n": 1201}
        })
        .to_string(),
    );
    let out = run_in(
        dir.path(),
        &["evolve", "--config", cfg.to_str().unwrap(), "--dt", "0.01", "--t-final", "5.0"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let meta = read_json(&dir.path().join("trajectory/meta.json"));
    let v = meta["peak_speed"].as_f64().unwrap();
    assert!((v - 1.0).abs() <= 0.01, "peak speed {v}");
    assert!(stdout(&out).contains("peak speed"), "stdout: {}", stdout(&out));
}

#[test]
fn evolve_rejects_oversized_step() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "zero"},
            "grid": {"x_min": -10.0, "x_max": 10.0, "n": 64}
        })
        .to_string(),
    );
    let out = run_in(
        dir.path(),
        &["evolve", "--config", cfg.to_str().unwrap(), "--dt", "0.02", "--t-final", "0.1"],
    );
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("stability ceiling"), "stderr: {}", stderr(&out));
}

#[test]
fn evolve_flag_overrides_config_dt() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "zero"},
            "grid": {"x_min": -10.0, "x_max": 10.0, "n": 64},
            "dt": 0.008, "t_final": 0.04
        })
        .to_string(),
    );
    let out = run_in(dir.path(), &["evolve", "--config", cfg.to_str().unwrap(), "--dt", "0.002"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let meta = read_json(&dir.path().join("trajectory/meta.json"));
    assert_eq!(meta["dt"].as_f64().unwrap(), 0.002);
}

#[test]
fn evolve_warns_on_inconsistent_b0() {
    let dir = tempfile::tempdir().unwrap();
    // a zero profile implies B = 0; hand it a B column of ones
    let mut csv = String::from("# t=0 alpha=-2 beta=1\nx,reA,imA,B\n");
    let n = 64;
    for i in 0..n {
        let x = -10.0 + 20.0 * i as f64 / (n - 1) as f64;
        csv.push_str(&format!("{x},0,0,1\n"));
    }
    let b0 = write(dir.path(), "b0.csv", &csv);
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "zero"},
            "grid": {"x_min": -10.0, "x_max": 10.0, "n": 64},
            "b0_csv": b0.to_str().unwrap()
        })
        .to_string(),
    );
    let out = run_in(
        dir.path(),
        &["evolve", "--config", cfg.to_str().unwrap(), "--dt", "0.01", "--t-final", "0.02"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("ConsistencyWarning"), "stderr: {}", stderr(&out));
}

// ---- asymptote -----------------------------------------------------------

/// Reflectionless scattering document with one mode.
fn one_mode_scattering(dir: &Path) -> PathBuf {
    write(
        dir,
        "sc.json",
        &json!({
            "alpha": -2.0, "beta": 1.0,
            "kgrid": [], "s11": [], "s12": [],
            "modes": [{"k": [0.6, 0.6], "c": [0.9, -0.4]}],
            "unitarity_residual_max": 0.0
        })
        .to_string(),
    )
}

#[test]
fn asymptote_reflectionless_collapses_to_the_soliton() {
    let dir = tempfile::tempdir().unwrap();
    let sc = one_mode_scattering(dir.path());
    // mode velocity -alpha/(4|k|^2) = 2/(4*0.72) ~ 0.694 sits inside (0.4, 1.1)
    let out = run_in(
        dir.path(),
        &[
            "asymptote",
            sc.to_str().unwrap(),
            "--cone",
            "-1,1,0.4,1.1",
            "--t",
            "6.0",
            "--nx",
            "32",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let rows = read_csv(&dir.path().join("asymptote/asym_000.csv"));
    assert_eq!(rows.len(), 32);
    for (x, re, im, b) in rows {
        let (a_want, b_want) = abist_core::soliton::one_soliton_general(
            num_complex::Complex64::new(0.6, 0.6),
            num_complex::Complex64::new(0.9, -0.4),
            x,
            6.0,
            -2.0,
            1.0,
        )
        .unwrap();
        assert!((re - a_want.re).abs() < 1e-8, "A.re at x = {x}");
        assert!((im - a_want.im).abs() < 1e-8, "A.im at x = {x}");
        assert!((b - b_want).abs() < 1e-6, "B at x = {x}");
    }
}

#[test]
fn asymptote_rejects_points_outside_the_cone() {
    let dir = tempfile::tempdir().unwrap();
    let sc = one_mode_scattering(dir.path());
    let cfg = write(dir.path(), "cfg.json", &json!({"x_list": [100.0]}).to_string());
    let out = run_in(
        dir.path(),
        &[
            "asymptote",
            sc.to_str().unwrap(),
            "--config",
            cfg.to_str().unwrap(),
            "--cone",
            "-1,1,0.4,1.1",
            "--t",
            "6.0",
        ],
    );
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("outside the requested cone"), "stderr: {}", stderr(&out));
}

#[test]
fn asymptote_solitonless_field_is_the_radiative_envelope() {
    let dir = tempfile::tempdir().unwrap();
    // smooth synthetic reflection data, no discrete modes
    let n = 601;
    let mut kgrid = Vec::new();
    let mut s11 = Vec::new();
    let mut s12 = Vec::new();
    for i in 0..n {
        let k = -6.0 + 12.0 * i as f64 / (n - 1) as f64;
        let r_mod = 0.5 * (-k * k / 2.0).exp();
        let (s, c) = (0.4 * k).sin_cos();
        let a = 1.0 / (1.0 + r_mod * r_mod).sqrt();
        kgrid.push(k);
        s11.push([a, 0.0]);
        s12.push([r_mod * c * a, r_mod * s * a]);
    }
    let sc = write(
        dir.path(),
        "sc.json",
        &json!({
            "alpha": -2.0, "beta": 1.0,
            "kgrid": kgrid, "s11": s11, "s12": s12,
            "modes": [], "unitarity_residual_max": 0.0
        })
        .to_string(),
    );
    let out = run_in(
        dir.path(),
        &[
            "asymptote",
            sc.to_str().unwrap(),
            "--cone",
            "-1,1,0.5,2.0",
            "--t-list",
            "25.0",
            "--nx",
            "16",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let rows = read_csv(&dir.path().join("asymptote/asym_000.csv"));
    let side = read_json(&dir.path().join("asymptote/coeffs_000.json"));
    let g1 = side["g1"].as_array().unwrap();
    let g2 = side["g2"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    for (i, (_, re, im, _)) in rows.iter().enumerate() {
        let want_re = (g1[i][0].as_f64().unwrap() + g2[i][0].as_f64().unwrap()) / 5.0;
        let want_im = (g1[i][1].as_f64().unwrap() + g2[i][1].as_f64().unwrap()) / 5.0;
        let scale = (want_re * want_re + want_im * want_im).sqrt().max(1e-12);
        assert!(
            ((re - want_re).powi(2) + (im - want_im).powi(2)).sqrt() < 1e-9 * scale.max(1.0),
            "row {i}: field ({re}, {im}) vs envelope ({want_re}, {want_im})"
        );
    }
}

// ---- compare -------------------------------------------------------------

fn synthetic_pair(dir: &Path, t: f64, err: f64, tag: &str) -> (PathBuf, PathBuf) {
    let n = 17;
    let mut a = format!("# t={t} alpha=-2 beta=1\nx,reA,imA,B\n");
    let mut b = a.clone();
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        a.push_str(&format!("{x},0,0,0\n"));
        b.push_str(&format!("{x},{err},0,0\n"));
    }
    (write(dir, &format!("a{tag}.csv"), &a), write(dir, &format!("b{tag}.csv"), &b))
}

#[test]
fn compare_identical_files_report_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (a, _) = synthetic_pair(dir.path(), 1.0, 0.5, "0");
    let out = run_in(dir.path(), &["compare", a.to_str().unwrap(), a.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc = read_json(&dir.path().join("report.json"));
    assert_eq!(doc["linf"].as_f64().unwrap(), 0.0);
    assert_eq!(doc["l2"].as_f64().unwrap(), 0.0);
    assert_eq!(doc["grid_overlap"].as_u64().unwrap(), 17);
}

#[test]
fn compare_fits_the_synthetic_decay_rate() {
    let dir = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = vec!["compare".into()];
    for (i, t) in [5.0f64, 10.0, 20.0, 40.0].iter().enumerate() {
        let (a, b) = synthetic_pair(dir.path(), *t, 3.0 * t.powf(-0.75), &i.to_string());
        args.push(a.to_str().unwrap().into());
        args.push(b.to_str().unwrap().into());
    }
    let out = bin().current_dir(dir.path()).args(&args).output().unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let doc = read_json(&dir.path().join("report.json"));
    let slope = doc["decay_slope"].as_f64().unwrap();
    assert!((slope + 0.75).abs() < 0.01, "slope {slope}");
    assert_eq!(doc["t_range"][0].as_f64().unwrap(), 5.0);
    assert_eq!(doc["t_range"][1].as_f64().unwrap(), 40.0);
}

#[test]
fn compare_two_samples_omits_slope_with_warning() {
    let dir = tempfile::tempdir().unwrap();
    let (a1, b1) = synthetic_pair(dir.path(), 5.0, 0.3, "0");
    let (a2, b2) = synthetic_pair(dir.path(), 10.0, 0.2, "1");
    let out = run_in(
        dir.path(),
        &[
            "compare",
            a1.to_str().unwrap(),
            b1.to_str().unwrap(),
            a2.to_str().unwrap(),
            b2.to_str().unwrap(),
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("decay slope omitted"), "stderr: {}", stderr(&out));
    let doc = read_json(&dir.path().join("report.json"));
    assert!(doc.get("decay_slope").is_none());
    assert!(doc.get("decay_intercept").is_none());
}

#[test]
fn compare_rejects_disjoint_grids() {
    let dir = tempfile::tempdir().unwrap();
    let n = 17;
    let mut a = String::from("# t=1 alpha=-2 beta=1\nx,reA,imA,B\n");
    let mut b = a.clone();
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        a.push_str(&format!("{x},0,0,0\n"));
        b.push_str(&format!("{},0,0,0\n", x + 10.0));
    }
    let pa = write(dir.path(), "a.csv", &a);
    let pb = write(dir.path(), "b.csv", &b);
    let out = run_in(dir.path(), &["compare", pa.to_str().unwrap(), pb.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("do not overlap"), "stderr: {}", stderr(&out));
}

// ---- threads and seed ----------------------------------------------------

#[test]
fn seeded_random_profile_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "random", "bumps": 3, "amplitude": 0.4},
            "grid": {"x_min": -30.0, "x_max": 30.0, "n": 1201},
            "kmin": 0.3, "kmax": 2.3, "nk": 21,
            "spectrum_box": {"re_min": -1.0, "re_max": 1.0, "im_min": 0.05, "im_max": 0.5}
        })
        .to_string(),
    );
    let args = |out: &str, seed: &str| {
        vec![
            "scatter".to_string(),
            "--config".into(),
            cfg.to_str().unwrap().into(),
            "--seed".into(),
            seed.into(),
            "--out".into(),
            out.into(),
        ]
    };
    for (name, seed) in [("s7a.json", "7"), ("s7b.json", "7"), ("s8.json", "8")] {
        let out = bin().current_dir(dir.path()).args(args(name, seed)).output().unwrap();
        assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    }
    let a = std::fs::read(dir.path().join("s7a.json")).unwrap();
    let b = std::fs::read(dir.path().join("s7b.json")).unwrap();
    let c = std::fs::read(dir.path().join("s8.json")).unwrap();
    assert_eq!(a, b, "same seed must reproduce the same bytes");
    assert_ne!(a, c, "different seeds must differ");
}

#[test]
fn thread_cap_flag_and_env_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        &json!({
            "profile": {"kind": "zero"},
            "grid": {"x_min": -10.0, "x_max": 10.0, "n": 64},
            "kmin": 0.3, "kmax": 1.3, "nk": 11,
            "spectrum_box": {"re_min": -0.5, "re_max": 0.5, "im_min": 0.05, "im_max": 0.3}
        })
        .to_string(),
    );
    let out = run_in(
        dir.path(),
        &["scatter", "--config", cfg.to_str().unwrap(), "--threads", "2", "--out", "t2.json"],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let out = bin()
        .current_dir(dir.path())
        .env("ABIST_THREADS", "1")
        .args(["scatter", "--config", cfg.to_str().unwrap(), "--out", "t1.json"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(
        std::fs::read(dir.path().join("t1.json")).unwrap(),
        std::fs::read(dir.path().join("t2.json")).unwrap(),
        "thread cap must not change results"
    );

    let out = run_in(dir.path(), &["scatter", "--config", cfg.to_str().unwrap(), "--threads", "0"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn unknown_config_key_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"profile": {"kind": "zero"}, "dt_max": 1}"#);
    let out = run_in(dir.path(), &["scatter", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("unknown field"), "stderr: {}", stderr(&out));
}
