//! The six subcommands.  Each one reads inputs, drives the core library,
//! writes canonical JSON / field CSV artifacts, and prints a one-line
//! summary.  Warnings go to stderr.

use abist_core::compare::{compare_fields, series_report, CompareReport};
use abist_core::jost::{find_discrete_spectrum, norming_constants, scattering_data};
use abist_core::pc::{theorem2_profile, AsymOptions};
use abist_core::soliton::{synthesize_field, ReflectionlessData};
use abist_core::types::{fmt_f64, DiscreteMode, FieldSnapshot};
use abist_core::{evolve, json};
use abist_core::{Error, Result};
use serde_json::{Map, Value};
use std::path::{Path, PathBuf};

use crate::config::{build_profile, Config};

fn out_path(out: Option<&Path>, default: &str) -> PathBuf {
    out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(default))
}

/// Direct transform of the configured profile to scattering data on disk.
pub fn cmd_scatter(
    cfg: &Config,
    seed: Option<u64>,
    kmin: Option<f64>,
    kmax: Option<f64>,
    nk: Option<usize>,
    out: Option<&Path>,
) -> Result<()> {
    let profile = build_profile(cfg, seed)?;
    let kgrid = cfg.k_axis(kmin, kmax, nk)?;
    let (re, im) = cfg.spectrum_box();
    let data = scattering_data(&profile, &kgrid, re, im)?;
    let path = out_path(out, "scattering.json");
    json::write_scattering(&path, &data)?;
    println!(
        "scatter: {} k samples, {} discrete modes, unitarity residual {:.3e} -> {}",
        data.kgrid.len(),
        data.modes.len(),
        data.unitarity_residual_max,
        path.display()
    );
    Ok(())
}

/// Discrete spectrum (poles and norming constants) of the configured profile.
pub fn cmd_spectrum(cfg: &Config, seed: Option<u64>, out: Option<&Path>) -> Result<()> {
    let profile = build_profile(cfg, seed)?;
    let (re, im) = cfg.spectrum_box();
    let roots = find_discrete_spectrum(&profile, re, im)?;
    let modes = norming_constants(&profile, &roots)?;
    let mut map = Map::new();
    map.insert("alpha".into(), json::float_value(profile.alpha));
    map.insert("beta".into(), json::float_value(profile.beta));
    map.insert(
        "modes".into(),
        Value::Array(
            modes
                .iter()
                .map(|m| {
                    let mut mm = Map::new();
                    mm.insert("k".into(), json::complex_value(m.k));
                    mm.insert("c".into(), json::complex_value(m.c));
                    Value::Object(mm)
                })
                .collect(),
        ),
    );
    let path = out_path(out, "spectrum.json");
    std::fs::write(&path, json::canonical(&Value::Object(map))?)?;
    println!("spectrum: {} modes -> {}", modes.len(), path.display());
    Ok(())
}

/// Modes file: either a full scattering document or a bare
/// {"alpha", "beta", "modes"} object.
fn read_modes(path: &Path) -> Result<(f64, f64, Vec<DiscreteMode>)> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    if v.get("kgrid").is_some() {
        let d = json::scattering_from_value(&v)?;
        return Ok((d.alpha, d.beta, d.modes));
    }
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Malformed("modes file must be a JSON object".into()))?;
    let get = |k: &str| {
        obj.get(k).ok_or_else(|| Error::Malformed(format!("modes file missing '{k}'")))
    };
    let alpha = json::float_from_value(get("alpha")?)?;
    let beta = json::float_from_value(get("beta")?)?;
    let modes = get("modes")?
        .as_array()
        .ok_or_else(|| Error::Malformed("'modes' must be an array".into()))?
        .iter()
        .map(|mv| {
            let mm = mv
                .as_object()
                .ok_or_else(|| Error::Malformed("each mode must be an object".into()))?;
            Ok(DiscreteMode {
                k: json::complex_from_value(
                    mm.get("k").ok_or_else(|| Error::Malformed("mode missing 'k'".into()))?,
                )?,
                c: json::complex_from_value(
                    mm.get("c").ok_or_else(|| Error::Malformed("mode missing 'c'".into()))?,
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((alpha, beta, modes))
}

/// Reflectionless field synthesis at one time, written as field CSV.
pub fn cmd_soliton(modes_path: &Path, cfg: &Config, t: Option<f64>, out: Option<&Path>) -> Result<()> {
    let (alpha, beta, modes) = read_modes(modes_path)?;
    let data = ReflectionlessData::new(modes, alpha, beta)?;
    let grid = cfg.grid()?;
    let t = t.or(cfg.t).unwrap_or(0.0);
    let snap = synthesize_field(&data, grid, t)?;
    let path = out_path(out, "field.csv");
    std::fs::write(&path, snap.to_csv())?;
    println!("soliton: {} samples at t = {} -> {}", grid.n, t, path.display());
    Ok(())
}

/// Causal PDE evolution; writes snapshot CSVs plus a meta document.
pub fn cmd_evolve(
    cfg: &Config,
    seed: Option<u64>,
    dt: Option<f64>,
    t_final: Option<f64>,
    snapshot_every: Option<usize>,
    out: Option<&Path>,
) -> Result<()> {
    let profile = build_profile(cfg, seed)?;
    let dt = dt.or(cfg.dt).unwrap_or(evolve::DT_MAX);
    let t_final = t_final
        .or(cfg.t_final)
        .ok_or_else(|| Error::Malformed("evolve needs --t-final or a \"t_final\" config entry".into()))?;
    let every = snapshot_every.or(cfg.snapshot_every).unwrap_or_else(|| {
        ((t_final / dt / 10.0).round() as usize).max(1)
    });

    if let Some(b0p) = &cfg.b0_csv {
        let text = std::fs::read_to_string(b0p)?;
        let given = FieldSnapshot::from_csv(&text)?;
        if given.grid.n != profile.grid.n {
            return Err(Error::BadGrid);
        }
        if let Some(warning) = evolve::b0_consistency(&profile, &given.b)? {
            eprintln!("{warning}");
        }
    }

    let traj = evolve::evolve(&profile, t_final, dt, every)?;
    let dir = out_path(out, "trajectory");
    std::fs::create_dir_all(&dir)?;
    for (i, snap) in traj.snapshots.iter().enumerate() {
        std::fs::write(dir.join(format!("snap_{i:05}.csv")), snap.to_csv())?;
    }

    let first = &traj.snapshots[0];
    let last = traj.snapshots.last().unwrap();
    let moved = last.t > first.t;
    let peak_speed = if moved
        && first.a.iter().map(|v| v.norm()).fold(0.0, f64::max) > 1e-8
    {
        Some(
            (evolve::peak_position(last) - evolve::peak_position(first)) / (last.t - first.t),
        )
    } else {
        None
    };

    let mut meta = Map::new();
    meta.insert("dt".into(), json::float_value(traj.dt));
    meta.insert("dx".into(), json::float_value(profile.grid.dx));
    meta.insert("t_final".into(), json::float_value(last.t));
    meta.insert("n_snapshots".into(), Value::from(traj.snapshots.len()));
    meta.insert(
        "compat_residuals".into(),
        Value::Array(traj.compat_residuals.iter().map(|&r| json::float_value(r)).collect()),
    );
    if let Some(v) = peak_speed {
        meta.insert("peak_speed".into(), json::float_value(v));
    }
    std::fs::write(dir.join("meta.json"), json::canonical(&Value::Object(meta))?)?;

    match peak_speed {
        Some(v) => println!(
            "evolve: {} snapshots to t = {} -> {}; peak speed {v:.6}",
            traj.snapshots.len(),
            last.t,
            dir.display()
        ),
        None => println!(
            "evolve: {} snapshots to t = {} -> {}; peak speed n/a",
            traj.snapshots.len(),
            last.t,
            dir.display()
        ),
    }
    Ok(())
}

/// Long-time field inside a velocity cone, one CSV + coefficient sidecar
/// per requested time.
pub fn cmd_asymptote(
    scattering_path: &Path,
    cfg: &Config,
    cone_flag: Option<&str>,
    t_flag: Option<f64>,
    t_list_flag: Option<Vec<f64>>,
    nx: Option<usize>,
    out: Option<&Path>,
) -> Result<()> {
    let data = json::read_scattering(scattering_path)?;
    let cone = cfg.cone(cone_flag)?;
    let ts: Vec<f64> = match (t_list_flag, t_flag) {
        (Some(list), _) => list,
        (None, Some(t)) => vec![t],
        (None, None) => cfg
            .t_list
            .clone()
            .or_else(|| cfg.t.map(|t| vec![t]))
            .ok_or_else(|| Error::Malformed("asymptote needs --t or --t-list".into()))?,
    };
    if ts.is_empty() {
        return Err(Error::Malformed("asymptote needs a non-empty time list".into()));
    }
    let nx = nx.or(cfg.nx).unwrap_or(201).max(16);
    let opts = AsymOptions::default();
    let dir = out_path(out, "asymptote");
    std::fs::create_dir_all(&dir)?;

    for (j, &t) in ts.iter().enumerate() {
        let points: Vec<(f64, f64)> = match &cfg.x_list {
            Some(xs) => xs.iter().map(|&x| (x, t)).collect(),
            None => {
                // sample the cone section, inset slightly from the edges where
                // the phase endpoints sit on the spectral cut boundary
                let lo = cone.x1 + cone.v1 * t;
                let hi = cone.x2 + cone.v2 * t;
                let w = hi - lo;
                let (lo, hi) = (lo + 5e-3 * w, hi - 5e-3 * w);
                (0..nx).map(|i| (lo + (hi - lo) * i as f64 / (nx - 1) as f64, t)).collect()
            }
        };
        let rows = theorem2_profile(&data, &cone, &points, &opts)?;

        let mut csv = String::new();
        csv.push_str(&format!(
            "# t={} alpha={} beta={}\n",
            fmt_f64(t),
            fmt_f64(data.alpha),
            fmt_f64(data.beta)
        ));
        csv.push_str("x,reA,imA,B\n");
        for ((x, _), (a, b, _)) in points.iter().zip(&rows) {
            csv.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(*x),
                fmt_f64(a.re),
                fmt_f64(a.im),
                fmt_f64(*b)
            ));
        }
        std::fs::write(dir.join(format!("asym_{j:03}.csv")), csv)?;

        let mut side = Map::new();
        side.insert("t".into(), json::float_value(t));
        side.insert(
            "x".into(),
            Value::Array(points.iter().map(|&(x, _)| json::float_value(x)).collect()),
        );
        side.insert(
            "k0".into(),
            Value::Array(rows.iter().map(|(_, _, c)| json::float_value(c.k0)).collect()),
        );
        for (name, pick) in [
            ("g1", 0usize),
            ("g2", 1),
            ("h1", 2),
            ("h2", 3),
            ("f1", 4),
            ("f2", 5),
        ] {
            side.insert(
                name.into(),
                Value::Array(
                    rows.iter()
                        .map(|(_, _, c)| {
                            let z = [c.g1, c.g2, c.h1, c.h2, c.f1, c.f2][pick];
                            json::complex_value(z)
                        })
                        .collect(),
                ),
            );
        }
        std::fs::write(dir.join(format!("coeffs_{j:03}.json")), json::canonical(&Value::Object(side))?)?;
    }
    println!("asymptote: {} time slices, {} points each -> {}", ts.len(),
        cfg.x_list.as_ref().map(|v| v.len()).unwrap_or(nx), dir.display());
    Ok(())
}

/// Compare paired field CSVs and, across several times, fit the decay rate.
pub fn cmd_compare(files: &[PathBuf], out: Option<&Path>) -> Result<()> {
    if files.len() < 2 || files.len() % 2 != 0 {
        return Err(Error::Malformed(format!(
            "compare expects an even number of field files (a b [a b ...]), got {}",
            files.len()
        )));
    }
    let mut per: Vec<(f64, CompareReport)> = Vec::new();
    for pair in files.chunks(2) {
        let sa = FieldSnapshot::from_csv(&std::fs::read_to_string(&pair[0])?)?;
        let sb = FieldSnapshot::from_csv(&std::fs::read_to_string(&pair[1])?)?;
        per.push((sa.t, compare_fields(&sa, &sb)?));
    }
    let agg = series_report(&per)?;
    if per.len() >= 2 && agg.decay_slope.is_none() {
        eprintln!(
            "warning: decay slope omitted; a least-squares fit needs at least 4 time samples \
             with positive errors, got {}",
            per.len()
        );
    }

    let mut map = Map::new();
    map.insert("linf".into(), json::float_value(agg.linf));
    map.insert("l2".into(), json::float_value(agg.l2));
    map.insert("grid_overlap".into(), Value::from(agg.grid_overlap));
    map.insert(
        "t_range".into(),
        Value::Array(vec![json::float_value(agg.t_range.0), json::float_value(agg.t_range.1)]),
    );
    map.insert(
        "samples".into(),
        Value::Array(
            per.iter()
                .map(|(t, r)| {
                    Value::Array(vec![json::float_value(*t), json::float_value(r.linf)])
                })
                .collect(),
        ),
    );
    if let Some(s) = agg.decay_slope {
        map.insert("decay_slope".into(), json::float_value(s));
    }
    if let Some(c) = agg.decay_intercept {
        map.insert("decay_intercept".into(), json::float_value(c));
    }
    let path = out_path(out, "report.json");
    std::fs::write(&path, json::canonical(&Value::Object(map))?)?;

    match agg.decay_slope {
        Some(s) => println!(
            "compare: linf {:.6e}, l2 {:.6e}, decay slope {s:.4} -> {}",
            agg.linf,
            agg.l2,
            path.display()
        ),
        None => println!(
            "compare: linf {:.6e}, l2 {:.6e} -> {}",
            agg.linf,
            agg.l2,
            path.display()
        ),
    }
    Ok(())
}
