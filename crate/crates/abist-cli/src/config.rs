//! The configuration document: one JSON object shared by every subcommand.
//! Explicit CLI flags always override the corresponding config fields.

use abist_core::soliton::one_soliton_general;
use abist_core::types::{c64, C64, ConeSpec, Grid, InitialProfile};
use abist_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use std::path::Path;

fn one() -> f64 {
    1.0
}
fn three() -> usize {
    3
}
fn half() -> f64 {
    0.5
}

/// Analytic initial-profile families the harness can synthesize.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Zero,
    Sech {
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
        #[serde(default)]
        center: f64,
        #[serde(default)]
        chirp: f64,
    },
    Gauss {
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
        #[serde(default)]
        center: f64,
        #[serde(default)]
        chirp: f64,
    },
    /// Exact one-soliton slice at t = 0 for pole k and norming constant c.
    Soliton { k: [f64; 2], c: [f64; 2] },
    /// Seeded sum of smooth chirped bumps (reproducible via --seed).
    Random {
        #[serde(default = "three")]
        bumps: usize,
        #[serde(default = "half")]
        amplitude: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeFields {
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
    pub v2: f64,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub profile: Option<ProfileSpec>,
    pub grid: Option<GridSpec>,
    pub kmin: Option<f64>,
    pub kmax: Option<f64>,
    pub nk: Option<usize>,
    pub spectrum_box: Option<BoxSpec>,
    pub dt: Option<f64>,
    pub t_final: Option<f64>,
    pub snapshot_every: Option<usize>,
    pub cone: Option<ConeFields>,
    pub t: Option<f64>,
    pub t_list: Option<Vec<f64>>,
    /// Evaluate the long-time formulas at these x instead of a cone slice.
    pub x_list: Option<Vec<f64>>,
    pub nx: Option<usize>,
    pub seed: Option<u64>,
    /// Optional field CSV whose B column is checked against the B the
    /// x-slice integration implies for the configured profile.
    pub b0_csv: Option<String>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config> {
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::Malformed(format!("config {}: {e}", p.display())))
            }
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.unwrap_or(-2.0)
    }

    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or(1.0)
    }

    pub fn grid(&self) -> Result<Grid> {
        match self.grid {
            Some(g) => Grid::new(g.x_min, g.x_max, g.n),
            None => Grid::new(-30.0, 30.0, 3001),
        }
    }

    pub fn k_axis(&self, kmin: Option<f64>, kmax: Option<f64>, nk: Option<usize>) -> Result<Vec<f64>> {
        let lo = kmin.or(self.kmin).unwrap_or(-6.0);
        let hi = kmax.or(self.kmax).unwrap_or(6.0);
        let n = nk.or(self.nk).unwrap_or(1201);
        if !(lo < hi) || n < 4 {
            return Err(Error::Malformed(format!(
                "k axis needs kmin < kmax and nk >= 4 (got {lo}, {hi}, {n})"
            )));
        }
        let dk = (hi - lo) / (n - 1) as f64;
        Ok((0..n).map(|i| lo + dk * i as f64).collect())
    }

    pub fn spectrum_box(&self) -> ((f64, f64), (f64, f64)) {
        match self.spectrum_box {
            Some(b) => ((b.re_min, b.re_max), (b.im_min, b.im_max)),
            None => ((-3.0, 3.0), (0.05, 3.0)),
        }
    }

    pub fn cone(&self, flag: Option<&str>) -> Result<ConeSpec> {
        if let Some(text) = flag {
            let parts: Vec<f64> = text
                .split(',')
                .map(|p| p.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Malformed(format!("--cone expects x1,x2,v1,v2: {e}")))?;
            if parts.len() != 4 {
                return Err(Error::Malformed(format!(
                    "--cone expects exactly four numbers, got {}",
                    parts.len()
                )));
            }
            return ConeSpec::new(parts[0], parts[1], parts[2], parts[3]);
        }
        match self.cone {
            Some(c) => ConeSpec::new(c.x1, c.x2, c.v1, c.v2),
            None => Err(Error::Malformed(
                "a cone is required: pass --cone x1,x2,v1,v2 or a \"cone\" config entry".into(),
            )),
        }
    }
}

/// Materialize the configured profile on the configured grid.
pub fn build_profile(cfg: &Config, seed: Option<u64>) -> Result<InitialProfile> {
    let grid = cfg.grid()?;
    let (alpha, beta) = (cfg.alpha(), cfg.beta());
    let spec = cfg
        .profile
        .as_ref()
        .ok_or_else(|| Error::Malformed("config needs a \"profile\" entry".into()))?;
    let a: Vec<C64> = match spec {
        ProfileSpec::Zero => grid.xs().map(|_| c64(0.0, 0.0)).collect(),
        ProfileSpec::Sech { amplitude, width, center, chirp } => grid
            .xs()
            .map(|x| {
                c64(0.0, chirp * x).exp() * (amplitude / ((x - center) / width).cosh())
            })
            .collect(),
        ProfileSpec::Gauss { amplitude, width, center, chirp } => grid
            .xs()
            .map(|x| {
                let u = (x - center) / width;
                c64(0.0, chirp * x).exp() * (amplitude * (-0.5 * u * u).exp())
            })
            .collect(),
        ProfileSpec::Soliton { k, c } => {
            let (k1, c1) = (c64(k[0], k[1]), c64(c[0], c[1]));
            grid.xs()
                .map(|x| one_soliton_general(k1, c1, x, 0.0, alpha, beta).map(|ab| ab.0))
                .collect::<Result<_>>()?
        }
        ProfileSpec::Random { bumps, amplitude } => {
            let seed = seed.or(cfg.seed).unwrap_or(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let span = grid.x_max() - grid.x_min;
            let mid = 0.5 * (grid.x_min + grid.x_max());
            let params: Vec<(f64, f64, f64, f64)> = (0..*bumps)
                .map(|_| {
                    (
                        mid + rng.gen_range(-0.15..0.15) * span,
                        rng.gen_range(0.6..1.6),
                        rng.gen_range(0.3..1.0) * amplitude,
                        rng.gen_range(-0.6..0.6),
                    )
                })
                .collect();
            grid.xs()
                .map(|x| {
                    let mut v = c64(0.0, 0.0);
                    for &(ctr, w, amp, chirp) in &params {
                        let u = (x - ctr) / w;
                        v += c64(0.0, chirp * x).exp() * (amp * (-0.5 * u * u).exp());
                    }
                    v
                })
                .collect()
        }
    };
    InitialProfile::new(grid, a, alpha, beta)
}
