//! Scalar conjugation machinery: the log-density nu, the cut function delta,
//! the combined function T with its endpoint constants, the trace formula for
//! s11, and the modulated norming constants used by the pole-only models.
//!
//! ```text
//! nu(s)   = -(1/2pi) log(1 + |r(s)|^2)                    (<= 0)
//! delta(k) = exp[ i INT_{-k0}^{k0} nu(s)/(s-k) ds ]
//! T(k)    = prod_{j in Dm} (k - k_j*)/(k - k_j) * delta(k)
//! s11(k)  = prod_j (k - k_j)/(k - k_j*) * exp[ -i INT_R nu(z)/(z-k) dz ]
//! ```
//!
//! All cut integrals are composite Gauss-Legendre with singularity
//! subtraction, so evaluation stays accurate arbitrarily close to the cut
//! (off axis) and right up to cut_guard of the endpoints (on axis).

use rayon::prelude::*;

use crate::quad::composite_gl;
use crate::soliton::{blaschke, blaschke_deriv_at_zero};
use crate::types::{c64, C64, DiscreteMode, ScatteringData, SpectrumPartition};
use crate::{tol, Error, Result};

/// Panels per smooth segment of the cut integrals (10-node panels).
pub const DEFAULT_PANELS: usize = 20;

/// Which boundary value of a cut function to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySide {
    Plus,
    Minus,
}

/// Which stationary point an endpoint quantity refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Plus,
    Minus,
}

/// Samples of nu on a uniform real grid; zero outside the sampled span.
#[derive(Debug, Clone)]
pub struct NuFunction {
    pub k_min: f64,
    pub dk: f64,
    pub values: Vec<f64>,
}

/// nu(s) = -(1/2pi) log(1 + |r(s)|^2), sampled pointwise.
pub fn nu_of(k_min: f64, dk: f64, r_samples: &[C64]) -> NuFunction {
    let values = r_samples
        .iter()
        .map(|r| -(1.0 + r.norm_sqr()).ln() / (2.0 * std::f64::consts::PI))
        .collect();
    NuFunction { k_min, dk, values }
}

impl NuFunction {
    pub fn from_scattering(data: &ScatteringData) -> NuFunction {
        let k_min = data.kgrid.first().copied().unwrap_or(0.0);
        let dk = if data.kgrid.len() > 1 {
            (data.kgrid[data.kgrid.len() - 1] - k_min) / (data.kgrid.len() - 1) as f64
        } else {
            1.0
        };
        nu_of(k_min, dk, &data.r_values())
    }

    pub fn from_samples(k_min: f64, dk: f64, values: Vec<f64>) -> NuFunction {
        NuFunction { k_min, dk, values }
    }

    fn k_max(&self) -> f64 {
        self.k_min + self.dk * (self.values.len() - 1) as f64
    }

    /// Cubic interpolation inside the sampled span, zero outside.
    pub fn eval(&self, s: f64) -> f64 {
        match self.eval_strict(s) {
            Ok(v) => v,
            Err(_) => 0.0,
        }
    }

    /// Cubic interpolation; errors outside the sampled span.
    pub fn eval_strict(&self, s: f64) -> Result<f64> {
        let n = self.values.len();
        if n < 4 || s < self.k_min - 1e-12 || s > self.k_max() + 1e-12 {
            return Err(Error::InterpolationOutOfRange { k: s });
        }
        let pos = (s - self.k_min) / self.dk;
        let i = (pos.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let xs = [0.0, 1.0, 2.0, 3.0];
        let u = pos - i as f64;
        // 4-point Lagrange on the local stencil
        let mut acc = 0.0;
        for (m, &xm) in xs.iter().enumerate() {
            let mut w = 1.0;
            for (l, &xl) in xs.iter().enumerate() {
                if l != m {
                    w *= (u - xl) / (xm - xl);
                }
            }
            acc += w * self.values[i + m];
        }
        Ok(acc)
    }

    /// INT nu(z)/(z - k) dz over the sampled span (tails are zero).
    pub fn cauchy_full_line(&self, k: C64) -> C64 {
        let vals: Vec<C64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let z = self.k_min + self.dk * i as f64;
                v / (z - k)
            })
            .collect();
        crate::quad::trapezoid(&vals, self.dk)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

fn require_k0(k0: f64) -> Result<()> {
    if !(k0 > 0.0) || !k0.is_finite() {
        return Err(Error::Malformed(format!("stationary point {k0} must be positive")));
    }
    Ok(())
}

/// INT_{-k0}^{k0} nu(s)/(s-k) ds by singularity subtraction:
/// subtract nu(s*) with s* the projection of Re k onto the interval, then
/// add the analytic log term for the constant.
fn cut_cauchy(nu: &NuFunction, k0: f64, k: C64) -> C64 {
    let s_star = k.re.clamp(-k0, k0);
    let nu_star = nu.eval(s_star);
    let f = |s: f64| c64(nu.eval(s) - nu_star, 0.0) / (c64(s, 0.0) - k);
    let mut total = c64(0.0, 0.0);
    if s_star - (-k0) > 1e-14 {
        total += composite_gl(&f, -k0, s_star, DEFAULT_PANELS);
    }
    if k0 - s_star > 1e-14 {
        total += composite_gl(&f, s_star, k0, DEFAULT_PANELS);
    }
    // INT ds/(s-k) = Log(k0 - k) - Log(-k0 - k) without branch crossings
    total + nu_star * ((c64(k0, 0.0) - k).ln() - (c64(-k0, 0.0) - k).ln())
}

/// delta(k) off the cut.
pub fn delta_eval(nu: &NuFunction, k0: f64, k: C64) -> Result<C64> {
    require_k0(k0)?;
    if k.im == 0.0 && k.re.abs() < k0 + tol::CUT_GUARD {
        return Err(Error::TooCloseToCut { k: format!("{k}"), guard: tol::CUT_GUARD });
    }
    Ok((c64(0.0, 1.0) * cut_cauchy(nu, k0, k)).exp())
}

/// Boundary values of delta on (-k0, k0): Plemelj with principal value by
/// subtraction plus the analytic log of the constant.
pub fn delta_boundary(nu: &NuFunction, k0: f64, k: f64, side: BoundarySide) -> Result<C64> {
    require_k0(k0)?;
    if k.abs() >= k0 - tol::CUT_GUARD {
        return Err(Error::TooCloseToEndpoint { k, guard: tol::CUT_GUARD });
    }
    let nu_k = nu.eval(k);
    let f = |s: f64| c64(nu.eval(s) - nu_k, 0.0) / c64(s - k, 0.0);
    let pv = composite_gl(&f, -k0, k, DEFAULT_PANELS)
        + composite_gl(&f, k, k0, DEFAULT_PANELS)
        + nu_k * ((k0 - k) / (k0 + k)).ln();
    let half = match side {
        BoundarySide::Plus => c64(0.0, std::f64::consts::PI * nu_k),
        BoundarySide::Minus => c64(0.0, -std::f64::consts::PI * nu_k),
    };
    Ok((c64(0.0, 1.0) * (pv + half)).exp())
}

/// T(k) = prod_{j in Dm} (k-k_j*)/(k-k_j) * delta(k).
pub fn t_eval(nu: &NuFunction, k0: f64, delta_minus_modes: &[C64], k: C64) -> Result<C64> {
    for &kj in delta_minus_modes {
        if (k - kj).norm() < tol::POLE_GUARD {
            return Err(Error::PoleHit {
                k: format!("{k}"),
                pole: format!("{kj}"),
                guard: tol::POLE_GUARD,
            });
        }
    }
    let prod: C64 = delta_minus_modes.iter().map(|&kj| (k - kj.conj()) / (k - kj)).product();
    Ok(prod * delta_eval(nu, k0, k)?)
}

fn window(k0: f64) -> f64 {
    1.0f64.min(2.0 * k0)
}

fn endpoint_blaschke(delta_minus_modes: &[C64], point: f64) -> C64 {
    delta_minus_modes
        .iter()
        .map(|&kj| (point - kj.conj()) / (point - kj))
        .product()
}

/// The regularized endpoint integrals behind T0.  The window of length
/// w = min(1, 2 k0) hugging the endpoint carries the subtracted constant;
/// the remainder integrates nu directly.
fn t0_exponent(nu: &NuFunction, k0: f64, sign: Endpoint) -> f64 {
    let w = window(k0);
    match sign {
        Endpoint::Plus => {
            let nu0 = nu.eval(k0);
            let outer =
                composite_gl(&|z: f64| c64(nu.eval(z) / (z - k0), 0.0), -k0, k0 - w, DEFAULT_PANELS);
            let inner = composite_gl(
                &|z: f64| c64((nu.eval(z) - nu0) / (z - k0), 0.0),
                k0 - w,
                k0,
                DEFAULT_PANELS,
            );
            outer.re + inner.re - nu0 * w.ln()
        }
        Endpoint::Minus => {
            let nu0 = nu.eval(-k0);
            let inner = composite_gl(
                &|z: f64| c64((nu.eval(z) - nu0) / (z + k0), 0.0),
                -k0,
                -k0 + w,
                DEFAULT_PANELS,
            );
            let outer =
                composite_gl(&|z: f64| c64(nu.eval(z) / (z + k0), 0.0), -k0 + w, k0, DEFAULT_PANELS);
            inner.re + outer.re + nu0 * w.ln()
        }
    }
}

/// Unimodular endpoint constants: T(k) ~ T0 (k - k0)^{i nu(k0)} near +k0 and
/// T(k) ~ T0 (k + k0)^{-i nu(-k0)} near -k0, with principal branches.
pub fn t0_refl(nu: &NuFunction, k0: f64, delta_minus_modes: &[C64], sign: Endpoint) -> Result<C64> {
    require_k0(k0)?;
    let point = match sign {
        Endpoint::Plus => k0,
        Endpoint::Minus => -k0,
    };
    let b = endpoint_blaschke(delta_minus_modes, point);
    Ok(b * (c64(0.0, 1.0) * t0_exponent(nu, k0, sign)).exp())
}

/// Endpoint constants in the printed convention: at +k0 this coincides with
/// the unimodular constant; at -k0 the printed singular factor (k+k0)^{+i nu}
/// has its branch cut inside the interval, which contributes the extra real
/// factor e^{-nu(-k0) pi / 2} visible along oblique rays.
pub fn t0_at_phase(
    nu: &NuFunction,
    k0: f64,
    delta_minus_modes: &[C64],
    sign: Endpoint,
) -> Result<C64> {
    let refl = t0_refl(nu, k0, delta_minus_modes, sign)?;
    match sign {
        Endpoint::Plus => Ok(refl),
        Endpoint::Minus => {
            let nu0 = nu.eval(-k0);
            Ok(refl * (-nu0 * std::f64::consts::FRAC_PI_2).exp())
        }
    }
}

/// Trace formula: s11 from the discrete spectrum and the reflection density.
pub fn trace_s11(modes: &[DiscreteMode], nu: &NuFunction, k: C64) -> Result<C64> {
    if k.im == 0.0 {
        return Err(Error::Malformed(format!("trace formula needs off-axis k, got {k}")));
    }
    for m in modes {
        if (k - m.k.conj()).norm() < tol::POLE_GUARD {
            return Err(Error::PoleHit {
                k: format!("{k}"),
                pole: format!("{}", m.k.conj()),
                guard: tol::POLE_GUARD,
            });
        }
    }
    let prod: C64 = modes.iter().map(|m| (k - m.k) / (k - m.k.conj())).product();
    Ok(prod * (c64(0.0, -1.0) * nu.cauchy_full_line(k)).exp())
}

/// Which modulation of the norming constants to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulationVariant {
    /// The sorted-data form: c_j s11,Dm(k_j)^2 delta(k_j)^{-2} off Dm and
    /// the inverted/derivative form on Dm.
    Tilde,
    /// The cone form: c_j times the squared Blaschke factors of the other
    /// retained modes (self-term excluded).
    Cone,
}

/// Modulated norming constants.  Mode positions are unchanged.
pub fn modulate_constants(
    modes: &[DiscreteMode],
    partition: &SpectrumPartition,
    nu: &NuFunction,
    k0: f64,
    variant: ModulationVariant,
) -> Result<Vec<DiscreteMode>> {
    match variant {
        ModulationVariant::Tilde => {
            let dm_ks: Vec<C64> = partition.delta_minus.iter().map(|&j| modes[j].k).collect();
            modes
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    let delta = delta_eval(nu, k0, m.k)?;
                    let c = if let Some(pos) =
                        partition.delta_minus.iter().position(|&idx| idx == j)
                    {
                        let sp = blaschke_deriv_at_zero(pos, &dm_ks);
                        1.0 / (m.c * sp * sp) * delta * delta
                    } else {
                        m.c * blaschke(m.k, &dm_ks).powi(2) / (delta * delta)
                    };
                    Ok(DiscreteMode { k: m.k, c })
                })
                .collect()
        }
        ModulationVariant::Cone => modes
            .iter()
            .enumerate()
            .map(|(j, m)| {
                let mut c = m.c;
                for &n in &partition.inside {
                    if n == j {
                        continue;
                    }
                    let kn = modes[n].k;
                    if (m.k - kn).norm() < tol::POLE_GUARD {
                        return Err(Error::PoleHit {
                            k: format!("{}", m.k),
                            pole: format!("{kn}"),
                            guard: tol::POLE_GUARD,
                        });
                    }
                    let f = (m.k - kn) / (m.k - kn.conj());
                    c *= f * f;
                }
                Ok(DiscreteMode { k: m.k, c })
            })
            .collect(),
    }
}

/// Assembled conjugation quantities at a stationary pair +-k0.
#[derive(Debug, Clone)]
pub struct ConjugationData {
    pub k0: f64,
    /// interior sample abscissas for the boundary values
    pub boundary_ks: Vec<f64>,
    pub delta_plus: Vec<C64>,
    pub delta_minus: Vec<C64>,
    /// k_j for the modes below the k0 circle
    pub delta_minus_modes: Vec<C64>,
    pub t0_plus: C64,
    pub t0_minus: C64,
    /// unimodular variant of t0_minus used by the local model coefficients
    pub t0_minus_refl: C64,
    pub nu_at_k0: f64,
    pub nu_at_minus_k0: f64,
}

impl ConjugationData {
    /// Worst deviation of delta_plus/delta_minus from e^{-2 pi nu} on the
    /// stored interior samples.
    pub fn jump_residual(&self, nu: &NuFunction) -> f64 {
        self.boundary_ks
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let ratio = self.delta_plus[i] / self.delta_minus[i];
                (ratio - (-2.0 * std::f64::consts::PI * nu.eval(k)).exp()).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Evaluate everything the downstream matrix models need at one k0.
pub fn conjugation_data(
    nu: &NuFunction,
    k0: f64,
    delta_minus_modes: &[C64],
) -> Result<ConjugationData> {
    require_k0(k0)?;
    let m = 101usize;
    let inner = k0 - 2.0 * tol::CUT_GUARD;
    let boundary_ks: Vec<f64> = (0..m)
        .map(|i| -inner + 2.0 * inner * i as f64 / (m - 1) as f64)
        .filter(|k| k.abs() < k0 - tol::CUT_GUARD)
        .collect();
    let both: Result<Vec<(C64, C64)>> = boundary_ks
        .par_iter()
        .map(|&k| {
            Ok((
                delta_boundary(nu, k0, k, BoundarySide::Plus)?,
                delta_boundary(nu, k0, k, BoundarySide::Minus)?,
            ))
        })
        .collect();
    let both = both?;
    Ok(ConjugationData {
        k0,
        boundary_ks,
        delta_plus: both.iter().map(|p| p.0).collect(),
        delta_minus: both.iter().map(|p| p.1).collect(),
        delta_minus_modes: delta_minus_modes.to_vec(),
        t0_plus: t0_at_phase(nu, k0, delta_minus_modes, Endpoint::Plus)?,
        t0_minus: t0_at_phase(nu, k0, delta_minus_modes, Endpoint::Minus)?,
        t0_minus_refl: t0_refl(nu, k0, delta_minus_modes, Endpoint::Minus)?,
        nu_at_k0: nu.eval(k0),
        nu_at_minus_k0: nu.eval(-k0),
    })
}
