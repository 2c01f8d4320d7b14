//! Phase function, stationary points, soliton velocities and spectrum
//! partitions.
//!
//! The oscillatory kernel everywhere downstream is exp(2 i t theta(k)) with
//!   theta(k) = k x/t - alpha/(4k),
//! which for alpha < 0, x > 0, t > 0 has the two real stationary points
//! +-k0, k0 = sqrt(-alpha t / (4x)).  A mode k_j moves with velocity
//! v = -alpha/(4 |k_j|^2); the map between velocity windows and modulus
//! annuli is f(v) = sqrt(-alpha/(4v)).

use crate::types::{C64, ConeSpec, DiscreteMode, SpectrumPartition};
use crate::{tol, Error, Result};

/// Modes whose modulus sits this close (relatively) to a partition boundary
/// are ambiguous at double precision and get rejected.
const BOUNDARY_GUARD: f64 = 1e-12;

fn guard_k(k: C64) -> Result<()> {
    if k.norm() < tol::POLE_GUARD {
        return Err(Error::ZeroSpectralParameter(k.norm()));
    }
    Ok(())
}

/// theta(k) = k x/t - alpha/(4k).  Requires t > 0; use [`t_theta`] when a
/// formula must survive t = 0.
pub fn theta(k: C64, x: f64, t: f64, alpha: f64) -> Result<C64> {
    guard_k(k)?;
    Ok(k * (x / t) - alpha / (4.0 * k))
}

/// t * theta(k) = k x - alpha t/(4k); well defined for every real t.
pub fn t_theta(k: C64, x: f64, t: f64, alpha: f64) -> Result<C64> {
    guard_k(k)?;
    Ok(k * x - (alpha * t) / (4.0 * k))
}

/// exp(2 i t theta(k)), the driving exponential of the residue ansatz.
pub fn exp_2it_theta(k: C64, x: f64, t: f64, alpha: f64) -> Result<C64> {
    Ok((C64::new(0.0, 2.0) * t_theta(k, x, t, alpha)?).exp())
}

/// Re(i theta(k)) along the ray with stationary radius k0:
/// (Im k) * alpha/4 * (1/k0^2 - 1/|k|^2).  Zero exactly on the circle
/// |k| = k0 and on the real axis; its sign decides which triangular factor
/// a residue belongs to.
pub fn re_i_theta(k: C64, k0: f64, alpha: f64) -> Result<f64> {
    guard_k(k)?;
    Ok(k.im * 0.25 * alpha * (1.0 / (k0 * k0) - 1.0 / k.norm_sqr()))
}

/// Stationary radius k0 = sqrt(-alpha t / (4x)).  The decaying regime needs
/// alpha x < 0 and t > 0.
pub fn stationary_point(x: f64, t: f64, alpha: f64) -> Result<f64> {
    if alpha * x >= 0.0 || t <= 0.0 {
        return Err(Error::WrongSignRegime { x, t, alpha });
    }
    Ok((-alpha * t / (4.0 * x)).sqrt())
}

/// Soliton velocity v = -alpha / (4 |k_j|^2).
pub fn soliton_velocity(k: C64, alpha: f64) -> Result<f64> {
    guard_k(k)?;
    Ok(-alpha / (4.0 * k.norm_sqr()))
}

/// f(v) = sqrt(-alpha/(4v)): modulus of the modes travelling at velocity v.
/// Inverse of [`soliton_velocity`] on moduli.
pub fn velocity_radius(v: f64, alpha: f64) -> f64 {
    (-alpha / (4.0 * v)).sqrt()
}

/// Open modulus interval swept by the cone's velocity window:
/// (f(v2), f(v1)), decreasing f makes the order come out right.
pub fn spectral_interval(cone: &ConeSpec, alpha: f64) -> Result<(f64, f64)> {
    let lo = velocity_radius(cone.v2, alpha);
    let hi = velocity_radius(cone.v1, alpha);
    if !(lo < hi) {
        return Err(Error::EmptyInterval { v1: cone.v1, v2: cone.v2 });
    }
    Ok((lo, hi))
}

/// One admissible space-time point of the slow-decay regime together with
/// its stationary radius.
#[derive(Debug, Clone, Copy)]
pub struct PhasePoint {
    pub k0: f64,
    pub x: f64,
    pub t: f64,
    pub alpha: f64,
}

impl PhasePoint {
    pub fn new(x: f64, t: f64, alpha: f64) -> Result<Self> {
        Ok(PhasePoint { k0: stationary_point(x, t, alpha)?, x, t, alpha })
    }
}

fn check_boundary(m: f64, boundary: f64) -> Result<()> {
    if (m - boundary).abs() <= BOUNDARY_GUARD * boundary.abs().max(1.0) {
        return Err(Error::DegenerateBoundary { kj: m, boundary });
    }
    Ok(())
}

/// Classify every mode by modulus against the interval (cone membership)
/// and against k0 (conjugation orientation).  Boundary coincidences are
/// rejected: the asymptotics downstream assume strict separation.
pub fn partition_spectrum(
    modes: &[DiscreteMode],
    k0: f64,
    interval: (f64, f64),
) -> Result<SpectrumPartition> {
    let (lo, hi) = interval;
    let mut p = SpectrumPartition::default();
    for (j, mode) in modes.iter().enumerate() {
        let m = mode.k.norm();
        check_boundary(m, lo)?;
        check_boundary(m, hi)?;
        check_boundary(m, k0)?;
        if m < lo {
            p.below.push(j);
        } else if m > hi {
            p.above.push(j);
        } else {
            p.inside.push(j);
        }
        if m < k0 {
            p.delta_minus.push(j);
        } else {
            p.delta_plus.push(j);
        }
    }
    Ok(p)
}

/// Slowest exponential rate at which the dropped modes separate from the
/// cone: mu = min over excluded modes of Im(k_j) * dist(v_j, [v1, v2]).
/// An empty exclusion set costs nothing, hence +inf.
pub fn decay_rate_mu(excluded: &[DiscreteMode], cone: &ConeSpec, alpha: f64) -> Result<f64> {
    let mut mu = f64::INFINITY;
    for mode in excluded {
        let v = soliton_velocity(mode.k, alpha)?;
        let dist = if v < cone.v1 {
            cone.v1 - v
        } else if v > cone.v2 {
            v - cone.v2
        } else {
            return Err(Error::ModeInsideCone { v, v1: cone.v1, v2: cone.v2 });
        };
        mu = mu.min(mode.k.im * dist);
    }
    Ok(mu)
}
