//! Parabolic-cylinder local-model coefficients at the stationary pair and
//! the long-time evaluator that combines the outer (soliton) model with the
//! t^{-1/2} radiation corrections inside an observation cone.

use rayon::prelude::*;

use crate::conjugation::{
    conjugation_data, delta_eval, modulate_constants, ConjugationData, Endpoint,
    ModulationVariant, NuFunction,
};
use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::phase::{partition_spectrum, spectral_interval, stationary_point};
use crate::soliton::{mout_at_phase, solve_reflectionless, ReflectionlessData};
use crate::tol;
use crate::types::{c64, ConeSpec, DiscreteMode, Mat2, ScatteringData, C64};

const SQRT_2PI: f64 = 2.5066282746310002;

/// Local-model constants at one endpoint of the stationary pair.
#[derive(Debug, Clone, Copy)]
pub struct PCCoefficients {
    /// nu at the phase point (always <= 0)
    pub nu0: f64,
    /// modulated reflection constant r_{+-k0}
    pub r_hat: C64,
    pub xi12: C64,
    pub xi21: C64,
}

/// Everything the long-time formulas report alongside the fields.
#[derive(Debug, Clone, Copy)]
pub struct AsymCoeffs {
    pub k0: f64,
    pub g1: C64,
    pub g2: C64,
    pub h1: C64,
    pub h2: C64,
    pub f1: C64,
    pub f2: C64,
    pub mout_plus: Mat2,
    pub mout_minus: Mat2,
}

/// Evaluation switches for the long-time formulas.
#[derive(Debug, Clone, Copy, Default)]
pub struct AsymOptions {
    /// Flip the sign convention of the nu-log phase inside r_{+-k0}
    /// (alternative bookkeeping for the scale substitution; moduli and the
    /// double-scaled identity are unaffected).
    pub flip_rhat_log_phase: bool,
}

/// Interpolate the reflection coefficient at a real k from sampled data.
/// The sample grid is treated as uniform (first/step from its ends).
pub fn interp_reflection(data: &ScatteringData, k: f64) -> Result<C64> {
    if data.kgrid.len() < 4 {
        return Err(Error::InterpolationOutOfRange { k });
    }
    let k_min = data.kgrid[0];
    let dk = (data.kgrid[data.kgrid.len() - 1] - k_min) / (data.kgrid.len() - 1) as f64;
    let r = data.r_values();
    crate::quad::interp_uniform(k_min, dk, &r, k).ok_or(Error::InterpolationOutOfRange { k })
}

/// sqrt(-k0^3/(alpha t)), the local scale of the parabolic disk.
fn disk_scale(k0: f64, alpha: f64, t: f64) -> f64 {
    (-k0.powi(3) / (alpha * t)).sqrt()
}

/// The modulated reflection constant at +-k0.
///
/// At +k0 the substitution (k - k0) = sqrt(-k0^3/(alpha t)) zeta turns the
/// (k-k0)^{-2 i nu} weight into e^{-i nu (ln k0^3 - ln(-alpha t))} times the
/// zeta power, and the stationary value of the phase contributes
/// e^{-i alpha t / k0}; the cubic remainder of the phase expansion is
/// dropped (it belongs to the shrinking-disk error).  At -k0 both signs
/// mirror.  The endpoint constant T0 replaces the delta boundary value,
/// which has no limit at the endpoints; the unimodular variant is required
/// so that |r_hat| = |r(+-k0)|, which the Weber-model identities assume.
pub fn modulated_r_at_phase(
    data: &ScatteringData,
    conj: &ConjugationData,
    t: f64,
    sign: Endpoint,
    opts: &AsymOptions,
) -> Result<C64> {
    if t <= 0.0 {
        return Err(Error::Malformed(format!("long-time evaluation needs t > 0, got {t}")));
    }
    if data.alpha >= 0.0 {
        return Err(Error::BadAlpha(data.alpha));
    }
    let k0 = conj.k0;
    let log_ratio = 3.0 * k0.ln() - (-data.alpha * t).ln();
    let (r0, t0, nu0, nu_sign, phase_sign) = match sign {
        Endpoint::Plus => (
            interp_reflection(data, k0)?,
            conj.t0_plus,
            conj.nu_at_k0,
            if opts.flip_rhat_log_phase { 1.0 } else { -1.0 },
            -1.0,
        ),
        Endpoint::Minus => (
            interp_reflection(data, -k0)?,
            conj.t0_minus_refl,
            conj.nu_at_minus_k0,
            if opts.flip_rhat_log_phase { -1.0 } else { 1.0 },
            1.0,
        ),
    };
    let nu_phase = c64(0.0, nu_sign * nu0 * log_ratio).exp();
    let stationary = c64(0.0, phase_sign * data.alpha * t / k0).exp();
    Ok(r0 / (t0 * t0) * nu_phase * stationary)
}

/// The Weber-model expansion constants.  Xi21 is produced through the
/// product identity Xi12 Xi21 = nu0, which the printed second display is
/// equivalent to (checked in tests against the literal form).
pub fn xi_coefficients(r_hat: C64, nu0: f64, sign: Endpoint) -> Result<(C64, C64)> {
    if nu0.abs() > 50.0 {
        return Err(Error::GammaOverflow(format!("nu = {nu0} too large for the Weber constants")));
    }
    if r_hat.norm() == 0.0 || nu0 == 0.0 {
        return Ok((c64(0.0, 0.0), c64(0.0, 0.0)));
    }
    let quarter = std::f64::consts::FRAC_PI_4;
    let envelope = (-std::f64::consts::PI * nu0 / 2.0).exp();
    let xi12 = match sign {
        Endpoint::Plus => {
            SQRT_2PI * c64(0.0, quarter).exp() * envelope / (r_hat * gamma(c64(0.0, -nu0)))
        }
        Endpoint::Minus => {
            SQRT_2PI * c64(0.0, -quarter).exp() * envelope / (r_hat * gamma(c64(0.0, nu0)))
        }
    };
    Ok((xi12, nu0 / xi12))
}

/// Bundle the local-model constants at one endpoint.
pub fn pc_coefficients(
    data: &ScatteringData,
    conj: &ConjugationData,
    t: f64,
    sign: Endpoint,
    opts: &AsymOptions,
) -> Result<PCCoefficients> {
    let nu0 = match sign {
        Endpoint::Plus => conj.nu_at_k0,
        Endpoint::Minus => conj.nu_at_minus_k0,
    };
    let r_hat = modulated_r_at_phase(data, conj, t, sign, opts)?;
    let (xi12, xi21) = xi_coefficients(r_hat, nu0, sign)?;
    Ok(PCCoefficients { nu0, r_hat, xi12, xi21 })
}

/// Leading expansion matrix of the local model: off-diagonal in the Xis.
pub fn m1_pc(xi12: C64, xi21: C64) -> Mat2 {
    Mat2([[c64(0.0, 0.0), xi12], [-xi21, c64(0.0, 0.0)]])
}

/// Leading large-k coefficient of the error matrix: the two disk
/// contributions conjugated by the outer model, with the printed relative
/// minus between the endpoints.
pub fn m1_err(
    mout_plus: &Mat2,
    mout_minus: &Mat2,
    m1pc_plus: &Mat2,
    m1pc_minus: &Mat2,
    k0: f64,
    alpha: f64,
    t: f64,
) -> Result<Mat2> {
    for m in [mout_plus, mout_minus] {
        let drift = (m.det() - 1.0).norm();
        if drift > 1e-9 {
            return Err(Error::NonUnimodularMout(drift));
        }
    }
    let s = disk_scale(k0, alpha, t);
    let plus = mout_plus.mul(m1pc_plus).mul(&mout_plus.inv());
    let minus = mout_minus.mul(m1pc_minus).mul(&mout_minus.inv());
    // (1/i) s [.]_{+k0} - (1/i) s [.]_{-k0}
    Ok(plus.sub(&minus).scale(c64(0.0, -s)))
}

/// One endpoint's share of the three correction families, all built from
/// the same outer-model entries m_{ij} and local constants:
///   g-term: m12^2 Xi21 + m11^2 Xi12   (feeds A)
///   p-term: m12 m22 Xi21 + m11 m21 Xi12   (feeds B via d/dt and 1/t)
fn g_term(m: &Mat2, pc: &PCCoefficients) -> C64 {
    let m11 = m.0[0][0];
    let m12 = m.0[0][1];
    m12 * m12 * pc.xi21 + m11 * m11 * pc.xi12
}

fn p_term(m: &Mat2, pc: &PCCoefficients) -> C64 {
    let m11 = m.0[0][0];
    let m12 = m.0[0][1];
    let m21 = m.0[1][0];
    let m22 = m.0[1][1];
    m12 * m22 * pc.xi21 + m11 * m21 * pc.xi12
}

/// Everything at one evaluation time that the correction formulas read.
struct PhaseAssembly {
    k0: f64,
    mout_plus: Mat2,
    mout_minus: Mat2,
    pc_plus: PCCoefficients,
    pc_minus: PCCoefficients,
}

fn assemble_at(
    data: &ScatteringData,
    nu: &NuFunction,
    interval: (f64, f64),
    x: f64,
    t: f64,
    opts: &AsymOptions,
) -> Result<PhaseAssembly> {
    let k0 = stationary_point(x, t, data.alpha)?;
    let partition = partition_spectrum(&data.modes, k0, interval)?;
    let modulated = modulate_constants(&data.modes, &partition, nu, k0, ModulationVariant::Cone)?;
    // conjugation constants see every mode below the k0 circle
    let dm_all: Vec<C64> = partition.delta_minus.iter().map(|&j| data.modes[j].k).collect();
    let conj = conjugation_data(nu, k0, &dm_all)?;
    // the outer model keeps the in-cone modes, delta-conjugated, and its
    // Blaschke weight runs over the in-cone subset below the circle
    let mout_modes: Result<Vec<DiscreteMode>> = partition
        .inside
        .iter()
        .map(|&j| {
            let d = delta_eval(nu, k0, data.modes[j].k)?;
            Ok(DiscreteMode { k: modulated[j].k, c: modulated[j].c / (d * d) })
        })
        .collect();
    let mout_modes = mout_modes?;
    let dm_inside: Vec<C64> = partition
        .delta_minus
        .iter()
        .filter(|j| partition.inside.contains(j))
        .map(|&j| data.modes[j].k)
        .collect();
    let mout_plus = mout_at_phase(
        &mout_modes,
        &dm_inside,
        x,
        t,
        data.alpha,
        data.beta,
        c64(k0, 0.0),
    )?;
    let mout_minus = mout_at_phase(
        &mout_modes,
        &dm_inside,
        x,
        t,
        data.alpha,
        data.beta,
        c64(-k0, 0.0),
    )?;
    let pc_plus = pc_coefficients(data, &conj, t, Endpoint::Plus, opts)?;
    let pc_minus = pc_coefficients(data, &conj, t, Endpoint::Minus, opts)?;
    Ok(PhaseAssembly { k0, mout_plus, mout_minus, pc_plus, pc_minus })
}

/// Long-time evaluation inside the observation cone: the in-cone modulated
/// soliton part plus the t^{-1/2} corrections.  Returns (A, B, coefficients).
pub fn theorem2_eval(
    data: &ScatteringData,
    cone: &ConeSpec,
    x: f64,
    t: f64,
    opts: &AsymOptions,
) -> Result<(C64, f64, AsymCoeffs)> {
    if t <= 0.0 {
        return Err(Error::Malformed(format!("long-time evaluation needs t > 0, got {t}")));
    }
    if !cone.contains(x, t) {
        return Err(Error::OutsideCone { x, t });
    }
    let interval = spectral_interval(cone, data.alpha)?;
    let nu = NuFunction::from_scattering(data);
    let k0 = stationary_point(x, t, data.alpha)?;

    // in-cone soliton part with the cone-modulated constants, as printed
    let partition = partition_spectrum(&data.modes, k0, interval)?;
    let modulated = modulate_constants(&data.modes, &partition, &nu, k0, ModulationVariant::Cone)?;
    let sol_modes: Vec<DiscreteMode> = partition.inside.iter().map(|&j| modulated[j]).collect();
    let sol = ReflectionlessData::new(sol_modes, data.alpha, data.beta)?;
    let a_sol = solve_reflectionless(&sol, x, t)?.a_value();
    let b_sol = crate::soliton::reconstruct_b_at(&sol, x, t)?;

    // without continuous-spectrum samples the reflection coefficient vanishes
    // identically and every t^{-1/2} correction with it
    if data.kgrid.is_empty() {
        let zero = c64(0.0, 0.0);
        let coeffs = AsymCoeffs {
            k0,
            g1: zero,
            g2: zero,
            h1: zero,
            h2: zero,
            f1: zero,
            f2: zero,
            mout_plus: Mat2::identity(),
            mout_minus: Mat2::identity(),
        };
        return Ok((a_sol, b_sol, coeffs));
    }

    let center = assemble_at(data, &nu, interval, x, t, opts)?;

    // A-corrections straight from the center assembly
    let sc = (-k0.powi(3) / data.alpha).sqrt();
    let g1 = 4.0 * sc * g_term(&center.mout_minus, &center.pc_minus);
    let g2 = 4.0 * sc * g_term(&center.mout_plus, &center.pc_plus);

    // B-corrections: d/dt of the p-terms by centered difference of the full
    // assembly, and the printed 1/t family on the center values
    let h_t = tol::H_T * t;
    let fwd = assemble_at(data, &nu, interval, x, t + h_t, opts)?;
    let bwd = assemble_at(data, &nu, interval, x, t - h_t, opts)?;
    let dp_minus =
        (p_term(&fwd.mout_minus, &fwd.pc_minus) - p_term(&bwd.mout_minus, &bwd.pc_minus))
            / (2.0 * h_t);
    let dp_plus = (p_term(&fwd.mout_plus, &fwd.pc_plus) - p_term(&bwd.mout_plus, &bwd.pc_plus))
        / (2.0 * h_t);
    let h1 = 4.0 / data.beta * sc * dp_minus;
    let h2 = 4.0 / data.beta * sc * dp_plus;
    let f1 = 2.0 / (data.beta * t) * sc * p_term(&center.mout_minus, &center.pc_minus);
    let f2 = 2.0 / (data.beta * t) * sc * p_term(&center.mout_plus, &center.pc_plus);

    let a = a_sol + (g1 + g2) / t.sqrt();
    let b = b_sol + ((h1 + h2 + f1 + f2) / t.sqrt()).re;
    let coeffs = AsymCoeffs {
        k0,
        g1,
        g2,
        h1,
        h2,
        f1,
        f2,
        mout_plus: center.mout_plus,
        mout_minus: center.mout_minus,
    };
    Ok((a, b, coeffs))
}

/// Evaluate the long-time fields over many points in parallel.
pub fn theorem2_profile(
    data: &ScatteringData,
    cone: &ConeSpec,
    points: &[(f64, f64)],
    opts: &AsymOptions,
) -> Result<Vec<(C64, f64, AsymCoeffs)>> {
    points
        .par_iter()
        .map(|&(x, t)| theorem2_eval(data, cone, x, t, opts))
        .collect()
}
