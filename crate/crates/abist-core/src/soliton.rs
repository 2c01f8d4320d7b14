//! Reflectionless (pole-only) Riemann-Hilbert solver: N-soliton fields,
//! rational evaluation of M(k), and the outer-matrix values used by the
//! long-time asymptotics.
//!
//! The ansatz for data {(k_j, c_j)} is
//!
//! ```text
//! M(k) = I + sum_j [ p_j e1^T / (k - rho1_j) + q_j e2^T / (k - rho2_j) ]
//! ```
//!
//! with driving phases gamma_j = c_j exp(2 i t theta(k_j)).  A mode whose
//! |gamma_j| exceeds 1 (a soliton evaluated far on its exponentially large
//! side) is handled in the flipped orientation: its column-1 pole moves to
//! k_j* and the effective constant becomes 1/(gamma_j s'(k_j)^2), where s is
//! the Blaschke product over all flipped modes.  The flip is the classical
//! soliton-sorting conjugation M -> M s^{sigma3}; it keeps every effective
//! constant at modulus <= 1, so the linear system stays well conditioned on
//! both tails, and it is undone exactly when M is evaluated or when the
//! large-k coefficients are read off.  All exponentials are assembled in log
//! form, so no intermediate quantity overflows no matter how far out the
//! evaluation point sits.

use rayon::prelude::*;

use crate::phase::t_theta;
use crate::types::{c64, C64, DiscreteMode, FieldSnapshot, Grid, Mat2};
use crate::{tol, Error, Result};

/// Discrete data for a reflectionless solve.
#[derive(Debug, Clone)]
pub struct ReflectionlessData {
    pub modes: Vec<DiscreteMode>,
    pub alpha: f64,
    pub beta: f64,
}

impl ReflectionlessData {
    pub fn new(modes: Vec<DiscreteMode>, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha < 0.0) {
            return Err(Error::BadAlpha(alpha));
        }
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::BadBeta);
        }
        for (i, m) in modes.iter().enumerate() {
            if m.k.im <= 0.0 {
                return Err(Error::Malformed(format!("mode {} not in the upper half plane", m.k)));
            }
            if m.c.norm() == 0.0 || !m.c.is_finite() {
                return Err(Error::Malformed(format!("norming constant of mode {} is invalid", m.k)));
            }
            for other in &modes[i + 1..] {
                if (m.k - other.k).norm() <= 2.0 * tol::ROOT {
                    return Err(Error::Malformed(format!("coincident modes at {}", m.k)));
                }
            }
        }
        Ok(ReflectionlessData { modes, alpha, beta })
    }
}

/// Blaschke product s(k) = prod (k - k_j)/(k - k_j*) over the given modes.
pub fn blaschke(k: C64, ks: &[C64]) -> C64 {
    ks.iter().map(|&kj| (k - kj) / (k - kj.conj())).product()
}

/// d/dk of the Blaschke product at one of its own zeros k_j.
pub(crate) fn blaschke_deriv_at_zero(j: usize, ks: &[C64]) -> C64 {
    let kj = ks[j];
    let mut d = 1.0 / (kj - kj.conj());
    for (n, &kn) in ks.iter().enumerate() {
        if n != j {
            d *= (kj - kn) / (kj - kn.conj());
        }
    }
    d
}

/// Solved residue representation at one (x, t).
#[derive(Debug, Clone)]
pub struct ResidueRep {
    pub x: f64,
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    ks: Vec<C64>,
    flipped: Vec<bool>,
    /// column-1-attached residue vectors, poles at `pole1`
    p: Vec<[C64; 2]>,
    /// column-2-attached residue vectors, poles at `pole2`
    q: Vec<[C64; 2]>,
    /// infinity-norm condition number of the residue system (1 when empty);
    /// downstream accuracy expectations scale with eps * cond
    pub cond: f64,
}

fn lu_solve(a: &mut [Vec<C64>], rhs: &mut [Vec<C64>]) -> Result<()> {
    let n = a.len();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let (piv, mag) = (col..n)
            .map(|r| (r, a[r][col].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .unwrap();
        if mag == 0.0 {
            return Err(Error::SingularSystem { cond: f64::INFINITY, max: tol::COND_MAX });
        }
        a.swap(col, piv);
        perm.swap(col, piv);
        for rhsv in rhs.iter_mut() {
            rhsv.swap(col, piv);
        }
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            a[r][col] = f;
            for c in col + 1..n {
                let upper = a[col][c];
                a[r][c] -= f * upper;
            }
            for rhsv in rhs.iter_mut() {
                let upper = rhsv[col];
                rhsv[r] -= f * upper;
            }
        }
    }
    for rhsv in rhs.iter_mut() {
        for col in (0..n).rev() {
            for r in col + 1..n {
                let x = rhsv[r];
                rhsv[col] -= a[col][r] * x;
            }
            rhsv[col] /= a[col][col];
        }
    }
    Ok(())
}

/// Solve the pole ansatz at one space-time point.
pub fn solve_reflectionless(data: &ReflectionlessData, x: f64, t: f64) -> Result<ResidueRep> {
    let n = data.modes.len();
    let ks: Vec<C64> = data.modes.iter().map(|m| m.k).collect();
    if n == 0 {
        return Ok(ResidueRep {
            x,
            t,
            alpha: data.alpha,
            beta: data.beta,
            ks,
            flipped: vec![],
            p: vec![],
            q: vec![],
            cond: 1.0,
        });
    }

    // log-magnitudes of the driving phases decide each mode's orientation
    let log_gamma: Vec<C64> = data
        .modes
        .iter()
        .map(|m| Ok(c64(0.0, 2.0) * t_theta(m.k, x, t, data.alpha)? + m.c.ln()))
        .collect::<Result<_>>()?;
    let flipped: Vec<bool> = log_gamma.iter().map(|lg| lg.re > 0.0).collect();
    let flip_ks: Vec<C64> =
        ks.iter().zip(&flipped).filter(|(_, &f)| f).map(|(&k, _)| k).collect();

    // effective constants, all of modulus <= 1:
    //   plain:   g_j = gamma_j s(k_j)^2
    //   flipped: g_j = 1 / (gamma_j s'(k_j)^2)
    let mut flip_index = vec![usize::MAX; n];
    {
        let mut next = 0;
        for j in 0..n {
            if flipped[j] {
                flip_index[j] = next;
                next += 1;
            }
        }
    }
    let g: Vec<C64> = (0..n)
        .map(|j| {
            if flipped[j] {
                (-log_gamma[j]).exp() / blaschke_deriv_at_zero(flip_index[j], &flip_ks).powi(2)
            } else {
                log_gamma[j].exp() * blaschke(ks[j], &flip_ks).powi(2)
            }
        })
        .collect();

    // pole locations and the points where the two residue relations bind
    let pole1: Vec<C64> = (0..n).map(|j| if flipped[j] { ks[j].conj() } else { ks[j] }).collect();
    let pole2: Vec<C64> = (0..n).map(|j| pole1[j].conj()).collect();
    // p_j = cp_j (e2 + sum_n q_n / (zp_j - pole2_n))
    // q_j = cq_j (e1 + sum_n p_n / (zq_j - pole1_n))
    let (mut cp, mut cq) = (vec![c64(0.0, 0.0); n], vec![c64(0.0, 0.0); n]);
    let (mut zp, mut zq) = (vec![c64(0.0, 0.0); n], vec![c64(0.0, 0.0); n]);
    for j in 0..n {
        if flipped[j] {
            cq[j] = g[j];
            zq[j] = ks[j];
            cp[j] = -g[j].conj();
            zp[j] = ks[j].conj();
        } else {
            cp[j] = g[j];
            zp[j] = ks[j];
            cq[j] = -g[j].conj();
            zq[j] = ks[j].conj();
        }
    }

    // eliminate p: q = cq e1 + D (cp e2 + C q)  with
    //   D_jn = cq_j / (zq_j - pole1_n),  C_nm = cp_n / (zp_n - pole2_m)
    let d_mat: Vec<Vec<C64>> =
        (0..n).map(|j| (0..n).map(|m| cq[j] / (zq[j] - pole1[m])).collect()).collect();
    let c_mat: Vec<Vec<C64>> =
        (0..n).map(|j| (0..n).map(|m| cp[j] / (zp[j] - pole2[m])).collect()).collect();
    let gmat: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|m| {
                    let dc: C64 = (0..n).map(|l| d_mat[j][l] * c_mat[l][m]).sum();
                    if j == m {
                        1.0 - dc
                    } else {
                        -dc
                    }
                })
                .collect()
        })
        .collect();

    // two right-hand sides (component 0 and component 1 of the q vectors),
    // plus unit columns to get an exact infinity-norm condition number
    let mut rhs: Vec<Vec<C64>> = Vec::with_capacity(2 + n);
    rhs.push(cq.clone());
    rhs.push((0..n).map(|j| (0..n).map(|l| d_mat[j][l] * cp[l]).sum()).collect());
    for e in 0..n {
        rhs.push((0..n).map(|j| if j == e { c64(1.0, 0.0) } else { c64(0.0, 0.0) }).collect());
    }
    let gnorm = gmat
        .iter()
        .map(|row| row.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut gcopy = gmat.clone();
    lu_solve(&mut gcopy, &mut rhs)?;
    let inv_norm = (0..n)
        .map(|r| (0..n).map(|cidx| rhs[2 + cidx][r].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let cond = gnorm * inv_norm;
    if !cond.is_finite() || cond > tol::COND_MAX {
        return Err(Error::SingularSystem { cond, max: tol::COND_MAX });
    }

    let q: Vec<[C64; 2]> = (0..n).map(|j| [rhs[0][j], rhs[1][j]]).collect();
    let p: Vec<[C64; 2]> = (0..n)
        .map(|j| {
            let mut s = [c64(0.0, 0.0), cp[j]];
            for m in 0..n {
                let w = cp[j] / (zp[j] - pole2[m]);
                s[0] += w * q[m][0];
                s[1] += w * q[m][1];
            }
            s
        })
        .collect();

    // verify both residue relations against the assembled solution
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let mut want_p = [c64(0.0, 0.0), cp[j]];
        let mut want_q = [cq[j], c64(0.0, 0.0)];
        let mut scale_p = cp[j].norm();
        let mut scale_q = cq[j].norm();
        for m in 0..n {
            let wp = cp[j] / (zp[j] - pole2[m]);
            let wq = cq[j] / (zq[j] - pole1[m]);
            want_p[0] += wp * q[m][0];
            want_p[1] += wp * q[m][1];
            want_q[0] += wq * p[m][0];
            want_q[1] += wq * p[m][1];
            scale_p += wp.norm() * (q[m][0].norm() + q[m][1].norm());
            scale_q += wq.norm() * (p[m][0].norm() + p[m][1].norm());
        }
        let rp = ((p[j][0] - want_p[0]).norm_sqr() + (p[j][1] - want_p[1]).norm_sqr()).sqrt();
        let rq = ((q[j][0] - want_q[0]).norm_sqr() + (q[j][1] - want_q[1]).norm_sqr()).sqrt();
        worst = worst.max(rp / scale_p.max(1e-300)).max(rq / scale_q.max(1e-300));
    }
    if worst > tol::LIN {
        return Err(Error::ResidueMismatch { residual: worst });
    }

    Ok(ResidueRep { x, t, alpha: data.alpha, beta: data.beta, ks, flipped, p, q, cond })
}

impl ResidueRep {
    fn flip_ks(&self) -> Vec<C64> {
        self.ks.iter().zip(&self.flipped).filter(|(_, &f)| f).map(|(&k, _)| k).collect()
    }

    fn pole1(&self, j: usize) -> C64 {
        if self.flipped[j] {
            self.ks[j].conj()
        } else {
            self.ks[j]
        }
    }

    /// M(k): rational evaluation plus the exact unflip factor.
    pub fn eval(&self, k: C64) -> Result<Mat2> {
        for &kj in &self.ks {
            for pole in [kj, kj.conj()] {
                if (k - pole).norm() < tol::POLE_GUARD {
                    return Err(Error::PoleHit {
                        k: format!("{k}"),
                        pole: format!("{pole}"),
                        guard: tol::POLE_GUARD,
                    });
                }
            }
        }
        let mut m = Mat2::identity();
        for j in 0..self.ks.len() {
            let r1 = self.pole1(j);
            let w1 = 1.0 / (k - r1);
            let w2 = 1.0 / (k - r1.conj());
            m.0[0][0] += self.p[j][0] * w1;
            m.0[1][0] += self.p[j][1] * w1;
            m.0[0][1] += self.q[j][0] * w2;
            m.0[1][1] += self.q[j][1] * w2;
        }
        let s = blaschke(k, &self.flip_ks());
        Ok(Mat2([[m.0[0][0] / s, m.0[0][1] * s], [m.0[1][0] / s, m.0[1][1] * s]]))
    }

    /// k^{-1} coefficient of M_12 (unflipped frame).
    pub fn coeff12(&self) -> C64 {
        self.q.iter().map(|q| q[0]).sum()
    }

    /// k^{-1} coefficient of M_11 (unflipped frame): the raw sum from the
    /// flipped ansatz minus the Blaschke contribution sum (k_j* - k_j).
    pub fn coeff11(&self) -> C64 {
        let raw: C64 = self.p.iter().map(|p| p[0]).sum();
        let shift: C64 = self
            .ks
            .iter()
            .zip(&self.flipped)
            .filter(|(_, &f)| f)
            .map(|(&k, _)| k.conj() - k)
            .sum();
        raw - shift
    }

    /// A(x, t) = 4i * (k^{-1} coefficient of M_12).
    pub fn a_value(&self) -> C64 {
        c64(0.0, 4.0) * self.coeff12()
    }

    /// Residue-vector symmetry q_j = -sigma0 p_j*; the worst relative
    /// deviation over modes.  Zero modes give 0.
    pub fn symmetry_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for j in 0..self.ks.len() {
            let want = [-self.p[j][1].conj(), self.p[j][0].conj()];
            let diff = ((self.q[j][0] - want[0]).norm_sqr() + (self.q[j][1] - want[1]).norm_sqr())
                .sqrt();
            let scale = (self.p[j][0].norm_sqr() + self.p[j][1].norm_sqr()).sqrt()
                + (self.q[j][0].norm_sqr() + self.q[j][1].norm_sqr()).sqrt();
            if scale > 0.0 {
                worst = worst.max(diff / scale);
            }
        }
        worst
    }
}

/// M(k) for a solved representation (free-function form of ResidueRep::eval).
pub fn eval_m(rep: &ResidueRep, k: C64) -> Result<Mat2> {
    rep.eval(k)
}

/// A(x, t) from a solved representation.
pub fn reconstruct_a(rep: &ResidueRep) -> C64 {
    rep.a_value()
}

/// B(x, t) by the centered t-difference of the (1,1) large-k coefficient.
/// Single-point form: no cross-check (see `synthesize_field` for the
/// checked, grid-level reconstruction).
pub fn reconstruct_b_at(data: &ReflectionlessData, x: f64, t: f64) -> Result<f64> {
    let h = tol::H_T;
    let cm = solve_reflectionless(data, x, t - h)?.coeff11();
    let cp = solve_reflectionless(data, x, t + h)?.coeff11();
    let b = c64(0.0, -4.0 / data.beta) * (cp - cm) / (2.0 * h);
    Ok(b.re)
}

/// Full field row at fixed t: A pointwise, B by the t-derivative formula,
/// cross-checked against the x-integration of the second equation of the
/// system, B_x = -(gamma/2) (|A|^2)_t, from the left (decaying) boundary.
pub fn synthesize_field(data: &ReflectionlessData, grid: Grid, t: f64) -> Result<FieldSnapshot> {
    let h = tol::H_T;
    let rows: Result<Vec<(C64, f64, f64, C64)>> = (0..grid.n)
        .into_par_iter()
        .map(|i| {
            let x = grid.x(i);
            let rep0 = solve_reflectionless(data, x, t)?;
            let repm = solve_reflectionless(data, x, t - h)?;
            let repp = solve_reflectionless(data, x, t + h)?;
            let b_fd = (c64(0.0, -4.0 / data.beta) * (repp.coeff11() - repm.coeff11()) / (2.0 * h)).re;
            let da2 = (repp.a_value().norm_sqr() - repm.a_value().norm_sqr()) / (2.0 * h);
            let a_t = (repp.a_value() - repm.a_value()) / (2.0 * h);
            Ok((rep0.a_value(), b_fd, da2, a_t))
        })
        .collect();
    let rows = rows?;
    let a: Vec<C64> = rows.iter().map(|r| r.0).collect();
    let b_fd: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let a_t: Vec<C64> = rows.iter().map(|r| r.3).collect();

    // cumulative integral of -(gamma/2) (|A|^2)_t with fourth-order
    // (cubic-exact) panel weights, so the cross-check is not limited by
    // the quadrature order
    let gamma = 1.0 / data.beta;
    let f: Vec<f64> = rows.iter().map(|r| -0.5 * gamma * r.2).collect();
    let n = grid.n;
    let mut b_int = vec![0.0; n];
    for i in 0..n - 1 {
        let panel = if i + 3 < n {
            9.0 * f[i] + 19.0 * f[i + 1] - 5.0 * f[i + 2] + f[i + 3]
        } else {
            f[i - 2] - 5.0 * f[i - 1] + 19.0 * f[i] + 9.0 * f[i + 1]
        };
        b_int[i + 1] = b_int[i] + grid.dx / 24.0 * panel;
    }
    let bmax = b_fd.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tolerance = tol::B_CROSS * bmax.max(1e-9);
    let worst = b_fd
        .iter()
        .zip(&b_int)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    if worst > tolerance {
        return Err(Error::InconsistentB { diff: worst, tol: tolerance });
    }
    Ok(FieldSnapshot { t, alpha: data.alpha, beta: data.beta, grid, a, b: b_fd, a_t })
}

/// The displayed closed-form one-soliton, k1 = zeta + i eta:
///   A = 4 eta sech(2 eta (x + alpha t / (4|k|^2))) e^{i zeta (-2x + alpha t/(2|k|^2))}
///   B = -(2 alpha eta^2)/(beta |k|^2) sech^2(same argument)
/// This is the member of the family below with c1 = -2 i eta.
pub fn one_soliton_closed(k1: C64, x: f64, t: f64, alpha: f64, beta: f64) -> (C64, f64) {
    let (zeta, eta) = (k1.re, k1.im);
    let kk = k1.norm_sqr();
    let arg = 2.0 * eta * (x + alpha * t / (4.0 * kk));
    let sech = 1.0 / arg.cosh();
    let a = c64(0.0, zeta * (-2.0 * x + alpha * t / (2.0 * kk))).exp() * (4.0 * eta * sech);
    let b = -(2.0 * alpha * eta * eta) / (beta * kk) * sech * sech;
    (a, b)
}

/// One-soliton with an arbitrary norming constant, evaluated from the
/// closed-form solution of the N = 1 pole ansatz:
///   gamma = c1 e^{2 i t theta(k1)},  G = |gamma|^2/(4 eta^2),
///   A = -4 i gamma* / (1 + G),
///   B = -(2 alpha eta^2)/(beta |k|^2) * 4G/(1+G)^2.
pub fn one_soliton_general(
    k1: C64,
    c1: C64,
    x: f64,
    t: f64,
    alpha: f64,
    beta: f64,
) -> Result<(C64, f64)> {
    let eta = k1.im;
    let kk = k1.norm_sqr();
    let lg = c64(0.0, 2.0) * t_theta(k1, x, t, alpha)? + c1.ln();
    // assemble with non-positive real exponents only
    let (a, sech2) = if lg.re <= 0.0 {
        let gamma = lg.exp();
        let g = gamma.norm_sqr() / (4.0 * eta * eta);
        (c64(0.0, -4.0) * gamma.conj() / (1.0 + g), 4.0 * g / ((1.0 + g) * (1.0 + g)))
    } else {
        // 1/gamma is the small quantity; multiply through by 1/G:
        // A = -4i (gamma*/G) / (1 + 1/G) and gamma*/G = 4 eta^2 / gamma.
        let inv = (-lg).exp();
        let h = inv.norm_sqr() * 4.0 * eta * eta;
        (c64(0.0, -16.0 * eta * eta) * inv / (1.0 + h), 4.0 * h / ((1.0 + h) * (1.0 + h)))
    };
    let b = -(2.0 * alpha * eta * eta) / (beta * kk) * sech2;
    Ok((a, b))
}

/// Outer matrix at one evaluation point: plain solve of pre-modulated modes
/// followed by the sigma3 Blaschke factor over the flipped subset.  The
/// caller supplies modes whose constants already carry the delta^{-2} and
/// cone modulations; `delta_minus` lists the k_j of the subset the
/// conjugation inverts.
pub fn mout_at_phase(
    modes: &[DiscreteMode],
    delta_minus: &[C64],
    x: f64,
    t: f64,
    alpha: f64,
    beta: f64,
    k_eval: C64,
) -> Result<Mat2> {
    let data = ReflectionlessData::new(modes.to_vec(), alpha, beta)?;
    let rep = solve_reflectionless(&data, x, t)?;
    let m = rep.eval(k_eval)?;
    let s = blaschke(k_eval, delta_minus);
    let m = m.mul(&Mat2::sigma3_power(s));
    let drift = (m.det() - 1.0).norm();
    if drift > 1e-9 {
        return Err(Error::NonUnimodularMout(drift));
    }
    Ok(m)
}
