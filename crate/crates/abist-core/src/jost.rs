//! Direct scattering: Jost solutions, scattering matrix, discrete spectrum
//! and norming constants.
//!
//! Everything integrates the commutator form of the Lax x-equation,
//!   Psi_x + i k [sigma3, Psi] = U Psi,   U = [[0, A/2], [-A*/2, 0]],
//! whose columns decouple:
//!   column 1:  p' = (A/2) q,           q' = 2ik q - (A*/2) p
//!   column 2:  u' = -2ik u + (A/2) v,  v' = -(A*/2) u
//! with Psi- = I at the left end and Psi+ = I at the right end.  In this
//! frame the identity is the free solution, so fixed-step RK4 with the grid
//! step is exact on the tails and the only error source is the oscillation
//! 2kh per step.  Entries of the scattering matrix come from Wronskian-type
//! determinants of columns of Psi- and Psi+ at a common matching point; the
//! determinants are x-independent up to explicit e^{+-2ikx} factors.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::quad::{cauchy_derivative, lagrange4, MID4};
use crate::types::{c64, C64, DiscreteMode, InitialProfile, Mat2, ScatteringSample};
use crate::{tol, Error, Result};

/// Which infinity the Jost solution is normalized at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Minus,
    Plus,
}

/// Step-doubling error probe cadence (every this many RK4 steps).
const PROBE_STRIDE: usize = 64;
/// Cell side for the argument-principle subdivision of a spectrum box.
const CELL: f64 = 0.05;
/// Boxes must keep this far above the real axis.
const IM_FLOOR: f64 = 0.02;
/// Circle radius for Cauchy-integral derivatives of s11.
const CIRCLE_RADIUS: f64 = 1e-3;
const CIRCLE_NODES: usize = 16;
const NEWTON_MAX: usize = 60;

/// Precomputed per-profile state shared by every k evaluation: midpoint
/// samples of A (4-point stencil, exact for cubics) and the matching index.
pub struct JostEngine<'a> {
    profile: &'a InitialProfile,
    amid: Vec<C64>,
    pub match_idx: usize,
}

fn col_deriv(col: usize, y: [C64; 2], a: C64, two_ik: C64) -> [C64; 2] {
    let half_a = a * 0.5;
    let half_ac = a.conj() * 0.5;
    if col == 0 {
        [half_a * y[1], two_ik * y[1] - half_ac * y[0]]
    } else {
        [-two_ik * y[0] + half_a * y[1], -half_ac * y[0]]
    }
}

fn rk4_col(col: usize, y: [C64; 2], a0: C64, am: C64, a1: C64, h: f64, two_ik: C64) -> [C64; 2] {
    let k1 = col_deriv(col, y, a0, two_ik);
    let y2 = [y[0] + k1[0] * (0.5 * h), y[1] + k1[1] * (0.5 * h)];
    let k2 = col_deriv(col, y2, am, two_ik);
    let y3 = [y[0] + k2[0] * (0.5 * h), y[1] + k2[1] * (0.5 * h)];
    let k3 = col_deriv(col, y3, am, two_ik);
    let y4 = [y[0] + k3[0] * h, y[1] + k3[1] * h];
    let k4 = col_deriv(col, y4, a1, two_ik);
    [
        y[0] + (k1[0] + (k2[0] + k3[0]) * 2.0 + k4[0]) * (h / 6.0),
        y[1] + (k1[1] + (k2[1] + k3[1]) * 2.0 + k4[1]) * (h / 6.0),
    ]
}

impl<'a> JostEngine<'a> {
    pub fn new(profile: &'a InitialProfile) -> Self {
        let g = profile.grid;
        let a = &profile.a;
        let sample = |i: isize| -> C64 {
            if i < 0 || i >= g.n as isize {
                c64(0.0, 0.0) // tails are below tail_tol by construction
            } else {
                a[i as usize]
            }
        };
        let amid = (0..g.n - 1)
            .map(|s| {
                let s = s as isize;
                sample(s - 1) * MID4[0]
                    + sample(s) * MID4[1]
                    + sample(s + 1) * MID4[2]
                    + sample(s + 2) * MID4[3]
            })
            .collect();
        let match_idx = (0..g.n)
            .min_by(|&i, &j| g.x(i).abs().partial_cmp(&g.x(j).abs()).unwrap())
            .unwrap();
        JostEngine { profile, amid, match_idx }
    }

    /// Same engine but matching the two sides at an explicit grid index;
    /// used to verify matching-point independence.
    pub fn with_match_index(profile: &'a InitialProfile, idx: usize) -> Self {
        let mut e = Self::new(profile);
        assert!(idx > 0 && idx < profile.grid.n - 1, "matching index must be interior");
        e.match_idx = idx;
        e
    }

    pub fn x_match(&self) -> f64 {
        self.profile.grid.x(self.match_idx)
    }

    /// A(x) inside segment `seg` at fractional position s in [0, 1],
    /// interpolated from the surrounding 4 samples.
    fn a_frac(&self, seg: usize, s: f64) -> C64 {
        let g = self.profile.grid;
        let sample = |i: isize| -> C64 {
            if i < 0 || i >= g.n as isize {
                c64(0.0, 0.0)
            } else {
                self.profile.a[i as usize]
            }
        };
        let i = seg as isize;
        lagrange4(
            &[-1.0, 0.0, 1.0, 2.0],
            &[sample(i - 1), sample(i), sample(i + 1), sample(i + 2)],
            s,
        )
    }

    /// One Jost column at the matching point.  col = 0 is the first column
    /// (analytic in the upper half plane for side = Minus), col = 1 the
    /// second (analytic there for side = Plus).
    pub fn column(&self, k: C64, side: Side, col: usize) -> Result<[C64; 2]> {
        self.column_tracked(k, side, col).map(|(y, _)| y)
    }

    /// Column at the matching point together with the sup over the
    /// integration path of the column max-norm.  In this renormalized frame
    /// the Volterra-series bound exp(||A||_L1 / 2) applies to that sup at
    /// real k.
    pub fn column_tracked(&self, k: C64, side: Side, col: usize) -> Result<([C64; 2], f64)> {
        let g = self.profile.grid;
        let a = &self.profile.a;
        let two_ik = c64(0.0, 2.0) * k;
        let (mut idx, dir): (usize, isize) = match side {
            Side::Minus => (0, 1),
            Side::Plus => (g.n - 1, -1),
        };
        let h = g.dx * dir as f64;
        let total = (idx as isize - self.match_idx as isize).unsigned_abs();
        let stride = (total / 16).clamp(1, PROBE_STRIDE);
        let mut y = if col == 0 { [c64(1.0, 0.0), c64(0.0, 0.0)] } else { [c64(0.0, 0.0), c64(1.0, 0.0)] };
        let mut sup = 1.0f64;
        let mut steps = 0usize;
        while idx != self.match_idx {
            let next = (idx as isize + dir) as usize;
            let seg = idx.min(next);
            let (a0, a1) = (a[idx], a[next]);
            let am = self.amid[seg];
            if steps % stride == 0 {
                self.probe_step(col, y, seg, idx, a0, am, a1, h, two_ik, k)?;
            }
            y = rk4_col(col, y, a0, am, a1, h, two_ik);
            sup = sup.max(y[0].norm()).max(y[1].norm());
            idx = next;
            steps += 1;
        }
        Ok((y, sup))
    }

    /// Step-doubling probe: one full RK4 step against two half steps; the
    /// Richardson estimate of the per-step error must stay below the
    /// per-step budget (tol::ODE_STEP) relative to the state size.
    #[allow(clippy::too_many_arguments)]
    fn probe_step(
        &self,
        col: usize,
        y: [C64; 2],
        seg: usize,
        idx: usize,
        a0: C64,
        am: C64,
        a1: C64,
        h: f64,
        two_ik: C64,
        k: C64,
    ) -> Result<()> {
        // fractional positions of the half-step midpoints within the segment
        let (q_near, q_far) = if h > 0.0 { (0.25, 0.75) } else { (0.75, 0.25) };
        let aq_near = self.a_frac(seg, q_near);
        let aq_far = self.a_frac(seg, q_far);
        let full = rk4_col(col, y, a0, am, a1, h, two_ik);
        let half = rk4_col(col, y, a0, aq_near, am, 0.5 * h, two_ik);
        let half = rk4_col(col, half, am, aq_far, a1, 0.5 * h, two_ik);
        let diff = ((full[0] - half[0]).norm_sqr() + (full[1] - half[1]).norm_sqr()).sqrt();
        let scale = 1.0 + (y[0].norm_sqr() + y[1].norm_sqr()).sqrt();
        let est = diff / 15.0; // Richardson factor for a 4th-order scheme
        if est > tol::ODE_STEP * scale {
            return Err(Error::StepUnstable {
                x: self.profile.grid.x(idx),
                k: format!("{k}"),
                err: est / scale,
                tol: tol::ODE_STEP,
            });
        }
        Ok(())
    }

    /// Full 2x2 Jost matrix at the matching point.  For real k both columns
    /// are meaningful; for Im k > 0 only the analytic column is (Minus:
    /// column 1, Plus: column 2) and the other is dominated by the growing
    /// mode.
    pub fn matrix(&self, k: C64, side: Side) -> Result<Mat2> {
        Ok(Mat2::from_cols(self.column(k, side, 0)?, self.column(k, side, 1)?))
    }

    /// s11(k) = det([Psi-]_1, [Psi+]_2); analytic in the upper half plane,
    /// valid for real and complex k alike.
    pub fn s11(&self, k: C64) -> Result<C64> {
        let cm = self.column(k, Side::Minus, 0)?;
        let cp = self.column(k, Side::Plus, 1)?;
        Ok(cm[0] * cp[1] - cm[1] * cp[0])
    }

    /// Full scattering matrix [[s11, s12], [s21, s22]] for real k.
    pub fn s_matrix(&self, k: f64) -> Result<Mat2> {
        let kk = c64(k, 0.0);
        let m = self.matrix(kk, Side::Minus)?;
        let p = self.matrix(kk, Side::Plus)?;
        let (mc1, mc2) = (m.col(0), m.col(1));
        let (pc1, pc2) = (p.col(0), p.col(1));
        let det = |a: [C64; 2], b: [C64; 2]| a[0] * b[1] - a[1] * b[0];
        let phase = (c64(0.0, 2.0 * k) * self.x_match()).exp();
        Ok(Mat2([
            [det(mc1, pc2), det(mc2, pc2) * phase],
            [det(pc1, mc1) / phase, det(pc1, mc2)],
        ]))
    }

    /// (s11, s12): s12 only exists on the real axis.
    pub fn scattering(&self, k: C64) -> Result<(C64, Option<C64>)> {
        if k.im.abs() < 1e-14 {
            let s = self.s_matrix(k.re)?;
            Ok((s.at(0, 0), Some(s.at(0, 1))))
        } else {
            Ok((self.s11(k)?, None))
        }
    }

    /// s11'(k_j) by a trapezoid Cauchy integral on a small circle.
    pub fn s11_derivative(&self, kj: C64) -> Result<C64> {
        self.s11_derivative_with_radius(kj, CIRCLE_RADIUS)
    }

    pub fn s11_derivative_with_radius(&self, kj: C64, radius: f64) -> Result<C64> {
        if kj.im < radius {
            return Err(Error::CircleTouchesAxis { k: format!("{kj}"), radius });
        }
        let mut first_err = None;
        let d = cauchy_derivative(
            |z| match self.s11(z) {
                Ok(v) => v,
                Err(e) => {
                    first_err.get_or_insert(e);
                    c64(f64::NAN, f64::NAN)
                }
            },
            kj,
            radius,
            CIRCLE_NODES,
        );
        match first_err {
            Some(e) => Err(e),
            None => Ok(d),
        }
    }

    /// Proportionality constant b_j between the decaying columns at a zero
    /// of s11, by a least-squares fit over both components, then the norming
    /// constant c_j = b_j / s11'(k_j).
    pub fn norming_constant(&self, kj: C64) -> Result<C64> {
        let u = self.column(kj, Side::Minus, 0)?;
        let vraw = self.column(kj, Side::Plus, 1)?;
        let phase = (c64(0.0, 2.0) * kj * self.x_match()).exp();
        let v = [vraw[0] * phase, vraw[1] * phase];
        let vv = v[0].norm_sqr() + v[1].norm_sqr();
        let vu = v[0].conj() * u[0] + v[1].conj() * u[1];
        let b = vu / vv;
        let resid = ((u[0] - b * v[0]).norm_sqr() + (u[1] - b * v[1]).norm_sqr()).sqrt();
        let unorm = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        let rel = resid / unorm.max(f64::MIN_POSITIVE);
        if rel > tol::PROP {
            return Err(Error::ColumnsNotProportional { k: format!("{kj}"), residual: rel });
        }
        let ds = self.s11_derivative(kj)?;
        if ds.norm() < tol::DERIV_FLOOR {
            return Err(Error::NonSimpleZero { k: format!("{kj}"), winding: 1 });
        }
        Ok(b / ds)
    }
}

/// Jost matrix at the matching point nearest x = 0.
pub fn integrate_jost(profile: &InitialProfile, k: C64, side: Side) -> Result<Mat2> {
    JostEngine::new(profile).matrix(k, side)
}

/// (s11, s12) at one k; s12 is None off the real axis.
pub fn scattering_at(profile: &InitialProfile, k: C64) -> Result<(C64, Option<C64>)> {
    JostEngine::new(profile).scattering(k)
}

/// Result of a real-axis reflection scan.
#[derive(Debug, Clone)]
pub struct ReflectionScan {
    pub samples: Vec<ScatteringSample>,
    /// per-sample | |s11|^2 + |s12|^2 - 1 |
    pub residuals: Vec<f64>,
}

impl ReflectionScan {
    pub fn max_unitarity_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Sample (s11, s12, unitarity residual) over a real k grid in parallel.
/// The grid must stay outside the excluded hole (-k_min, k_min).
pub fn scan_reflection(profile: &InitialProfile, kgrid: &[f64]) -> Result<ReflectionScan> {
    for &k in kgrid {
        if k.abs() < tol::K_MIN {
            return Err(Error::ZeroSpectralParameter(k.abs()));
        }
    }
    let engine = JostEngine::new(profile);
    let rows: Result<Vec<(ScatteringSample, f64)>> = kgrid
        .par_iter()
        .map(|&k| {
            let s = engine.s_matrix(k)?;
            let (s11, s12) = (s.at(0, 0), s.at(0, 1));
            if s11.norm() < tol::ROOT {
                return Err(Error::S11VanishesOnAxis { k, value: s11.norm(), tol: tol::ROOT });
            }
            let resid = (s11.norm_sqr() + s12.norm_sqr() - 1.0).abs();
            Ok((ScatteringSample { k, s11, s12 }, resid))
        })
        .collect();
    let rows = rows?;
    let (samples, residuals) = rows.into_iter().unzip();
    Ok(ReflectionScan { samples, residuals })
}

/// Reflection scan over a uniform grid that is allowed to cross the excluded
/// hole (-k_min, k_min).  Points inside the hole are not integrated; their
/// samples are filled by cubic extrapolation through the two nearest scanned
/// anchors on each side, so consumers that assume a complete uniform grid
/// (interpolation, Cauchy integrals) keep working.
pub fn scan_reflection_bridged(profile: &InitialProfile, kgrid: &[f64]) -> Result<ReflectionScan> {
    if kgrid.len() < 4 {
        return Err(Error::Malformed("reflection scan needs at least 4 grid points".into()));
    }
    let dk = kgrid[1] - kgrid[0];
    if dk <= 0.0 {
        return Err(Error::Malformed("k grid must be strictly increasing".into()));
    }
    for w in kgrid.windows(2) {
        if ((w[1] - w[0]) - dk).abs() > 1e-9 * dk.max(1.0) {
            return Err(Error::Malformed("bridged scan requires a uniform k grid".into()));
        }
    }
    let hole: Vec<usize> =
        (0..kgrid.len()).filter(|&i| kgrid[i].abs() < tol::K_MIN).collect();
    if hole.is_empty() {
        return scan_reflection(profile, kgrid);
    }
    let lo = hole[0];
    let hi = *hole.last().unwrap();
    if hole.len() != hi - lo + 1 {
        return Err(Error::Malformed("hole points are not contiguous".into()));
    }
    if lo < 2 || hi + 2 >= kgrid.len() {
        return Err(Error::Malformed(
            "grid must extend at least two points beyond the excluded hole on each side".into(),
        ));
    }
    let outside: Vec<f64> =
        kgrid.iter().copied().filter(|k| k.abs() >= tol::K_MIN).collect();
    let scan = scan_reflection(profile, &outside)?;
    let anchor_idx = [lo - 2, lo - 1, hi + 1, hi + 2];
    let xs = anchor_idx.map(|i| kgrid[i]);
    // positions of the anchors within the scanned (hole-free) sample list
    let pos = |i: usize| if i < lo { i } else { i - hole.len() };
    let f11 = anchor_idx.map(|i| scan.samples[pos(i)].s11);
    let f12 = anchor_idx.map(|i| scan.samples[pos(i)].s12);
    let mut samples = Vec::with_capacity(kgrid.len());
    let mut residuals = Vec::with_capacity(kgrid.len());
    for (i, &k) in kgrid.iter().enumerate() {
        if i >= lo && i <= hi {
            let s11 = lagrange4(&xs, &f11, k);
            let s12 = lagrange4(&xs, &f12, k);
            samples.push(ScatteringSample { k, s11, s12 });
            residuals.push((s11.norm_sqr() + s12.norm_sqr() - 1.0).abs());
        } else {
            let p = pos(i);
            samples.push(scan.samples[p]);
            residuals.push(scan.residuals[p]);
        }
    }
    Ok(ReflectionScan { samples, residuals })
}

// ---- discrete spectrum --------------------------------------------------

/// Accumulated argument increment of s11 along the segment [za, zb], with
/// adaptive bisection until each piece turns by less than pi/2.
fn edge_arg(engine: &JostEngine, za: C64, fa: C64, zb: C64, fb: C64, depth: usize) -> Result<f64> {
    let d = (fb / fa).arg();
    if d.abs() < PI / 2.0 {
        return Ok(d);
    }
    if depth >= 32 {
        return Err(Error::Malformed(format!(
            "argument tracking stalled between {za} and {zb}; a zero of s11 sits on or \
             numerically on the contour — shift the search box"
        )));
    }
    let zm = (za + zb) * 0.5;
    let fm = engine.s11(zm)?;
    Ok(edge_arg(engine, za, fa, zm, fm, depth + 1)? + edge_arg(engine, zm, fm, zb, fb, depth + 1)?)
}

/// All simple zeros of s11 inside the open box re_range x im_range of the
/// upper half plane.  The box is paved with cells of side <= 0.05, each cell
/// boundary winding is computed by argument tracking (shared edges evaluated
/// once), every winding-1 cell is polished by Newton, and the total winding
/// must match the refined root count.
pub fn find_discrete_spectrum(
    profile: &InitialProfile,
    re_range: (f64, f64),
    im_range: (f64, f64),
) -> Result<Vec<C64>> {
    let (re_lo, re_hi) = re_range;
    let (im_lo, im_hi) = im_range;
    if !(re_lo < re_hi) || !(im_lo < im_hi) {
        return Err(Error::Malformed("spectrum box is empty".into()));
    }
    if im_lo < IM_FLOOR {
        return Err(Error::Malformed(format!(
            "spectrum box must stay above Im k = {IM_FLOOR} (got {im_lo})"
        )));
    }
    let engine = JostEngine::new(profile);
    let ncx = ((re_hi - re_lo) / CELL).ceil().max(1.0) as usize;
    let ncy = ((im_hi - im_lo) / CELL).ceil().max(1.0) as usize;
    let hx = (re_hi - re_lo) / ncx as f64;
    let hy = (im_hi - im_lo) / ncy as f64;

    // vertex values; a vertex landing exactly on a zero is nudged off it
    let verts: Result<Vec<(C64, C64)>> = (0..(ncx + 1) * (ncy + 1))
        .into_par_iter()
        .map(|id| {
            let (i, j) = (id % (ncx + 1), id / (ncx + 1));
            let mut z = c64(re_lo + hx * i as f64, im_lo + hy * j as f64);
            let mut f = engine.s11(z)?;
            if f.norm() < 1e-12 {
                z += c64(0.0031 * hx, 0.0017 * hy);
                f = engine.s11(z)?;
            }
            Ok((z, f))
        })
        .collect();
    let verts = verts?;
    let vert = |i: usize, j: usize| verts[j * (ncx + 1) + i];

    // refined argument increments along every horizontal and vertical edge
    let h_edges: Result<Vec<f64>> = (0..ncx * (ncy + 1))
        .into_par_iter()
        .map(|id| {
            let (i, j) = (id % ncx, id / ncx);
            let (za, fa) = vert(i, j);
            let (zb, fb) = vert(i + 1, j);
            edge_arg(&engine, za, fa, zb, fb, 0)
        })
        .collect();
    let h_edges = h_edges?;
    let v_edges: Result<Vec<f64>> = (0..(ncx + 1) * ncy)
        .into_par_iter()
        .map(|id| {
            let (i, j) = (id % (ncx + 1), id / (ncx + 1));
            let (za, fa) = vert(i, j);
            let (zb, fb) = vert(i, j + 1);
            edge_arg(&engine, za, fa, zb, fb, 0)
        })
        .collect();
    let v_edges = v_edges?;
    let h_edge = |i: usize, j: usize| h_edges[j * ncx + i];
    let v_edge = |i: usize, j: usize| v_edges[j * (ncx + 1) + i];

    let mut total_winding: i32 = 0;
    let mut hot_cells: Vec<(usize, usize)> = Vec::new();
    for j in 0..ncy {
        for i in 0..ncx {
            let total = h_edge(i, j) + v_edge(i + 1, j) - h_edge(i, j + 1) - v_edge(i, j);
            let w = total / (2.0 * PI);
            let wi = w.round() as i32;
            if (w - wi as f64).abs() > 0.25 {
                return Err(Error::Malformed(format!(
                    "non-integral winding {w:.3} in cell ({i}, {j}); zero too close to a cell edge"
                )));
            }
            if wi < 0 || wi > 1 {
                let center = c64(re_lo + hx * (i as f64 + 0.5), im_lo + hy * (j as f64 + 0.5));
                return Err(Error::NonSimpleZero { k: format!("{center}"), winding: wi });
            }
            if wi == 1 {
                hot_cells.push((i, j));
                total_winding += 1;
            }
        }
    }

    // Newton polish from each hot cell's center (finite-difference slope is
    // plenty inside the basin; the certified derivative comes later)
    let roots: Result<Vec<C64>> = hot_cells
        .par_iter()
        .map(|&(i, j)| {
            let mut k = c64(re_lo + hx * (i as f64 + 0.5), im_lo + hy * (j as f64 + 0.5));
            let fd = 1e-6;
            for _ in 0..NEWTON_MAX {
                let f = engine.s11(k)?;
                if f.norm() < tol::ROOT {
                    return Ok(k);
                }
                let df = (engine.s11(k + fd)? - engine.s11(k - fd)?) / (2.0 * fd);
                if df.norm() < tol::DERIV_FLOOR {
                    return Err(Error::NonSimpleZero { k: format!("{k}"), winding: 1 });
                }
                let step = f / df;
                k -= step;
                if k.im < IM_FLOOR / 2.0 {
                    return Err(Error::WindingMismatch { total: total_winding, found: 0 });
                }
            }
            let f = engine.s11(k)?;
            if f.norm() < tol::ROOT {
                Ok(k)
            } else {
                Err(Error::WindingMismatch { total: total_winding, found: 0 })
            }
        })
        .collect();
    let mut roots = roots?;
    roots.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
    roots.dedup_by(|a, b| (*a - *b).norm() < 2.0 * tol::ROOT);

    if roots.len() as i32 != total_winding {
        return Err(Error::WindingMismatch { total: total_winding, found: roots.len() });
    }
    // simplicity certificate
    for &k in &roots {
        let ds = engine.s11_derivative(k)?;
        if ds.norm() < tol::DERIV_FLOOR {
            return Err(Error::NonSimpleZero { k: format!("{k}"), winding: 1 });
        }
    }
    Ok(roots)
}

/// Norming constants for confirmed zeros of s11.
pub fn norming_constants(profile: &InitialProfile, roots: &[C64]) -> Result<Vec<DiscreteMode>> {
    let engine = JostEngine::new(profile);
    roots
        .iter()
        .map(|&kj| Ok(DiscreteMode { k: kj, c: engine.norming_constant(kj)? }))
        .collect()
}

/// Convenience: full direct transform (reflection scan + discrete spectrum
/// + norming constants) into one ScatteringData record.
pub fn scattering_data(
    profile: &InitialProfile,
    kgrid: &[f64],
    re_range: (f64, f64),
    im_range: (f64, f64),
) -> Result<crate::types::ScatteringData> {
    let scan = if kgrid.iter().any(|k| k.abs() < tol::K_MIN) {
        scan_reflection_bridged(profile, kgrid)?
    } else {
        scan_reflection(profile, kgrid)?
    };
    let roots = find_discrete_spectrum(profile, re_range, im_range)?;
    let modes = norming_constants(profile, &roots)?;
    Ok(crate::types::ScatteringData {
        alpha: profile.alpha,
        beta: profile.beta,
        kgrid: kgrid.to_vec(),
        s11: scan.samples.iter().map(|s| s.s11).collect(),
        s12: scan.samples.iter().map(|s| s.s12).collect(),
        modes,
        unitarity_residual_max: scan.max_unitarity_residual(),
    })
}
