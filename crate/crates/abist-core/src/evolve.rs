//! Direct numerical integration of the coupled system, used as an
//! independent oracle for every reconstruction and long-time claim.
//!
//! With F = A_t the first equation becomes an ODE along each time slice,
//!   F_x = alpha A + beta A B,      B_x = -(gamma/2) (A F* + A* F),
//! and for decaying data both F and B vanish at the left boundary, so the
//! pair integrates causally from x_min.  Time stepping is classical RK4 in
//! t with the slice solve furnishing A_t at every stage.

use crate::error::{Error, Result};
use crate::types::{c64, FieldSnapshot, InitialProfile, C64};

/// Ceiling on the fixed time step (stability paired with the default grids).
pub const DT_MAX: f64 = 0.01;
/// Any |F| or |B| beyond this aborts the slice integration.
const FIELD_CEILING: f64 = 1e6;
/// Compatibility residuals below this are treated as roundoff noise by the
/// one-step drift monitor.
const DRIFT_FLOOR: f64 = 1e-10;
/// Boundary ceiling for |A| and |B| during evolution; larger values mean
/// the field has reached the edge and the domain no longer represents the
/// decaying sector.
pub const BOUNDARY_CEILING: f64 = 1e-6;

/// A at the midpoint of grid cell i, by the cubic through four neighbours.
fn midpoint(a: &[C64], i: usize) -> C64 {
    let n = a.len();
    if i == 0 {
        0.3125 * a[0] + 0.9375 * a[1] - 0.3125 * a[2] + 0.0625 * a[3]
    } else if i + 2 >= n {
        0.0625 * a[n - 4] - 0.3125 * a[n - 3] + 0.9375 * a[n - 2] + 0.3125 * a[n - 1]
    } else {
        ((a[i] + a[i + 1]) * 9.0 - a[i - 1] - a[i + 2]) * (1.0 / 16.0)
    }
}

/// Integrate the slice ODE for (F = A_t, B) left to right by RK4 on the
/// sample grid, starting from (0, 0) at the decaying left boundary.
pub fn solve_xslice(a: &[C64], dx: f64, alpha: f64, beta: f64) -> Result<(Vec<C64>, Vec<f64>)> {
    let n = a.len();
    if n < 16 || !(dx > 0.0) {
        return Err(Error::BadGrid);
    }
    let gamma = 1.0 / beta;
    let rhs = |av: C64, f: C64, b: f64| -> (C64, f64) {
        (alpha * av + beta * b * av, -gamma * (av.conj() * f).re)
    };
    let mut f_out = Vec::with_capacity(n);
    let mut b_out = Vec::with_capacity(n);
    let mut f = c64(0.0, 0.0);
    let mut b = 0.0;
    f_out.push(f);
    b_out.push(b);
    for i in 0..n - 1 {
        let am = midpoint(a, i);
        let (k1f, k1b) = rhs(a[i], f, b);
        let (k2f, k2b) = rhs(am, f + 0.5 * dx * k1f, b + 0.5 * dx * k1b);
        let (k3f, k3b) = rhs(am, f + 0.5 * dx * k2f, b + 0.5 * dx * k2b);
        let (k4f, k4b) = rhs(a[i + 1], f + dx * k3f, b + dx * k3b);
        f += dx / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
        b += dx / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        if f.norm() > FIELD_CEILING || b.abs() > FIELD_CEILING {
            return Err(Error::BlowUp { t: f64::NAN, max_a: f.norm().max(b.abs()) });
        }
        f_out.push(f);
        b_out.push(b);
    }
    Ok((f_out, b_out))
}

/// Snapshot at the profile's own time (t = 0) with consistent (A_t, B).
pub fn initial_snapshot(profile: &InitialProfile) -> Result<FieldSnapshot> {
    let (a_t, b) = solve_xslice(&profile.a, profile.grid.dx, profile.alpha, profile.beta)?;
    Ok(FieldSnapshot {
        t: 0.0,
        alpha: profile.alpha,
        beta: profile.beta,
        grid: profile.grid,
        a: profile.a.clone(),
        b,
        a_t,
    })
}

/// Max-norm of the pointwise compatibility combination
/// (gamma/beta)|A_t|^2 + B^2 + (2 alpha/beta) B, which vanishes
/// identically in the decaying sector.
pub fn compatibility_residual(snap: &FieldSnapshot) -> Result<f64> {
    if snap.a_t.len() != snap.a.len() {
        return Err(Error::Malformed(
            "snapshot carries no A_t samples; run a slice solve first".into(),
        ));
    }
    let gb = 1.0 / (snap.beta * snap.beta);
    let ab = 2.0 * snap.alpha / snap.beta;
    let mut worst = 0.0f64;
    for i in 0..snap.a.len() {
        let b = snap.b[i];
        let v = gb * snap.a_t[i].norm_sqr() + b * b + ab * b;
        worst = worst.max(v.abs());
    }
    Ok(worst)
}

fn retag_blowup(e: Error, t: f64) -> Error {
    match e {
        Error::BlowUp { t: bad, max_a } if bad.is_nan() => Error::BlowUp { t, max_a },
        other => other,
    }
}

/// One classical RK4 update of A over dt; B and A_t are refreshed by a
/// final slice solve so the returned snapshot is internally consistent.
pub fn step(snap: &FieldSnapshot, dt: f64) -> Result<FieldSnapshot> {
    if !(dt > 0.0) {
        return Err(Error::Malformed(format!("time step must be positive, got {dt}")));
    }
    if dt > DT_MAX * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt, dt_max: DT_MAX });
    }
    let n = snap.a.len();
    let dx = snap.grid.dx;
    let (alpha, beta) = (snap.alpha, snap.beta);
    let slice = |a: &[C64]| solve_xslice(a, dx, alpha, beta);
    let shifted = |base: &[C64], k: &[C64], w: f64| -> Vec<C64> {
        (0..n).map(|i| base[i] + w * k[i]).collect()
    };

    let k1 = if snap.a_t.len() == n { snap.a_t.clone() } else { slice(&snap.a)?.0 };
    let k2 = slice(&shifted(&snap.a, &k1, 0.5 * dt))?.0;
    let k3 = slice(&shifted(&snap.a, &k2, 0.5 * dt))?.0;
    let k4 = slice(&shifted(&snap.a, &k3, dt))?.0;
    let mut a_new = Vec::with_capacity(n);
    let mut max_a = 0.0f64;
    for i in 0..n {
        let v = snap.a[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        max_a = max_a.max(v.norm());
        a_new.push(v);
    }
    let t_new = snap.t + dt;
    if max_a > FIELD_CEILING {
        return Err(Error::BlowUp { t: t_new, max_a });
    }
    let (a_t, b) = slice(&a_new).map_err(|e| retag_blowup(e, t_new))?;
    let out = FieldSnapshot {
        t: t_new,
        alpha,
        beta,
        grid: snap.grid,
        a: a_new,
        b,
        a_t,
    };
    let before = compatibility_residual(snap)?;
    let after = compatibility_residual(&out)?;
    if after > 10.0 * before.max(DRIFT_FLOOR) {
        return Err(Error::CompatibilityDrift { before, after, t: t_new });
    }
    Ok(out)
}

/// Evolution output: kept snapshots plus the compatibility record.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<FieldSnapshot>,
    /// Max compatibility residual of each kept snapshot.
    pub compat_residuals: Vec<f64>,
    pub dt: f64,
}

fn check_boundaries(snap: &FieldSnapshot) -> Result<()> {
    let n = snap.grid.n;
    for i in [0, n - 1] {
        let av = snap.a[i].norm();
        if av > BOUNDARY_CEILING {
            return Err(Error::DomainTooSmall { field: "A", value: av, tol: BOUNDARY_CEILING });
        }
        let bv = snap.b[i].abs();
        if bv > BOUNDARY_CEILING {
            return Err(Error::DomainTooSmall { field: "B", value: bv, tol: BOUNDARY_CEILING });
        }
    }
    Ok(())
}

/// March the profile to t_final with fixed steps, keeping every
/// `snapshot_every`-th slice (and always the first and last).  Boundary
/// decay of both fields is enforced throughout so the run provably stays
/// inside the decaying sector.
pub fn evolve(
    profile: &InitialProfile,
    t_final: f64,
    dt: f64,
    snapshot_every: usize,
) -> Result<Trajectory> {
    if !(t_final > 0.0) || snapshot_every == 0 {
        return Err(Error::Malformed(format!(
            "evolution needs t_final > 0 and snapshot_every >= 1 (got {t_final}, {snapshot_every})"
        )));
    }
    let mut current = initial_snapshot(profile)?;
    check_boundaries(&current)?;
    let mut snapshots = vec![current.clone()];
    let mut residuals = vec![compatibility_residual(&current)?];
    let n_steps = (t_final / dt).round().max(1.0) as usize;
    let dt_eff = t_final / n_steps as f64;
    if dt_eff > DT_MAX * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt: dt_eff, dt_max: DT_MAX });
    }
    for s in 1..=n_steps {
        current = step(&current, dt_eff)?;
        check_boundaries(&current)?;
        if s % snapshot_every == 0 || s == n_steps {
            snapshots.push(current.clone());
            residuals.push(compatibility_residual(&current)?);
        }
    }
    Ok(Trajectory { snapshots, compat_residuals: residuals, dt: dt_eff })
}

/// Check a user-supplied B(x, 0) against the slice-determined one.  The
/// x-problem never reads B, so an inconsistent B cannot enter the transform;
/// a mismatch is reported as a warning message instead of an error.
pub fn b0_consistency(profile: &InitialProfile, b0: &[f64]) -> Result<Option<String>> {
    if b0.len() != profile.grid.n {
        return Err(Error::BadGrid);
    }
    let (_, b) = solve_xslice(&profile.a, profile.grid.dx, profile.alpha, profile.beta)?;
    let worst = b0
        .iter()
        .zip(&b)
        .map(|(u, v)| (u - v).abs())
        .fold(0.0f64, f64::max);
    if worst > 1e-4 {
        Ok(Some(format!(
            "ConsistencyWarning: supplied B(x,0) deviates from the slice-determined one by {worst:.3e}; the transform uses the computed B"
        )))
    } else {
        Ok(None)
    }
}

/// |A| peak location with three-point parabolic refinement.
pub fn peak_position(snap: &FieldSnapshot) -> f64 {
    let (mut imax, mut best) = (0usize, -1.0f64);
    for (i, v) in snap.a.iter().enumerate() {
        let m = v.norm_sqr();
        if m > best {
            best = m;
            imax = i;
        }
    }
    if imax == 0 || imax + 1 == snap.grid.n {
        return snap.grid.x(imax);
    }
    let (ym, y0, yp) = (
        snap.a[imax - 1].norm_sqr(),
        snap.a[imax].norm_sqr(),
        snap.a[imax + 1].norm_sqr(),
    );
    let denom = ym - 2.0 * y0 + yp;
    if denom.abs() < 1e-300 {
        return snap.grid.x(imax);
    }
    snap.grid.x(imax) + 0.5 * snap.grid.dx * (ym - yp) / denom
}

/// Centered finite-difference residuals of both equations over a window of
/// three or more equally spaced snapshots: max-norm over interior points of
///   A_{xt} - alpha A - beta A B     and     B_x + (gamma/2)(|A|^2)_t.
pub fn pde_residual(window: &[FieldSnapshot]) -> Result<(f64, f64)> {
    if window.len() < 3 {
        return Err(Error::Malformed(format!(
            "pde residual needs >= 3 snapshots, got {}",
            window.len()
        )));
    }
    let n = window[0].grid.n;
    let dt = window[1].t - window[0].t;
    for w in window.windows(2) {
        if w[0].grid.n != n || ((w[1].t - w[0].t) - dt).abs() > 1e-9 * dt.abs() {
            return Err(Error::Malformed(
                "pde residual needs one grid and uniform snapshot spacing".into(),
            ));
        }
    }
    let dx = window[0].grid.dx;
    let gamma = 1.0 / window[0].beta;
    let mut res_a = 0.0f64;
    let mut res_b = 0.0f64;
    for m in 1..window.len() - 1 {
        let (prev, mid, next) = (&window[m - 1], &window[m], &window[m + 1]);
        for i in 1..n - 1 {
            // d/dt of the centered A_x
            let ax_prev = (prev.a[i + 1] - prev.a[i - 1]) / (2.0 * dx);
            let ax_next = (next.a[i + 1] - next.a[i - 1]) / (2.0 * dx);
            let a_xt = (ax_next - ax_prev) / (2.0 * dt);
            let ra = a_xt - mid.alpha * mid.a[i] - mid.beta * mid.a[i] * mid.b[i];
            res_a = res_a.max(ra.norm());

            let b_x = (mid.b[i + 1] - mid.b[i - 1]) / (2.0 * dx);
            let da2 = (next.a[i].norm_sqr() - prev.a[i].norm_sqr()) / (2.0 * dt);
            res_b = res_b.max((b_x + 0.5 * gamma * da2).abs());
        }
    }
    Ok((res_a, res_b))
}
