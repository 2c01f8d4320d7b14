//! Field comparison metrics and the decay-rate regression used to check
//! the t^{-1/2} / t^{-3/4} structure of the long-time expansion.

use crate::error::{Error, Result};
use crate::types::{FieldSnapshot, C64};

/// Single-time comparison outcome plus the optional cross-time decay fit.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub linf: f64,
    pub l2: f64,
    /// Number of grid points the metrics were evaluated on.
    pub grid_overlap: usize,
    /// Fitted d(log err)/d(log t); present with >= 4 time samples.
    pub decay_slope: Option<f64>,
    pub decay_intercept: Option<f64>,
    pub t_range: (f64, f64),
}

/// A and B values of one snapshot linearly resampled at x.
fn sample_linear(snap: &FieldSnapshot, x: f64) -> Option<(C64, f64)> {
    let g = &snap.grid;
    let pos = (x - g.x_min) / g.dx;
    if pos < -1e-9 || pos > (g.n - 1) as f64 + 1e-9 {
        return None;
    }
    let i = (pos.floor().max(0.0) as usize).min(g.n - 2);
    let mut w = (pos - i as f64).clamp(0.0, 1.0);
    // snap to the node when x coincides with one, so identical grids
    // compare sample-to-sample with no interpolation round-off
    if w < 1e-9 {
        w = 0.0;
    } else if w > 1.0 - 1e-9 {
        w = 1.0;
    }
    let a = (1.0 - w) * snap.a[i] + w * snap.a[i + 1];
    let b = (1.0 - w) * snap.b[i] + w * snap.b[i + 1];
    Some((a, b))
}

/// L-infinity and L2 distances between two field snapshots over the overlap
/// of their grids.  Both |A_a - A_b| and |B_a - B_b| enter: linf is the max
/// over both families, l2 the joint dx-weighted root sum.  When the grids
/// differ, the second field is linearly resampled onto the first, which is
/// admitted only while the spacings are within a factor of two.
pub fn compare_fields(a: &FieldSnapshot, b: &FieldSnapshot) -> Result<CompareReport> {
    let ratio = a.grid.dx / b.grid.dx;
    if !(0.5..=2.0).contains(&ratio) {
        return Err(Error::Malformed(format!(
            "grid spacings differ by more than 2x (dx = {} vs {})",
            a.grid.dx, b.grid.dx
        )));
    }
    let lo = a.grid.x_min.max(b.grid.x_min);
    let hi = a.grid.x_max().min(b.grid.x_max());
    if !(hi > lo) {
        return Err(Error::Malformed(format!(
            "grids do not overlap: [{}, {}] vs [{}, {}]",
            a.grid.x_min,
            a.grid.x_max(),
            b.grid.x_min,
            b.grid.x_max()
        )));
    }
    let mut linf = 0.0f64;
    let mut sum2 = 0.0f64;
    let mut count = 0usize;
    for (i, x) in a.grid.xs().enumerate() {
        if x < lo - 1e-12 || x > hi + 1e-12 {
            continue;
        }
        let Some((bv_a, bv_b)) = sample_linear(b, x) else { continue };
        let da = (a.a[i] - bv_a).norm();
        let db = (a.b[i] - bv_b).abs();
        linf = linf.max(da).max(db);
        sum2 += (da * da + db * db) * a.grid.dx;
        count += 1;
    }
    if count == 0 {
        return Err(Error::Malformed("no shared grid points to compare".into()));
    }
    Ok(CompareReport {
        linf,
        l2: sum2.sqrt(),
        grid_overlap: count,
        decay_slope: None,
        decay_intercept: None,
        t_range: (a.t.min(b.t), a.t.max(b.t)),
    })
}

/// Least-squares fit of log(err) against log(t).  Returns (slope,
/// intercept); needs at least four positive samples to be meaningful,
/// otherwise None (the caller emits a warning).
pub fn decay_fit(samples: &[(f64, f64)]) -> Option<(f64, f64)> {
    if samples.len() < 4 {
        return None;
    }
    if samples.iter().any(|&(t, e)| t <= 0.0 || e <= 0.0) {
        return None;
    }
    let n = samples.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(t, e) in samples {
        let x = t.ln();
        let y = e.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-300 {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    Some((slope, intercept))
}

/// Combine per-time comparison errors into one report carrying the fit.
pub fn series_report(per_time: &[(f64, CompareReport)]) -> Result<CompareReport> {
    let Some(first) = per_time.first() else {
        return Err(Error::Malformed("empty comparison series".into()));
    };
    let mut linf = 0.0f64;
    let mut l2 = 0.0f64;
    let mut overlap = usize::MAX;
    let (mut t_lo, mut t_hi) = (first.0, first.0);
    let samples: Vec<(f64, f64)> = per_time
        .iter()
        .map(|(t, r)| {
            linf = linf.max(r.linf);
            l2 = l2.max(r.l2);
            overlap = overlap.min(r.grid_overlap);
            t_lo = t_lo.min(*t);
            t_hi = t_hi.max(*t);
            (*t, r.linf)
        })
        .collect();
    let fit = decay_fit(&samples);
    Ok(CompareReport {
        linf,
        l2,
        grid_overlap: overlap,
        decay_slope: fit.map(|f| f.0),
        decay_intercept: fit.map(|f| f.1),
        t_range: (t_lo, t_hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{c64, Grid};

    fn snap(grid: Grid, t: f64, f: impl Fn(f64) -> (C64, f64)) -> FieldSnapshot {
        let mut a = Vec::with_capacity(grid.n);
        let mut b = Vec::with_capacity(grid.n);
        for x in grid.xs() {
            let (av, bv) = f(x);
            a.push(av);
            b.push(bv);
        }
        FieldSnapshot { t, alpha: -2.0, beta: 1.0, grid, a, b, a_t: Vec::new() }
    }

    #[test]
    fn identical_fields_compare_to_zero() {
        let grid = Grid::new(-5.0, 5.0, 101).unwrap();
        let s = snap(grid, 1.0, |x| (c64(x.sin(), x.cos()), x * x));
        let r = compare_fields(&s, &s).unwrap();
        assert_eq!(r.linf, 0.0);
        assert_eq!(r.l2, 0.0);
        assert_eq!(r.grid_overlap, 101);
    }

    #[test]
    fn known_offset_is_measured() {
        let grid = Grid::new(0.0, 1.0, 101).unwrap();
        let s1 = snap(grid, 1.0, |_| (c64(0.0, 0.0), 0.0));
        let s2 = snap(grid, 1.0, |_| (c64(3e-3, 4e-3), 0.0));
        let r = compare_fields(&s1, &s2).unwrap();
        assert!((r.linf - 5e-3).abs() < 1e-15);
        // constant pointwise error: l2 = err * sqrt(n dx)
        let want = 5e-3 * (101.0 * grid.dx).sqrt();
        assert!((r.l2 - want).abs() < 1e-12);
    }

    #[test]
    fn resampling_handles_offset_grids() {
        let g1 = Grid::new(-4.0, 4.0, 401).unwrap();
        let g2 = Grid::new(-4.01, 4.01, 573).unwrap();
        let f = |x: f64| (c64((0.7 * x).sin(), 0.1 * x), (0.5 * x).cos());
        let s1 = snap(g1, 2.0, f);
        let s2 = snap(g2, 2.0, f);
        let r = compare_fields(&s1, &s2).unwrap();
        // only linear-interpolation error remains: O(dx^2)
        assert!(r.linf < 1e-4, "resample linf {}", r.linf);
        assert!(r.grid_overlap == 401);
    }

    #[test]
    fn incompatible_grids_are_rejected() {
        let g1 = Grid::new(-4.0, 4.0, 101).unwrap();
        let far = Grid::new(10.0, 18.0, 101).unwrap();
        let fine = Grid::new(-4.0, 4.0, 801).unwrap();
        let f = |_: f64| (c64(0.0, 0.0), 0.0);
        assert!(compare_fields(&snap(g1, 0.0, f), &snap(far, 0.0, f)).is_err());
        assert!(compare_fields(&snap(g1, 0.0, f), &snap(fine, 0.0, f)).is_err());
    }

    #[test]
    fn decay_fit_recovers_power_law() {
        let samples: Vec<(f64, f64)> =
            [5.0f64, 10.0, 20.0, 40.0, 80.0].iter().map(|&t| (t, 3.0 * t.powf(-0.75))).collect();
        let (slope, intercept) = decay_fit(&samples).unwrap();
        assert!((slope + 0.75).abs() < 1e-12, "slope {slope}");
        assert!((intercept - 3.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn short_series_has_no_slope() {
        assert!(decay_fit(&[(1.0, 0.5), (2.0, 0.3)]).is_none());
        assert!(decay_fit(&[(1.0, 0.5), (2.0, 0.3), (3.0, 0.2)]).is_none());
        // zero errors cannot be log-fit
        assert!(decay_fit(&[(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, 0.0)]).is_none());
    }

    #[test]
    fn series_report_aggregates() {
        let grid = Grid::new(0.0, 1.0, 64).unwrap();
        let per: Vec<(f64, CompareReport)> = [5.0, 10.0, 20.0, 40.0]
            .iter()
            .map(|&t| {
                let s1 = snap(grid, t, |_| (c64(0.0, 0.0), 0.0));
                let s2 = snap(grid, t, |_| (c64(t.powf(-0.75), 0.0), 0.0));
                (t, compare_fields(&s1, &s2).unwrap())
            })
            .collect();
        let r = series_report(&per).unwrap();
        assert!((r.decay_slope.unwrap() + 0.75).abs() < 1e-10);
        assert_eq!(r.t_range, (5.0, 40.0));
        assert!((r.linf - 5.0f64.powf(-0.75)).abs() < 1e-15);
    }
}
