//! Shared data types: grids, profiles, scattering data, cones, snapshots.

use num_complex::Complex64;

use crate::{tol, Error, Result};

pub type C64 = Complex64;
pub const CI: C64 = C64::new(0.0, 1.0);
pub const CONE: C64 = C64::new(1.0, 0.0);

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Uniform x grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_min: f64,
    pub dx: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if n < 16 || !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::BadGrid);
        }
        Ok(Grid { x_min, dx: (x_max - x_min) / (n - 1) as f64, n })
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + self.dx * i as f64
    }

    pub fn x_max(&self) -> f64 {
        self.x(self.n - 1)
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |i| self.x(i))
    }
}

/// 2x2 complex matrix, row major.  Small enough that everything is by value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub const fn identity() -> Self {
        Mat2([[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]])
    }

    pub fn zero() -> Self {
        Mat2([[C64::new(0.0, 0.0); 2]; 2])
    }

    pub fn from_cols(c0: [C64; 2], c1: [C64; 2]) -> Self {
        Mat2([[c0[0], c1[0]], [c0[1], c1[1]]])
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> C64 {
        self.0[i][j]
    }

    pub fn col(&self, j: usize) -> [C64; 2] {
        [self.0[0][j], self.0[1][j]]
    }

    pub fn det(&self) -> C64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        out
    }

    /// Inverse through the adjugate; caller is responsible for det != 0.
    pub fn inv(&self) -> Mat2 {
        let d = self.det();
        Mat2([[self.0[1][1] / d, -self.0[0][1] / d], [-self.0[1][0] / d, self.0[0][0] / d]])
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += rhs.0[i][j];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Mat2) -> Mat2 {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] -= rhs.0[i][j];
            }
        }
        out
    }

    pub fn norm_max(&self) -> f64 {
        self.0.iter().flatten().map(|e| e.norm()).fold(0.0, f64::max)
    }

    /// diag(s, 1/s); the sigma3 power used by the soliton-subset conjugation.
    pub fn sigma3_power(s: C64) -> Mat2 {
        Mat2([[s, C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), 1.0 / s]])
    }
}

/// Initial slice A(x, 0) on a uniform grid, together with the equation
/// parameters.  B is never an independent input here: in the decaying sector
/// it is reconstructed from A alone (see `evolve::solve_xslice`).
#[derive(Debug, Clone)]
pub struct InitialProfile {
    pub grid: Grid,
    pub a: Vec<C64>,
    pub alpha: f64,
    pub beta: f64,
}

impl InitialProfile {
    pub fn new(grid: Grid, a: Vec<C64>, alpha: f64, beta: f64) -> Result<Self> {
        if a.len() != grid.n {
            return Err(Error::BadGrid);
        }
        if !(alpha < 0.0) {
            return Err(Error::BadAlpha(alpha));
        }
        if beta == 0.0 || !beta.is_finite() {
            return Err(Error::BadBeta);
        }
        for (i, x) in [(0usize, grid.x_min), (grid.n - 1, grid.x_max())] {
            let v = a[i].norm();
            if v > tol::TAIL {
                return Err(Error::NonDecayingTail { x, value: v, tol: tol::TAIL });
            }
        }
        Ok(InitialProfile { grid, a, alpha, beta })
    }

    pub fn gamma(&self) -> f64 {
        1.0 / self.beta
    }

    /// Trapezoid L1 norm of |A|; enters the a-priori bound on Jost columns.
    pub fn l1_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.grid.n {
            let w = if i == 0 || i == self.grid.n - 1 { 0.5 } else { 1.0 };
            s += w * self.a[i].norm();
        }
        s * self.grid.dx
    }
}

/// One reflection sample on the real axis.
#[derive(Debug, Clone, Copy)]
pub struct ScatteringSample {
    pub k: f64,
    pub s11: C64,
    pub s12: C64,
}

impl ScatteringSample {
    pub fn r(&self) -> C64 {
        self.s12 / self.s11
    }
}

/// Discrete mode: zero of s11 in the upper half plane plus its norming
/// constant c = s21(k_j) / s11'(k_j).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteMode {
    pub k: C64,
    pub c: C64,
}

/// Full output of the direct transform: reflection samples on a symmetric
/// grid (the hole (-k_min, k_min) is excluded) plus discrete modes.
#[derive(Debug, Clone)]
pub struct ScatteringData {
    pub alpha: f64,
    pub beta: f64,
    pub kgrid: Vec<f64>,
    pub s11: Vec<C64>,
    pub s12: Vec<C64>,
    pub modes: Vec<DiscreteMode>,
    pub unitarity_residual_max: f64,
}

impl ScatteringData {
    pub fn samples(&self) -> impl Iterator<Item = ScatteringSample> + '_ {
        self.kgrid
            .iter()
            .zip(self.s11.iter().zip(self.s12.iter()))
            .map(|(&k, (&s11, &s12))| ScatteringSample { k, s11, s12 })
    }

    pub fn r_values(&self) -> Vec<C64> {
        self.s11.iter().zip(self.s12.iter()).map(|(a, b)| b / a).collect()
    }
}

/// Space-time cone x = x0 + v t with x0 in [x1, x2], v in [v1, v2].
/// Velocities are taken positive here (alpha < 0 pushes solitons right).
#[derive(Debug, Clone, Copy)]
pub struct ConeSpec {
    pub x1: f64,
    pub x2: f64,
    pub v1: f64,
    pub v2: f64,
}

impl ConeSpec {
    pub fn new(x1: f64, x2: f64, v1: f64, v2: f64) -> Result<Self> {
        if !(x1 <= x2) {
            return Err(Error::Malformed(format!("cone feet reversed: x1 = {x1}, x2 = {x2}")));
        }
        if !(0.0 < v1 && v1 < v2) {
            return Err(Error::EmptyInterval { v1, v2 });
        }
        Ok(ConeSpec { x1, x2, v1, v2 })
    }

    /// Whether (x, t) can be written as x0 + v t with admissible (x0, v).
    pub fn contains(&self, x: f64, t: f64) -> bool {
        x - self.v2 * t <= self.x2 && x - self.v1 * t >= self.x1
    }
}

/// Index partition of a mode set relative to a cone's spectral interval and
/// to the stationary radius k0 at one space-time point.
#[derive(Debug, Clone, Default)]
pub struct SpectrumPartition {
    /// |k_j| inside the open spectral interval.
    pub inside: Vec<usize>,
    /// |k_j| above the interval (slow solitons, fall behind the cone).
    pub above: Vec<usize>,
    /// |k_j| below the interval (fast solitons, run ahead).
    pub below: Vec<usize>,
    /// |k_j| < k0: modes whose residues must be flipped by the conjugation.
    pub delta_minus: Vec<usize>,
    /// |k_j| > k0.
    pub delta_plus: Vec<usize>,
}

/// One field slice A(x), B(x) at a fixed time, with optional A_t.
#[derive(Debug, Clone)]
pub struct FieldSnapshot {
    pub t: f64,
    pub alpha: f64,
    pub beta: f64,
    pub grid: Grid,
    pub a: Vec<C64>,
    pub b: Vec<f64>,
    /// Diagnostic t-derivative samples; empty when the producer had none.
    pub a_t: Vec<C64>,
}

impl FieldSnapshot {
    /// CSV layout: one comment line with t/alpha/beta, a header, then rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# t={} alpha={} beta={}\n",
            fmt_f64(self.t),
            fmt_f64(self.alpha),
            fmt_f64(self.beta)
        ));
        out.push_str("x,reA,imA,B\n");
        for i in 0..self.grid.n {
            out.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(self.grid.x(i)),
                fmt_f64(self.a[i].re),
                fmt_f64(self.a[i].im),
                fmt_f64(self.b[i])
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut t = None;
        let mut alpha = None;
        let mut beta = None;
        let mut xs: Vec<f64> = Vec::new();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                for tokenized in rest.split_whitespace() {
                    if let Some((key, val)) = tokenized.split_once('=') {
                        let v: f64 = val
                            .parse()
                            .map_err(|_| Error::Malformed(format!("bad header number {val:?}")))?;
                        match key {
                            "t" => t = Some(v),
                            "alpha" => alpha = Some(v),
                            "beta" => beta = Some(v),
                            _ => {}
                        }
                    }
                }
                continue;
            }
            if line.starts_with('x') {
                continue; // column header
            }
            let mut cols = line.split(',');
            let mut next = || -> Result<f64> {
                cols.next()
                    .ok_or_else(|| Error::Malformed(format!("short row {line:?}")))?
                    .trim()
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad number in row {line:?}")))
            };
            xs.push(next()?);
            let re = next()?;
            let im = next()?;
            a.push(c64(re, im));
            b.push(next()?);
        }
        let (t, alpha, beta) = match (t, alpha, beta) {
            (Some(t), Some(alpha), Some(beta)) => (t, alpha, beta),
            _ => return Err(Error::Malformed("missing t/alpha/beta header".into())),
        };
        if xs.len() < 2 {
            return Err(Error::BadGrid);
        }
        let dx = xs[1] - xs[0];
        for w in xs.windows(2) {
            if ((w[1] - w[0]) - dx).abs() > 1e-9 * dx.abs().max(1.0) {
                return Err(Error::BadGrid);
            }
        }
        let grid = Grid { x_min: xs[0], dx, n: xs.len() };
        Ok(FieldSnapshot { t, alpha, beta, grid, a, b, a_t: Vec::new() })
    }
}

/// Shortest text that round-trips the value exactly; used by the CSV writer.
pub fn fmt_f64(v: f64) -> String {
    let mut s = format!("{v}");
    if s.parse::<f64>() != Ok(v) {
        s = format!("{v:e}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_tiny_and_reversed() {
        assert!(Grid::new(0.0, 1.0, 8).is_err());
        assert!(Grid::new(1.0, -1.0, 32).is_err());
        let g = Grid::new(-2.0, 2.0, 17).unwrap();
        assert!((g.dx - 0.25).abs() < 1e-15);
        assert!((g.x_max() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn profile_tail_check_fires() {
        let g = Grid::new(-5.0, 5.0, 64).unwrap();
        let a: Vec<C64> = g.xs().map(|x| c64((-x * x).exp(), 0.0)).collect();
        // exp(-25) ~ 1.4e-11 passes, a constant offset does not
        assert!(InitialProfile::new(g, a.clone(), -2.0, 1.0).is_ok());
        let shifted: Vec<C64> = a.iter().map(|v| v + 1e-6).collect();
        match InitialProfile::new(g, shifted, -2.0, 1.0) {
            Err(Error::NonDecayingTail { .. }) => {}
            other => panic!("expected tail error, got {other:?}"),
        }
    }

    #[test]
    fn profile_rejects_bad_parameters() {
        let g = Grid::new(-5.0, 5.0, 64).unwrap();
        let a = vec![c64(0.0, 0.0); 64];
        assert!(matches!(InitialProfile::new(g, a.clone(), 2.0, 1.0), Err(Error::BadAlpha(_))));
        assert!(matches!(InitialProfile::new(g, a, -2.0, 0.0), Err(Error::BadBeta)));
    }

    #[test]
    fn mat2_inverse_and_det() {
        let m = Mat2([[c64(1.0, 2.0), c64(0.5, 0.0)], [c64(0.0, -1.0), c64(2.0, 1.0)]]);
        let p = m.mul(&m.inv());
        assert!(p.sub(&Mat2::identity()).norm_max() < 1e-14);
        let d = m.det();
        assert!((d - (c64(1.0, 2.0) * c64(2.0, 1.0) - c64(0.5, 0.0) * c64(0.0, -1.0))).norm() < 1e-15);
    }

    #[test]
    fn cone_membership() {
        let cone = ConeSpec::new(-1.0, 1.0, 0.5, 2.0).unwrap();
        assert!(cone.contains(0.0, 0.0));
        assert!(cone.contains(10.0, 5.0));
        assert!(!cone.contains(-3.0, 1.0));
        assert!(ConeSpec::new(1.0, -1.0, 0.5, 2.0).is_err());
        assert!(ConeSpec::new(-1.0, 1.0, -0.5, 2.0).is_err());
    }

    #[test]
    fn snapshot_csv_roundtrip() {
        let grid = Grid::new(-1.0, 1.0, 21).unwrap();
        let snap = FieldSnapshot {
            t: 0.75,
            alpha: -2.0,
            beta: 1.0,
            grid,
            a: grid.xs().map(|x| c64(x, -x * 0.5)).collect(),
            b: grid.xs().map(|x| x * x).collect(),
            a_t: Vec::new(),
        };
        let text = snap.to_csv();
        let back = FieldSnapshot::from_csv(&text).unwrap();
        assert_eq!(back.grid.n, 21);
        assert!((back.t - 0.75).abs() < 1e-15);
        for i in 0..21 {
            assert!((back.grid.x(i) - snap.grid.x(i)).abs() < 1e-14);
            assert!((back.a[i] - snap.a[i]).norm() < 1e-15);
            assert!((back.b[i] - snap.b[i]).abs() < 1e-15);
        }
    }
}
