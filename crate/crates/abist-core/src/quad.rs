//! Quadrature and interpolation helpers.
//!
//! Everything here is deliberately boring: fixed-order Gauss-Legendre panels,
//! trapezoid sums, 4-point Lagrange interpolation and a trapezoid rule on a
//! circle for Cauchy-integral derivatives.  The interesting numerics (where
//! these are applied) live in the callers.

use crate::types::C64;

/// 10-node Gauss-Legendre abscissae on [-1, 1] (positive half).
const GL_X: [f64; 5] = [
    0.148_874_338_981_631_21,
    0.433_395_394_129_247_19,
    0.679_409_568_299_024_41,
    0.865_063_366_688_984_51,
    0.973_906_528_517_171_72,
];

/// Matching weights.
const GL_W: [f64; 5] = [
    0.295_524_224_714_752_87,
    0.269_266_719_309_996_35,
    0.219_086_362_515_982_04,
    0.149_451_349_150_580_59,
    0.066_671_344_308_688_14,
];

/// Single 10-node Gauss-Legendre panel over [a, b].
pub fn gauss_legendre<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64) -> C64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..5 {
        acc += (f(mid + half * GL_X[i]) + f(mid - half * GL_X[i])) * GL_W[i];
    }
    acc * half
}

/// Composite rule: `panels` equal Gauss-Legendre panels over [a, b].
pub fn composite_gl<F: FnMut(f64) -> C64>(mut f: F, a: f64, b: f64, panels: usize) -> C64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for p in 0..panels {
        let pa = a + h * p as f64;
        acc += gauss_legendre(&mut f, pa, pa + h);
    }
    acc
}

/// Trapezoid sum of uniformly spaced complex samples.
pub fn trapezoid(values: &[C64], dx: f64) -> C64 {
    if values.len() < 2 {
        return C64::new(0.0, 0.0);
    }
    let mut acc = (values[0] + values[values.len() - 1]) * 0.5;
    for v in &values[1..values.len() - 1] {
        acc += v;
    }
    acc * dx
}

pub fn trapezoid_real(values: &[f64], dx: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    (0.5 * (values[0] + values[values.len() - 1]) + inner) * dx
}

/// Weights reconstructing the segment midpoint from the two nodes on each
/// side; exact for cubics.  Used by the ODE steppers for half-step values.
pub const MID4: [f64; 4] = [-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0];

/// 4-point Lagrange interpolation at arbitrary x.
pub fn lagrange4(xs: &[f64; 4], fs: &[C64; 4], x: f64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..4 {
        let mut w = 1.0;
        for j in 0..4 {
            if j != i {
                w *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += fs[i] * w;
    }
    acc
}

/// Lagrange interpolation on a uniform table.  Picks the 4-point stencil
/// around x, clamped at the ends.  Returns None outside [first, last].
pub fn interp_uniform(x0: f64, dx: f64, table: &[C64], x: f64) -> Option<C64> {
    let n = table.len();
    if n < 4 {
        return None;
    }
    let s = (x - x0) / dx;
    if s < -1e-9 || s > (n - 1) as f64 + 1e-9 {
        return None;
    }
    let i = (s.floor() as isize).clamp(1, n as isize - 3) as usize;
    let base = i - 1;
    let xs = [
        x0 + dx * base as f64,
        x0 + dx * (base + 1) as f64,
        x0 + dx * (base + 2) as f64,
        x0 + dx * (base + 3) as f64,
    ];
    let fs = [table[base], table[base + 1], table[base + 2], table[base + 3]];
    Some(lagrange4(&xs, &fs, x))
}

/// d/dz of an analytic f at `center`, from a 16-node trapezoid rule on a
/// circle of the given radius.  Exponentially accurate while the circle stays
/// inside f's domain of analyticity.
pub fn cauchy_derivative<F: FnMut(C64) -> C64>(mut f: F, center: C64, radius: f64, nodes: usize) -> C64 {
    let n = nodes.max(4);
    let mut acc = C64::new(0.0, 0.0);
    for m in 0..n {
        let th = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
        let e = C64::new(0.0, th).exp();
        acc += f(center + e * radius) / e;
    }
    acc / (radius * n as f64)
}
