//! Complex gamma function (Lanczos, g = 7, 9 terms).
//!
//! Needed only for the parabolic-cylinder matching coefficients, where the
//! argument is +-i nu with nu small and real, so relative accuracy around
//! 1e-13 on the strip |Im z| < 2 is far more than enough.

use crate::types::{c64, C64};

const G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma(z) for complex z (poles at non-positive integers return inf/nan).
pub fn gamma(z: C64) -> C64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let pi = std::f64::consts::PI;
        return pi / ((z * pi).sin() * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut a = c64(LANCZOS[0], 0.0);
    for (i, &coef) in LANCZOS.iter().enumerate().skip(1) {
        a += coef / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * std::f64::consts::PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * a
}
