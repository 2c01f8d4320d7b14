use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure vocabulary for the whole crate.  Variants are grouped by the
/// stage that raises them; every message carries the offending numbers so a
/// failed run can be diagnosed from the one-line report alone.
#[derive(Debug, Error)]
pub enum Error {
    // ---- profile / grid validation ----
    #[error("profile tail is not decaying: |A({x:.6})| = {value:.3e} exceeds {tol:.1e}")]
    NonDecayingTail { x: f64, value: f64, tol: f64 },
    #[error("x grid must be uniform and ascending with at least 16 points")]
    BadGrid,
    #[error("alpha must be negative (got {0})")]
    BadAlpha(f64),
    #[error("beta must be nonzero")]
    BadBeta,

    // ---- Jost integration / scattering ----
    #[error("Jost step at x = {x:.6}, k = {k}: local error {err:.3e} exceeds {tol:.1e}")]
    StepUnstable { x: f64, k: String, err: f64, tol: f64 },
    #[error("|s11({k:.6})| = {value:.3e} below {tol:.1e}; reflection coefficient undefined")]
    S11VanishesOnAxis { k: f64, value: f64, tol: f64 },
    #[error("winding total {total} does not match the {found} refined zeros")]
    WindingMismatch { total: i32, found: usize },
    #[error("zero of s11 near {k} has winding {winding}; only simple zeros are supported")]
    NonSimpleZero { k: String, winding: i32 },
    #[error("derivative circle of radius {radius:.1e} around {k} touches the real axis")]
    CircleTouchesAxis { k: String, radius: f64 },
    #[error("Jost columns at k = {k} are not proportional: relative residual {residual:.3e}")]
    ColumnsNotProportional { k: String, residual: f64 },

    // ---- phase geometry ----
    #[error("spectral parameter too close to zero: |k| = {0:.3e}")]
    ZeroSpectralParameter(f64),
    #[error("stationary point requires alpha*t and x of matching sign: x = {x:.6}, t = {t:.6}, alpha = {alpha:.6}")]
    WrongSignRegime { x: f64, t: f64, alpha: f64 },
    #[error("velocity window [{v1:.6}, {v2:.6}] is empty or not positive-ordered")]
    EmptyInterval { v1: f64, v2: f64 },
    #[error("mode modulus |k_j| = {kj:.9} coincides with a partition boundary {boundary:.9}")]
    DegenerateBoundary { kj: f64, boundary: f64 },
    #[error("mode velocity {v:.6} lies inside the cone window [{v1:.6}, {v2:.6}]")]
    ModeInsideCone { v: f64, v1: f64, v2: f64 },

    // ---- conjugation factors ----
    #[error("evaluation point {k} is within {guard:.1e} of the spectral cut; use boundary values")]
    TooCloseToCut { k: String, guard: f64 },
    #[error("boundary evaluation at {k:.6} is within {guard:.1e} of an endpoint of the cut")]
    TooCloseToEndpoint { k: f64, guard: f64 },
    #[error("k grid does not cover {k:.6}; interpolation out of range")]
    InterpolationOutOfRange { k: f64 },

    // ---- residue ansatz ----
    #[error("evaluation point {k} is within {guard:.1e} of the pole at {pole}")]
    PoleHit { k: String, pole: String, guard: f64 },
    #[error("residue system condition estimate {cond:.3e} exceeds {max:.1e}")]
    SingularSystem { cond: f64, max: f64 },
    #[error("solved residues violate the pole conditions: relative residual {residual:.3e}")]
    ResidueMismatch { residual: f64 },
    #[error("B reconstructions disagree: t-derivative vs x-integral differ by {diff:.3e} (allowed {tol:.3e})")]
    InconsistentB { diff: f64, tol: f64 },
    #[error("outer matrix at the stationary point has |det - 1| = {0:.3e}")]
    NonUnimodularMout(f64),

    // ---- parabolic-cylinder coefficients ----
    #[error("Gamma function overflow/invalid at argument {0}")]
    GammaOverflow(String),
    #[error("point (x, t) = ({x:.6}, {t:.6}) lies outside the requested cone")]
    OutsideCone { x: f64, t: f64 },

    // ---- PDE evolver ----
    #[error("field blew up at t = {t:.6}: max |A| = {max_a:.3e}")]
    BlowUp { t: f64, max_a: f64 },
    #[error("compatibility residual jumped from {before:.3e} to {after:.3e} at t = {t:.6}")]
    CompatibilityDrift { before: f64, after: f64, t: f64 },
    #[error("domain too small: |{field}| = {value:.3e} at the boundary exceeds {tol:.1e}")]
    DomainTooSmall { field: &'static str, value: f64, tol: f64 },
    #[error("time step {dt:.6} exceeds the stability ceiling {dt_max:.6}")]
    StepTooLarge { dt: f64, dt_max: f64 },

    // ---- IO / formats ----
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
