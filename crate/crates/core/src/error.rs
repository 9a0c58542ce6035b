use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constant term {modulus:e} of the divisor is below {tol:e}")]
    NearZeroConstantTerm { modulus: f64, tol: f64 },

    #[error("inner series has nonzero constant term {modulus:e}")]
    NonzeroInnerConstant { modulus: f64 },

    #[error("|z| = {modulus} exceeds the series evaluation radius {r_max}")]
    OutsideEvaluationDisk { modulus: f64, r_max: f64 },

    #[error("aliasing estimate {estimate:e} exceeds tolerance {tol:e}")]
    AliasingTooLarge { estimate: f64, tol: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("empty series")]
    EmptySeries,

    #[error("empty point set")]
    EmptyGrid,

    #[error("{label}: closed form and series disagree by {error:e} at z = {z}")]
    SeriesMismatch {
        label: String,
        z: String,
        error: f64,
    },

    #[error("|lambda| = {modulus} is not 1")]
    NotUnimodular { modulus: f64 },

    #[error("{label}: derivative of the analytic part vanishes near z = {z}")]
    VanishingDerivative { label: String, z: String },

    #[error("1 - e^(2i theta) omega vanishes near z = {z}")]
    DenominatorVanishes { z: String },

    #[error("{label}: normalization residual {residual:e} ({which})")]
    NotNormalized {
        label: String,
        which: &'static str,
        residual: f64,
    },

    #[error("{label}: Jacobian {jacobian:e} is not positive at z = {z}")]
    NotOrientationPreserving {
        label: String,
        z: String,
        jacobian: f64,
    },

    #[error("{label} is not certified as a member of K_H^0")]
    MembershipNotCertified { label: String },

    #[error("1 - |omega(a)|^2 = {value:e} is too small")]
    IllConditioned { value: f64 },

    #[error("|a| = {modulus} exceeds the transform cap {cap}")]
    ACapExceeded { modulus: f64, cap: f64 },

    #[error("point {modulus} is not inside the unit disk")]
    OutsideDisk { modulus: f64 },

    #[error("Re(e^(i alpha) q) = {value:e} < 0 at z = {z}")]
    NotHerglotz { z: String, value: f64 },

    #[error("q(0) = {value} is not 1")]
    NotUnitAtOrigin { value: String },

    #[error("cos(alpha) = {cos:e} is not positive")]
    DegenerateAlpha { cos: f64 },

    #[error("no admissible (alpha, beta): best minimum residual {min_residual:e}")]
    NoAdmissiblePair { min_residual: f64 },

    #[error("radius {0} is outside [0, 1)")]
    RadiusOutOfRange(f64),

    #[error("consecutive curve samples coincide at index {index}")]
    DegenerateCurve { index: usize },

    #[error("need at least {min} samples, got {got}")]
    TooFewSamples { min: usize, got: usize },

    #[error("unknown map '{0}'")]
    UnknownMap(String),

    #[error("cannot parse '{input}': {reason}")]
    Parse { input: String, reason: String },
}

pub(crate) fn fmt_z(z: num_complex::Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}
