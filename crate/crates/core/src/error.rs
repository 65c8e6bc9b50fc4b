use thiserror::Error;

/// Errors raised while evaluating material responses, kinematics, reflection
/// coefficients or spectral densities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("limit model requires limit-form reflection")]
    LimitModel,

    #[error("frequency {re}{im:+}i lies outside the admissible domain (closed upper half-plane)")]
    FrequencyDomain { re: f64, im: f64 },

    #[error("invalid material model: {0}")]
    InvalidModel(String),

    #[error("velocity fraction beta = {0} must satisfy |beta| < 1")]
    Velocity(f64),

    #[error("invalid sample point: {0}")]
    Domain(String),

    #[error("normal-incidence axis s = 0 has a degenerate polarization basis")]
    NormalIncidence,

    #[error("degenerate co-moving frame: polarization radicand {0} is not positive")]
    DegenerateFrame(f64),

    #[error("Fresnel pole: vanishing {which} denominator")]
    FresnelPole { which: &'static str },

    #[error("near-resonance cavity denominator |D| = {magnitude:e} at (omega, u, v) = ({omega}, {u}, {v})")]
    CavityResonance {
        magnitude: f64,
        omega: f64,
        u: f64,
        v: f64,
    },

    #[error("zero frequency is a singular point of the occupation factor")]
    ZeroFrequency,

    #[error("channel {0} is not handled by this density")]
    Channel(&'static str),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
