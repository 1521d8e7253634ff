use thiserror::Error;

/// Errors produced by model construction, vector-field evaluation, and
/// numerical integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A model parameter is outside its admissible range.
    #[error("parameter {name} = {value} must satisfy {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// A population vector does not lie on the unit simplex within tolerance.
    #[error("({0}, {1}) is off the unit simplex beyond tolerance")]
    OffSimplex(f64, f64),

    /// A reduced state lies outside the unit box beyond tolerance.
    #[error("state ({x}, {z}) lies outside [0,1]^2")]
    OutOfBox { x: f64, z: f64 },

    /// Population proportions must be nonnegative.
    #[error("negative population proportion (n_p = {np}, n_c = {nc})")]
    NegativePopulation { np: f64, nc: f64 },

    /// An integration step produced a non-finite value. Carries the last
    /// valid state for diagnostics.
    #[error("non-finite value during {context} at t = {t}; last valid state {state}")]
    NonFinite {
        context: &'static str,
        t: f64,
        state: String,
    },

    /// Stability classification was requested for a point outside the box.
    #[error("equilibrium {index} is spurious; it has no stability classification")]
    SpuriousEquilibrium { index: u8 },

    /// The closed-form basin split only applies under specific parameter
    /// and state hypotheses; callers must fall back to numeric basin mapping.
    #[error("analytic basin split not applicable: {0}")]
    BasinHypotheses(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
