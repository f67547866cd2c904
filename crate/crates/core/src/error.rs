//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A quantity expected to be a polynomial kept a negative exponent with a
    /// nonzero coefficient.
    #[error("negative exponent {exponent:?} survives with coefficient {coefficient} in {context}")]
    NegativeExponentResidue { exponent: (i64, i64), coefficient: String, context: &'static str },

    /// Evaluation of a Laurent polynomial with negative exponents at a zero
    /// coordinate.
    #[error("evaluation at zero coordinate hits a pole (min exponents {min_exponents:?})")]
    PoleAtZero { min_exponents: (i64, i64) },

    /// A Pochhammer factor in a series denominator vanished before the series
    /// terminated.
    #[error("Pochhammer denominator ({base} + {offset}) vanishes")]
    PochhammerPole { base: String, offset: u32 },

    /// Gamma evaluated at a pole (zero or a negative integer).
    #[error("Gamma pole at {argument}")]
    GammaPole { argument: f64 },

    /// A q-Pochhammer factor in a series denominator vanished.
    #[error("q-Pochhammer denominator vanishes at index {index} (base {base})")]
    QPochhammerPole { base: f64, index: u32 },

    /// A closed-form coefficient formula divided by zero.
    #[error("degenerate denominator in {context}")]
    DegenerateDenominator { context: String },

    /// The Christoffel kernel construction requires a nonzero value at the
    /// transform point.
    #[error("kernel construction hit a zero polynomial value at nu = {nu}")]
    KernelPole { nu: f64 },

    /// Synthetic division left a nonzero remainder where an exact root was
    /// expected.
    #[error("nonzero remainder {remainder} after division by (x - {root})")]
    NonzeroRemainder { remainder: String, root: String },

    /// A polynomial could not be written exactly over the proposed stencil of
    /// basis members.
    #[error("stencil expansion left a nonzero residual: {context}")]
    StencilResidual { context: String },

    /// A weight was evaluated outside the open support of its measure.
    #[error("point {point:?} lies outside the open support")]
    OutsideSupport { point: (f64, f64) },

    /// Parameters are incompatible with the requested support regime.
    #[error("parameters incompatible with regime: {reason}")]
    RegimeMismatch { reason: String },

    /// A structure-relation residual was requested at a point where a weight
    /// or coefficient factor vanishes.
    #[error("singular point for structure relations: {reason}")]
    SingularPoint { reason: String },

    /// Quadrature failed to converge within the level budget. The best
    /// estimate and its error indicator are carried along.
    #[error("quadrature did not converge: value {value}, err_est {err_est}")]
    NoConvergence { value: f64, err_est: f64 },

    /// Parameter validation failure.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
