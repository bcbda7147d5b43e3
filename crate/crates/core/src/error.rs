use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A state or gate parameter lies outside its admissible range.
    #[error("parameter `{name}` = {value} is outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// A matrix failed a structural predicate (Hermitian, traceless, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("rotation gate with angle {0} has no distinguished eigenbasis")]
    DegenerateGate(f64),

    #[error("gate angles must satisfy beta > alpha (alpha = {alpha}, beta = {beta})")]
    Ordering { alpha: f64, beta: f64 },

    #[error("gates coincide modulo 2pi (alpha = {alpha}, beta = {beta})")]
    CoincidentGates { alpha: f64, beta: f64 },

    #[error("basis set {0} cannot be reduced to canonical form")]
    NotReducible(String),

    /// The analytic formulas are only derived for a in [0, 1/2] and phi in [0, pi/2].
    #[error("state with Bloch vector ({x}, {y}, {z}) is outside the canonical region; use the oracle")]
    NonCanonical { x: f64, y: f64, z: f64 },

    #[error("angle {name} = {value} is outside the analytically supported range {range}")]
    UnsupportedAngle {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("basis set is empty")]
    EmptyBasis,

    #[error("basis set has {0} points; support enumeration is limited to 16")]
    BasisTooLarge(usize),

    #[error("expected {expected} weights, got {got}")]
    Arity { expected: usize, got: usize },
}
