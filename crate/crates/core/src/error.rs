use thiserror::Error;

/// Errors raised by the verification library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series must have at least one coefficient")]
    EmptySeries,
    #[error("non-finite coefficient at index {index}")]
    NonFiniteCoefficient { index: usize },
    #[error("non-finite evaluation point {re} + {im}i")]
    NonFinitePoint { re: f64, im: f64 },
    #[error("point with modulus {modulus} lies outside the admissible disc (limit {limit})")]
    OutsideDisc { modulus: f64, limit: f64 },
    #[error("inner series must vanish at the origin, found constant term {re} + {im}i")]
    CompositionOrigin { re: f64, im: f64 },
    #[error("harmonic map parts have different orders ({h} vs {g})")]
    OrderMismatch { h: usize, g: usize },
    #[error("co-analytic part must vanish at the origin")]
    CoAnalyticOrigin,
    #[error("analytic part is not normalized (h(0) = 0, h'(0) = 1 required)")]
    NotNormalized,
    #[error("series order {order} is too small, need at least {required}")]
    OrderTooSmall { order: usize, required: usize },
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("radius problem {0} has a closed-form radius and no majorant function")]
    NoMajorant(String),
    #[error("radius {r} outside [0, 1)")]
    RadiusOutOfRange { r: f64 },
    #[error("bracket invalid: f({lo}) = {f_lo}, f({hi}) = {f_hi}")]
    BracketInvalid {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("function value at {x} is not finite ({value})")]
    NonFiniteValue { x: f64, value: f64 },
    #[error("bracket width {width} cannot reach tolerance {tol}")]
    ToleranceUnreachable { width: f64, tol: f64 },
    #[error("residual {residual} at root {root} exceeds tolerance {tol}")]
    ResidualTooLarge { root: f64, residual: f64, tol: f64 },
    #[error("{0}")]
    Incompatible(String),
    #[error("Schwarz check failed: sup |psi| = {sup} on the test circle")]
    SchwarzCheck { sup: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
