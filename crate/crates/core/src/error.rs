use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edges must be strictly increasing (violated at index {index})")]
    NotIncreasing { index: usize },
    #[error("edge vector must have even length >= 2, got {len}")]
    OddLength { len: usize },
    #[error("edge {index} is not finite")]
    NonFiniteEdge { index: usize },
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(f64),

    #[error("empty integration interval [{c}, {d}]")]
    EmptyInterval { c: f64, d: f64 },
    #[error("integrand is not finite at node x = {x}")]
    NonFiniteSample { x: f64 },
    #[error("quadrature needs at least one node")]
    NoNodes,

    #[error("critical-polynomial system is singular (condition number {cond:e})")]
    SingularSystem { cond: f64 },
    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
    #[error("point {x} is not in the interior of a band")]
    OutsideBands { x: f64 },
    #[error("capacity did not converge: N -> 2N moved the result by {delta:e}")]
    NonConvergence { delta: f64 },
    #[error("finite-difference step {h} makes a perturbed set invalid")]
    DegenerateStep { h: f64 },

    #[error("invalid Jacobi data: {0}")]
    InvalidJacobi(String),
    #[error("polynomial root with imaginary part {im:e} (all roots should be real)")]
    ComplexRoots { im: f64 },

    #[error("time step underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("window half-width {w} too small, need at least {min}")]
    WindowTooSmall { w: usize, min: usize },

    #[error("sampler rejected {0} consecutive draws")]
    RejectionOverflow(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
