//! Exact symbolic computation for affine varieties over the non-perfect
//! fields `F_p(v_1, ..., v_m)`.
//!
//! Over a perfect ground field the singular locus of a hypersurface is cut
//! out by the partial derivatives with respect to the variables. Over
//! `k = F_p(v)` this fails: `x^p + v*y^p` has identically vanishing
//! `x`- and `y`-partials, yet is regular away from the origin. The missing
//! information is recovered by differentiating with respect to the base
//! parameters `v_i` as well, i.e. by working with the absolute p-basis
//! `{v_1, ..., v_m, x_1, ..., x_n}` and the divided-power (Hasse)
//! operators attached to it.
//!
//! The crate is organized as follows:
//!
//! * [`polyring`] — sparse exact polynomials over `F_p` in the basis
//!   elements, the free-module decomposition over p-th powers, and the
//!   fraction field of the parameter subring.
//! * [`diffops`] — the Hasse operators `D^beta`, first-order partials,
//!   the composition law, and canonical decomposition of black-box
//!   differential operators.
//! * [`groebner`] — a Buchberger engine over `Frac(F_p[v])` supplying
//!   normal forms, membership, dimension, and matrix minors.
//! * [`jacobian`] — the extended Jacobian criterion for regularity,
//!   singular-locus ideals, and p-basis refitting along a regular system
//!   of parameters.
//! * [`orderloci`] — orders of elements and ideals at primes via
//!   differential saturation, with an independent brute-force oracle.
//! * [`text`] — the text grammar for polynomials, multi-indices,
//!   fractions, and points.

pub mod diffops;
pub mod groebner;
pub mod jacobian;
pub mod orderloci;
pub mod polyring;
pub mod text;

use thiserror::Error;

/// Errors raised by the computational kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),
    #[error("modulus {0} exceeds the supported range (p < 2^16)")]
    ModulusTooLarge(u64),
    #[error("duplicate basis name `{0}`")]
    DuplicateName(String),
    #[error("invalid basis name `{0}` (expected [a-zA-Z][a-zA-Z0-9_]*)")]
    InvalidName(String),
    #[error("operands belong to different rings")]
    RingMismatch,
    #[error("point does not assign the geometric variable `{0}`")]
    IncompleteAssignment(String),
    #[error("`{0}` is not a geometric variable of the ring")]
    NotGeometric(String),
    #[error("fraction involves the geometric variable `{0}`; only base parameters are allowed")]
    NotBaseField(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("the unit ideal has no dimension")]
    UnitIdeal,
    #[error("minor size {r} out of range for a {rows}x{cols} matrix")]
    BadSize { r: usize, rows: usize, cols: usize },
    #[error("prime given by generators must carry the asserted-prime flag")]
    UnverifiedPrime,
    #[error("the prime does not contain the ideal (generator {0} survives)")]
    PrimeDoesNotContainIdeal(String),
    #[error("parameters are not independent at the prime: no nonvanishing minor")]
    RankDeficient,
    #[error("operator exceeds the declared order: reconstruction differs on probe {0}")]
    OrderViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
