//! Crate error type. Every fallible operation funnels into [`Error`] so the
//! CLI can map failures onto its exit-code contract in one place.

use thiserror::Error;

/// Unified error for construction, parsing, algebra, and numeric evaluation.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// Malformed part-set, class, weight, or layer description.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally invalid argument (empty finite set, a > m, zero modulus...).
    #[error("invalid argument: {0}")]
    Invalid(String),

    /// A weight was asked for an exact rational value it does not have
    /// (z-scaled weight in a rational-only context).
    #[error("weight is not exact here: {0}")]
    InexactWeight(String),

    /// Series operation on operands of different truncation order.
    #[error("truncation order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),

    /// Reciprocal of a series whose constant term is not invertible.
    #[error("series constant term is not invertible: {0}")]
    NotInvertible(String),

    /// A sum or product was detected to diverge (or an evaluation left its
    /// region of convergence). The message records what was observed.
    #[error("divergent: {0}")]
    Divergent(String),

    /// Input outside the mathematical domain of the operation
    /// (s <= 1 on an infinite part set, 1 in an unrestricted product set...).
    #[error("out of domain: {0}")]
    Domain(String),

    /// An integer that does not correspond to a partition in the requested
    /// class (composite part in a prime partition, part equal to 1...).
    #[error("no such partition: {0}")]
    NoSuchPartition(String),
}
