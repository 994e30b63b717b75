//! Exact and arbitrary-precision machinery for partition-indexed infinite
//! products and partition zeta functions.
//!
//! The crate is organized bottom-up:
//!
//! * [`partition`]: integer partitions, part-set filters, weight functions,
//!   and the multiplicative statistic `n_lambda` (product of parts).
//! * [`series`]: truncated formal power series over exact rationals, with an
//!   optional polynomial marker variable tracking partition length.
//! * [`numeric`]: arbitrary-precision real evaluation (fixed-point over big
//!   integers), Bernoulli numbers, the Riemann zeta function, and numeric
//!   evaluation of the product expansions with tail bounds.
//! * [`zeta`]: partition zeta functions over part-set classes, closed forms,
//!   doubling and telescoping identities, and brute-force oracles.
//! * [`etaq`]: coefficient extraction for quotients of layered products.
//! * [`verify`]: named identity suites shared by the test surface and the CLI.
//! * [`parse`]: textual grammars for part sets, classes, and weights.

pub mod error;
pub mod etaq;
pub mod numeric;
pub mod parse;
pub mod partition;
pub mod series;
pub mod verify;
pub mod zeta;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
