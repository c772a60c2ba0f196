//! Exact q-expansion arithmetic for level-one modular forms, with a
//! verification harness for Eisenstein-series congruences modulo prime
//! powers.
//!
//! The crate is organized around a small number of layers:
//!
//! - [`series`]: truncated q-expansions over the rationals and over Z/p^m;
//! - [`bernoulli`]: exact Bernoulli numbers by the defining recurrence;
//! - [`eisenstein`]: divisor sums and the G_k / E_k / Delta expansions;
//! - [`operators`]: the theta operator and the weight-raising derivative;
//! - [`basis`]: monomial bases of the weight-w spaces and linear solving
//!   over Z/p^m into congruence witnesses;
//! - [`relations`]: the exact identities tying c(k,m) G_{2k} to the
//!   derivative of G_{2k-2} and binomial-weighted Eisenstein products;
//! - [`verify`]: theorem-level checks that emit machine-readable reports.

pub mod basis;
pub mod bernoulli;
pub mod cache;
pub mod eisenstein;
pub mod error;
pub mod operators;
pub mod relations;
pub mod series;
pub mod text;
pub mod verify;

pub use error::{Error, Result};
