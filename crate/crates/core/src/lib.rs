//! Exact-arithmetic engine for twisted Zhu-type associative algebras
//! attached to vertex algebras.
//!
//! Everything is computed over arbitrary-precision rationals; there is no
//! floating-point mode anywhere. Ideal quotients are approximated from
//! below by finitely generated spans, so positive membership results are
//! certificates and negative ones are reported as inconclusive.

pub mod basis;
pub mod bracket;
pub mod error;
pub mod identities;
pub mod rational;
pub mod report;
pub mod resop;
pub mod rowred;
pub mod series;
pub mod sparse;
pub mod state;
pub mod suite;
pub mod twist;
pub mod voa;

pub use error::{Error, Result};
pub use rational::Rat;
