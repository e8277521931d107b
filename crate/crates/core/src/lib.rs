//! Eventual non-negativity of powers of real polynomials.

pub mod classify;
pub mod convolve;
pub mod corpus;
pub mod covering;
pub mod error;
pub mod interval;
pub mod parse;
pub mod partitions;
pub mod poly;
pub mod powers;
pub mod rational;
pub mod saddle;
pub mod strongpos;

pub use error::{Error, Result};
pub use poly::SparsePolynomial;
