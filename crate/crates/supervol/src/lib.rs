//! Oracle integrators, report formats and the command-line front end for
//! supermanifold volume computations.
//!
//! The closed forms live in `supervol-core`; this crate checks them by brute
//! force (Berezin integration of the odd variables, quadrature of the even
//! ones) and exposes everything through the `supervol` binary.

pub mod chart;
pub mod cli;
pub mod error;
pub mod oracles;
pub mod quadrature;
pub mod report;

pub use error::OracleError;
