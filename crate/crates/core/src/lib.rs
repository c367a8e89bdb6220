//! Discontinuous Galerkin solver for hyperbolic conservation laws with a compact subcell
//! WENO limiter.

pub mod basis;
pub mod dg;
pub mod error;
pub mod harness;
pub mod indicator;
pub mod limiter;
pub mod mesh;
pub mod physics;
pub mod quadrature;
pub mod time_integration;

pub use error::{Error, Result};
