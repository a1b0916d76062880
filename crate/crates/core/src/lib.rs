//! Exact integer-multiplicity cubical chains and space-time chains of
//! bounded variation, with exact LP/ILP solvers for flat norms and the
//! Lipschitz deformation distance.

pub mod bv;
pub mod chain;
pub mod deform;
pub mod error;
pub mod exec;
pub mod exact_lp;
pub mod fixtures;
pub mod flatnorm;
pub mod oracles;
pub mod random;
pub mod rational;
pub mod spacetime;
pub mod suite;
pub mod transform;

pub use error::{Error, Result};
pub use rational::Rational;
