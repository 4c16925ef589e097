//! Numerical verification toolkit for the conformal integral equation
//! `u(zeta) = int G_alpha(zeta, xi) u(xi)^p dxi` on the Heisenberg group.

pub mod cli;
pub mod error;
pub mod hgroup;
pub mod kernel;
pub mod quad;
pub mod rules;
pub mod solutions;
pub mod verify;

pub use error::{Error, Result};
pub use hgroup::{GroupContext, HPoint};
pub use kernel::{HLSParams, KernelParams};
