//! Numerical toolkit for radial analysis on anisotropic dilation groups.
//!
//! The crate models R^n with a family of dilations `D_lambda` given by
//! positive per-coordinate weights, measures everything against quasi-norms
//! homogeneous under those dilations, differentiates along dilation orbits,
//! integrates in polar form, and checks a family of weighted integral
//! identities and inequalities (with their sharp constants) to quadrature
//! accuracy.

pub mod calculus;
pub mod config;
pub mod error;
pub mod group;
pub mod identities;
pub mod quadrature;
pub mod report;
pub mod sharpness;
pub mod testfuncs;
pub mod util;

pub use error::{Error, Result};
pub use group::{DilationGroup, Point, QuasiNorm, Setting};
