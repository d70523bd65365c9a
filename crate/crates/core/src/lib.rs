//! Traveling flame-front waves in the coordinate-free (tangent-angle,
//! arclength) formulation: residuals for the linear and nonlinear curvature
//! closures, bifurcation points, quasi-Newton continuation of wave branches,
//! interface reconstruction and IMEX time evolution for stability probing.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bifurcation;
pub mod cli;
pub mod error;
pub mod evolution;
pub mod geometry;
pub mod model;
pub mod solver;
pub mod spectral;

pub use error::{FlameError, Result};
pub use model::{ModelKind, WaveParams};
pub use spectral::ThetaProfile;
