//! Hybridizable discontinuous Galerkin solvers for the 1D steady
//! convection-diffusion problem `(beta u - alpha u')' = f`, stabilized with
//! the Scharfetter-Gummel choice of the penalty parameter `tau`, together
//! with the SG finite-volume scheme on the dual grid and the experiment
//! drivers behind the `sghdg` command line tool.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod exact;
pub mod hdg;
pub mod mesh;
pub mod metrics;
pub mod numerics;
pub mod sgfv;
pub mod stabilization;

pub use error::{Error, Result};
pub use exact::{exact_flux, exact_u, ProblemSpec};
pub use hdg::{condense, extract_coeffs, solve_hdg, CondensedCoefficients, HdgSolution};
pub use mesh::{build_dual, uniform_mesh, DualMesh, Mesh1D};
pub use sgfv::{solve_sg, SgSolution};
pub use stabilization::{delta_closed_form, delta_numeric, resolve_tau, TauChoice, TauSpec};
