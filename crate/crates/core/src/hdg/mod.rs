//! HDG(k) discretization of the 1D problem: local assembly, static
//! condensation to the trace system, and recovery of the cell fields.

mod condense;
mod local;
pub mod rational;
mod solution;

pub use condense::{condense, extract_coeffs, CondensedCoefficients, CondensedSystem};
pub use local::{assemble_local, LocalBlocks, LocalCondensation};
pub use solution::{solve_hdg, HdgSolution};
