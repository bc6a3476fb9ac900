//! Self-contained numerical kernels used by the solvers.

mod basis;
mod bernoulli;
mod linalg;
mod quadrature;
mod roots;

pub use basis::LagrangeBasis;
pub use bernoulli::bernoulli;
pub use linalg::{dense_solve, tridiag_solve, DenseMatrix, LuFactors, TridiagonalMatrix};
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use roots::find_root;
