//! P1 finite elements: reference basis, quadrature, assembly, sparse storage
//! and the bordered direct solver.

mod assembly;
mod basis;
mod lu;
mod norms;
mod ordering;
mod quadrature;
mod space;
mod sparse;
mod system;

pub use assembly::{assemble, block_dof, block_pattern, laplace_matrix, mass_matrix, ElementData, LocalSystem};
pub use basis::reference_basis;
pub use lu::{CscMatrix, SparseLu};
pub use norms::{integrate, l2_error};
pub use ordering::nested_dissection;
pub use quadrature::{quadrature, reference_measure, QuadratureRule};
pub use space::{CellGeometry, FacetGeometry, P1Space, QUADRATURE_DEGREE};
pub use sparse::CsrMatrix;
pub use system::{backward_error, solve_direct, DirectSolver, LinearSystem, BACKWARD_ERROR_TOL};
