//! Transformation kernels computed directly from the potential, used as an
//! independent check of the GLM path.

pub mod checks;
pub mod edge;
pub mod solve;

pub use edge::{EdgeResidueKernel, EdgeTerm};
pub use solve::{solve_transformation_kernel, TransformConfig, TriangularKernel};
