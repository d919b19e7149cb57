//! Inverse problem: GLM kernels from scattering data, Nyström solves and
//! potential reconstruction.

pub mod checks;
pub mod kernel;
pub mod roundtrip;
pub mod solve;

pub use kernel::GlmKernel;
pub use roundtrip::{central_window, partial_data_roundtrip, reconstruct_potential, sample_potential, GlmConfig, ReconstructionReport};
pub use solve::{reconstruct, reconstruct_points, GlmSolver, NystromConfig, Reconstruction, Row};
