//! KdV evolution of steplike finite-gap data and reconstruction of `u(x, t)`.

pub mod evolve;
pub mod flow;
pub mod ist;

pub use evolve::{evolve_data, EvolvedData, KdvFlow};
pub use flow::{traveling_speed, BackgroundFlow};
pub use ist::{kdv_residual, moment_gate, reconstruct_at, sample_at, solve_kdv_ist, KdvConfig, KdvSlice, ResidualEstimate};
