//! The direct problem: Jost solutions, scattering coefficients, eigenvalues
//! with norming constants, and band-edge classification.

pub mod bound;
pub mod data;
pub mod edges;
pub mod jost;
pub mod scattering;

pub use bound::{find_bound_states, BoundState};
pub use data::{build_scattering_data, necessary_conditions, potential_checks, BandGrid, GridConfig, ScatteringData};
pub use edges::{classify_edges, EdgeFit};
pub use jost::{jost, jost_states, wronskian};
pub use scattering::{scattering_at, RimSample};
