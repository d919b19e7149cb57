//! Shared numerical kernels: ODE propagation, band quadrature, Nyström
//! solves and root bracketing.

pub mod fredholm;
pub mod ode;
pub mod quadrature;
pub mod roots;

pub use fredholm::{solve_fredholm2, FredholmSolution};
pub use ode::{propagate_many, propagate_ode, propagate_through, wronskian, State};
pub use quadrature::{band_quadrature, Band, GridKind, QuadratureRule, RealGrid, Singularity};
pub use roots::{bracket_roots, bracket_roots_with};

pub use num_complex::Complex64 as C64;
