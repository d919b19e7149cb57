//! Direct and inverse scattering for one-dimensional Schrödinger operators
//! whose potential tends to different constant or periodic finite-gap
//! backgrounds on the two half-axes.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod background;
pub mod cli;
pub mod direct;
pub mod error;
pub mod glm;
pub mod io;
pub mod kdv;
pub mod numerics;
pub mod potential;
pub mod report;
pub mod transform;

pub use error::{Error, Result};
