//! Volumes cut from quadric bodies by hyperplanes, and the surfaces of
//! flotation those volumes determine.
//!
//! The crate works in `E^{n+1}` with points written `(x_1, …, x_n, z)`.
//! Five solid families are supported, each in an axis-aligned frame:
//!
//! | family | canonical solid |
//! |--------|-----------------|
//! | [`Family::Paraboloid`] | `z ≥ Σ x_i²` |
//! | [`Family::HyperboloidUpper`] | `z ≥ 1`, `Σ x_i² ≤ z² − 1` |
//! | [`Family::OneSheetTruncated`] | `z ≥ −1/ε`, `Σ x_i² ≤ 1 + z²` |
//! | [`Family::Cone`] | `z ≥ 0`, `Σ x_i² ≤ z²` |
//! | [`Family::Ellipsoid`] | `Σ x_i² + z² ≤ 1` |
//!
//! Every cut volume reduces to a one-dimensional kernel of a single reduced
//! coordinate ζ (see [`geometry::cut_params`] and [`kernels`]). The
//! [`flotation`] module runs that relation both ways, and [`oracle`] checks
//! it with Monte Carlo and slice quadrature that never touch the kernels.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

mod error;
mod math;

pub mod detkit;
pub mod flotation;
pub mod geometry;
pub mod kernels;
pub mod oracle;

pub use error::{Error, Infeasibility, Result};
pub use geometry::{CutParams, Dim, Family, Hyperplane, InnerSurfaceParam, QuadricBody};
pub use kernels::{KernelEval, alpha};
