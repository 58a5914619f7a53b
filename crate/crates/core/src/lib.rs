//! Two-dimensional split-step quantum walks with position-dependent U(2)
//! coins: matrix-free time evolution, scattering transmission, level-spacing
//! statistics and critical-exponent estimators.
//!
//! The walk operator is `U = F · S_y · R₂ · S_x · R₁`, with coins
//! parameterized by Euler angles per site (see [`lattice::coin_matrix`]).

pub mod critical;
pub mod disorder;
mod error;
pub mod evolve;
pub mod lattice;
pub mod linalg;
pub mod scatter;
pub mod spectral;
pub mod stats;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use disorder::{DisorderKind, DisorderSpec};
pub use lattice::{
    apply_timestep, apply_timestep_rotated, coin_matrix, Basis, BoundaryCondition, CoinAngles,
    CoinField, RotatedCell, RotatedVariant, Site, Spin, SpinorField, Walk,
};
pub use linalg::DenseMatrix;
