//! Lattice state, coin and shift operators, and the composed timestep.

mod coin;
mod dense;
mod dump;
mod field;
pub(crate) mod kernel;
mod rotated;
mod stencil;
mod symmetry;
mod walk;

pub use coin::{coin_matrix, mat2_adjoint, mat2_mul, CoinAngles, CoinField, CoinTable, Mat2};
pub use dense::{dense_build, dense_build_rotated, dense_from_walk, sublattice_indices, DEFAULT_DENSE_CAP};
pub use dump::{read_field_csv, write_field_csv};
pub use field::{Basis, Boundary, BoundaryCondition, RotatedCell, Site, Spin, SpinorField};
pub use kernel::{ShiftPlan, Shifts, Window};
pub use rotated::Embedding;
pub use stencil::step_operator;
pub use symmetry::{is_chiral_symmetric, sublattice_conjugate, ChiralCheck, ChiralOperator};
pub use walk::{apply_timestep, apply_timestep_rotated, RotatedVariant, Walk};
