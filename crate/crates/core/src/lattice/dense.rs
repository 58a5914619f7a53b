//! Dense matrices of the walk operator, for oracles and small spectra.

use super::coin::CoinField;
use super::field::{BoundaryCondition, SpinorField};
use super::walk::{RotatedVariant, Walk};
use crate::linalg::DenseMatrix;
use crate::{Error, Result, C64};

pub const DEFAULT_DENSE_CAP: usize = 16384;

/// The matrix whose column `k` is one step of `walk` applied to the `k`-th
/// basis vector (flat, spin-minor order).
pub fn dense_from_walk(walk: &mut Walk, bc: BoundaryCondition, cap: usize) -> Result<DenseMatrix> {
    let ext = walk.extents();
    let dim = 2 * ext.0 * ext.1;
    if dim > cap {
        return Err(Error::CapExceeded { dim, cap });
    }
    let mut m = DenseMatrix::zeros(dim, dim);
    let mut f = SpinorField::zeros(walk.basis(), ext)?;
    for k in 0..dim {
        f.amplitudes_mut().iter_mut().for_each(|a| *a = [C64::new(0.0, 0.0); 2]);
        f.amplitudes_mut()[k / 2][k % 2] = C64::new(1.0, 0.0);
        let mut b = BoundaryCondition {
            accumulated_loss: 0.0,
            ..bc
        };
        walk.step(&mut f, &mut b)?;
        for (dst, a) in m.col_mut(k).chunks_exact_mut(2).zip(f.amplitudes()) {
            dst[0] = a[0];
            dst[1] = a[1];
        }
    }
    Ok(m)
}

/// Dense `U` in the original basis with periodic boundaries.
pub fn dense_build(coins: &CoinField, cap: usize) -> Result<DenseMatrix> {
    dense_from_walk(&mut Walk::original(coins), BoundaryCondition::periodic(), cap)
}

/// Dense rotated-basis step with periodic boundaries.
pub fn dense_build_rotated(coins: &CoinField, variant: RotatedVariant, cap: usize) -> Result<DenseMatrix> {
    dense_from_walk(&mut Walk::rotated(coins, variant), BoundaryCondition::periodic(), cap)
}

/// Flat indices (both spins) of the cells `(i, j)` with `i ≡ parity.0` and
/// `j ≡ parity.1` mod 2.
pub fn sublattice_indices(extents: (usize, usize), parity: (usize, usize)) -> Vec<usize> {
    let mut out = Vec::new();
    for i in (parity.0..extents.0).step_by(2) {
        for j in (parity.1..extents.1).step_by(2) {
            let k = i * extents.1 + j;
            out.push(2 * k);
            out.push(2 * k + 1);
        }
    }
    out
}
