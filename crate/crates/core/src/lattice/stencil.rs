//! Sparse assembly of the one-step operator from the coin table.
//!
//! A basis state `(cell, spin)` reaches at most four `(cell, spin)` pairs in
//! one step: `R1` splits it, `S1` moves each half, `R2` splits again and
//! `S2` moves the four pieces before the onsite phase.

use super::coin::{CoinField, CoinTable};
use super::field::Basis;
use super::kernel::ShiftPlan;
use crate::linalg::SparseMatrix;
use crate::{Result, C64};

fn shift(cell: (usize, usize), d: (isize, isize), ext: (usize, usize)) -> (usize, usize) {
    (
        (cell.0 as isize + d.0).rem_euclid(ext.0 as isize) as usize,
        (cell.1 as isize + d.1).rem_euclid(ext.1 as isize) as usize,
    )
}

/// Sparse periodic one-step operator in the given basis; index `2 * cell +
/// spin` as in [`SpinorField::to_flat`](super::SpinorField::to_flat).
pub fn step_operator(coins: &CoinField, basis: Basis) -> Result<SparseMatrix> {
    let plan = match basis {
        Basis::Original => ShiftPlan::ORIGINAL,
        Basis::RotatedSquare => ShiftPlan::SQUARE,
        Basis::RotatedCircle => ShiftPlan::CIRCLE,
    };
    let table = CoinTable::new(coins);
    let ext = table.extents;
    let flat = |c: (usize, usize)| c.0 * ext.1 + c.1;
    let mut cols = Vec::with_capacity(2 * ext.0 * ext.1);
    for i in 0..ext.0 {
        for j in 0..ext.1 {
            let r1 = &table.r1[flat((i, j))];
            for s in 0..2 {
                let mut col = Vec::with_capacity(4);
                for (mid_spin, d1) in [(0, plan.first.up), (1, plan.first.down)] {
                    let a = r1[mid_spin][s];
                    let mid = shift((i, j), d1, ext);
                    let r2 = &table.r2[flat(mid)];
                    for (out_spin, d2) in [(0, plan.second.up), (1, plan.second.down)] {
                        let dst = flat(shift(mid, d2, ext));
                        let v: C64 = table.phase[dst] * r2[out_spin][mid_spin] * a;
                        col.push((2 * dst + out_spin, v));
                    }
                }
                cols.push(col);
            }
        }
    }
    SparseMatrix::from_columns(2 * ext.0 * ext.1, cols)
}
