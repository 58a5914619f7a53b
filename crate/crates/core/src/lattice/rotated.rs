//! Maps between the rotated unit-cell basis and the original lattice.
//!
//! Storage cell `(i, j)` of a rotated region is the unit cell
//! `(n_plus, n_minus) = (i - origin.0, j - origin.1)`. Storage site `(x, y)`
//! of an original region is lattice site `(x - offset.0, y - offset.1)`
//! taken modulo the region extents.

use super::coin::{CoinAngles, CoinField};
use super::field::{Basis, RotatedCell, Spin, SpinorField};
use super::walk::RotatedVariant;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Embedding {
    pub variant: RotatedVariant,
    pub rotated_extents: (usize, usize),
    pub origin: (i64, i64),
    pub original_extents: (usize, usize),
    pub offset: (i64, i64),
}

impl Embedding {
    fn cell(&self, i: usize, j: usize) -> RotatedCell {
        RotatedCell {
            n_plus: i as i64 - self.origin.0,
            n_minus: j as i64 - self.origin.1,
            s: Spin::Up,
        }
    }

    fn storage(&self, (x, y): (i64, i64)) -> (usize, usize) {
        (
            (x + self.offset.0).rem_euclid(self.original_extents.0 as i64) as usize,
            (y + self.offset.1).rem_euclid(self.original_extents.1 as i64) as usize,
        )
    }

    /// The site a walker of this variant occupies in cell `(i, j)` at integer
    /// times.
    pub fn home_site(&self, i: usize, j: usize) -> (usize, usize) {
        let c = self.cell(i, j);
        self.storage(match self.variant {
            RotatedVariant::Square => c.square_site(),
            RotatedVariant::Circle => c.circle_site(),
        })
    }

    /// The site occupied in cell `(i, j)` between the two shifts.
    pub fn midstep_site(&self, i: usize, j: usize) -> (usize, usize) {
        let c = self.cell(i, j);
        self.storage(match self.variant {
            RotatedVariant::Square => c.circle_site(),
            RotatedVariant::Circle => c.square_site(),
        })
    }

    pub fn embed(&self, state: &SpinorField) -> Result<SpinorField> {
        if state.basis() != self.variant.basis() {
            return Err(Error::BasisMismatch {
                expected: self.variant.basis().name(),
                got: state.basis().name(),
            });
        }
        state.check_extents(self.rotated_extents)?;
        let mut out = SpinorField::zeros(Basis::Original, self.original_extents)?;
        for i in 0..self.rotated_extents.0 {
            for j in 0..self.rotated_extents.1 {
                let (x, y) = self.home_site(i, j);
                let k = out.index(x, y);
                out.amps[k] = state.amps[state.index(i, j)];
            }
        }
        Ok(out)
    }

    pub fn extract(&self, state: &SpinorField) -> Result<SpinorField> {
        if state.basis() != Basis::Original {
            return Err(Error::BasisMismatch {
                expected: Basis::Original.name(),
                got: state.basis().name(),
            });
        }
        state.check_extents(self.original_extents)?;
        let mut out = SpinorField::zeros(self.variant.basis(), self.rotated_extents)?;
        for i in 0..self.rotated_extents.0 {
            for j in 0..self.rotated_extents.1 {
                let (x, y) = self.home_site(i, j);
                let k = out.index(i, j);
                out.amps[k] = state.amps[state.index(x, y)];
            }
        }
        Ok(out)
    }

    /// Per-cell coins reproducing the original-basis walk on the cells.
    pub fn rotated_coins(&self, coins: &CoinField) -> Result<CoinField> {
        if coins.extents() != self.original_extents {
            return Err(Error::ExtentMismatch {
                expected: self.original_extents,
                got: coins.extents(),
            });
        }
        let mut cells = Vec::with_capacity(self.rotated_extents.0 * self.rotated_extents.1);
        for i in 0..self.rotated_extents.0 {
            for j in 0..self.rotated_extents.1 {
                let (hx, hy) = self.home_site(i, j);
                let (mx, my) = self.midstep_site(i, j);
                let home = coins.get(hx, hy);
                let mid = coins.get(mx, my);
                cells.push(CoinAngles {
                    theta1: home.theta1,
                    alpha1: home.alpha1,
                    beta1: home.beta1,
                    phi: home.phi,
                    theta2: mid.theta2,
                    alpha2: mid.alpha2,
                    beta2: mid.beta2,
                });
            }
        }
        CoinField::from_vec(self.rotated_extents, cells)
    }
}
