use serde::{Deserialize, Serialize};

use super::coin::{CoinField, CoinTable};
use super::field::{Basis, Boundary, BoundaryCondition, SpinorField};
use super::kernel::{ShiftPlan, Sweep, Window};
use crate::{Error, Result, C64};

/// Which rotated-basis walk: started on the even (`□`) or odd (`○`) `x+y`
/// sublattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotatedVariant {
    Square,
    Circle,
}

impl RotatedVariant {
    pub fn basis(self) -> Basis {
        match self {
            RotatedVariant::Square => Basis::RotatedSquare,
            RotatedVariant::Circle => Basis::RotatedCircle,
        }
    }

    pub fn plan(self) -> ShiftPlan {
        match self {
            RotatedVariant::Square => ShiftPlan::SQUARE,
            RotatedVariant::Circle => ShiftPlan::CIRCLE,
        }
    }
}

/// A timestep operator bound to a coin table, with its own scratch buffer.
#[derive(Debug, Clone)]
pub struct Walk {
    basis: Basis,
    plan: ShiftPlan,
    table: CoinTable,
    frozen_row: Option<usize>,
    tmp: Vec<[C64; 2]>,
}

impl Walk {
    pub fn original(coins: &CoinField) -> Self {
        Self::with_plan(Basis::Original, ShiftPlan::ORIGINAL, CoinTable::new(coins))
    }

    /// Rotated-basis walk; `coins` is indexed by unit cell, substep 1 and the
    /// phase taken from the cell's starting site, substep 2 from the site
    /// reached after the first shift.
    pub fn rotated(coins: &CoinField, variant: RotatedVariant) -> Self {
        Self::with_plan(variant.basis(), variant.plan(), CoinTable::new(coins))
    }

    pub(crate) fn with_plan(basis: Basis, plan: ShiftPlan, table: CoinTable) -> Self {
        let n = table.extents.0 * table.extents.1;
        Self {
            basis,
            plan,
            table,
            frozen_row: None,
            tmp: vec![[C64::new(0.0, 0.0); 2]; n],
        }
    }

    /// Skip the second shift on axis-0 row `row` (the scattering lead column).
    pub(crate) fn freeze_second_shift(mut self, row: usize) -> Self {
        self.frozen_row = Some(row);
        self
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub(crate) fn table_mut(&mut self) -> &mut CoinTable {
        &mut self.table
    }

    pub fn extents(&self) -> (usize, usize) {
        self.table.extents
    }

    fn check(&self, state: &SpinorField) -> Result<()> {
        if state.basis() != self.basis {
            return Err(Error::BasisMismatch {
                expected: self.basis.name(),
                got: state.basis().name(),
            });
        }
        state.check_extents(self.table.extents)
    }

    /// One full timestep in place.
    pub fn step(&mut self, state: &mut SpinorField, bc: &mut BoundaryCondition) -> Result<()> {
        self.check(state)?;
        let win = Window::full(self.table.extents);
        self.sweep(state, win);
        absorb(state, bc, win);
        Ok(())
    }

    /// One timestep restricted to `win`; the caller guarantees the state is
    /// supported one cell inside `win` (or `win` is the full grid).
    pub fn step_window(
        &mut self,
        state: &mut SpinorField,
        bc: &mut BoundaryCondition,
        win: Window,
    ) -> Result<()> {
        self.check(state)?;
        self.sweep(state, win);
        absorb(state, bc, win);
        Ok(())
    }

    fn sweep(&mut self, state: &mut SpinorField, win: Window) {
        let sweep = Sweep {
            extents: self.table.extents,
            plan: self.plan,
            r1: &self.table.r1,
            r2: &self.table.r2,
            phase: Some(&self.table.phase),
            frozen_row: self.frozen_row,
        };
        sweep.run(&mut state.amps, &mut self.tmp, win);
    }
}

/// Zero the absorbing frame cells that lie inside `win` and book the loss.
pub(crate) fn absorb(state: &mut SpinorField, bc: &mut BoundaryCondition, win: Window) {
    let (n0, n1) = state.extents();
    let mut lost = 0.0;
    let mut clear = |amps: &mut [[C64; 2]], k: usize| {
        let a = &mut amps[k];
        lost += a[0].norm_sqr() + a[1].norm_sqr();
        *a = [C64::new(0.0, 0.0); 2];
    };
    if bc.axis0 == Boundary::Absorbing {
        for r in [0, n0 - 1] {
            if r >= win.rows.0 && r < win.rows.1 {
                for c in win.cols.0..win.cols.1 {
                    clear(&mut state.amps, r * n1 + c);
                }
            }
            if n0 == 1 {
                break;
            }
        }
    }
    if bc.axis1 == Boundary::Absorbing {
        for c in [0, n1 - 1] {
            if c >= win.cols.0 && c < win.cols.1 {
                for r in win.rows.0..win.rows.1 {
                    clear(&mut state.amps, r * n1 + c);
                }
            }
            if n1 == 1 {
                break;
            }
        }
    }
    bc.accumulated_loss += lost;
}

/// Apply one original-basis timestep `F S_y R₂ S_x R₁`.
pub fn apply_timestep(
    state: &SpinorField,
    coins: &CoinField,
    bc: &mut BoundaryCondition,
) -> Result<SpinorField> {
    state.check_extents(coins.extents())?;
    let mut out = state.clone();
    Walk::original(coins).step(&mut out, bc)?;
    Ok(out)
}

/// Apply one rotated-basis timestep of the given variant.
pub fn apply_timestep_rotated(
    state: &SpinorField,
    coins: &CoinField,
    variant: RotatedVariant,
    bc: &mut BoundaryCondition,
) -> Result<SpinorField> {
    state.check_extents(coins.extents())?;
    let mut out = state.clone();
    Walk::rotated(coins, variant).step(&mut out, bc)?;
    Ok(out)
}
