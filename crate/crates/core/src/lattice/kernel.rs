//! The streamed two-pass sweep shared by every stepping variant.
//!
//! One timestep is `F · S2 · R2 · S1 · R1`. Pass A gathers each target cell's
//! post-`S1` components from their source cells (applying `R1` there) and
//! then applies `R2`; pass B gathers through `S2` and applies `F`. Shifts move
//! a component by at most one cell per axis, with periodic wrap.

use std::ops::{Add, Mul};

use super::coin::Mat2;

pub trait Amplitude:
    Copy + Default + Add<Output = Self> + Mul<Output = Self> + Send + Sync + 'static
{
}

impl Amplitude for f64 {}
impl Amplitude for crate::C64 {}

/// Displacements `(d0, d1)` of the `+1` and `−1` components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shifts {
    pub up: (isize, isize),
    pub down: (isize, isize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShiftPlan {
    pub first: Shifts,
    pub second: Shifts,
}

impl ShiftPlan {
    /// `S_x` then `S_y`.
    pub const ORIGINAL: ShiftPlan = ShiftPlan {
        first: Shifts {
            up: (1, 0),
            down: (-1, 0),
        },
        second: Shifts {
            up: (0, 1),
            down: (0, -1),
        },
    };

    pub const SQUARE: ShiftPlan = ShiftPlan {
        first: Shifts {
            up: (0, -1),
            down: (-1, 0),
        },
        second: Shifts {
            up: (1, 1),
            down: (0, 0),
        },
    };

    pub const CIRCLE: ShiftPlan = ShiftPlan {
        first: Shifts {
            up: (1, 0),
            down: (0, 1),
        },
        second: Shifts {
            up: (0, 0),
            down: (-1, -1),
        },
    };
}

/// Half-open rectangle of target cells `[rows.0, rows.1) × [cols.0, cols.1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
}

impl Window {
    pub fn full(extents: (usize, usize)) -> Self {
        Self {
            rows: (0, extents.0),
            cols: (0, extents.1),
        }
    }

    /// Grow by `by` cells on every side, clamped to the grid.
    pub fn grow(&self, by: usize, extents: (usize, usize)) -> Self {
        Self {
            rows: (self.rows.0.saturating_sub(by), (self.rows.1 + by).min(extents.0)),
            cols: (self.cols.0.saturating_sub(by), (self.cols.1 + by).min(extents.1)),
        }
    }

    pub fn is_full(&self, extents: (usize, usize)) -> bool {
        *self == Self::full(extents)
    }
}

/// `(i - d) mod n` for `|d| <= 1`.
#[inline(always)]
fn source(i: usize, d: isize, n: usize) -> usize {
    match d {
        0 => i,
        1 => {
            if i == 0 {
                n - 1
            } else {
                i - 1
            }
        }
        _ => {
            if i + 1 == n {
                0
            } else {
                i + 1
            }
        }
    }
}

#[inline(always)]
fn apply<T: Amplitude>(m: &Mat2<T>, a: T, b: T) -> [T; 2] {
    [m[0][0] * a + m[0][1] * b, m[1][0] * a + m[1][1] * b]
}

pub(crate) struct Sweep<'a, T: Amplitude> {
    pub extents: (usize, usize),
    pub plan: ShiftPlan,
    pub r1: &'a [Mat2<T>],
    pub r2: &'a [Mat2<T>],
    pub phase: Option<&'a [T]>,
    /// Row (axis-0 index) on which the second shift is the identity.
    pub frozen_row: Option<usize>,
}

impl<T: Amplitude> Sweep<'_, T> {
    /// Run both passes over `win`. Cells outside `win` must hold zeros in
    /// both `psi` and `tmp` whenever they can feed a cell inside it.
    pub fn run(&self, psi: &mut [[T; 2]], tmp: &mut [[T; 2]], win: Window) {
        let (n0, n1) = self.extents;
        let s1 = self.plan.first;
        for r in win.rows.0..win.rows.1 {
            let ru = source(r, s1.up.0, n0) * n1;
            let rd = source(r, s1.down.0, n0) * n1;
            let row = r * n1;
            for c in win.cols.0..win.cols.1 {
                let ku = ru + source(c, s1.up.1, n1);
                let kd = rd + source(c, s1.down.1, n1);
                let m = &self.r1[ku];
                let up = m[0][0] * psi[ku][0] + m[0][1] * psi[ku][1];
                let m = &self.r1[kd];
                let down = m[1][0] * psi[kd][0] + m[1][1] * psi[kd][1];
                tmp[row + c] = apply(&self.r2[row + c], up, down);
            }
        }

        let s2 = self.plan.second;
        for r in win.rows.0..win.rows.1 {
            let row = r * n1;
            let frozen = self.frozen_row == Some(r);
            let (ru, rd) = if frozen {
                (row, row)
            } else {
                (source(r, s2.up.0, n0) * n1, source(r, s2.down.0, n0) * n1)
            };
            for c in win.cols.0..win.cols.1 {
                let (ku, kd) = if frozen {
                    (row + c, row + c)
                } else {
                    (ru + source(c, s2.up.1, n1), rd + source(c, s2.down.1, n1))
                };
                let mut out = [tmp[ku][0], tmp[kd][1]];
                if let Some(ph) = self.phase {
                    out[0] = ph[row + c] * out[0];
                    out[1] = ph[row + c] * out[1];
                }
                psi[row + c] = out;
            }
        }
    }
}
