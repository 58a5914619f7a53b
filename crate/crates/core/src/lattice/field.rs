use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Spin label; component 0 is `+1`, component 1 is `−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn from_sign(s: i64) -> Option<Self> {
        match s {
            1 => Some(Spin::Up),
            -1 => Some(Spin::Down),
            _ => None,
        }
    }
}

/// A lattice site with spin in the original `x`-`y` basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Site {
    pub x: i64,
    pub y: i64,
    pub s: Spin,
}

/// A unit cell of the rotated basis. Sites with `x + y` even map to
/// `n± = (y ± x) / 2`; the partner site directly above (`y + 1`) shares
/// the cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RotatedCell {
    pub n_plus: i64,
    pub n_minus: i64,
    pub s: Spin,
}

impl RotatedCell {
    /// The even-`x+y` site of this cell.
    pub fn square_site(&self) -> (i64, i64) {
        (self.n_plus - self.n_minus, self.n_plus + self.n_minus)
    }

    /// The odd-`x+y` site of this cell.
    pub fn circle_site(&self) -> (i64, i64) {
        (self.n_plus - self.n_minus, self.n_plus + self.n_minus + 1)
    }

    /// Cell holding the site `(x, y)`, whichever sublattice it is on.
    pub fn containing(x: i64, y: i64, s: Spin) -> Self {
        if (x + y).rem_euclid(2) == 0 {
            Self {
                n_plus: (y + x) / 2,
                n_minus: (y - x) / 2,
                s,
            }
        } else {
            Self {
                n_plus: (y + x - 1).div_euclid(2),
                n_minus: (y - x - 1).div_euclid(2),
                s,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    Original,
    RotatedSquare,
    RotatedCircle,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::Original => "original",
            Basis::RotatedSquare => "rotated-square",
            Basis::RotatedCircle => "rotated-circle",
        }
    }
}

/// Two-component wavefunction over a rectangular region.
///
/// Layout is cell-major, spin-minor: cell `(i, j)` is `amps[i * extents.1 + j]`
/// and holds `[ψ₊, ψ₋]`. `i` is `x` (original) or `n_plus` (rotated), `j` is
/// `y` or `n_minus`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    basis: Basis,
    extents: (usize, usize),
    pub(crate) amps: Vec<[C64; 2]>,
}

impl SpinorField {
    pub fn zeros(basis: Basis, extents: (usize, usize)) -> Result<Self> {
        if extents.0 == 0 || extents.1 == 0 {
            return Err(Error::InvalidExtents(format!(
                "extents must be positive, got {}x{}",
                extents.0, extents.1
            )));
        }
        Ok(Self {
            basis,
            extents,
            amps: vec![[C64::new(0.0, 0.0); 2]; extents.0 * extents.1],
        })
    }

    /// A single unit amplitude at cell `(i, j)` with spin `s`.
    pub fn delta(basis: Basis, extents: (usize, usize), i: usize, j: usize, s: Spin) -> Result<Self> {
        let mut f = Self::zeros(basis, extents)?;
        if i >= extents.0 || j >= extents.1 {
            return Err(Error::InvalidExtents(format!(
                "cell ({i}, {j}) outside {}x{}",
                extents.0, extents.1
            )));
        }
        let k = f.index(i, j);
        f.amps[k][s.index()] = C64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn from_amplitudes(basis: Basis, extents: (usize, usize), amps: Vec<[C64; 2]>) -> Result<Self> {
        if amps.len() != extents.0 * extents.1 {
            return Err(Error::InvalidExtents(format!(
                "{} cells for a {}x{} region",
                amps.len(),
                extents.0,
                extents.1
            )));
        }
        Ok(Self {
            basis,
            extents,
            amps,
        })
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn extents(&self) -> (usize, usize) {
        self.extents
    }

    pub fn amplitudes(&self) -> &[[C64; 2]] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [[C64; 2]] {
        &mut self.amps
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.extents.1 + j
    }

    pub fn get(&self, i: usize, j: usize, s: Spin) -> C64 {
        self.amps[self.index(i, j)][s.index()]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Spin, v: C64) {
        let k = self.index(i, j);
        self.amps[k][s.index()] = v;
    }

    /// Amplitudes flattened to `2 * cells` entries, spin-minor.
    pub fn to_flat(&self) -> Vec<C64> {
        self.amps.iter().flat_map(|a| [a[0], a[1]]).collect()
    }

    pub fn from_flat(basis: Basis, extents: (usize, usize), flat: &[C64]) -> Result<Self> {
        if flat.len() != 2 * extents.0 * extents.1 {
            return Err(Error::InvalidExtents(format!(
                "{} amplitudes for a {}x{} region",
                flat.len(),
                extents.0,
                extents.1
            )));
        }
        let amps = flat.chunks_exact(2).map(|c| [c[0], c[1]]).collect();
        Self::from_amplitudes(basis, extents, amps)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps
            .iter()
            .map(|a| a[0].norm_sqr() + a[1].norm_sqr())
            .sum()
    }

    /// Spin-summed probability per cell.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps
            .iter()
            .map(|a| a[0].norm_sqr() + a[1].norm_sqr())
            .collect()
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a[0].conj() * b[0] + a[1].conj() * b[1])
            .sum()
    }

    pub(crate) fn check_extents(&self, extents: (usize, usize)) -> Result<()> {
        if self.extents != extents {
            return Err(Error::ExtentMismatch {
                expected: self.extents,
                got: extents,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Periodic,
    /// The outermost layer along this axis is zeroed after every full step.
    Absorbing,
}

/// Boundary kinds for the two axes plus the probability absorbed so far.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryCondition {
    pub axis0: Boundary,
    pub axis1: Boundary,
    pub accumulated_loss: f64,
}

impl BoundaryCondition {
    pub fn periodic() -> Self {
        Self {
            axis0: Boundary::Periodic,
            axis1: Boundary::Periodic,
            accumulated_loss: 0.0,
        }
    }

    pub fn absorbing() -> Self {
        Self {
            axis0: Boundary::Absorbing,
            axis1: Boundary::Absorbing,
            accumulated_loss: 0.0,
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.axis0 == Boundary::Periodic && self.axis1 == Boundary::Periodic
    }
}
