//! Coin operators and per-site coin parameter fields.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// A 2×2 matrix acting on the (+1, −1) spin components, row-major.
pub type Mat2<T = C64> = [[T; 2]; 2];

/// The SU(2) rotation `e^{-iβσz} e^{-iθσy} e^{-iασz}`.
///
/// Rows and columns follow the spin order (+1, −1).
pub fn coin_matrix(alpha: f64, beta: f64, theta: f64) -> Mat2 {
    let (s, c) = theta.sin_cos();
    let sum = C64::from_polar(1.0, -(alpha + beta));
    let diff = C64::from_polar(1.0, alpha - beta);
    [
        [sum * c, -diff * s],
        [diff.conj() * s, sum.conj() * c],
    ]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// Angle parameters of one site (radians).
///
/// Substep 1 uses `(alpha1, beta1, theta1)`, substep 2 `(alpha2, beta2,
/// theta2)`, and `phi` is the onsite phase applied at the end of the step.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CoinAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub phi: f64,
}

impl CoinAngles {
    /// Real coins with the given rotation angles and everything else zero.
    pub fn thetas(theta1: f64, theta2: f64) -> Self {
        Self {
            theta1,
            theta2,
            ..Self::default()
        }
    }

    pub fn is_finite(&self) -> bool {
        [
            self.theta1,
            self.theta2,
            self.alpha1,
            self.alpha2,
            self.beta1,
            self.beta2,
            self.phi,
        ]
        .iter()
        .all(|v| v.is_finite())
    }

    pub fn r1(&self) -> Mat2 {
        coin_matrix(self.alpha1, self.beta1, self.theta1)
    }

    pub fn r2(&self) -> Mat2 {
        coin_matrix(self.alpha2, self.beta2, self.theta2)
    }
}

/// Coin parameters over a rectangular region, stored cell-major: the cell
/// `(i, j)` lives at `i * extents.1 + j`.
///
/// In the original basis a cell is a lattice site `(x, y)`; in the rotated
/// bases it is a unit cell `(n_plus, n_minus)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoinField {
    extents: (usize, usize),
    angles: Vec<CoinAngles>,
}

impl CoinField {
    pub fn uniform(extents: (usize, usize), angles: CoinAngles) -> Self {
        Self {
            extents,
            angles: vec![angles; extents.0 * extents.1],
        }
    }

    pub fn from_vec(extents: (usize, usize), angles: Vec<CoinAngles>) -> Result<Self> {
        if angles.len() != extents.0 * extents.1 {
            return Err(Error::InvalidExtents(format!(
                "{} angle records for a {}x{} region",
                angles.len(),
                extents.0,
                extents.1
            )));
        }
        if let Some(i) = angles.iter().position(|a| !a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite coin angle at cell {i}"
            )));
        }
        Ok(Self { extents, angles })
    }

    pub fn extents(&self) -> (usize, usize) {
        self.extents
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.extents.1 + j
    }

    pub fn get(&self, i: usize, j: usize) -> &CoinAngles {
        &self.angles[self.index(i, j)]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut CoinAngles {
        let k = self.index(i, j);
        &mut self.angles[k]
    }

    pub fn angles(&self) -> &[CoinAngles] {
        &self.angles
    }

    pub fn angles_mut(&mut self) -> &mut [CoinAngles] {
        &mut self.angles
    }

    pub fn map(&self, f: impl Fn(&CoinAngles) -> CoinAngles) -> Self {
        Self {
            extents: self.extents,
            angles: self.angles.iter().map(f).collect(),
        }
    }
}

/// Coin matrices and phases evaluated once per cell, ready for stepping.
#[derive(Debug, Clone)]
pub struct CoinTable {
    pub(crate) extents: (usize, usize),
    pub(crate) r1: Vec<Mat2>,
    pub(crate) r2: Vec<Mat2>,
    pub(crate) phase: Vec<C64>,
}

impl CoinTable {
    pub fn new(field: &CoinField) -> Self {
        let n = field.len();
        let mut r1 = Vec::with_capacity(n);
        let mut r2 = Vec::with_capacity(n);
        let mut phase = Vec::with_capacity(n);
        for a in field.angles() {
            r1.push(a.r1());
            r2.push(a.r2());
            phase.push(C64::from_polar(1.0, a.phi));
        }
        Self {
            extents: field.extents,
            r1,
            r2,
            phase,
        }
    }

    pub fn extents(&self) -> (usize, usize) {
        self.extents
    }

    /// Overwrite the coins of cell `k`.
    pub(crate) fn set(&mut self, k: usize, a: &CoinAngles) {
        self.r1[k] = a.r1();
        self.r2[k] = a.r2();
        self.phase[k] = C64::from_polar(1.0, a.phi);
    }
}

impl From<&CoinField> for CoinTable {
    fn from(field: &CoinField) -> Self {
        Self::new(field)
    }
}
