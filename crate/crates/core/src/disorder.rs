//! Seeded coin-field generators and the clean-limit predictors.
//!
//! Every random angle is drawn from a ChaCha8 keystream keyed by the seed,
//! with the stream id selecting the parameter (and, for time-dependent
//! coins, the timestep). Entry `k` of a field is the 64-bit word at
//! keystream position `k`, so any cell can be regenerated on its own and
//! the result does not depend on traversal order.

use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::lattice::{CoinAngles, CoinField};
use crate::{Error, Result};

const THETA1: u64 = 0;
const THETA2: u64 = 1;
const ALPHA1: u64 = 2;
const ALPHA2: u64 = 3;
const BETA1: u64 = 4;
const BETA2: u64 = 5;
const PHI: u64 = 6;
const CHOICE: u64 = 7;

/// Stream id for parameter `param` at timestep `step` (0 = static field).
fn stream_id(param: u64, step: u64) -> u64 {
    (step << 4) | param
}

fn keystream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[inline]
fn unit(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `n` uniform draws on `[0, 1)`.
fn unit_field(seed: u64, stream: u64, n: usize) -> Vec<f64> {
    let mut rng = keystream(seed, stream);
    (0..n).map(|_| unit(rng.next_u64())).collect()
}

/// The single draw at cell `k`, without generating the cells before it.
#[cfg(test)]
fn unit_at(seed: u64, param: u64, step: u64, k: usize) -> f64 {
    let mut rng = keystream(seed, stream_id(param, step));
    rng.set_word_pos(2 * k as u128);
    unit(rng.next_u64())
}

fn angle_field(seed: u64, param: u64, step: u64, n: usize) -> Vec<f64> {
    unit_field(seed, stream_id(param, step), n)
        .into_iter()
        .map(|u| -PI + 2.0 * PI * u)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DisorderKind {
    Fixed,
    Phase,
    Magnetic,
    Haar,
    Binary,
}

/// Constant coin angles shared by every cell (radians).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct FixedAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl FixedAngles {
    pub fn thetas(theta1: f64, theta2: f64) -> Self {
        Self {
            theta1,
            theta2,
            ..Self::default()
        }
    }

    fn coin(&self) -> CoinAngles {
        CoinAngles {
            theta1: self.theta1,
            theta2: self.theta2,
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            beta1: self.beta1,
            beta2: self.beta2,
            phi: 0.0,
        }
    }
}

/// Two rotation-angle sets mixed site by site with weight `p_a` on set A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinaryParams {
    pub theta1_a: f64,
    pub theta2_a: f64,
    pub theta1_b: f64,
    pub theta2_b: f64,
    pub p_a: f64,
}

impl BinaryParams {
    /// Set A at `(5π/8, −π/8)`.
    pub const SET_A: (f64, f64) = (5.0 * PI / 8.0, -PI / 8.0);

    /// Set A fixed, set B displaced by `delta` along the line that keeps
    /// `θ₂B − θ₂A = θ₁A − θ₁B`.
    pub fn along_mirror_line(delta: f64, p_a: f64) -> Self {
        let (t1, t2) = Self::SET_A;
        Self {
            theta1_a: t1,
            theta2_a: t2,
            theta1_b: t1 - delta,
            theta2_b: t2 + delta,
            p_a,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_a) {
            return Err(Error::InvalidParameter(format!(
                "p_a = {} outside [0, 1]",
                self.p_a
            )));
        }
        let all = [self.theta1_a, self.theta2_a, self.theta1_b, self.theta2_b];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite binary angle".into()));
        }
        Ok(())
    }
}

impl Default for BinaryParams {
    fn default() -> Self {
        Self::along_mirror_line(PI / 2.0, 0.5)
    }
}

/// Recipe and seed for one coin-field realization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DisorderSpec {
    pub kind: DisorderKind,
    #[serde(default)]
    pub fixed: FixedAngles,
    #[serde(default)]
    pub binary: BinaryParams,
    #[serde(default)]
    pub seed: u64,
}

impl DisorderSpec {
    pub fn fixed(angles: FixedAngles) -> Self {
        Self {
            kind: DisorderKind::Fixed,
            fixed: angles,
            binary: BinaryParams::default(),
            seed: 0,
        }
    }

    pub fn phase(angles: FixedAngles, seed: u64) -> Self {
        Self {
            kind: DisorderKind::Phase,
            seed,
            ..Self::fixed(angles)
        }
    }

    pub fn magnetic(theta1: f64, theta2: f64, seed: u64) -> Self {
        Self {
            kind: DisorderKind::Magnetic,
            seed,
            ..Self::fixed(FixedAngles::thetas(theta1, theta2))
        }
    }

    pub fn haar(seed: u64) -> Self {
        Self {
            kind: DisorderKind::Haar,
            seed,
            ..Self::fixed(FixedAngles::default())
        }
    }

    pub fn binary(params: BinaryParams, seed: u64) -> Self {
        Self {
            kind: DisorderKind::Binary,
            binary: params,
            seed,
            ..Self::fixed(FixedAngles::default())
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// The two rotation angles that characterize the spec in the clean
    /// limit, where one exists.
    pub fn thetas(&self) -> Option<(f64, f64)> {
        match self.kind {
            DisorderKind::Fixed | DisorderKind::Phase | DisorderKind::Magnetic => {
                Some((self.fixed.theta1, self.fixed.theta2))
            }
            DisorderKind::Haar | DisorderKind::Binary => None,
        }
    }

    pub fn generate(&self, extents: (usize, usize)) -> Result<CoinField> {
        match self.kind {
            DisorderKind::Fixed => Ok(CoinField::uniform(extents, self.fixed.coin())),
            DisorderKind::Phase => Ok(gen_phase_disorder(extents, self.fixed, self.seed)),
            DisorderKind::Magnetic => Ok(gen_magnetic_disorder(
                extents,
                self.fixed.theta1,
                self.fixed.theta2,
                self.seed,
            )),
            DisorderKind::Haar => Ok(gen_haar(extents, self.seed)),
            DisorderKind::Binary => gen_binary(extents, self.binary, self.seed),
        }
    }
}

fn assemble(extents: (usize, usize), f: impl Fn(usize) -> CoinAngles) -> CoinField {
    let n = extents.0 * extents.1;
    CoinField::from_vec(extents, (0..n).map(f).collect())
        .expect("generated angles are finite and sized to the extents")
}

/// Constant coins with `φ` uniform on `[−π, π)` per cell.
pub fn gen_phase_disorder(extents: (usize, usize), fixed: FixedAngles, seed: u64) -> CoinField {
    let n = extents.0 * extents.1;
    let phi = angle_field(seed, PHI, 0, n);
    let base = fixed.coin();
    assemble(extents, |k| CoinAngles {
        phi: phi[k],
        ..base
    })
}

/// Constant `θ`, `φ = 0`, and all four `α`, `β` uniform on `[−π, π)`.
pub fn gen_magnetic_disorder(extents: (usize, usize), theta1: f64, theta2: f64, seed: u64) -> CoinField {
    let n = extents.0 * extents.1;
    let a1 = angle_field(seed, ALPHA1, 0, n);
    let a2 = angle_field(seed, ALPHA2, 0, n);
    let b1 = angle_field(seed, BETA1, 0, n);
    let b2 = angle_field(seed, BETA2, 0, n);
    assemble(extents, |k| CoinAngles {
        theta1,
        theta2,
        alpha1: a1[k],
        alpha2: a2[k],
        beta1: b1[k],
        beta2: b2[k],
        phi: 0.0,
    })
}

/// Rotation angle `arcsin √ζ` for an auxiliary draw `ζ ∈ [0, 1]`.
pub fn haar_theta(zeta: f64) -> f64 {
    zeta.sqrt().asin()
}

/// Haar-random coins: `θ = arcsin √ζ` with `ζ` uniform on `[0, 1]`, and
/// `α`, `β`, `φ` uniform on `[−π, π)`.
pub fn gen_haar(extents: (usize, usize), seed: u64) -> CoinField {
    gen_haar_at_step(extents, seed, 0)
}

/// Fresh Haar coins for timestep `step` of a time-dependent walk. Step 0 is
/// the static field of [`gen_haar`].
pub fn gen_haar_at_step(extents: (usize, usize), seed: u64, step: u64) -> CoinField {
    let n = extents.0 * extents.1;
    let arcsin_sqrt = |v: Vec<f64>| -> Vec<f64> { v.into_iter().map(haar_theta).collect() };
    let t1 = arcsin_sqrt(unit_field(seed, stream_id(THETA1, step), n));
    let t2 = arcsin_sqrt(unit_field(seed, stream_id(THETA2, step), n));
    let a1 = angle_field(seed, ALPHA1, step, n);
    let a2 = angle_field(seed, ALPHA2, step, n);
    let b1 = angle_field(seed, BETA1, step, n);
    let b2 = angle_field(seed, BETA2, step, n);
    let phi = angle_field(seed, PHI, step, n);
    assemble(extents, |k| CoinAngles {
        theta1: t1[k],
        theta2: t2[k],
        alpha1: a1[k],
        alpha2: a2[k],
        beta1: b1[k],
        beta2: b2[k],
        phi: phi[k],
    })
}

/// Haar coins of timestep `step` for the cells in `rows × cols` only,
/// identical to the matching cells of [`gen_haar_at_step`]. `emit` receives
/// the flat cell index and its angles.
pub(crate) fn haar_window(
    extents: (usize, usize),
    seed: u64,
    step: u64,
    rows: (usize, usize),
    cols: (usize, usize),
    mut emit: impl FnMut(usize, CoinAngles),
) {
    let width = cols.1 - cols.0;
    let params = [THETA1, THETA2, ALPHA1, ALPHA2, BETA1, BETA2, PHI];
    let mut draws = vec![vec![0.0; width]; params.len()];
    for r in rows.0..rows.1 {
        let start = r * extents.1 + cols.0;
        for (p, buf) in params.iter().zip(draws.iter_mut()) {
            let mut rng = keystream(seed, stream_id(*p, step));
            rng.set_word_pos(2 * start as u128);
            buf.iter_mut().for_each(|v| *v = unit(rng.next_u64()));
        }
        let ang = |u: f64| -PI + 2.0 * PI * u;
        for c in 0..width {
            emit(
                start + c,
                CoinAngles {
                    theta1: haar_theta(draws[0][c]),
                    theta2: haar_theta(draws[1][c]),
                    alpha1: ang(draws[2][c]),
                    alpha2: ang(draws[3][c]),
                    beta1: ang(draws[4][c]),
                    beta2: ang(draws[5][c]),
                    phi: ang(draws[6][c]),
                },
            );
        }
    }
}

/// Per cell, `(θ₁, θ₂)` is set A with probability `p_a`, else set B (one
/// joint choice per cell); `α`, `β`, `φ` are uniform on `[−π, π)`.
pub fn gen_binary(extents: (usize, usize), params: BinaryParams, seed: u64) -> Result<CoinField> {
    params.validate()?;
    let n = extents.0 * extents.1;
    let choice = unit_field(seed, stream_id(CHOICE, 0), n);
    let a1 = angle_field(seed, ALPHA1, 0, n);
    let a2 = angle_field(seed, ALPHA2, 0, n);
    let b1 = angle_field(seed, BETA1, 0, n);
    let b2 = angle_field(seed, BETA2, 0, n);
    let phi = angle_field(seed, PHI, 0, n);
    Ok(assemble(extents, |k| {
        let (theta1, theta2) = if choice[k] < params.p_a {
            (params.theta1_a, params.theta2_a)
        } else {
            (params.theta1_b, params.theta2_b)
        };
        CoinAngles {
            theta1,
            theta2,
            alpha1: a1[k],
            alpha2: a2[k],
            beta1: b1[k],
            beta2: b2[k],
            phi: phi[k],
        }
    }))
}

const CRITICAL_TOL: f64 = 1e-12;

/// Winding number of the clean walk: `sgn[sin(θ₁−θ₂) sin(θ₁+θ₂)]`, with 0
/// on the critical lines `θ₁ = ±θ₂ + nπ`.
pub fn clean_invariant(theta1: f64, theta2: f64) -> i8 {
    let p = (theta1 - theta2).sin() * (theta1 + theta2).sin();
    if p.abs() < CRITICAL_TOL {
        0
    } else if p > 0.0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    /// Along `x + y`.
    Diagonal,
    /// Along `x − y`.
    Antidiagonal,
    Isotropic,
}

/// Preferred spreading direction: the sign of `cos(θ₁−θ₂) cos(θ₁+θ₂)`.
pub fn dominant_axis(theta1: f64, theta2: f64) -> Axis {
    let p = (theta1 - theta2).cos() * (theta1 + theta2).cos();
    if p.abs() < CRITICAL_TOL {
        Axis::Isotropic
    } else if p > 0.0 {
        Axis::Diagonal
    } else {
        Axis::Antidiagonal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_examples() {
        assert_eq!(clean_invariant(0.2 * PI, 0.4 * PI), -1);
        assert_eq!(clean_invariant(0.2 * PI, 0.2 * PI), 0);
        assert_eq!(clean_invariant(0.2 * PI, 0.1 * PI), 1);
    }

    #[test]
    fn axis_examples() {
        assert_eq!(dominant_axis(0.2 * PI, 0.4 * PI), Axis::Antidiagonal);
        assert_eq!(dominant_axis(0.2 * PI, 0.2 * PI), Axis::Diagonal);
        assert_eq!(dominant_axis(0.15 * PI, 0.35 * PI), Axis::Isotropic);
    }

    #[test]
    fn random_access_matches_sequential() {
        let seq = unit_field(99, stream_id(PHI, 3), 40);
        for k in [0, 1, 17, 39] {
            assert_eq!(unit_at(99, PHI, 3, k), seq[k]);
        }
    }

    #[test]
    fn steps_and_params_are_distinct_streams() {
        let a = unit_field(5, stream_id(PHI, 0), 8);
        let b = unit_field(5, stream_id(PHI, 1), 8);
        let c = unit_field(5, stream_id(ALPHA1, 0), 8);
        assert_ne!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn haar_window_matches_full_field() {
        let full = gen_haar_at_step((7, 9), 3, 4);
        let mut seen = 0;
        haar_window((7, 9), 3, 4, (2, 5), (1, 8), |k, a| {
            assert_eq!(full.angles()[k], a);
            seen += 1;
        });
        assert_eq!(seen, 21);
    }

    #[test]
    fn binary_rejects_bad_probability() {
        let p = BinaryParams {
            p_a: 1.5,
            ..BinaryParams::default()
        };
        assert!(gen_binary((2, 2), p, 0).is_err());
    }

    #[test]
    fn haar_endpoints() {
        assert_eq!(haar_theta(0.0), 0.0);
        assert!((haar_theta(1.0) - PI / 2.0).abs() < 1e-15);
    }
}
