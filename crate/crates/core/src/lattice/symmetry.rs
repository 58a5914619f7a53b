use serde::{Deserialize, Serialize};

use super::coin::CoinField;
use super::field::{Basis, SpinorField};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Apply `Γ = Π_ee + Π_eo − Π_oo − Π_oe`: flip the sign on odd-`x` sites.
///
/// Parity is taken from the storage index, so `Γ` is only a symmetry of
/// periodic regions with even `L_x`.
pub fn sublattice_conjugate(state: &SpinorField) -> Result<SpinorField> {
    if state.basis() != Basis::Original {
        return Err(Error::BasisMismatch {
            expected: Basis::Original.name(),
            got: state.basis().name(),
        });
    }
    let mut out = state.clone();
    let n1 = state.extents().1;
    for (k, a) in out.amplitudes_mut().iter_mut().enumerate() {
        if (k / n1) % 2 == 1 {
            a[0] = -a[0];
            a[1] = -a[1];
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChiralOperator {
    SigmaX,
    SigmaY,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChiralCheck {
    pub symmetric: bool,
    pub operator: ChiralOperator,
}

/// Distance from `a` to the nearest multiple of `period`.
fn off_lattice(a: f64, period: f64) -> f64 {
    (a - period * (a / period).round()).abs()
}

/// Chiral symmetry needs `φ = 0`, `α₂ = β₁`, `α₁ = β₂` on every site and
/// either `θ₁ = θ₂ + nπ` everywhere (`σ_x`) or `θ₁ = −θ₂ + nπ` everywhere
/// (`σ_y`). When both hold, `σ_x` is reported.
pub fn is_chiral_symmetric(coins: &CoinField, tol: f64) -> ChiralCheck {
    let tau = 2.0 * PI;
    let magnetic_ok = coins.angles().iter().all(|a| {
        off_lattice(a.phi, tau) <= tol
            && off_lattice(a.alpha2 - a.beta1, tau) <= tol
            && off_lattice(a.alpha1 - a.beta2, tau) <= tol
    });
    let none = ChiralCheck {
        symmetric: false,
        operator: ChiralOperator::None,
    };
    if !magnetic_ok {
        return none;
    }
    let sx = coins
        .angles()
        .iter()
        .all(|a| off_lattice(a.theta1 - a.theta2, PI) <= tol);
    if sx {
        return ChiralCheck {
            symmetric: true,
            operator: ChiralOperator::SigmaX,
        };
    }
    let sy = coins
        .angles()
        .iter()
        .all(|a| off_lattice(a.theta1 + a.theta2, PI) <= tol);
    if sy {
        return ChiralCheck {
            symmetric: true,
            operator: ChiralOperator::SigmaY,
        };
    }
    none
}
