//! Fixtures shared by the kernel benchmarks.

use splitwalk::{CoinField, DisorderSpec, SpinorField};

pub fn haar_coins(extents: (usize, usize)) -> CoinField {
    DisorderSpec::haar(1).generate(extents).expect("valid extents")
}

/// Normalized state with equal weight on every cell, so a step touches the
/// whole grid.
pub fn filled_state(basis: splitwalk::Basis, extents: (usize, usize)) -> SpinorField {
    let amp = splitwalk::C64::new(1.0, 0.0) / ((2 * extents.0 * extents.1) as f64).sqrt();
    SpinorField::from_amplitudes(basis, extents, vec![[amp; 2]; extents.0 * extents.1]).expect("sizes match")
}
