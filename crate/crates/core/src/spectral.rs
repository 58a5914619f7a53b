//! Sublattice blocks of `U²`, quasienergy spacings, and their comparison
//! with the Poisson and GUE (Wigner surmise) laws.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::lattice::{step_operator, CoinField, RotatedVariant};
use crate::linalg::{eigenvalues, DenseMatrix, SparseMatrix};
use crate::stats::{ks_statistic, linear_fit, quadratic_fit};
use crate::{Error, Result, C64};

/// Default cap on the dense block dimension.
pub const DEFAULT_BLOCK_CAP: usize = 8192;

/// A sublattice block of `U²`, named by the parities of the original
/// `(x, y)` of its sites.
///
/// Square-variant cells with `n₊ − n₋` even sit at even `(x, y)`; circle
/// cells with `n₊ − n₋` even sit at `(even, odd)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Block {
    SquareEe,
    SquareOo,
    CircleEo,
    CircleOe,
}

impl Block {
    pub const ALL: [Block; 4] = [Block::SquareEe, Block::SquareOo, Block::CircleEo, Block::CircleOe];

    pub fn variant(self) -> RotatedVariant {
        match self {
            Block::SquareEe | Block::SquareOo => RotatedVariant::Square,
            Block::CircleEo | Block::CircleOe => RotatedVariant::Circle,
        }
    }

    /// Parity of `n₊ − n₋` for the cells in the block.
    pub fn cell_parity(self) -> usize {
        match self {
            Block::SquareEe | Block::CircleEo => 0,
            Block::SquareOo | Block::CircleOe => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Block::SquareEe => "square-ee",
            Block::SquareOo => "square-oo",
            Block::CircleEo => "circle-eo",
            Block::CircleOe => "circle-oe",
        }
    }
}

impl std::str::FromStr for Block {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Block::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown block {s:?}")))
    }
}

fn check_block_extents(extents: (usize, usize)) -> Result<()> {
    if extents.0 < 2 || extents.1 < 2 || extents.0 % 2 != 0 || extents.1 % 2 != 0 {
        return Err(Error::InvalidExtents(format!(
            "sublattice blocks need even periodic extents, got {}x{}",
            extents.0, extents.1
        )));
    }
    Ok(())
}

/// Flat state indices (`2·cell + spin`) of the block.
pub fn block_indices(extents: (usize, usize), block: Block) -> Vec<usize> {
    let mut out = Vec::with_capacity(extents.0 * extents.1);
    for i in 0..extents.0 {
        for j in 0..extents.1 {
            if (i + j) % 2 == block.cell_parity() {
                let c = i * extents.1 + j;
                out.push(2 * c);
                out.push(2 * c + 1);
            }
        }
    }
    out
}

/// `U²` restricted to `block`, as a sparse matrix on the block indices.
pub fn build_u2_block_sparse(coins: &CoinField, block: Block) -> Result<SparseMatrix> {
    let ext = coins.extents();
    check_block_extents(ext)?;
    let u = step_operator(coins, block.variant().basis())?;
    let u2 = u.mul(&u)?;
    let idx = block_indices(ext, block);
    let mut pos = vec![usize::MAX; u2.dim()];
    for (k, &g) in idx.iter().enumerate() {
        pos[g] = k;
    }
    let mut cols = Vec::with_capacity(idx.len());
    for &g in &idx {
        let mut col = Vec::new();
        for (row, v) in u2.column(g) {
            if pos[row] == usize::MAX {
                if v.norm() > 1e-12 {
                    return Err(Error::Solver(format!(
                        "U² leaks out of block {} at state {row}",
                        block.name()
                    )));
                }
                continue;
            }
            col.push((pos[row], v));
        }
        cols.push(col);
    }
    SparseMatrix::from_columns(idx.len(), cols)
}

/// Dense `U²` block; fails if the dimension exceeds `cap`.
pub fn build_u2_block(coins: &CoinField, block: Block, cap: usize) -> Result<DenseMatrix> {
    let dim = coins.extents().0 * coins.extents().1;
    if dim > cap {
        return Err(Error::CapExceeded { dim, cap });
    }
    Ok(build_u2_block_sparse(coins, block)?.to_dense())
}

pub fn block_eigenvalues(coins: &CoinField, block: Block, cap: usize) -> Result<Vec<C64>> {
    eigenvalues(&build_u2_block(coins, block, cap)?)
}

/// Normalized nearest-neighbour spacings of one spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpacingEnsemble {
    pub spacings: Vec<f64>,
    pub block: Option<Block>,
    /// Block dimension (number of levels).
    pub n: usize,
}

impl SpacingEnsemble {
    pub fn len(&self) -> usize {
        self.spacings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spacings.is_empty()
    }

    pub fn mean(&self) -> f64 {
        crate::stats::mean(&self.spacings)
    }

    /// Concatenate ensembles (the block label is kept only if shared).
    pub fn pool(parts: &[SpacingEnsemble]) -> SpacingEnsemble {
        let block = parts.first().and_then(|p| p.block).filter(|b| parts.iter().all(|p| p.block == Some(*b)));
        SpacingEnsemble {
            spacings: parts.iter().flat_map(|p| p.spacings.iter().cloned()).collect(),
            block,
            n: parts.iter().map(|p| p.n).sum(),
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "s")?;
        for s in &self.spacings {
            writeln!(w, "{s:?}")?;
        }
        Ok(())
    }
}

/// Quasienergies `ε = (−arg λ / 2) mod π` of `U²` eigenvalues, ascending.
pub fn quasienergies(eigs: &[C64]) -> Vec<f64> {
    let mut e: Vec<f64> = eigs.iter().map(|l| (-l.arg() / 2.0).rem_euclid(PI)).collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Spacings `δ_j = (ε_{j+1} − ε_j) mod π`, wrap-around included, scaled by
/// `N / π`.
pub fn spacings_from_block(eigs: &[C64], tol: f64) -> Result<SpacingEnsemble> {
    if eigs.len() < 2 {
        return Err(Error::Undersized {
            need: 2,
            got: eigs.len(),
        });
    }
    if let Some(l) = eigs.iter().find(|l| (l.norm() - 1.0).abs() > tol) {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue {l} is off the unit circle by {:.3e}",
            (l.norm() - 1.0).abs()
        )));
    }
    let e = quasienergies(eigs);
    let n = e.len();
    let scale = n as f64 / PI;
    let spacings = (0..n)
        .map(|j| {
            let d = if j + 1 < n { e[j + 1] - e[j] } else { e[0] + PI - e[j] };
            d * scale
        })
        .collect();
    Ok(SpacingEnsemble {
        spacings,
        block: None,
        n,
    })
}

/// Spacings of one block of one coin field.
pub fn block_spacings(coins: &CoinField, block: Block, cap: usize) -> Result<SpacingEnsemble> {
    let eigs = block_eigenvalues(coins, block, cap)?;
    let mut ens = spacings_from_block(&eigs, 1e-8)?;
    ens.block = Some(block);
    Ok(ens)
}

/// Spacings of the levels whose quasienergy lies in `[lo, hi)`, normalized
/// by the mean level density `N / π` of the whole block.
pub fn window_spacings(eigs: &[C64], lo: f64, hi: f64) -> Vec<f64> {
    let e = quasienergies(eigs);
    let scale = e.len() as f64 / PI;
    let inside: Vec<f64> = e.into_iter().filter(|&x| x >= lo && x < hi).collect();
    inside.windows(2).map(|w| (w[1] - w[0]) * scale).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpacingLaw {
    Poisson,
    Gue,
}

/// `e^{−s}` or `(32/π²) s² e^{−4s²/π}`.
pub fn reference_pdf(law: SpacingLaw, s: f64) -> f64 {
    if s < 0.0 {
        return 0.0;
    }
    match law {
        SpacingLaw::Poisson => (-s).exp(),
        SpacingLaw::Gue => 32.0 / (PI * PI) * s * s * (-4.0 * s * s / PI).exp(),
    }
}

pub fn reference_cdf(law: SpacingLaw, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    match law {
        SpacingLaw::Poisson => -(-s).exp_m1(),
        SpacingLaw::Gue => libm::erf(2.0 * s / PI.sqrt()) - 4.0 * s / PI * (-4.0 * s * s / PI).exp(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Poisson,
    Gue,
    Ambiguous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub ks_poisson: f64,
    pub ks_gue: f64,
    pub class: Statistics,
    pub samples: usize,
    pub mean: f64,
}

pub const MIN_CLASSIFY_SAMPLES: usize = 500;

/// KS distance to both laws; the smaller wins unless they are within
/// `margin` of each other.
pub fn classify_statistics(ens: &SpacingEnsemble, margin: f64) -> Result<Classification> {
    if ens.len() < MIN_CLASSIFY_SAMPLES {
        return Err(Error::Undersized {
            need: MIN_CLASSIFY_SAMPLES,
            got: ens.len(),
        });
    }
    let ks_poisson = ks_statistic(&ens.spacings, |s| reference_cdf(SpacingLaw::Poisson, s));
    let ks_gue = ks_statistic(&ens.spacings, |s| reference_cdf(SpacingLaw::Gue, s));
    let class = if (ks_poisson - ks_gue).abs() <= margin {
        Statistics::Ambiguous
    } else if ks_poisson < ks_gue {
        Statistics::Poisson
    } else {
        Statistics::Gue
    };
    Ok(Classification {
        ks_poisson,
        ks_gue,
        class,
        samples: ens.len(),
        mean: ens.mean(),
    })
}

pub fn write_classification_csv<W: Write>(rows: &[(String, Classification)], mut w: W) -> std::io::Result<()> {
    writeln!(w, "label,samples,mean,ks_poisson,ks_gue,class")?;
    for (label, c) in rows {
        writeln!(
            w,
            "{label},{},{:?},{:?},{:?},{:?}",
            c.samples, c.mean, c.ks_poisson, c.ks_gue, c.class
        )?;
    }
    Ok(())
}

/// Exponential fit to the empirical survival function above `s_min`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub s_min: f64,
    pub samples: usize,
    /// `S(s) ∝ e^{−rate · s}`.
    pub rate: f64,
    pub rate_err: f64,
    pub r_squared: f64,
    /// Second-order coefficient of a parabola through `ln S`.
    pub curvature: f64,
    pub curvature_err: f64,
}

impl TailFit {
    /// The tail is consistent with a pure exponential: no curvature beyond
    /// three standard errors in the downward direction.
    pub fn is_exponential(&self) -> bool {
        self.curvature > -3.0 * self.curvature_err
    }
}

pub const MIN_TAIL_SAMPLES: usize = 50;

/// Fit `ln S(s)` against `s` for the samples with `s > s_min`.
///
/// The survival function is evaluated at the sorted tail samples; the very
/// last sample (where `S = 0`) is skipped.
pub fn tail_analysis(ens: &SpacingEnsemble, s_min: f64) -> Result<TailFit> {
    tail_fit(&ens.spacings, s_min, f64::INFINITY)
}

/// As [`tail_analysis`] but restricted to `s_min < s ≤ s_max`.
pub fn tail_fit(samples: &[f64], s_min: f64, s_max: f64) -> Result<TailFit> {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    let first = s.partition_point(|&x| x <= s_min);
    let tail = &s[first..];
    if tail.len() < MIN_TAIL_SAMPLES {
        return Err(Error::Undersized {
            need: MIN_TAIL_SAMPLES,
            got: tail.len(),
        });
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (k, &x) in tail.iter().enumerate().take(tail.len() - 1) {
        if x > s_max {
            break;
        }
        let surv = (tail.len() - k - 1) as f64 / n;
        xs.push(x);
        ys.push(surv.ln());
    }
    let lin = linear_fit(&xs, &ys)?;
    let quad = quadratic_fit(&xs, &ys)?;
    Ok(TailFit {
        s_min,
        samples: tail.len(),
        rate: -lin.slope,
        rate_err: lin.slope_err,
        r_squared: lin.r_squared,
        curvature: quad.coeffs[2],
        curvature_err: quad.errs[2],
    })
}

/// Default rotated-region extents with roughly `cells` cells, stretched by
/// `aspect` along the dominant spreading axis and rounded to even sides.
pub fn aspect_extents(theta1: f64, theta2: f64, cells: usize, aspect: f64) -> (usize, usize) {
    use crate::disorder::{dominant_axis, Axis};
    let even = |v: f64| ((v / 2.0).round() as usize).max(1) * 2;
    let short = (cells as f64 / aspect).sqrt();
    let long = short * aspect;
    match dominant_axis(theta1, theta2) {
        Axis::Diagonal => (even(long), even(short)),
        Axis::Antidiagonal => (even(short), even(long)),
        Axis::Isotropic => {
            let side = even((cells as f64).sqrt());
            (side, side)
        }
    }
}
