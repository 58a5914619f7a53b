//! The multifractal exponent `η` from three routes: eigenstate
//! autocorrelation, box-counting of eigenstate weight, and the decay of the
//! return probability.
//!
//! Everything is in the rotated (square) basis with periodic boundaries
//! for eigenstates and absorbing boundaries for time evolution.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disorder::DisorderSpec;
use crate::evolve::{default_origin, evolve_observed, Dynamics};
use crate::lattice::{step_operator, Basis};
use crate::linalg::shift_invert_eigs;
use crate::spectral::{block_indices, build_u2_block_sparse, Block};
use crate::stats::{linear_fit, LinearFit};
use crate::{Error, Result, C64};

/// Position distribution of one eigenstate pair of `U²`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenstateDistribution {
    pub extents: (usize, usize),
    /// `p(n₊, n₋)` at `[n₊ · L₋ + n₋]`.
    pub probs: Vec<f64>,
    /// Quasienergy of the `U²` eigenvalue `e^{−2iε}`.
    pub epsilon: f64,
    pub seed: u64,
}

impl EigenstateDistribution {
    pub fn from_probs(extents: (usize, usize), probs: Vec<f64>) -> Result<Self> {
        if probs.len() != extents.0 * extents.1 {
            return Err(Error::ExtentMismatch {
                expected: extents,
                got: (probs.len(), 1),
            });
        }
        Ok(Self {
            extents,
            probs,
            epsilon: 0.0,
            seed: 0,
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.extents.1 + j]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

/// `p = ½ Σ_s (|Ψ|² + |UΨ|²)` per cell, from full-space vectors.
pub fn pair_distribution(extents: (usize, usize), psi: &[C64], u_psi: &[C64]) -> Vec<f64> {
    (0..extents.0 * extents.1)
        .map(|c| {
            0.5 * (psi[2 * c].norm_sqr()
                + psi[2 * c + 1].norm_sqr()
                + u_psi[2 * c].norm_sqr()
                + u_psi[2 * c + 1].norm_sqr())
        })
        .collect()
}

/// The `count` eigenstates of the square `(e,e)` block of `U²` nearest to
/// quasienergy `target`, each paired with its image under `U`.
///
/// Uses shift-invert Arnoldi on the sparse block; `tol` bounds the
/// eigenpair residual.
pub fn eigenstate_distributions(
    spec: &DisorderSpec,
    extents: (usize, usize),
    count: usize,
    target: f64,
    tol: f64,
) -> Result<Vec<EigenstateDistribution>> {
    let coins = spec.generate(extents)?;
    let block = Block::SquareEe;
    let u2 = build_u2_block_sparse(&coins, block)?;
    let u = step_operator(&coins, Basis::RotatedSquare)?;
    let idx = block_indices(extents, block);
    let sigma = C64::from_polar(1.0, -2.0 * target);
    let pairs = shift_invert_eigs(&u2, sigma, count, tol)?;
    let dim = 2 * extents.0 * extents.1;
    pairs
        .into_iter()
        .map(|p| {
            let mut psi = vec![C64::new(0.0, 0.0); dim];
            let nrm = p.vector.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            for (&g, v) in idx.iter().zip(&p.vector) {
                psi[g] = v / nrm;
            }
            let u_psi = u.matvec(&psi);
            Ok(EigenstateDistribution {
                extents,
                probs: pair_distribution(extents, &psi, &u_psi),
                epsilon: -p.value.arg() / 2.0,
                seed: spec.seed,
            })
        })
        .collect()
}

/// Eigenstate distributions pooled over realizations, run in parallel and
/// returned in realization order.
pub fn eigenstate_ensemble(
    specs: &[DisorderSpec],
    extents: (usize, usize),
    per_realization: usize,
    target: f64,
    tol: f64,
) -> Result<Vec<EigenstateDistribution>> {
    let parts: Result<Vec<Vec<EigenstateDistribution>>> = specs
        .par_iter()
        .map(|s| eigenstate_distributions(s, extents, per_realization, target, tol))
        .collect();
    Ok(parts?.into_iter().flatten().collect())
}

/// `R(r) = Σ p(n₊, n₋) p(n₊ + r mod L₊, n₋)`.
pub fn autocorrelation(dist: &EigenstateDistribution, rs: &[usize]) -> Result<Vec<f64>> {
    let (lp, lm) = dist.extents;
    if let Some(&r) = rs.iter().find(|&&r| r >= lp) {
        return Err(Error::InvalidParameter(format!("shift {r} not below L₊ = {lp}")));
    }
    Ok(rs
        .iter()
        .map(|&r| {
            let mut acc = 0.0;
            for i in 0..lp {
                let a = &dist.probs[i * lm..(i + 1) * lm];
                let k = (i + r) % lp;
                let b = &dist.probs[k * lm..(k + 1) * lm];
                acc += a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
            }
            acc
        })
        .collect())
}

/// `⟨p²(l)⟩ = (l² / L₊L₋) Σ p_l²` over `l × l` boxes.
pub fn coarse_grain_moment(dist: &EigenstateDistribution, l: usize) -> Result<f64> {
    let (lp, lm) = dist.extents;
    if l == 0 || lp % l != 0 || lm % l != 0 {
        return Err(Error::InvalidParameter(format!(
            "box size {l} does not divide {lp}x{lm}"
        )));
    }
    let (bp, bm) = (lp / l, lm / l);
    let mut boxes = vec![0.0; bp * bm];
    for i in 0..lp {
        for j in 0..lm {
            boxes[(i / l) * bm + j / l] += dist.get(i, j);
        }
    }
    let sum_sq: f64 = boxes.iter().map(|b| b * b).sum();
    Ok((l * l) as f64 / (lp * lm) as f64 * sum_sq)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaMethod {
    Autocorrelation,
    Fractal,
    Return,
}

impl EtaMethod {
    pub fn name(self) -> &'static str {
        match self {
            EtaMethod::Autocorrelation => "autocorrelation",
            EtaMethod::Fractal => "fractal",
            EtaMethod::Return => "return",
        }
    }

    /// `η` from the log-log slope.
    pub fn eta(self, slope: f64) -> f64 {
        match self {
            EtaMethod::Autocorrelation => -slope,
            EtaMethod::Fractal => 4.0 - slope,
            EtaMethod::Return => 2.0 * (1.0 + slope),
        }
    }

    /// `|dη / d slope|`.
    fn scale(self) -> f64 {
        match self {
            EtaMethod::Autocorrelation | EtaMethod::Fractal => 1.0,
            EtaMethod::Return => 2.0,
        }
    }
}

/// Which mean goes into the log-log fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Averaging {
    #[default]
    MeanOfLogs,
    LogOfMeans,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EtaEstimate {
    pub method: EtaMethod,
    pub eta: f64,
    /// Three standard errors of the slope, propagated to `η`.
    pub ci: f64,
    pub slope: f64,
    pub slope_err: f64,
    pub r_squared: f64,
    pub n_samples: usize,
    /// `(ln scale, averaged ln value)` used in the fit.
    pub points: Vec<(f64, f64)>,
}

impl EtaEstimate {
    /// Whether the two estimates overlap within their combined intervals.
    pub fn agrees_with(&self, other: &EtaEstimate) -> bool {
        (self.eta - other.eta).abs() <= self.ci.hypot(other.ci)
    }
}

/// Fit `η` from averaged log values on a grid of scales.
pub fn eta_from_mean_logs(method: EtaMethod, scales: &[f64], mean_ln: &[f64], n_samples: usize) -> Result<EtaEstimate> {
    if scales.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "{} scales in the fit window, need at least 4",
            scales.len()
        )));
    }
    let x: Vec<f64> = scales.iter().map(|s| s.ln()).collect();
    let fit: LinearFit = linear_fit(&x, mean_ln)?;
    Ok(EtaEstimate {
        method,
        eta: method.eta(fit.slope),
        ci: 3.0 * fit.slope_err * method.scale(),
        slope: fit.slope,
        slope_err: fit.slope_err,
        r_squared: fit.r_squared,
        n_samples,
        points: x.into_iter().zip(mean_ln.iter().cloned()).collect(),
    })
}

/// Average `values[sample][scale]` into one log per scale.
fn average_logs(values: &[Vec<f64>], averaging: Averaging) -> Result<Vec<f64>> {
    let k = values.first().map(|v| v.len()).unwrap_or(0);
    let n = values.len() as f64;
    (0..k)
        .map(|j| {
            if values.iter().any(|v| v[j] <= 0.0) && averaging == Averaging::MeanOfLogs {
                return Err(Error::DegenerateFit(format!(
                    "non-positive value at scale index {j}"
                )));
            }
            Ok(match averaging {
                Averaging::MeanOfLogs => values.iter().map(|v| v[j].ln()).sum::<f64>() / n,
                Averaging::LogOfMeans => (values.iter().map(|v| v[j]).sum::<f64>() / n).ln(),
            })
        })
        .collect()
}

/// Powers of two up to `max`.
pub fn dyadic_grid(max: usize) -> Vec<usize> {
    std::iter::successors(Some(1usize), |v| v.checked_mul(2))
        .take_while(|&v| v <= max)
        .collect()
}

/// `r = 2^j ≤ L₊ / 4` with the two smallest dropped.
pub fn default_r_grid(l_plus: usize) -> Vec<usize> {
    dyadic_grid(l_plus / 4).into_iter().skip(2).collect()
}

/// `l = 2^j ≤ min(L₊, L₋) / 4` dividing both sides, two smallest dropped.
pub fn default_l_grid(extents: (usize, usize)) -> Vec<usize> {
    dyadic_grid(extents.0.min(extents.1) / 4)
        .into_iter()
        .filter(|l| extents.0 % l == 0 && extents.1 % l == 0)
        .skip(2)
        .collect()
}

/// Even times `2^j ≤ t_max` (the origin cell is empty at odd times), two
/// smallest dropped.
pub fn default_t_grid(t_max: usize) -> Vec<usize> {
    dyadic_grid(t_max).into_iter().filter(|t| t % 2 == 0).skip(2).collect()
}

fn check_ensemble(ensemble: &[EigenstateDistribution]) -> Result<(usize, usize)> {
    let first = ensemble.first().ok_or(Error::Undersized { need: 1, got: 0 })?;
    if let Some(d) = ensemble.iter().find(|d| d.extents != first.extents) {
        return Err(Error::ExtentMismatch {
            expected: first.extents,
            got: d.extents,
        });
    }
    Ok(first.extents)
}

/// `R(r) ∝ r^{−η}` fitted over `rs`.
pub fn eta_from_autocorrelation(ensemble: &[EigenstateDistribution], rs: &[usize], averaging: Averaging) -> Result<EtaEstimate> {
    check_ensemble(ensemble)?;
    let values: Result<Vec<Vec<f64>>> = ensemble.iter().map(|d| autocorrelation(d, rs)).collect();
    let means = average_logs(&values?, averaging)?;
    let scales: Vec<f64> = rs.iter().map(|&r| r as f64).collect();
    eta_from_mean_logs(EtaMethod::Autocorrelation, &scales, &means, ensemble.len())
}

/// `⟨p²(l)⟩ ∝ l^{4−η}` fitted over `ls`.
pub fn eta_from_fractal(ensemble: &[EigenstateDistribution], ls: &[usize], averaging: Averaging) -> Result<EtaEstimate> {
    check_ensemble(ensemble)?;
    let values: Result<Vec<Vec<f64>>> = ensemble
        .iter()
        .map(|d| ls.iter().map(|&l| coarse_grain_moment(d, l)).collect())
        .collect();
    let means = average_logs(&values?, averaging)?;
    let scales: Vec<f64> = ls.iter().map(|&l| l as f64).collect();
    eta_from_mean_logs(EtaMethod::Fractal, &scales, &means, ensemble.len())
}

/// `p₀(t)`, the probability on the origin cell, at each of `ts` for a walk
/// started in `|0, 0, +1⟩` at the centre of an absorbing region.
pub fn return_probability(spec: &DisorderSpec, extents: (usize, usize), ts: &[usize], dynamics: Dynamics) -> Result<Vec<f64>> {
    let t_max = ts.iter().cloned().max().unwrap_or(0);
    let origin = default_origin(extents);
    let mut out = vec![f64::NAN; ts.len()];
    evolve_observed(spec, extents, origin, t_max, dynamics, |f| {
        for (k, &t) in ts.iter().enumerate() {
            if t == f.t {
                out[k] = f.prob(origin.0, origin.1);
            }
        }
    })?;
    Ok(out)
}

/// [`return_probability`] for each spec, in order.
pub fn return_ensemble(specs: &[DisorderSpec], extents: (usize, usize), ts: &[usize], dynamics: Dynamics) -> Result<Vec<Vec<f64>>> {
    specs
        .par_iter()
        .map(|s| return_probability(s, extents, ts, dynamics))
        .collect()
}

/// `p₀(t) ∝ t^{−1+η/2}` fitted over `ts` from per-realization series.
pub fn eta_from_return(series: &[Vec<f64>], ts: &[usize], averaging: Averaging) -> Result<EtaEstimate> {
    if series.is_empty() {
        return Err(Error::Undersized { need: 1, got: 0 });
    }
    if let Some(s) = series.iter().find(|s| s.len() != ts.len()) {
        return Err(Error::InvalidParameter(format!(
            "series of length {} for {} times",
            s.len(),
            ts.len()
        )));
    }
    let means = average_logs(series, averaging)?;
    let scales: Vec<f64> = ts.iter().map(|&t| t as f64).collect();
    eta_from_mean_logs(EtaMethod::Return, &scales, &means, series.len())
}

pub fn write_points_csv<W: Write>(est: &EtaEstimate, mut w: W) -> std::io::Result<()> {
    let header = match est.method {
        EtaMethod::Autocorrelation => "r,lnR",
        EtaMethod::Fractal => "l,ln_p2",
        EtaMethod::Return => "t,ln_p0",
    };
    writeln!(w, "{header}")?;
    for (x, y) in &est.points {
        writeln!(w, "{:?},{y:?}", x.exp().round())?;
    }
    Ok(())
}

pub fn write_estimates_csv<W: Write>(ests: &[EtaEstimate], mut w: W) -> std::io::Result<()> {
    writeln!(w, "method,eta,ci,slope,slope_err,n_samples")?;
    for e in ests {
        writeln!(
            w,
            "{},{:?},{:?},{:?},{:?},{}",
            e.method.name(),
            e.eta,
            e.ci,
            e.slope,
            e.slope_err,
            e.n_samples
        )?;
    }
    Ok(())
}

/// A deterministic multiplicative cascade on a `2^k × 2^k` grid whose
/// box moments follow `⟨p²(l)⟩ ∝ l^{4−η}` exactly at dyadic `l`.
///
/// Each box splits its weight over its four children in the proportions
/// `(a, a, b, b)`, with `2a² + 2b² = 2^{η−2}`; the assignment of weights to
/// children is rotated by level so the field is not separable.
pub fn cascade_distribution(levels: u32, eta: f64) -> Result<EigenstateDistribution> {
    let s = 2f64.powf(eta - 2.0);
    if !(0.25..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("η = {eta} outside [0, 2]")));
    }
    // a + b = 1/2 and a² + b² = s/2.
    let d = (s - 0.125 * 2.0).max(0.0).sqrt() / 2.0;
    let (a, b) = (0.25 + d, 0.25 - d);
    let side = 1usize << levels;
    let mut p = vec![1.0; side * side];
    for lev in 0..levels {
        let half = side >> (lev + 1);
        for i in 0..side {
            for j in 0..side {
                let q = ((i / half) % 2) * 2 + (j / half) % 2;
                let w = if (q + lev as usize) % 4 < 2 { a } else { b };
                p[i * side + j] *= w;
            }
        }
    }
    EigenstateDistribution::from_probs((side, side), p)
}
