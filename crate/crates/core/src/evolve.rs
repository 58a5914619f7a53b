//! Point-source evolution in the rotated basis, disorder averaging, and the
//! localized / diffusive envelope fits.
//!
//! Distances use the original lattice metric: a cell offset `(n₊, n₋)` sits
//! at `x± = √2 n±`, so `x² + y² = 2 (n₊² + n₋²)`.

use std::f64::consts::SQRT_2;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::disorder::{haar_window, DisorderKind, DisorderSpec};
use crate::lattice::kernel::{Sweep, Window};
use crate::lattice::{
    Basis, BoundaryCondition, CoinField, Mat2, RotatedVariant, Spin, SpinorField, Walk,
};
use crate::stats::{linear_fit, LinearFit};
use crate::{Error, Result};

/// How the walker is propagated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dynamics {
    /// The unitary walk with a static coin field.
    Coherent,
    /// A unitary walk with fresh Haar coins drawn at every timestep.
    TimeDependent,
    /// The classicalized walk: probabilities moved by the stochastic matrix
    /// `[[cos²θ, sin²θ], [sin²θ, cos²θ]]`, phases dropped.
    Stochastic,
}

/// Spin-summed probability per rotated-basis cell at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDistribution {
    pub extents: (usize, usize),
    /// Storage cell of the starting point.
    pub origin: (usize, usize),
    pub t: usize,
    pub realizations: usize,
    pub probs: Vec<f64>,
    /// Probability absorbed by the boundary (averaged over realizations).
    pub p_leave: f64,
}

impl PositionDistribution {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.extents.1 + j]
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// `(n₊, n₋)` of storage cell `(i, j)` relative to the origin.
    pub fn offset(&self, i: usize, j: usize) -> (i64, i64) {
        (
            i as i64 - self.origin.0 as i64,
            j as i64 - self.origin.1 as i64,
        )
    }

    /// `⟨x² + y²⟩` over the probability still in the region.
    pub fn second_moment(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.extents.0 {
            for j in 0..self.extents.1 {
                let (a, b) = self.offset(i, j);
                acc += self.get(i, j) * 2.0 * (a * a + b * b) as f64;
            }
        }
        acc / self.total()
    }

    pub fn rms(&self) -> f64 {
        self.second_moment().sqrt()
    }

    /// Whether a cell can carry weight at this time: a walk from the origin
    /// only reaches cells with `n₊ − n₋ ≡ t (mod 2)`.
    pub fn is_occupied_parity(&self, i: usize, j: usize) -> bool {
        let (a, b) = self.offset(i, j);
        (a - b - self.t as i64).rem_euclid(2) == 0
    }

    /// `(x₊, p)` along `x₋ = 0`, occupied cells only.
    pub fn diagonal_cut(&self) -> Vec<(f64, f64)> {
        let j = self.origin.1;
        (0..self.extents.0)
            .filter(|&i| self.is_occupied_parity(i, j))
            .map(|i| (SQRT_2 * self.offset(i, j).0 as f64, self.get(i, j)))
            .collect()
    }

    /// `(x₋, p)` along `x₊ = 0`, occupied cells only.
    pub fn antidiagonal_cut(&self) -> Vec<(f64, f64)> {
        let i = self.origin.0;
        (0..self.extents.1)
            .filter(|&j| self.is_occupied_parity(i, j))
            .map(|j| (SQRT_2 * self.offset(i, j).1 as f64, self.get(i, j)))
            .collect()
    }

    /// CSV `n_plus,n_minus,p` with offsets relative to the origin.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n_plus,n_minus,p")?;
        for i in 0..self.extents.0 {
            for j in 0..self.extents.1 {
                let (a, b) = self.offset(i, j);
                writeln!(w, "{a},{b},{:?}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// One row of the spreading time series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariancePoint {
    pub t: usize,
    pub rms: f64,
    pub variance: f64,
    pub p_leave: f64,
}

impl From<&PositionDistribution> for VariancePoint {
    fn from(d: &PositionDistribution) -> Self {
        let variance = d.second_moment();
        Self {
            t: d.t,
            rms: variance.sqrt(),
            variance,
            p_leave: d.p_leave,
        }
    }
}

/// The evolving state handed to an observer after every step.
pub struct Frame<'a> {
    pub t: usize,
    pub extents: (usize, usize),
    pub origin: (usize, usize),
    pub p_leave: f64,
    cells: Cells<'a>,
}

enum Cells<'a> {
    Amplitudes(&'a SpinorField),
    Probabilities(&'a [[f64; 2]]),
}

impl Frame<'_> {
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        let k = i * self.extents.1 + j;
        match &self.cells {
            Cells::Amplitudes(f) => {
                let a = f.amplitudes()[k];
                a[0].norm_sqr() + a[1].norm_sqr()
            }
            Cells::Probabilities(p) => p[k][0] + p[k][1],
        }
    }

    pub fn distribution(&self) -> PositionDistribution {
        let probs = match &self.cells {
            Cells::Amplitudes(f) => f.probabilities(),
            Cells::Probabilities(p) => p.iter().map(|c| c[0] + c[1]).collect(),
        };
        PositionDistribution {
            extents: self.extents,
            origin: self.origin,
            t: self.t,
            realizations: 1,
            probs,
            p_leave: self.p_leave,
        }
    }
}

/// Storage cell used as the starting point: the middle of the region.
pub fn default_origin(extents: (usize, usize)) -> (usize, usize) {
    (extents.0 / 2, extents.1 / 2)
}

fn check_extents(extents: (usize, usize)) -> Result<()> {
    if extents.0 < 3 || extents.1 < 3 {
        return Err(Error::InvalidExtents(format!(
            "evolution region {}x{} is smaller than 3x3",
            extents.0, extents.1
        )));
    }
    Ok(())
}

fn stochastic_matrix(theta: f64) -> Mat2<f64> {
    let (s, c) = theta.sin_cos();
    [[c * c, s * s], [s * s, c * c]]
}

fn absorb_probabilities(p: &mut [[f64; 2]], extents: (usize, usize), win: Window) -> f64 {
    let (n0, n1) = extents;
    let mut lost = 0.0;
    let mut clear = |k: usize| {
        lost += p[k][0] + p[k][1];
        p[k] = [0.0; 2];
    };
    for r in [0, n0 - 1] {
        if r >= win.rows.0 && r < win.rows.1 {
            (win.cols.0..win.cols.1).for_each(|c| clear(r * n1 + c));
        }
    }
    for c in [0, n1 - 1] {
        if c >= win.cols.0 && c < win.cols.1 {
            // Corners were already cleared above.
            (win.rows.0.max(1)..win.rows.1.min(n0 - 1)).for_each(|r| clear(r * n1 + c));
        }
    }
    lost
}

/// Evolve a walker started at `origin` with spin `+1` on the `□`
/// sublattice for `t_max` steps with absorbing boundaries, calling
/// `observe` at `t = 0` and after every step.
///
/// Only the light cone of the origin is swept, so early steps on large
/// regions are cheap.
pub fn evolve_observed(
    spec: &DisorderSpec,
    extents: (usize, usize),
    origin: (usize, usize),
    t_max: usize,
    dynamics: Dynamics,
    mut observe: impl FnMut(&Frame),
) -> Result<()> {
    check_extents(extents)?;
    if origin.0 >= extents.0 || origin.1 >= extents.1 {
        return Err(Error::InvalidExtents(format!(
            "origin {origin:?} outside {}x{}",
            extents.0, extents.1
        )));
    }
    if dynamics == Dynamics::TimeDependent && spec.kind != DisorderKind::Haar {
        return Err(Error::InvalidParameter(
            "time-dependent coins are only defined for Haar disorder".into(),
        ));
    }
    let start = Window {
        rows: (origin.0, origin.0 + 1),
        cols: (origin.1, origin.1 + 1),
    };
    let variant = RotatedVariant::Square;
    match dynamics {
        Dynamics::Coherent | Dynamics::TimeDependent => {
            let coins = if dynamics == Dynamics::Coherent {
                spec.generate(extents)?
            } else {
                CoinField::uniform(extents, Default::default())
            };
            let mut walk = Walk::rotated(&coins, variant);
            let mut psi = SpinorField::delta(variant.basis(), extents, origin.0, origin.1, Spin::Up)?;
            let mut bc = BoundaryCondition::absorbing();
            let frame = |t: usize, psi: &SpinorField, loss: f64| {
                observe(&Frame {
                    t,
                    extents,
                    origin,
                    p_leave: loss,
                    cells: Cells::Amplitudes(psi),
                })
            };
            let mut frame = frame;
            frame(0, &psi, 0.0);
            for t in 0..t_max {
                let win = start.grow(t + 2, extents);
                if dynamics == Dynamics::TimeDependent {
                    let table = walk.table_mut();
                    haar_window(extents, spec.seed, t as u64 + 1, win.rows, win.cols, |k, a| {
                        table.set(k, &a)
                    });
                }
                walk.step_window(&mut psi, &mut bc, win)?;
                frame(t + 1, &psi, bc.accumulated_loss);
            }
        }
        Dynamics::Stochastic => {
            let coins = spec.generate(extents)?;
            let r1: Vec<Mat2<f64>> = coins.angles().iter().map(|a| stochastic_matrix(a.theta1)).collect();
            let r2: Vec<Mat2<f64>> = coins.angles().iter().map(|a| stochastic_matrix(a.theta2)).collect();
            let sweep = Sweep {
                extents,
                plan: variant.plan(),
                r1: &r1,
                r2: &r2,
                phase: None,
                frozen_row: None,
            };
            let n = extents.0 * extents.1;
            let mut p = vec![[0.0f64; 2]; n];
            let mut tmp = vec![[0.0f64; 2]; n];
            p[origin.0 * extents.1 + origin.1][0] = 1.0;
            let mut loss = 0.0;
            observe(&Frame {
                t: 0,
                extents,
                origin,
                p_leave: 0.0,
                cells: Cells::Probabilities(&p),
            });
            for t in 0..t_max {
                let win = start.grow(t + 2, extents);
                sweep.run(&mut p, &mut tmp, win);
                loss += absorb_probabilities(&mut p, extents, win);
                observe(&Frame {
                    t: t + 1,
                    extents,
                    origin,
                    p_leave: loss,
                    cells: Cells::Probabilities(&p),
                });
            }
        }
    }
    Ok(())
}

/// Result of a single point-source evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionRun {
    pub snapshots: Vec<PositionDistribution>,
    pub p_leave: f64,
}

/// Evolve the `|0, 0, +1⟩` source with absorbing boundaries and return the
/// spin-summed distribution at each requested time (ascending, `≤ t_max`).
pub fn run_point_source(
    spec: &DisorderSpec,
    extents: (usize, usize),
    t_max: usize,
    snapshots: &[usize],
) -> Result<EvolutionRun> {
    run_with(spec, extents, t_max, snapshots, Dynamics::Coherent)
}

/// Like [`run_point_source`] with a choice of dynamics.
pub fn run_with(
    spec: &DisorderSpec,
    extents: (usize, usize),
    t_max: usize,
    snapshots: &[usize],
    dynamics: Dynamics,
) -> Result<EvolutionRun> {
    if let Some(&t) = snapshots.iter().find(|&&t| t > t_max) {
        return Err(Error::InvalidParameter(format!(
            "snapshot time {t} beyond t_max {t_max}"
        )));
    }
    let mut out = Vec::with_capacity(snapshots.len());
    let mut p_leave = 0.0;
    evolve_observed(spec, extents, default_origin(extents), t_max, dynamics, |f| {
        if snapshots.contains(&f.t) {
            out.push(f.distribution());
        }
        p_leave = f.p_leave;
    })?;
    Ok(EvolutionRun {
        snapshots: out,
        p_leave,
    })
}

/// Disorder-averaged distributions at each snapshot time.
///
/// Realizations run in parallel in batches of the pool size; sums are
/// accumulated in realization order so the result does not depend on the
/// worker count.
pub fn run_ensemble(
    specs: &[DisorderSpec],
    extents: (usize, usize),
    snapshots: &[usize],
    dynamics: Dynamics,
) -> Result<Vec<PositionDistribution>> {
    let t_max = snapshots.iter().cloned().max().unwrap_or(0);
    let mut acc: Option<Vec<PositionDistribution>> = None;
    let batch = rayon::current_num_threads().max(1);
    for chunk in specs.chunks(batch) {
        let runs: Vec<Result<EvolutionRun>> = chunk
            .par_iter()
            .map(|s| run_with(s, extents, t_max, snapshots, dynamics))
            .collect();
        for run in runs {
            let run = run?;
            match &mut acc {
                None => acc = Some(run.snapshots),
                Some(sum) => {
                    for (a, b) in sum.iter_mut().zip(run.snapshots) {
                        a.probs.iter_mut().zip(&b.probs).for_each(|(x, y)| *x += y);
                        a.p_leave += b.p_leave;
                        a.realizations += 1;
                    }
                }
            }
        }
    }
    let mut out = acc.ok_or_else(|| Error::InvalidParameter("no realizations".into()))?;
    for d in &mut out {
        let n = d.realizations as f64;
        d.probs.iter_mut().for_each(|p| *p /= n);
        d.p_leave /= n;
    }
    Ok(out)
}

/// Mean of the final (`t_max`) distributions over `specs`.
pub fn average_over_disorder(
    specs: &[DisorderSpec],
    extents: (usize, usize),
    t_max: usize,
) -> Result<PositionDistribution> {
    let seeds_only = specs.windows(2).all(|w| w[0].with_seed(0) == w[1].with_seed(0));
    if !seeds_only {
        return Err(Error::InvalidParameter(
            "specs to average must differ only by seed".into(),
        ));
    }
    Ok(run_ensemble(specs, extents, &[t_max], Dynamics::Coherent)?.remove(0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpreadModel {
    Localized,
    Diffusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Cut points with `|x|` below this are ignored.
    pub core_exclusion: f64,
    /// Points with `p` below `floor × max p` are ignored.
    pub floor: f64,
    /// Optional outer cutoff on `|x|`.
    pub max_distance: Option<f64>,
}

impl FitOptions {
    pub fn localized() -> Self {
        Self {
            core_exclusion: 4.0,
            floor: 1e-14,
            max_distance: None,
        }
    }

    /// Ten rotated cells of core excluded.
    pub fn diffusive() -> Self {
        Self {
            core_exclusion: 10.0 * SQRT_2,
            floor: 1e-14,
            max_distance: None,
        }
    }
}

/// Envelope fit along the two diagonal cuts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpreadFit {
    pub model: SpreadModel,
    /// `ζ₊` or `D₊`.
    pub plus: f64,
    /// `ζ₋` or `D₋`.
    pub minus: f64,
    pub plus_fit: LinearFit,
    pub minus_fit: LinearFit,
    /// Measured `⟨x² + y²⟩`.
    pub variance: f64,
    /// `3 (ζ₊² + ζ₋²)` or `2 (D₊ + D₋) t`.
    pub model_variance: f64,
}

impl SpreadFit {
    /// The worse of the two cut fits.
    pub fn r_squared(&self) -> f64 {
        self.plus_fit.r_squared.min(self.minus_fit.r_squared)
    }
}

fn cut_points(cut: &[(f64, f64)], opts: &FitOptions, feature: impl Fn(f64) -> f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let pmax = cut.iter().map(|c| c.1).fold(0.0, f64::max);
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for &(x, p) in cut {
        let ax = x.abs();
        if ax < opts.core_exclusion || p <= opts.floor * pmax || p <= 0.0 {
            continue;
        }
        if opts.max_distance.is_some_and(|m| ax > m) {
            continue;
        }
        xs.push(feature(ax));
        ys.push(p.ln());
    }
    if xs.len() < 8 {
        return Err(Error::DegenerateFit(format!(
            "{} usable cut points, need at least 8",
            xs.len()
        )));
    }
    Ok((xs, ys))
}

fn decay_fit(cut: &[(f64, f64)], opts: &FitOptions, feature: impl Fn(f64) -> f64) -> Result<(f64, LinearFit)> {
    let (xs, ys) = cut_points(cut, opts, feature)?;
    let fit = linear_fit(&xs, &ys)?;
    if fit.slope >= 0.0 {
        return Err(Error::DegenerateFit(format!(
            "envelope does not decay (slope {:.3e})",
            fit.slope
        )));
    }
    Ok((-1.0 / fit.slope, fit))
}

/// Fit `log p = c − |x±| / ζ±` on the two cuts.
pub fn fit_localized(dist: &PositionDistribution, opts: &FitOptions) -> Result<SpreadFit> {
    let (zp, fp) = decay_fit(&dist.diagonal_cut(), opts, |x| x)?;
    let (zm, fm) = decay_fit(&dist.antidiagonal_cut(), opts, |x| x)?;
    Ok(SpreadFit {
        model: SpreadModel::Localized,
        plus: zp,
        minus: zm,
        plus_fit: fp,
        minus_fit: fm,
        variance: dist.second_moment(),
        model_variance: 3.0 * (zp * zp + zm * zm),
    })
}

/// Fit `log p = c − x±² / (4 D± t)` on the two cuts.
pub fn fit_diffusive(dist: &PositionDistribution, t: usize, opts: &FitOptions) -> Result<SpreadFit> {
    if t == 0 {
        return Err(Error::InvalidParameter("diffusive fit needs t > 0".into()));
    }
    let tf = t as f64;
    let feature = |x: f64| x * x / (4.0 * tf);
    let (dp, fp) = decay_fit(&dist.diagonal_cut(), opts, feature)?;
    let (dm, fm) = decay_fit(&dist.antidiagonal_cut(), opts, feature)?;
    Ok(SpreadFit {
        model: SpreadModel::Diffusive,
        plus: dp,
        minus: dm,
        plus_fit: fp,
        minus_fit: fm,
        variance: dist.second_moment(),
        model_variance: 2.0 * (dp + dm) * tf,
    })
}

/// `rms ≈ prefactor · t^exponent`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLaw {
    pub exponent: f64,
    pub exponent_err: f64,
    pub prefactor: f64,
    pub prefactor_err: f64,
}

/// Log-log fit of the RMS width against time (points with `t > 0`).
pub fn variance_series(points: &[VariancePoint]) -> Result<PowerLaw> {
    let used: Vec<&VariancePoint> = points.iter().filter(|p| p.t > 0 && p.rms > 0.0).collect();
    if used.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "{} usable snapshots, need at least 4",
            used.len()
        )));
    }
    let x: Vec<f64> = used.iter().map(|p| (p.t as f64).ln()).collect();
    let y: Vec<f64> = used.iter().map(|p| p.rms.ln()).collect();
    let f = linear_fit(&x, &y)?;
    let prefactor = f.intercept.exp();
    Ok(PowerLaw {
        exponent: f.slope,
        exponent_err: f.slope_err,
        prefactor,
        prefactor_err: prefactor * f.intercept_err,
    })
}

/// Powers of two from 1 up to `t_max`, plus `t_max` itself.
pub fn geometric_schedule(t_max: usize) -> Vec<usize> {
    let mut v: Vec<usize> = std::iter::successors(Some(1usize), |t| t.checked_mul(2))
        .take_while(|&t| t < t_max)
        .collect();
    if t_max > 0 {
        v.push(t_max);
    }
    v
}

/// Rotated-region extents with the long side along the expected spreading
/// direction: `long × short` cells for diagonal spreading, transposed for
/// antidiagonal, square otherwise.
pub fn oriented_extents(theta1: f64, theta2: f64, long: usize, short: usize) -> (usize, usize) {
    use crate::disorder::{dominant_axis, Axis};
    match dominant_axis(theta1, theta2) {
        Axis::Diagonal => (long, short),
        Axis::Antidiagonal => (short, long),
        Axis::Isotropic => (long, long),
    }
}

/// Basis used for every evolution in this module.
pub const EVOLUTION_BASIS: Basis = Basis::RotatedSquare;
