//! Two-terminal scattering: single-column leads, reflecting cuts, the
//! time-domain transmission recursion, quasienergy resolution, and the
//! invariant inferred from transmission with and without cuts.
//!
//! Coordinates follow the usual convention for this setup: the system is
//! `1 ≤ x ≤ L_x`, `1 ≤ y ≤ L_y`, the lead column is `x = 0`, and `x` is
//! periodic modulo `L_x + 1`. Channel indices `n`, `m` are the 1-based `y`
//! of the lead cell. Storage cell `(x, y − 1)`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::disorder::DisorderSpec;
use crate::lattice::{
    dense_from_walk, Basis, BoundaryCondition, CoinAngles, CoinField, Spin, SpinorField, Walk,
};
use crate::linalg::{hermitian_eigenvalues, solve, DenseMatrix};
use crate::stats::linear_fit;
use crate::{Error, Result, C64};

/// Residual in-system probability below which a channel stops early.
const DRAINED: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cut {
    None,
    A,
    B,
}

impl Cut {
    /// `(θ₁, θ₂)` written into the cut rows.
    pub fn thetas(self) -> Option<(f64, f64)> {
        match self {
            Cut::None => None,
            Cut::A => Some((0.0, FRAC_PI_2)),
            Cut::B => Some((FRAC_PI_2, 0.0)),
        }
    }

    /// Invariant of the flat-band bulk that forms the cut.
    pub fn invariant(self) -> Option<i8> {
        match self {
            Cut::None => None,
            Cut::A => Some(-1),
            Cut::B => Some(1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Cut::None => "none",
            Cut::A => "A",
            Cut::B => "B",
        }
    }
}

impl std::str::FromStr for Cut {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" | "None" => Ok(Cut::None),
            "A" | "a" => Ok(Cut::A),
            "B" | "b" => Ok(Cut::B),
            _ => Err(Error::InvalidParameter(format!("unknown cut {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterGeometry {
    pub lx: usize,
    pub ly: usize,
    pub cut: Cut,
    /// 1-based `y` of the cut rows (empty without a cut).
    pub cut_rows: Vec<usize>,
}

impl ScatterGeometry {
    /// Geometry with the default two cut rows `y = L_y/2` and `L_y/2 + 1`.
    pub fn new(lx: usize, ly: usize, cut: Cut) -> Result<Self> {
        let rows = if cut == Cut::None {
            Vec::new()
        } else {
            vec![ly / 2, ly / 2 + 1]
        };
        Self::with_cut_rows(lx, ly, cut, rows)
    }

    pub fn with_cut_rows(lx: usize, ly: usize, cut: Cut, cut_rows: Vec<usize>) -> Result<Self> {
        if lx < 1 || ly < 2 || ly % 2 != 0 {
            return Err(Error::InvalidExtents(format!(
                "scattering region needs L_x ≥ 1 and even L_y ≥ 2, got {lx}x{ly}"
            )));
        }
        if cut != Cut::None && cut_rows.is_empty() {
            return Err(Error::InvalidParameter("cut without rows".into()));
        }
        if let Some(&y) = cut_rows.iter().find(|&&y| y < 1 || y > ly) {
            return Err(Error::InvalidExtents(format!("cut row {y} outside 1..={ly}")));
        }
        Ok(Self {
            lx,
            ly,
            cut,
            cut_rows,
        })
    }

    /// Storage extents including the lead column.
    pub fn extents(&self) -> (usize, usize) {
        (self.lx + 1, self.ly)
    }

    /// Extents of the coin field for the system proper.
    pub fn system_extents(&self) -> (usize, usize) {
        (self.lx, self.ly)
    }

    /// Dimension of the full state space (lead column included).
    pub fn dim(&self) -> usize {
        2 * (self.lx + 1) * self.ly
    }
}

/// A geometry together with the coin field that realizes it.
#[derive(Debug, Clone)]
pub struct ScatterSetup {
    pub geometry: ScatterGeometry,
    /// Coins over the full `(L_x + 1) × L_y` storage, lead column zeroed.
    pub coins: CoinField,
}

impl ScatterSetup {
    /// One-step operator with the `y`-shift omitted in the lead column.
    pub fn walk(&self) -> Walk {
        Walk::original(&self.coins).freeze_second_shift(0)
    }
}

/// Embed system coins (extents `(L_x, L_y)`) next to a lead column and
/// overwrite the cut rows.
pub fn build_geometry(lx: usize, ly: usize, cut: Cut, coins: &CoinField) -> Result<ScatterSetup> {
    build_setup(ScatterGeometry::new(lx, ly, cut)?, coins)
}

pub fn build_setup(geometry: ScatterGeometry, coins: &CoinField) -> Result<ScatterSetup> {
    if coins.extents() != geometry.system_extents() {
        return Err(Error::ExtentMismatch {
            expected: geometry.system_extents(),
            got: coins.extents(),
        });
    }
    let ext = geometry.extents();
    let mut full = CoinField::uniform(ext, CoinAngles::default());
    for x in 1..ext.0 {
        for j in 0..ext.1 {
            *full.get_mut(x, j) = *coins.get(x - 1, j);
        }
    }
    if let Some((t1, t2)) = geometry.cut.thetas() {
        for &y in &geometry.cut_rows {
            for x in 1..ext.0 {
                let a = full.get_mut(x, y - 1);
                *a = CoinAngles {
                    phi: a.phi,
                    ..CoinAngles::thetas(t1, t2)
                };
            }
        }
    }
    Ok(ScatterSetup {
        geometry,
        coins: full,
    })
}

/// Transmission and reflection amplitudes for one input channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSeries {
    /// Input channel, 1-based.
    pub n: usize,
    pub ly: usize,
    /// `𝔱_mn(t)` at `[(t − 1) · L_y + (m − 1)]` for `t = 1..=t_max`.
    pub t: Vec<C64>,
    /// `𝔯_mn(t)`, same layout.
    pub r: Vec<C64>,
    /// Probability still inside the system after the last step.
    pub residual: f64,
}

impl ChannelSeries {
    pub fn t_max(&self) -> usize {
        self.t.len() / self.ly
    }

    pub fn transmitted(&self) -> f64 {
        self.t.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn reflected(&self) -> f64 {
        self.r.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Flux bookkeeping for one input channel without the amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelFlux {
    pub n: usize,
    pub transmitted: f64,
    pub reflected: f64,
    pub residual: f64,
    /// Steps actually taken (fewer than requested once the system drains).
    pub steps: usize,
}

fn check_channel(setup: &ScatterSetup, n: usize) -> Result<()> {
    if n < 1 || n > setup.geometry.ly {
        return Err(Error::InvalidParameter(format!(
            "input channel {n} outside 1..={}",
            setup.geometry.ly
        )));
    }
    Ok(())
}

/// Inject at `(0, n, +1)` and step `t_max` times, passing the lead column
/// (`[ψ₊, ψ₋]` per channel) to `read` after each step before erasing it.
fn drive(
    setup: &ScatterSetup,
    n: usize,
    t_max: usize,
    early_stop: bool,
    mut read: impl FnMut(usize, &[[C64; 2]]),
) -> Result<(f64, usize)> {
    check_channel(setup, n)?;
    let ext = setup.geometry.extents();
    let ly = ext.1;
    let mut walk = setup.walk();
    let mut psi = SpinorField::delta(Basis::Original, ext, 0, n - 1, Spin::Up)?;
    let mut bc = BoundaryCondition::periodic();
    let mut remaining = 1.0;
    let mut steps = 0;
    for t in 1..=t_max {
        walk.step(&mut psi, &mut bc)?;
        let lead = &mut psi.amplitudes_mut()[..ly];
        read(t, lead);
        let out: f64 = lead.iter().map(|a| a[0].norm_sqr() + a[1].norm_sqr()).sum();
        lead.iter_mut().for_each(|a| *a = [C64::new(0.0, 0.0); 2]);
        remaining -= out;
        steps = t;
        if early_stop && remaining < DRAINED {
            break;
        }
    }
    Ok((psi.norm_sqr(), steps))
}

/// `𝔱_mn(t)` and `𝔯_mn(t)` for `t = 1..=t_max` from input channel `n`.
pub fn transmission_series(setup: &ScatterSetup, n: usize, t_max: usize) -> Result<ChannelSeries> {
    let ly = setup.geometry.ly;
    let mut t = vec![C64::new(0.0, 0.0); t_max * ly];
    let mut r = t.clone();
    let (residual, _) = drive(setup, n, t_max, false, |step, lead| {
        let base = (step - 1) * ly;
        for (m, a) in lead.iter().enumerate() {
            t[base + m] = a[0];
            r[base + m] = a[1];
        }
    })?;
    Ok(ChannelSeries {
        n,
        ly,
        t,
        r,
        residual,
    })
}

/// Transmitted and reflected probability for input channel `n`.
///
/// Stops once the in-system probability falls below `1e-15`.
pub fn channel_flux(setup: &ScatterSetup, n: usize, t_max: usize) -> Result<ChannelFlux> {
    let mut transmitted = 0.0;
    let mut reflected = 0.0;
    let (residual, steps) = drive(setup, n, t_max, true, |_, lead| {
        for a in lead {
            transmitted += a[0].norm_sqr();
            reflected += a[1].norm_sqr();
        }
    })?;
    Ok(ChannelFlux {
        n,
        transmitted,
        reflected,
        residual,
        steps,
    })
}

/// Which input channels to inject.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Channels {
    All,
    Even,
    Odd,
}

impl Channels {
    pub fn list(self, ly: usize) -> Vec<usize> {
        (1..=ly)
            .filter(|n| match self {
                Channels::All => true,
                Channels::Even => n % 2 == 0,
                Channels::Odd => n % 2 == 1,
            })
            .collect()
    }
}

/// Time series for a set of input channels.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionRecord {
    pub ly: usize,
    pub t_max: usize,
    pub channels: Vec<ChannelSeries>,
}

impl TransmissionRecord {
    pub fn inputs(&self) -> Vec<usize> {
        self.channels.iter().map(|c| c.n).collect()
    }

    /// `𝔱_mn(t)` (1-based `m`, `n`; `n` must be recorded).
    pub fn amplitude(&self, m: usize, n: usize, t: usize) -> Option<C64> {
        let c = self.channels.iter().find(|c| c.n == n)?;
        if t == 0 || t > self.t_max || m == 0 || m > self.ly {
            return Some(C64::new(0.0, 0.0));
        }
        Some(c.t[(t - 1) * self.ly + m - 1])
    }
}

/// Record the given input channels in parallel.
pub fn record_transmission(setup: &ScatterSetup, channels: &[usize], t_max: usize) -> Result<TransmissionRecord> {
    let series: Result<Vec<ChannelSeries>> = channels
        .par_iter()
        .map(|&n| transmission_series(setup, n, t_max))
        .collect();
    Ok(TransmissionRecord {
        ly: setup.geometry.ly,
        t_max,
        channels: series?,
    })
}

/// Transmission at one quasienergy.
#[derive(Debug, Clone)]
pub struct EnergyPoint {
    pub epsilon: f64,
    /// `𝔱(ε)`, `L_y` rows by one column per recorded input.
    pub t: DenseMatrix,
    /// `T(ε) = Σ |𝔱_mn(ε)|²`.
    pub total: f64,
    /// Eigenvalues of `𝔱†𝔱`, ascending.
    pub eigenvalues: Vec<f64>,
}

fn energy_point(epsilon: f64, t: DenseMatrix) -> Result<EnergyPoint> {
    let total = t.as_slice().iter().map(|a| a.norm_sqr()).sum();
    let ttt = t.adjoint().matmul(&t)?;
    let mut eigenvalues = hermitian_eigenvalues(&ttt)?;
    eigenvalues.sort_by(f64::total_cmp);
    Ok(EnergyPoint {
        epsilon,
        t,
        total,
        eigenvalues,
    })
}

/// `𝔱_mn(ε) = Σ_t e^{iεt} 𝔱_mn(t)` by direct summation at any `ε`.
pub fn transmission_at_energy(record: &TransmissionRecord, epsilon: f64) -> Result<EnergyPoint> {
    let ly = record.ly;
    let phases: Vec<C64> = (1..=record.t_max)
        .map(|t| C64::from_polar(1.0, epsilon * t as f64))
        .collect();
    let mut m = DenseMatrix::zeros(ly, record.channels.len());
    for (col, c) in record.channels.iter().enumerate() {
        let dst = m.col_mut(col);
        for (step, ph) in phases.iter().enumerate() {
            for (d, a) in dst.iter_mut().zip(&c.t[step * ly..(step + 1) * ly]) {
                *d += ph * a;
            }
        }
    }
    energy_point(epsilon, m)
}

/// `𝔱(ε_k)` on the grid `ε_k = 2πk / t_max`, `k = 0..t_max`, by FFT.
pub struct EnergyGrid {
    pub ly: usize,
    pub t_max: usize,
    pub inputs: Vec<usize>,
    /// `[k][input][m]`.
    values: Vec<C64>,
}

impl EnergyGrid {
    pub fn epsilon(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.t_max as f64
    }

    pub fn matrix(&self, k: usize) -> DenseMatrix {
        let w = self.inputs.len() * self.ly;
        let block = &self.values[k * w..(k + 1) * w];
        DenseMatrix::from_fn(self.ly, self.inputs.len(), |m, c| block[c * self.ly + m])
    }

    pub fn point(&self, k: usize) -> Result<EnergyPoint> {
        energy_point(self.epsilon(k), self.matrix(k))
    }

    /// `T(ε_k)` for every grid point.
    pub fn totals(&self) -> Vec<f64> {
        let w = self.inputs.len() * self.ly;
        self.values
            .chunks_exact(w)
            .map(|b| b.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }
}

pub fn energy_grid(record: &TransmissionRecord) -> Result<EnergyGrid> {
    let (ly, nt) = (record.ly, record.t_max);
    if nt == 0 {
        return Err(Error::InvalidParameter("empty time series".into()));
    }
    let fft = FftPlanner::new().plan_fft_inverse(nt);
    let w = record.channels.len() * ly;
    let mut values = vec![C64::new(0.0, 0.0); nt * w];
    let mut buf = vec![C64::new(0.0, 0.0); nt];
    for (ci, c) in record.channels.iter().enumerate() {
        for m in 0..ly {
            // Time t sits at index t mod t_max, so e^{iε_k t} is the
            // unnormalized inverse transform.
            for t in 1..=nt {
                buf[t % nt] = c.t[(t - 1) * ly + m];
            }
            fft.process(&mut buf);
            for (k, v) in buf.iter().enumerate() {
                values[k * w + ci * ly + m] = *v;
            }
        }
    }
    Ok(EnergyGrid {
        ly,
        t_max: nt,
        inputs: record.inputs(),
        values,
    })
}

/// Quasienergy-averaged total transmission.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AveragedTransmission {
    pub total: f64,
    /// Contribution of even input channels.
    pub even: f64,
    /// Contribution of odd input channels.
    pub odd: f64,
    pub reflected: f64,
    /// Smallest probability that left the system, over input channels.
    pub min_absorbed: f64,
}

impl AveragedTransmission {
    pub fn converged(&self) -> bool {
        self.min_absorbed >= 0.99
    }

    pub fn warning(&self) -> Option<String> {
        (!self.converged()).then(|| {
            format!(
                "only {:.4} of the probability left the system in the worst channel",
                self.min_absorbed
            )
        })
    }

    fn from_flux(flux: &[ChannelFlux]) -> Self {
        let mut out = Self {
            total: 0.0,
            even: 0.0,
            odd: 0.0,
            reflected: 0.0,
            min_absorbed: 1.0,
        };
        for f in flux {
            out.total += f.transmitted;
            out.reflected += f.reflected;
            if f.n % 2 == 0 {
                out.even += f.transmitted;
            } else {
                out.odd += f.transmitted;
            }
            out.min_absorbed = out.min_absorbed.min(1.0 - f.residual);
        }
        out
    }
}

/// `T̄ = Σ_mnt |𝔱_mn(t)|²` over the recorded channels.
pub fn averaged_transmission(record: &TransmissionRecord) -> AveragedTransmission {
    let flux: Vec<ChannelFlux> = record
        .channels
        .iter()
        .map(|c| ChannelFlux {
            n: c.n,
            transmitted: c.transmitted(),
            reflected: c.reflected(),
            residual: c.residual,
            steps: c.t_max(),
        })
        .collect();
    AveragedTransmission::from_flux(&flux)
}

/// `T̄` computed channel by channel without storing amplitudes.
pub fn transmission_summary(setup: &ScatterSetup, channels: Channels, t_max: usize) -> Result<AveragedTransmission> {
    let flux: Result<Vec<ChannelFlux>> = channels
        .list(setup.geometry.ly)
        .par_iter()
        .map(|&n| channel_flux(setup, n, t_max))
        .collect();
    Ok(AveragedTransmission::from_flux(&flux?))
}

/// `sgn(T_A − T_B) (T_A + T_B) / 2`.
pub fn invariant_from_transmission(t_a: f64, t_b: f64) -> f64 {
    let d = t_a - t_b;
    let sign = if d > 0.0 {
        1.0
    } else if d < 0.0 {
        -1.0
    } else {
        0.0
    };
    sign * (t_a + t_b) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantEstimate {
    pub value: f64,
    pub rounded: i64,
    /// `|value − rounded| ≤ 0.2`.
    pub converged: bool,
}

impl InvariantEstimate {
    pub fn new(t_a: f64, t_b: f64) -> Self {
        let value = invariant_from_transmission(t_a, t_b);
        let rounded = value.round() as i64;
        Self {
            value,
            rounded,
            converged: (value - rounded as f64).abs() <= 0.2,
        }
    }
}

/// Closed-form `𝔱(ε)`, `𝔯(ε)` from a dense solve.
#[derive(Debug, Clone)]
pub struct ResolventResult {
    pub epsilon: f64,
    /// `L_y × L_y`, column `n − 1` is input channel `n`.
    pub t: DenseMatrix,
    pub r: DenseMatrix,
    pub condition: f64,
}

/// `𝔱(ε) = e^{iε} ⟨out| U (1 − e^{iε} Π_sys U)⁻¹ |in⟩`.
///
/// The leading `e^{iε}` makes this the sum of `e^{iεt} 𝔱(t)` from `t = 1`,
/// the first step at which anything can reach the lead.
pub fn resolvent_oracle(setup: &ScatterSetup, epsilon: f64, cap: usize) -> Result<ResolventResult> {
    let ly = setup.geometry.ly;
    let dim = setup.geometry.dim();
    let u = dense_from_walk(&mut setup.walk(), BoundaryCondition::periodic(), cap)?;
    let z = C64::from_polar(1.0, epsilon);
    // Rows 0..2 L_y are the lead column.
    let lead = 2 * ly;
    let a = DenseMatrix::from_fn(dim, dim, |i, j| {
        let id = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
        if i < lead {
            id
        } else {
            id - z * u.get(i, j)
        }
    });
    let b = DenseMatrix::from_fn(dim, ly, |i, n| {
        if i == 2 * n {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let sol = solve(&a, &b)?;
    let mut t = DenseMatrix::zeros(ly, ly);
    let mut r = DenseMatrix::zeros(ly, ly);
    for n in 0..ly {
        let out = u.matvec(sol.x.col(n));
        for m in 0..ly {
            t.set(m, n, z * out[2 * m]);
            r.set(m, n, z * out[2 * m + 1]);
        }
    }
    Ok(ResolventResult {
        epsilon,
        t,
        r,
        condition: sol.condition,
    })
}

/// Size schedule with `L_y / L_x ≈ 3/2` and the matching step budgets.
pub const DEFAULT_SCALING_SIZES: [(usize, usize, usize); 4] =
    [(19, 30, 1000), (39, 60, 2000), (59, 90, 3000), (79, 120, 4000)];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub lx: usize,
    pub ly: usize,
    pub t_max: usize,
    pub realizations: usize,
    /// Disorder-averaged `T̄` over all input channels.
    pub mean: f64,
    pub std_err: f64,
    pub min_absorbed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalingClass {
    /// `T̄` falls by at least 3× from the smallest to the largest size.
    Insulating,
    /// `T̄` changes by less than 20%.
    Diffusive,
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// Slope of `ln T̄` against `L_x`.
    pub slope: f64,
    pub class: ScalingClass,
}

impl ScalingTable {
    /// `T̄(largest) / T̄(smallest)`.
    pub fn ratio(&self) -> f64 {
        self.rows.last().unwrap().mean / self.rows[0].mean
    }
}

pub fn classify_scaling(ratio: f64) -> ScalingClass {
    if ratio <= 1.0 / 3.0 {
        ScalingClass::Insulating
    } else if (ratio - 1.0).abs() < 0.2 {
        ScalingClass::Diffusive
    } else {
        ScalingClass::Indeterminate
    }
}

/// Disorder-averaged `T̄` for each size, each realization drawn from
/// `spec.with_seed(seed)` on the system extents of that size.
pub fn scaling_sweep(
    spec: &DisorderSpec,
    sizes: &[(usize, usize, usize)],
    cut: Cut,
    seeds: &[u64],
) -> Result<ScalingTable> {
    if sizes.len() < 2 || seeds.is_empty() {
        return Err(Error::InvalidParameter(
            "scaling needs at least two sizes and one seed".into(),
        ));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &(lx, ly, t_max) in sizes {
        let mut vals = Vec::with_capacity(seeds.len());
        let mut min_absorbed: f64 = 1.0;
        for &seed in seeds {
            let coins = spec.with_seed(seed).generate((lx, ly))?;
            let setup = build_geometry(lx, ly, cut, &coins)?;
            let avg = transmission_summary(&setup, Channels::All, t_max)?;
            vals.push(avg.total);
            min_absorbed = min_absorbed.min(avg.min_absorbed);
        }
        let mean = crate::stats::mean(&vals);
        let std_err = if vals.len() > 1 {
            (crate::stats::variance(&vals) / vals.len() as f64).sqrt()
        } else {
            0.0
        };
        rows.push(ScalingRow {
            lx,
            ly,
            t_max,
            realizations: seeds.len(),
            mean,
            std_err,
            min_absorbed,
        });
    }
    let x: Vec<f64> = rows.iter().map(|r| r.lx as f64).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.mean.max(f64::MIN_POSITIVE).ln()).collect();
    let slope = if rows.len() >= 3 {
        linear_fit(&x, &y)?.slope
    } else {
        (y[1] - y[0]) / (x[1] - x[0])
    };
    let ratio = rows.last().unwrap().mean / rows[0].mean;
    Ok(ScalingTable {
        rows,
        slope,
        class: classify_scaling(ratio),
    })
}

/// One line of a transmission sweep table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta1: f64,
    pub theta2: f64,
    pub cut: Cut,
    pub lx: usize,
    pub ly: usize,
    pub seed: u64,
    pub t_even: f64,
    pub t_odd: f64,
    pub t_total: f64,
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "theta1,theta2,cut,L_x,L_y,seed,T_even,T_odd,T_total")?;
    for r in rows {
        writeln!(
            w,
            "{:?},{:?},{},{},{},{},{:?},{:?},{:?}",
            r.theta1,
            r.theta2,
            r.cut.name(),
            r.lx,
            r.ly,
            r.seed,
            r.t_even,
            r.t_odd,
            r.t_total
        )?;
    }
    Ok(())
}

pub fn write_energy_csv<W: Write>(grid: &EnergyGrid, mut w: W) -> std::io::Result<()> {
    writeln!(w, "epsilon,T")?;
    for (k, t) in grid.totals().iter().enumerate() {
        writeln!(w, "{:?},{:?}", grid.epsilon(k), t)?;
    }
    Ok(())
}

/// Histogram of values into `bins` equal bins on `[lo, hi)`; values outside
/// are clamped into the end bins.
pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<(f64, f64, usize)> {
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let b = ((v - lo) / width).floor().clamp(0.0, (bins - 1) as f64) as usize;
        counts[b] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, c)| (lo + i as f64 * width, lo + (i + 1) as f64 * width, c))
        .collect()
}

pub fn write_histogram_csv<W: Write>(hist: &[(f64, f64, usize)], mut w: W) -> std::io::Result<()> {
    writeln!(w, "bin_lo,bin_hi,count")?;
    for (lo, hi, c) in hist {
        writeln!(w, "{lo:?},{hi:?},{c}")?;
    }
    Ok(())
}
