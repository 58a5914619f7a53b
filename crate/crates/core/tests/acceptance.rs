//! Acceptance suite: one line per criterion, exit status 1 if any fails.
//!
//! `ACCEPTANCE_ONLY=3,5` runs a subset.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use splitwalk::critical::{
    default_l_grid, default_r_grid, default_t_grid, eigenstate_ensemble, eta_from_autocorrelation,
    eta_from_fractal, eta_from_mean_logs, eta_from_return, return_ensemble, cascade_distribution,
    Averaging, EtaEstimate, EtaMethod,
};
use splitwalk::disorder::{clean_invariant, gen_haar, BinaryParams, FixedAngles};
use splitwalk::evolve::{
    fit_diffusive, fit_localized, geometric_schedule, run_ensemble, variance_series, Dynamics, FitOptions,
    PositionDistribution, VariancePoint,
};
use splitwalk::lattice::{dense_build, sublattice_conjugate, sublattice_indices};
use splitwalk::linalg::{eigenvalues, multiset_distance, DenseMatrix};
use splitwalk::scatter::{
    averaged_transmission, build_geometry, energy_grid, record_transmission, resolvent_oracle, scaling_sweep,
    transmission_summary, Channels, Cut, InvariantEstimate,
};
use splitwalk::spectral::{block_spacings, classify_statistics, Block, Statistics};
use splitwalk::{
    Basis, BoundaryCondition, CoinAngles, CoinField, DisorderSpec, Result, SpinorField, Walk, C64,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn random_state(basis: Basis, ext: (usize, usize), seed: u64) -> SpinorField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = || (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    let mut f = SpinorField::zeros(basis, ext).unwrap();
    for a in f.amplitudes_mut() {
        *a = [C64::new(u(), u()), C64::new(u(), u())];
    }
    let n = f.norm_sqr().sqrt();
    for a in f.amplitudes_mut() {
        a[0] /= n;
        a[1] /= n;
    }
    f
}

fn phase(theta1: f64, theta2: f64, seed: u64) -> DisorderSpec {
    DisorderSpec::phase(FixedAngles::thetas(theta1, theta2), seed)
}

fn c1_unitarity_locality_sublattice() -> Result<Outcome> {
    let mut worst_norm: f64 = 0.0;
    for (k, &(ext, basis)) in [((12, 10), Basis::Original), ((10, 14), Basis::RotatedSquare), ((8, 8), Basis::RotatedCircle)]
        .iter()
        .enumerate()
    {
        let coins = gen_haar(ext, 100 + k as u64);
        let mut walk = match basis {
            Basis::Original => Walk::original(&coins),
            Basis::RotatedSquare => Walk::rotated(&coins, splitwalk::RotatedVariant::Square),
            Basis::RotatedCircle => Walk::rotated(&coins, splitwalk::RotatedVariant::Circle),
        };
        let mut psi = random_state(basis, ext, k as u64);
        let mut bc = BoundaryCondition::periodic();
        for _ in 0..200 {
            walk.step(&mut psi, &mut bc)?;
            worst_norm = worst_norm.max((psi.norm_sqr() - 1.0).abs());
        }
    }

    let ext = (8, 8);
    let coins = gen_haar(ext, 7);
    let mut walk = Walk::original(&coins);
    let mut worst_anti: f64 = 0.0;
    for seed in 0..5 {
        let psi = random_state(Basis::Original, ext, 50 + seed);
        let mut bc = BoundaryCondition::periodic();
        let mut u = psi.clone();
        walk.step(&mut u, &mut bc)?;
        let mut gug = sublattice_conjugate(&psi)?;
        walk.step(&mut gug, &mut bc)?;
        let gug = sublattice_conjugate(&gug)?;
        for (a, b) in u.to_flat().iter().zip(gug.to_flat()) {
            worst_anti = worst_anti.max((a + b).norm());
        }
    }

    // One step from a point never leaves the 3x3 neighbourhood.
    let mut local = true;
    for (x, y) in [(3usize, 4usize), (0, 0), (7, 5)] {
        let mut psi = SpinorField::delta(Basis::Original, ext, x, y, splitwalk::Spin::Up)?;
        walk.step(&mut psi, &mut BoundaryCondition::periodic())?;
        for i in 0..8 {
            for j in 0..8 {
                let a = psi.amplitudes()[i * 8 + j];
                let dx = (i as i64 - x as i64).rem_euclid(8).min((x as i64 - i as i64).rem_euclid(8));
                let dy = (j as i64 - y as i64).rem_euclid(8).min((y as i64 - j as i64).rem_euclid(8));
                if (dx > 1 || dy > 1) && a[0].norm() + a[1].norm() > 0.0 {
                    local = false;
                }
            }
        }
    }

    let u = dense_build(&gen_haar((4, 4), 9), 1024)?;
    let ev = eigenvalues(&u)?;
    let neg: Vec<C64> = ev.iter().map(|z| -z).collect();
    let pairing = multiset_distance(&ev, &neg);

    let pass = worst_norm < 1e-12 && worst_anti < 1e-12 && local && pairing < 1e-10;
    outcome(
        pass,
        format!("norm drift {worst_norm:.1e}, |UΨ+ΓUΓΨ| {worst_anti:.1e}, local {local}, ε→ε+π pairing {pairing:.1e}"),
    )
}

fn u2_block_eigs(u: &DenseMatrix, ext: (usize, usize), parity: (usize, usize)) -> Result<Vec<C64>> {
    let u2 = u.matmul(u)?;
    let idx = sublattice_indices(ext, parity);
    eigenvalues(&u2.select(&idx, &idx))
}

fn with_magnetic(coins: &CoinField, a1: f64, a2: f64, b1: f64, b2: f64) -> CoinField {
    coins.map(|c| CoinAngles {
        alpha1: a1,
        alpha2: a2,
        beta1: b1,
        beta2: b2,
        ..*c
    })
}

fn c2_gauge_invariance() -> Result<Outcome> {
    let ext = (8, 8);
    let base = gen_haar(ext, 31);
    let zeroed = with_magnetic(&base, 0.0, 0.0, 0.0, 0.0);
    let u0 = dense_build(&zeroed, 1024)?;

    // Torus: constants whose combinations next to each shift wind an
    // integer number of times around the 8-site cycles.
    let step = 2.0 * PI / 8.0;
    let torus = with_magnetic(&base, 0.3, 0.7, 2.0 * step - 0.7, step - 0.3);
    let ut = dense_build(&torus, 1024)?;
    let mut torus_err: f64 = 0.0;
    for parity in [(0, 0), (1, 1), (0, 1), (1, 0)] {
        let a = u2_block_eigs(&u0, ext, parity)?;
        let b = u2_block_eigs(&ut, ext, parity)?;
        torus_err = torus_err.max(multiset_distance(&a, &b));
    }

    // Open: drop the last row and column so nothing wraps; any constants.
    let open = with_magnetic(&base, 0.37, 1.1, -0.6, 2.3);
    let uo = dense_build(&open, 1024)?;
    let interior: Vec<usize> = (0..64).filter(|c| c / 8 < 7 && c % 8 < 7).collect();
    let flat: Vec<usize> = interior.iter().flat_map(|c| [2 * c, 2 * c + 1]).collect();
    let p0 = u0.select(&flat, &flat);
    let po = uo.select(&flat, &flat);
    let mut open_err: f64 = 0.0;
    for parity in [(0, 0), (1, 1)] {
        let a = u2_block_eigs(&p0, (7, 7), parity)?;
        let b = u2_block_eigs(&po, (7, 7), parity)?;
        open_err = open_err.max(multiset_distance(&a, &b));
    }
    outcome(
        torus_err < 1e-9 && open_err < 1e-9,
        format!("torus (quantized constants) {torus_err:.1e}, open boundary (arbitrary constants) {open_err:.1e}"),
    )
}

fn c3_scattering_oracle() -> Result<Outcome> {
    let (lx, ly, t_max) = (3, 4, 4096);
    let mut worst: f64 = 0.0;
    let mut worst_cond: f64 = 0.0;
    for seed in 0..5 {
        let coins = DisorderSpec::haar(seed).generate((lx, ly))?;
        let setup = build_geometry(lx, ly, Cut::None, &coins)?;
        let rec = record_transmission(&setup, &Channels::All.list(ly), t_max)?;
        let grid = energy_grid(&rec)?;
        for k in (0..t_max).step_by(64).chain([1, 7, 2047]) {
            let res = resolvent_oracle(&setup, grid.epsilon(k), 4096)?;
            worst = worst.max(res.t.max_abs_diff(&grid.matrix(k)));
            worst_cond = worst_cond.max(res.condition);
        }
    }
    outcome(
        worst < 1e-8,
        format!("max |𝔱_DFT − 𝔱_resolvent| = {worst:.1e} over 5 seeds x 67 energies (worst condition {worst_cond:.1e})"),
    )
}

/// Magnetic constants used for the invariant map.
fn map_angles(theta1: f64, theta2: f64) -> FixedAngles {
    FixedAngles {
        theta1,
        theta2,
        alpha1: 0.25 * PI,
        alpha2: 0.4 * PI,
        beta1: 0.1 * PI,
        beta2: 0.3 * PI,
    }
}

/// Grid in `u = θ₁ + θ₂`, `v = θ₁ − θ₂`, where the critical lines are
/// `u, v ∈ πℤ`. Every point sits at least 0.3π from a line; both signs of
/// `v` give both phases.
fn invariant_grid() -> Vec<(f64, f64)> {
    let us = [0.3, 0.4, 0.5, 0.6, 0.7];
    let vs = [-0.7, -0.5, -0.3, 0.3, 0.5];
    us.iter()
        .flat_map(|&u| vs.iter().map(move |&v| (0.5 * (u + v) * PI, 0.5 * (u - v) * PI)))
        .collect()
}

fn c4_invariant_map() -> Result<Outcome> {
    let (lx, ly, t_max) = (19, 30, 1000);
    let mut bad = Vec::new();
    let mut worst_dev: f64 = 0.0;
    let mut worst_bulk: f64 = 0.0;
    let mut phases = [0usize; 2];
    for (k, (t1, t2)) in invariant_grid().into_iter().enumerate() {
        let spec = DisorderSpec::phase(map_angles(t1, t2), 1000 + k as u64);
        let coins = spec.generate((lx, ly))?;
        let ta = transmission_summary(&build_geometry(lx, ly, Cut::A, &coins)?, Channels::All, t_max)?;
        let tb = transmission_summary(&build_geometry(lx, ly, Cut::B, &coins)?, Channels::All, t_max)?;
        let tn = transmission_summary(&build_geometry(lx, ly, Cut::None, &coins)?, Channels::All, t_max)?;
        let est = InvariantEstimate::new(ta.total, tb.total);
        let clean = clean_invariant(t1, t2) as i64;
        phases[(clean > 0) as usize] += 1;
        worst_dev = worst_dev.max((est.value - clean as f64).abs());
        worst_bulk = worst_bulk.max(tn.total);
        if est.rounded != clean {
            bad.push(format!("({:.2}π,{:.2}π): ν≈{:.2} vs {clean}", t1 / PI, t2 / PI, est.value));
        }
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!(
                "25/25 match ({} at ν=+1, {} at ν=−1), worst |ν − ν_clean| = {worst_dev:.3}, worst no-cut T̄ {worst_bulk:.3}",
                phases[1], phases[0]
            )
        } else {
            format!("{} mismatches: {}", bad.len(), bad.join("; "))
        },
    )
}

fn c5_quantized_edge() -> Result<Outcome> {
    let (lx, ly, t_max) = (29, 30, 8192);
    let spec = phase(0.2 * PI, 0.4 * PI, 5);
    let coins = spec.generate((lx, ly))?;
    let setup = build_geometry(lx, ly, Cut::B, &coins)?;
    let rec = record_transmission(&setup, &Channels::All.list(ly), t_max)?;
    let avg = averaged_transmission(&rec);
    let grid = energy_grid(&rec)?;
    drop(rec);
    let (mut below, mut above, mut total) = (0usize, 0usize, 0usize);
    for k in 0..t_max {
        let p = grid.point(k)?;
        below += p.eigenvalues.iter().filter(|&&v| v < 0.01).count();
        above += p.eigenvalues.iter().filter(|&&v| v > 0.98).count();
        total += p.eigenvalues.len();
    }
    let totals = grid.totals();
    let mean_t = splitwalk::stats::mean(&totals);
    let cv = splitwalk::stats::variance(&totals).sqrt() / mean_t;
    drop(grid);
    let frac_below = below as f64 / total as f64;
    let frac_above = above as f64 / total as f64;
    let nocut = transmission_summary(&build_geometry(lx, ly, Cut::None, &coins)?, Channels::All, t_max)?;
    let pass = (avg.even - 1.0).abs() <= 0.05
        && (avg.odd - 1.0).abs() <= 0.05
        && frac_below >= 0.90
        && nocut.total < 0.05;
    outcome(
        pass,
        format!(
            "T̄ even {:.3}, odd {:.3}; {:.1}% eigenvalues < 0.01, {:.1}% > 0.98; T(ε) CV {cv:.3}; no-cut T̄ {:.4}; absorbed ≥ {:.4}",
            avg.even,
            avg.odd,
            100.0 * frac_below,
            100.0 * frac_above,
            nocut.total,
            avg.min_absorbed.min(nocut.min_absorbed)
        ),
    )
}

fn c6_finite_size_scaling() -> Result<Outcome> {
    let sizes = [(19, 30, 1000), (39, 60, 2000)];
    let seeds: Vec<u64> = (0..10).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for (t1, expect_drop) in [(0.1, true), (0.5, true), (0.3, false)] {
        let spec = phase(t1 * PI, (0.6 - t1) * PI, 0);
        let table = scaling_sweep(&spec, &sizes, Cut::None, &seeds)?;
        let ratio = table.ratio();
        let ok = if expect_drop {
            ratio <= 1.0 / 3.0
        } else {
            (ratio - 1.0).abs() < 0.2
        };
        pass &= ok;
        parts.push(format!(
            "θ₁={t1}π: T̄ {:.3e} → {:.3e} (ratio {ratio:.3e})",
            table.rows[0].mean, table.rows[1].mean
        ));
    }
    outcome(pass, parts.join("; "))
}

fn c7_level_statistics() -> Result<Outcome> {
    let ext = (64, 64);
    let cases = [
        ("localized (0.2π,0.4π)", phase(0.2 * PI, 0.4 * PI, 70), Statistics::Poisson),
        ("critical (0.2π,0.2π)", phase(0.2 * PI, 0.2 * PI, 71), Statistics::Gue),
        ("Haar", DisorderSpec::haar(72), Statistics::Gue),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, spec, expect) in cases {
        let coins = spec.generate(ext)?;
        let ens = block_spacings(&coins, Block::SquareEe, 8192)?;
        let c = classify_statistics(&ens, 0.0)?;
        let mean_ok = (c.mean - 1.0).abs() <= 3.0 / (2.0 * ens.n as f64).sqrt();
        let ok = c.class == expect && mean_ok;
        pass &= ok;
        parts.push(format!(
            "{label}: KS P {:.3} / GUE {:.3} → {:?}, mean s {:.4}",
            c.ks_poisson, c.ks_gue, c.class, c.mean
        ));
    }
    outcome(pass, format!("N = 4096; {}", parts.join("; ")))
}

fn diffusion_coefficient(d: &PositionDistribution) -> Result<(f64, f64)> {
    let f = fit_diffusive(d, d.t, &FitOptions::diffusive())?;
    Ok((0.5 * (f.plus + f.minus), f.r_squared()))
}

fn c8_haar_diffusion() -> Result<Outcome> {
    let specs: Vec<DisorderSpec> = (0..20).map(|s| DisorderSpec::haar(800 + s)).collect();
    let schedule = geometric_schedule(1024);
    let snaps = run_ensemble(&specs, (301, 301), &schedule, Dynamics::Coherent)?;
    let points: Vec<VariancePoint> = snaps.iter().map(VariancePoint::from).filter(|p| p.t >= 32).collect();
    let law = variance_series(&points)?;
    let last = snaps.last().unwrap();
    let fit = fit_diffusive(last, last.t, &FitOptions::diffusive())?;
    let pass = (law.exponent - 0.5).abs() <= 0.05 && (law.prefactor - 1.4).abs() <= 0.15 && fit.r_squared() > 0.98;
    outcome(
        pass,
        format!(
            "rms ∝ t^{:.3} (±{:.3}), prefactor {:.3}; D₊ {:.3}, D₋ {:.3}, R² {:.4}; p_leave {:.1e}",
            law.exponent,
            law.exponent_err,
            law.prefactor,
            fit.plus,
            fit.minus,
            fit.r_squared(),
            last.p_leave
        ),
    )
}

fn c9_localization() -> Result<Outcome> {
    let specs: Vec<DisorderSpec> = (0..20).map(|s| phase(0.2 * PI, 0.4 * PI, 900 + s)).collect();
    let schedule: Vec<usize> = (2..=8).map(|k| 250 * k).collect();
    let snaps = run_ensemble(&specs, (161, 161), &schedule, Dynamics::Coherent)?;
    let last = snaps.last().unwrap();
    let fit = fit_localized(last, &FitOptions::localized())?;
    let points: Vec<VariancePoint> = snaps.iter().map(VariancePoint::from).collect();
    let law = variance_series(&points)?;
    let pass = fit.r_squared() > 0.98 && fit.minus > fit.plus && law.exponent < 0.15;
    outcome(
        pass,
        format!(
            "ζ₊ {:.2}, ζ₋ {:.2}, R² {:.4}; rms exponent over [500, 2000] {:.3}; p_leave {:.1e}",
            fit.plus,
            fit.minus,
            fit.r_squared(),
            law.exponent,
            last.p_leave
        ),
    )
}

fn fmt_eta(e: &EtaEstimate) -> String {
    format!("{} {:.3} ± {:.3}", e.method.name(), e.eta, e.ci)
}

fn c10_eta_concordance() -> Result<Outcome> {
    // Synthetic round trips first.
    let cascade = cascade_distribution(9, 0.52)?;
    let synth_fractal = eta_from_fractal(&[cascade], &[4, 8, 16, 32, 64], Averaging::MeanOfLogs)?.eta;
    let rs = [4.0, 8.0, 16.0, 32.0];
    let ln_r: Vec<f64> = rs.iter().map(|r: &f64| (2e-4 * r.powf(-0.52)).ln()).collect();
    let synth_auto = eta_from_mean_logs(EtaMethod::Autocorrelation, &rs, &ln_r, 1)?.eta;
    let ts = default_t_grid(2048);
    let p0: Vec<f64> = ts.iter().map(|&t| 0.7 * (t as f64).powf(-1.0 + 0.26)).collect();
    let synth_return = eta_from_return(&[p0], &ts, Averaging::MeanOfLogs)?.eta;
    let synth_ok = [synth_fractal, synth_auto, synth_return].iter().all(|e| (e - 0.52).abs() < 1e-3);

    let ext = (128, 128);
    let specs: Vec<DisorderSpec> = (0..10).map(|s| DisorderSpec::haar(1000 + s)).collect();
    let states = eigenstate_ensemble(&specs, ext, 10, 0.0, 1e-9)?;
    let auto = eta_from_autocorrelation(&states, &default_r_grid(ext.0), Averaging::MeanOfLogs)?;
    let fractal = eta_from_fractal(&states, &default_l_grid(ext), Averaging::MeanOfLogs)?;
    drop(states);

    let specs: Vec<DisorderSpec> = (0..200).map(|s| DisorderSpec::haar(2000 + s)).collect();
    let series = return_ensemble(&specs, (257, 257), &ts, Dynamics::Coherent)?;
    let ret = eta_from_return(&series, &ts, Averaging::MeanOfLogs)?;

    let ests = [&auto, &fractal, &ret];
    let in_range = ests.iter().all(|e| (0.40..=0.65).contains(&e.eta));
    let agree = auto.agrees_with(&fractal) && auto.agrees_with(&ret) && fractal.agrees_with(&ret);
    outcome(
        synth_ok && in_range && agree,
        format!(
            "{}; {}; {}; in range {in_range}, pairwise agree {agree}; synthetic η {:.4}/{:.4}/{:.4}",
            fmt_eta(&auto),
            fmt_eta(&fractal),
            fmt_eta(&ret),
            synth_auto,
            synth_fractal,
            synth_return
        ),
    )
}

fn c11_binary_criticality() -> Result<Outcome> {
    let (lx, ly, t_max) = (39, 60, 2000);
    let seeds = [0u64, 1];
    let ps: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let mut nocut = Vec::new();
    let mut cut_b = Vec::new();
    for &p in &ps {
        let (mut tn, mut tb) = (0.0, 0.0);
        for &seed in &seeds {
            let spec = DisorderSpec::binary(BinaryParams::along_mirror_line(PI / 2.0, p), 1100 + seed);
            let coins = spec.generate((lx, ly))?;
            tn += transmission_summary(&build_geometry(lx, ly, Cut::None, &coins)?, Channels::All, t_max)?.total;
            tb += transmission_summary(&build_geometry(lx, ly, Cut::B, &coins)?, Channels::Even, t_max)?.even;
        }
        nocut.push(tn / seeds.len() as f64);
        cut_b.push(tb / seeds.len() as f64);
    }
    let peak = (0..ps.len()).max_by(|&a, &b| nocut[a].total_cmp(&nocut[b])).unwrap();
    let p_peak = ps[peak];
    let peak_ok = (p_peak - 0.5).abs() <= 0.1 + 1e-12;
    let ends_ok = (cut_b[0] - 1.0).abs() < 0.15 && cut_b[ps.len() - 1] < 0.15;
    let table: Vec<String> = ps
        .iter()
        .zip(nocut.iter().zip(&cut_b))
        .map(|(p, (n, b))| format!("{p:.1}:{n:.2}/{b:.2}"))
        .collect();
    outcome(
        peak_ok && ends_ok,
        format!("no-cut peak at p_A = {p_peak:.1}; p_A: T̄ no-cut / cut-B per sublattice = {}", table.join(" ")),
    )
}

fn c12_classicalized() -> Result<Outcome> {
    let ext = (201, 201);
    let t = 1024;
    let coherent: Vec<DisorderSpec> = (0..20).map(|s| DisorderSpec::haar(1200 + s)).collect();
    let td: Vec<DisorderSpec> = (0..20).map(|s| DisorderSpec::haar(1300 + s)).collect();
    let stoch: Vec<DisorderSpec> = (0..4).map(|s| DisorderSpec::haar(1400 + s)).collect();
    let mut ds = Vec::new();
    for (label, specs, dynamics) in [
        ("coherent", &coherent, Dynamics::Coherent),
        ("time-dependent", &td, Dynamics::TimeDependent),
        ("stochastic", &stoch, Dynamics::Stochastic),
    ] {
        let d = run_ensemble(specs, ext, &[t], dynamics)?.remove(0);
        let (dc, r2) = diffusion_coefficient(&d)?;
        ds.push((label, dc, r2));
    }
    let mut pass = true;
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (ds[i].1, ds[j].1);
            pass &= (a - b).abs() / a.min(b) <= 0.2;
        }
    }
    let parts: Vec<String> = ds.iter().map(|(l, d, r2)| format!("{l} D {d:.3} (R² {r2:.3})")).collect();
    outcome(pass, parts.join("; "))
}

type Check = fn() -> Result<Outcome>;

const CRITERIA: [(u32, &str, Check); 12] = [
    (1, "unitarity, locality, sublattice", c1_unitarity_locality_sublattice),
    (2, "gauge invariance", c2_gauge_invariance),
    (3, "scattering oracle equivalence", c3_scattering_oracle),
    (4, "clean invariant map", c4_invariant_map),
    (5, "quantized edge transmission", c5_quantized_edge),
    (6, "finite-size scaling", c6_finite_size_scaling),
    (7, "level statistics", c7_level_statistics),
    (8, "diffusive spread of Haar walk", c8_haar_diffusion),
    (9, "localization signature", c9_localization),
    (10, "eta concordance", c10_eta_concordance),
    (11, "binary-disorder criticality", c11_binary_criticality),
    (12, "classicalized vs quantum Haar", c12_classicalized),
];

fn main() -> ExitCode {
    let only: Option<Vec<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|s| s.trim().parse().ok()).collect());
    let mut failed = 0;
    for (id, name, check) in CRITERIA {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let (status, detail) = match check() {
            Ok(o) => (if o.pass { "PASS" } else { "FAIL" }, o.detail),
            Err(e) => ("FAIL", format!("error: {e}")),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "criterion {id:>2} [{status}] {name}: {detail} ({:.1} s)",
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
