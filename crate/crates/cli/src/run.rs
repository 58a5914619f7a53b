use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;
use splitwalk::critical::{
    default_l_grid, default_r_grid, default_t_grid, eigenstate_ensemble, eta_from_autocorrelation,
    eta_from_fractal, eta_from_return, return_ensemble, write_estimates_csv, write_points_csv,
    EtaEstimate, EtaMethod,
};
use splitwalk::disorder::BinaryParams;
use splitwalk::evolve::{
    fit_diffusive, fit_localized, geometric_schedule, run_ensemble, variance_series, FitOptions,
    SpreadModel, VariancePoint,
};
use splitwalk::scatter::{
    build_geometry, energy_grid, histogram, record_transmission, transmission_summary,
    write_energy_csv, write_histogram_csv, write_sweep_csv, Cut, InvariantEstimate, SweepRow,
};
use splitwalk::spectral::{
    block_spacings, classify_statistics, tail_analysis, write_classification_csv, SpacingEnsemble,
    MIN_CLASSIFY_SAMPLES,
};
use splitwalk::DisorderSpec;

use crate::config::{Config, Experiment};
use crate::output::{Manifest, Output};
use crate::validate::validate;
use crate::CliError;

/// Validate, run the configured experiment into `out`, and write the
/// manifest last.
pub fn run(config: &Config, out: &std::path::Path) -> Result<Manifest, CliError> {
    let report = validate(config);
    if report.has_errors() {
        return Err(CliError::Invalid(report));
    }
    let mut o = Output::create(out)?;
    if !report.is_empty() {
        o.write_json("warnings.json", &report)?;
    }
    match config.experiment.expect("validated") {
        Experiment::Evolve => evolve(config, &mut o)?,
        Experiment::Scatter => scatter(config, &mut o)?,
        Experiment::Spectrum => spectrum(config, &mut o)?,
        Experiment::Critical => critical(config, &mut o)?,
        Experiment::BinarySweep => binary_sweep(config, &mut o)?,
    }
    o.finish(config)
}

fn evolve(config: &Config, o: &mut Output) -> Result<(), CliError> {
    let e = &config.evolve;
    let mut times = if e.snapshots.is_empty() {
        geometric_schedule(e.t_max)
    } else {
        e.snapshots.clone()
    };
    if !times.contains(&e.t_max) {
        times.push(e.t_max);
    }
    times.sort_unstable();
    times.dedup();
    let specs = config.specs(config.realizations);
    let dists = run_ensemble(&specs, (e.extents[0], e.extents[1]), &times, e.dynamics)?;
    let points: Vec<VariancePoint> = dists.iter().map(VariancePoint::from).collect();
    o.write("variance.csv", |w| {
        writeln!(w, "t,rms,variance,p_leave")?;
        for p in &points {
            writeln!(w, "{},{:?},{:?},{:?}", p.t, p.rms, p.variance, p.p_leave)?;
        }
        Ok(())
    })?;
    let last = dists.last().expect("t_max is always a snapshot");
    o.write("distribution.csv", |w| last.write_csv(w))?;
    let cuts = [("diagonal", last.diagonal_cut()), ("antidiagonal", last.antidiagonal_cut())];
    o.write("cuts.csv", |w| {
        writeln!(w, "cut,x,p")?;
        for (name, cut) in &cuts {
            for (x, p) in cut {
                writeln!(w, "{name},{x:?},{p:?}")?;
            }
        }
        Ok(())
    })?;
    if let Some(model) = e.fit {
        let fit = match model {
            SpreadModel::Localized => fit_localized(last, &FitOptions::localized())?,
            SpreadModel::Diffusive => fit_diffusive(last, last.t, &FitOptions::diffusive())?,
        };
        let growth = variance_series(&points).ok();
        o.write_json(
            "fit.json",
            &FitSummary {
                model,
                t: last.t,
                plus: fit.plus,
                minus: fit.minus,
                r_squared_plus: fit.plus_fit.r_squared,
                r_squared_minus: fit.minus_fit.r_squared,
                variance: fit.variance,
                model_variance: fit.model_variance,
                rms_exponent: growth.map(|g| g.exponent),
                rms_prefactor: growth.map(|g| g.prefactor),
            },
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct FitSummary {
    model: SpreadModel,
    t: usize,
    plus: f64,
    minus: f64,
    r_squared_plus: f64,
    r_squared_minus: f64,
    variance: f64,
    model_variance: f64,
    rms_exponent: Option<f64>,
    rms_prefactor: Option<f64>,
}

fn theta_points(config: &Config) -> Vec<(f64, f64)> {
    let s = &config.scatter;
    if s.theta1_grid.is_empty() {
        vec![(config.disorder.theta1, config.disorder.theta2)]
    } else {
        s.theta1_grid
            .iter()
            .flat_map(|&a| s.theta2_grid.iter().map(move |&b| (a, b)))
            .collect()
    }
}

fn scatter(config: &Config, o: &mut Output) -> Result<(), CliError> {
    let s = &config.scatter;
    let seeds = config.seeds(config.realizations);
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for (t1, t2) in theta_points(config) {
        let section = config.disorder.with_thetas(t1, t2);
        for (lx, ly, t_max) in s.all_sizes() {
            for &seed in &seeds {
                let coins = section.spec(seed).generate((lx, ly))?;
                for &cut in &s.cuts {
                    let setup = build_geometry(lx, ly, cut, &coins)?;
                    let avg = transmission_summary(&setup, s.channels, t_max)?;
                    if let Some(w) = avg.warning() {
                        warnings.push(format!("theta=({t1},{t2}) L_x={lx} seed={seed} cut={}: {w}", cut.name()));
                    }
                    rows.push(SweepRow {
                        theta1: t1,
                        theta2: t2,
                        cut,
                        lx,
                        ly,
                        seed,
                        t_even: avg.even,
                        t_odd: avg.odd,
                        t_total: avg.total,
                    });
                }
            }
        }
    }
    o.write("transmission.csv", |w| write_sweep_csv(&rows, w))?;

    if s.cuts.contains(&Cut::A) && s.cuts.contains(&Cut::B) {
        let find = |r: &SweepRow, cut| {
            rows.iter()
                .find(|q| q.cut == cut && (q.theta1, q.theta2, q.lx, q.seed) == (r.theta1, r.theta2, r.lx, r.seed))
                .map(|q| q.t_total)
        };
        o.write("invariant.csv", |w| {
            writeln!(w, "theta1,theta2,L_x,L_y,seed,nu,nu_rounded,converged")?;
            for r in rows.iter().filter(|r| r.cut == Cut::A) {
                if let Some(tb) = find(r, Cut::B) {
                    let nu = InvariantEstimate::new(r.t_total, tb);
                    writeln!(
                        w,
                        "{:?},{:?},{},{},{},{:?},{},{}",
                        r.theta1, r.theta2, r.lx, r.ly, r.seed, nu.value, nu.rounded, nu.converged
                    )?;
                }
            }
            Ok(())
        })?;
    }

    if s.energy_resolved {
        let (t1, t2) = theta_points(config)[0];
        let (lx, ly, t_max) = s.all_sizes()[0];
        let coins = config.disorder.with_thetas(t1, t2).spec(config.seed(0)).generate((lx, ly))?;
        for &cut in &s.cuts {
            let setup = build_geometry(lx, ly, cut, &coins)?;
            let record = record_transmission(&setup, &s.channels.list(ly), t_max)?;
            let grid = energy_grid(&record)?;
            let mut eigs = Vec::new();
            for k in 0..grid.t_max {
                eigs.extend(grid.point(k)?.eigenvalues);
            }
            let name = cut.name().to_lowercase();
            o.write(&format!("energy_{name}.csv"), |w| write_energy_csv(&grid, w))?;
            let hist = histogram(&eigs, 0.0, 1.0, 50);
            o.write(&format!("eigenvalues_{name}.csv"), |w| write_histogram_csv(&hist, w))?;
        }
    }
    if !warnings.is_empty() {
        o.write_json("absorption_warnings.json", &warnings)?;
    }
    Ok(())
}

fn spectrum(config: &Config, o: &mut Output) -> Result<(), CliError> {
    let s = &config.spectrum;
    let extents = (s.extents[0], s.extents[1]);
    let coins: Vec<_> = config
        .specs(config.realizations)
        .iter()
        .map(|spec| spec.generate(extents))
        .collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut tails = Vec::new();
    for &block in &s.blocks {
        let parts: Vec<SpacingEnsemble> = coins
            .iter()
            .map(|c| block_spacings(c, block, s.cap))
            .collect::<Result<_, _>>()?;
        let pooled = SpacingEnsemble::pool(&parts);
        o.write(&format!("spacings_{}.csv", block.name()), |w| pooled.write_csv(w))?;
        if pooled.len() >= MIN_CLASSIFY_SAMPLES {
            rows.push((block.name().to_string(), classify_statistics(&pooled, s.margin)?));
        }
        if let Some(from) = s.tail_from {
            let fit = tail_analysis(&pooled, from)?;
            tails.push((block.name(), fit.rate, fit.rate_err, fit.curvature, fit.curvature_err, fit.is_exponential()));
        }
    }
    o.write("classification.csv", |w| write_classification_csv(&rows, w))?;
    if !tails.is_empty() {
        o.write("tail.csv", |w| {
            writeln!(w, "block,rate,rate_err,curvature,curvature_err,exponential")?;
            for t in &tails {
                writeln!(w, "{},{:?},{:?},{:?},{:?},{}", t.0, t.1, t.2, t.3, t.4, t.5)?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn critical(config: &Config, o: &mut Output) -> Result<(), CliError> {
    let c = &config.critical;
    let wants = |m| c.methods.contains(&m);
    let mut ests: Vec<EtaEstimate> = Vec::new();
    if wants(EtaMethod::Autocorrelation) || wants(EtaMethod::Fractal) {
        let extents = (c.eigen_extents[0], c.eigen_extents[1]);
        let specs = config.specs(config.realizations);
        let ens = eigenstate_ensemble(&specs, extents, c.states_per_realization, c.target * PI, c.tol)?;
        if wants(EtaMethod::Autocorrelation) {
            ests.push(eta_from_autocorrelation(&ens, &default_r_grid(extents.0), c.averaging)?);
        }
        if wants(EtaMethod::Fractal) {
            ests.push(eta_from_fractal(&ens, &default_l_grid(extents), c.averaging)?);
        }
    }
    if wants(EtaMethod::Return) {
        let specs = config.specs(c.return_realizations.unwrap_or(config.realizations));
        let ts = default_t_grid(c.return_t_max);
        let series = return_ensemble(&specs, (c.return_extents[0], c.return_extents[1]), &ts, c.dynamics)?;
        ests.push(eta_from_return(&series, &ts, c.averaging)?);
    }
    for e in &ests {
        o.write(&format!("points_{}.csv", e.method.name()), |w| write_points_csv(e, w))?;
    }
    o.write("eta.csv", |w| write_estimates_csv(&ests, w))?;
    let pairs: Vec<PairCheck> = ests
        .iter()
        .enumerate()
        .flat_map(|(i, a)| ests[i + 1..].iter().map(move |b| PairCheck::new(a, b)))
        .collect();
    if !pairs.is_empty() {
        o.write_json("agreement.json", &pairs)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct PairCheck {
    a: &'static str,
    b: &'static str,
    difference: f64,
    combined_ci: f64,
    agree: bool,
}

impl PairCheck {
    fn new(a: &EtaEstimate, b: &EtaEstimate) -> Self {
        Self {
            a: a.method.name(),
            b: b.method.name(),
            difference: (a.eta - b.eta).abs(),
            combined_ci: a.ci.hypot(b.ci),
            agree: a.agrees_with(b),
        }
    }
}

fn binary_sweep(config: &Config, o: &mut Output) -> Result<(), CliError> {
    let b = &config.binary_sweep;
    let d = &config.disorder;
    let seeds = config.seeds(config.realizations);
    let spread_specs = b.spread_realizations.unwrap_or(config.realizations);
    let mut lines = Vec::new();
    for &delta in &b.delta {
        for &p_a in &b.p_a {
            let params = BinaryParams {
                theta1_a: d.theta1_a * PI,
                theta2_a: d.theta2_a * PI,
                theta1_b: (d.theta1_a - delta) * PI,
                theta2_b: (d.theta2_a + delta) * PI,
                p_a,
            };
            let mut sums = [0.0f64; 6];
            for &seed in &seeds {
                let coins = DisorderSpec::binary(params, seed).generate((b.lx, b.ly))?;
                for (k, cut) in [Cut::B, Cut::None].into_iter().enumerate() {
                    let setup = build_geometry(b.lx, b.ly, cut, &coins)?;
                    let avg = transmission_summary(&setup, splitwalk::scatter::Channels::All, b.t_max)?;
                    sums[3 * k] += avg.even;
                    sums[3 * k + 1] += avg.odd;
                    sums[3 * k + 2] += avg.total;
                }
            }
            let n = seeds.len() as f64;
            let specs: Vec<DisorderSpec> = config
                .seeds(spread_specs)
                .into_iter()
                .map(|s| DisorderSpec::binary(params, s))
                .collect();
            let extents = (b.spread_extents[0], b.spread_extents[1]);
            let dist = run_ensemble(&specs, extents, &[b.spread_t], splitwalk::evolve::Dynamics::Coherent)?.remove(0);
            lines.push((delta, p_a, sums.map(|v| v / n), dist.rms(), dist.p_leave));
        }
    }
    o.write("binary_sweep.csv", |w| {
        writeln!(
            w,
            "delta,p_a,cutB_T_even,cutB_T_odd,cutB_T_total,none_T_even,none_T_odd,none_T_total,rms,p_leave"
        )?;
        for (delta, p_a, t, rms, leave) in &lines {
            writeln!(
                w,
                "{delta:?},{p_a:?},{:?},{:?},{:?},{:?},{:?},{:?},{rms:?},{leave:?}",
                t[0], t[1], t[2], t[3], t[4], t[5]
            )?;
        }
        Ok(())
    })
}
