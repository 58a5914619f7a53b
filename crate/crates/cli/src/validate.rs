use serde::Serialize;
use splitwalk::critical::{default_l_grid, default_r_grid, default_t_grid, EtaMethod};
use splitwalk::evolve::Dynamics;
use splitwalk::DisorderKind;

use crate::config::{Config, Experiment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Issue {
    pub severity: Severity,
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub issues: Vec<Issue>,
}

impl Report {
    fn error(&mut self, field: &str, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Error,
            field: field.into(),
            message: message.into(),
        });
    }

    fn warn(&mut self, field: &str, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Warning,
            field: field.into(),
            message: message.into(),
        });
    }

    pub fn has_errors(&self) -> bool {
        self.issues.iter().any(|i| i.severity == Severity::Error)
    }

    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Steps for 99% of the probability to leave a scattering region of width
/// `lx`, scaled from the sizes used for the transmission tables.
pub fn recommended_t_max(lx: usize) -> usize {
    50 * (lx + 1)
}

pub fn validate(config: &Config) -> Report {
    let mut r = Report::default();
    if config.realizations == 0 {
        r.error("realizations", "need at least one realization");
    }
    check_disorder(config, &mut r);
    match config.experiment {
        None => r.error("experiment", "missing; expected one of evolve, scatter, spectrum, critical, binary-sweep"),
        Some(Experiment::Evolve) => check_evolve(config, &mut r),
        Some(Experiment::Scatter) => check_scatter(config, &mut r),
        Some(Experiment::Spectrum) => check_spectrum(config, &mut r),
        Some(Experiment::Critical) => check_critical(config, &mut r),
        Some(Experiment::BinarySweep) => check_binary(config, &mut r),
    }
    r
}

fn check_disorder(config: &Config, r: &mut Report) {
    let d = &config.disorder;
    let angles = [
        ("disorder.theta1", d.theta1),
        ("disorder.theta2", d.theta2),
        ("disorder.alpha1", d.alpha1),
        ("disorder.alpha2", d.alpha2),
        ("disorder.beta1", d.beta1),
        ("disorder.beta2", d.beta2),
        ("disorder.theta1_a", d.theta1_a),
        ("disorder.theta2_a", d.theta2_a),
        ("disorder.theta1_b", d.theta1_b),
        ("disorder.theta2_b", d.theta2_b),
    ];
    for (f, v) in angles {
        if !v.is_finite() {
            r.error(f, "must be finite");
        }
    }
    if !(0.0..=1.0).contains(&d.p_a) {
        r.error("disorder.p_a", format!("{} is not a probability", d.p_a));
    }
}

fn check_scatter_size(r: &mut Report, field: &str, lx: usize, ly: usize, t_max: usize) {
    if lx == 0 {
        r.error(field, "L_x must be positive");
    }
    if ly < 2 || ly % 2 != 0 {
        r.error(field, format!("L_y = {ly} must be even (periodic in y)"));
    }
    if t_max == 0 {
        r.error(field, "t_max must be positive");
    } else if t_max < recommended_t_max(lx) {
        r.warn(
            field,
            format!(
                "t_max = {t_max} is below {} for L_x = {lx}; less than 99% may leave the system",
                recommended_t_max(lx)
            ),
        );
    }
}

fn check_evolve(config: &Config, r: &mut Report) {
    let e = &config.evolve;
    if e.extents[0] < 3 || e.extents[1] < 3 {
        r.error("evolve.extents", "region must be at least 3x3");
    }
    if let Some(&t) = e.snapshots.iter().find(|&&t| t > e.t_max) {
        r.error("evolve.snapshots", format!("snapshot {t} beyond t_max {}", e.t_max));
    }
    if e.dynamics == Dynamics::TimeDependent && config.disorder.kind != DisorderKind::Haar {
        r.error("evolve.dynamics", "time-dependent coins need haar disorder");
    }
}

fn check_scatter(config: &Config, r: &mut Report) {
    let s = &config.scatter;
    if s.sizes.is_empty() {
        check_scatter_size(r, "scatter", s.lx, s.ly, s.t_max);
    } else {
        for (k, size) in s.sizes.iter().enumerate() {
            check_scatter_size(r, &format!("scatter.sizes[{k}]"), size[0], size[1], size[2]);
        }
    }
    if s.cuts.is_empty() {
        r.error("scatter.cuts", "list at least one of none, a, b");
    }
    if s.theta1_grid.is_empty() != s.theta2_grid.is_empty() {
        r.error("scatter.theta1_grid", "theta1_grid and theta2_grid go together");
    }
    if !s.theta1_grid.is_empty() && !matches!(config.disorder.kind, DisorderKind::Phase | DisorderKind::Magnetic | DisorderKind::Fixed) {
        r.error("scatter.theta1_grid", "a theta grid needs fixed, phase or magnetic disorder");
    }
}

fn check_spectrum(config: &Config, r: &mut Report) {
    let s = &config.spectrum;
    let [a, b] = s.extents;
    if a < 2 || b < 2 || a % 2 != 0 || b % 2 != 0 {
        r.error("spectrum.extents", format!("{a}x{b}: both sides must be even"));
    }
    if a * b > s.cap {
        r.error("spectrum.cap", format!("block dimension {} exceeds cap {}", a * b, s.cap));
    }
    if a * b * config.realizations < splitwalk::spectral::MIN_CLASSIFY_SAMPLES {
        r.warn("spectrum.extents", "fewer than 500 spacings; classification will be skipped");
    }
    if s.blocks.is_empty() {
        r.error("spectrum.blocks", "list at least one block");
    }
}

fn check_critical(config: &Config, r: &mut Report) {
    let c = &config.critical;
    if c.methods.is_empty() {
        r.error("critical.methods", "list at least one method");
    }
    let wants = |m| c.methods.contains(&m);
    if wants(EtaMethod::Autocorrelation) || wants(EtaMethod::Fractal) {
        let [a, b] = c.eigen_extents;
        if a % 2 != 0 || b % 2 != 0 {
            r.error("critical.eigen_extents", "both sides must be even");
        }
        if c.states_per_realization == 0 {
            r.error("critical.states_per_realization", "must be positive");
        }
        if wants(EtaMethod::Autocorrelation) && default_r_grid(a).len() < 4 {
            r.error("critical.eigen_extents", format!("L₊ = {a} leaves fewer than 4 shifts"));
        }
        if wants(EtaMethod::Fractal) && default_l_grid((a, b)).len() < 4 {
            r.error("critical.eigen_extents", format!("{a}x{b} leaves fewer than 4 box sizes"));
        }
    }
    if wants(EtaMethod::Return) {
        if default_t_grid(c.return_t_max).len() < 4 {
            r.error("critical.return_t_max", "fewer than 4 return times");
        }
        let [a, b] = c.return_extents;
        if a < 3 || b < 3 {
            r.error("critical.return_extents", "region must be at least 3x3");
        }
    }
}

fn check_binary(config: &Config, r: &mut Report) {
    let b = &config.binary_sweep;
    check_scatter_size(r, "binary_sweep", b.lx, b.ly, b.t_max);
    if let Some(p) = b.p_a.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        r.error("binary_sweep.p_a", format!("{p} is not a probability"));
    }
    if b.p_a.is_empty() || b.delta.is_empty() {
        r.error("binary_sweep", "p_a and delta grids must be non-empty");
    }
    if b.spread_extents[0] < 3 || b.spread_extents[1] < 3 {
        r.error("binary_sweep.spread_extents", "region must be at least 3x3");
    }
}
