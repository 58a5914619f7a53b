//! Flat TOML experiment configs. Angles are in units of π.

use std::f64::consts::PI;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use splitwalk::critical::{Averaging, EtaMethod};
use splitwalk::disorder::{BinaryParams, FixedAngles};
use splitwalk::evolve::{Dynamics, SpreadModel};
use splitwalk::scatter::{Channels, Cut};
use splitwalk::spectral::Block;
use splitwalk::{DisorderKind, DisorderSpec};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Evolve,
    Scatter,
    Spectrum,
    Critical,
    BinarySweep,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Evolve => "evolve",
            Experiment::Scatter => "scatter",
            Experiment::Spectrum => "spectrum",
            Experiment::Critical => "critical",
            Experiment::BinarySweep => "binary-sweep",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub experiment: Option<Experiment>,
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default = "one")]
    pub realizations: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub disorder: DisorderSection,
    #[serde(default)]
    pub evolve: EvolveSection,
    #[serde(default)]
    pub scatter: ScatterSection,
    #[serde(default)]
    pub spectrum: SpectrumSection,
    #[serde(default)]
    pub critical: CriticalSection,
    #[serde(default)]
    pub binary_sweep: BinarySweepSection,
}

fn one() -> usize {
    1
}

impl Default for Config {
    fn default() -> Self {
        Self {
            experiment: None,
            seed_base: 0,
            realizations: 1,
            out: None,
            disorder: Default::default(),
            evolve: Default::default(),
            scatter: Default::default(),
            spectrum: Default::default(),
            critical: Default::default(),
            binary_sweep: Default::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DisorderSection {
    pub kind: DisorderKind,
    pub theta1: f64,
    pub theta2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Binary disorder: weight of set A.
    pub p_a: f64,
    pub theta1_a: f64,
    pub theta2_a: f64,
    pub theta1_b: f64,
    pub theta2_b: f64,
}

impl Default for DisorderSection {
    fn default() -> Self {
        let (a1, a2) = BinaryParams::SET_A;
        Self {
            kind: DisorderKind::Haar,
            theta1: 0.0,
            theta2: 0.0,
            alpha1: 0.0,
            alpha2: 0.0,
            beta1: 0.0,
            beta2: 0.0,
            p_a: 0.5,
            theta1_a: a1 / PI,
            theta2_a: a2 / PI,
            theta1_b: a1 / PI - 0.5,
            theta2_b: a2 / PI + 0.5,
        }
    }
}

impl DisorderSection {
    pub fn fixed(&self) -> FixedAngles {
        FixedAngles {
            theta1: self.theta1 * PI,
            theta2: self.theta2 * PI,
            alpha1: self.alpha1 * PI,
            alpha2: self.alpha2 * PI,
            beta1: self.beta1 * PI,
            beta2: self.beta2 * PI,
        }
    }

    pub fn binary(&self) -> BinaryParams {
        BinaryParams {
            theta1_a: self.theta1_a * PI,
            theta2_a: self.theta2_a * PI,
            theta1_b: self.theta1_b * PI,
            theta2_b: self.theta2_b * PI,
            p_a: self.p_a,
        }
    }

    pub fn spec(&self, seed: u64) -> DisorderSpec {
        match self.kind {
            DisorderKind::Fixed => DisorderSpec::fixed(self.fixed()),
            DisorderKind::Phase => DisorderSpec::phase(self.fixed(), seed),
            DisorderKind::Magnetic => DisorderSpec::magnetic(self.theta1 * PI, self.theta2 * PI, seed),
            DisorderKind::Haar => DisorderSpec::haar(seed),
            DisorderKind::Binary => DisorderSpec::binary(self.binary(), seed),
        }
    }

    /// Same section with `θ₁, θ₂` replaced (units of π).
    pub fn with_thetas(&self, theta1: f64, theta2: f64) -> Self {
        Self {
            theta1,
            theta2,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveSection {
    pub extents: [usize; 2],
    pub t_max: usize,
    /// Snapshot times; powers of two up to `t_max` when empty.
    pub snapshots: Vec<usize>,
    pub dynamics: Dynamics,
    pub fit: Option<SpreadModel>,
}

impl Default for EvolveSection {
    fn default() -> Self {
        Self {
            extents: [301, 301],
            t_max: 1024,
            snapshots: Vec::new(),
            dynamics: Dynamics::Coherent,
            fit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScatterSection {
    pub lx: usize,
    pub ly: usize,
    pub t_max: usize,
    /// Extra `[L_x, L_y, t_max]` sizes for a scaling table.
    pub sizes: Vec<[usize; 3]>,
    pub cuts: Vec<Cut>,
    pub channels: Channels,
    /// Replace the disorder section's `θ₁`, `θ₂` with this grid.
    pub theta1_grid: Vec<f64>,
    pub theta2_grid: Vec<f64>,
    /// Write `𝔱(ε)` totals and eigenvalue histograms for the first seed.
    pub energy_resolved: bool,
}

impl Default for ScatterSection {
    fn default() -> Self {
        Self {
            lx: 19,
            ly: 30,
            t_max: 1000,
            sizes: Vec::new(),
            cuts: vec![Cut::None],
            channels: Channels::All,
            theta1_grid: Vec::new(),
            theta2_grid: Vec::new(),
            energy_resolved: false,
        }
    }
}

impl ScatterSection {
    pub fn all_sizes(&self) -> Vec<(usize, usize, usize)> {
        if self.sizes.is_empty() {
            vec![(self.lx, self.ly, self.t_max)]
        } else {
            self.sizes.iter().map(|s| (s[0], s[1], s[2])).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumSection {
    pub extents: [usize; 2],
    pub blocks: Vec<Block>,
    /// KS distances closer than this are reported as ambiguous.
    pub margin: f64,
    pub cap: usize,
    /// Fit the exponential tail from this spacing on.
    pub tail_from: Option<f64>,
}

impl Default for SpectrumSection {
    fn default() -> Self {
        Self {
            extents: [64, 64],
            blocks: vec![Block::SquareEe],
            margin: 0.0,
            cap: splitwalk::spectral::DEFAULT_BLOCK_CAP,
            tail_from: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CriticalSection {
    pub methods: Vec<EtaMethod>,
    pub averaging: Averaging,
    pub eigen_extents: [usize; 2],
    pub states_per_realization: usize,
    /// Quasienergy the eigenstates are taken near (units of π).
    pub target: f64,
    pub tol: f64,
    pub return_extents: [usize; 2],
    pub return_t_max: usize,
    /// Realizations for the return probability; `realizations` when unset.
    pub return_realizations: Option<usize>,
    pub dynamics: Dynamics,
}

impl Default for CriticalSection {
    fn default() -> Self {
        Self {
            methods: vec![EtaMethod::Autocorrelation, EtaMethod::Fractal, EtaMethod::Return],
            averaging: Averaging::MeanOfLogs,
            eigen_extents: [128, 128],
            states_per_realization: 10,
            target: 0.0,
            tol: 1e-9,
            return_extents: [257, 257],
            return_t_max: 2048,
            return_realizations: None,
            dynamics: Dynamics::Coherent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BinarySweepSection {
    pub p_a: Vec<f64>,
    /// Displacement of set B along `θ₂B − θ₂A = θ₁A − θ₁B` (units of π).
    pub delta: Vec<f64>,
    pub lx: usize,
    pub ly: usize,
    pub t_max: usize,
    pub spread_extents: [usize; 2],
    pub spread_t: usize,
    /// Realizations for the spread; `realizations` when unset.
    pub spread_realizations: Option<usize>,
}

impl Default for BinarySweepSection {
    fn default() -> Self {
        Self {
            p_a: (0..=10).map(|k| k as f64 / 10.0).collect(),
            delta: vec![0.5],
            lx: 39,
            ly: 60,
            t_max: 2000,
            spread_extents: [200, 200],
            spread_t: 170,
            spread_realizations: None,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| {
            let field = e
                .span()
                .map(|s| {
                    let line = text[..s.start].matches('\n').count() + 1;
                    format!("line {line}: {}", text[s.clone()].trim())
                })
                .unwrap_or_default();
            CliError::Config {
                field,
                message: e.message().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn seed(&self, realization: usize) -> u64 {
        self.seed_base + realization as u64
    }

    pub fn seeds(&self, count: usize) -> Vec<u64> {
        (0..count).map(|i| self.seed(i)).collect()
    }

    pub fn specs(&self, count: usize) -> Vec<DisorderSpec> {
        self.seeds(count).into_iter().map(|s| self.disorder.spec(s)).collect()
    }
}
