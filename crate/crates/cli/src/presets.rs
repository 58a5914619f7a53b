//! Named parameter sets, stored as ordinary config files.

use crate::config::Config;
use crate::CliError;

pub const PRESETS: &[(&str, &str)] = &[
    ("edge-transmission", include_str!("../presets/edge-transmission.toml")),
    ("phase-diagram", include_str!("../presets/phase-diagram.toml")),
    ("localized-spread", include_str!("../presets/localized-spread.toml")),
    ("critical-spread", include_str!("../presets/critical-spread.toml")),
    ("levels-localized", include_str!("../presets/levels-localized.toml")),
    ("levels-critical", include_str!("../presets/levels-critical.toml")),
    ("levels-haar", include_str!("../presets/levels-haar.toml")),
    ("scaling-phase", include_str!("../presets/scaling-phase.toml")),
    ("haar-spread", include_str!("../presets/haar-spread.toml")),
    ("haar-scaling", include_str!("../presets/haar-scaling.toml")),
    ("eta-haar", include_str!("../presets/eta-haar.toml")),
    ("eta-critical", include_str!("../presets/eta-critical.toml")),
    ("binary-transmission", include_str!("../presets/binary-transmission.toml")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

pub fn preset(name: &str) -> Result<Config, CliError> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| CliError::UnknownPreset {
            name: name.to_string(),
            known: names().collect::<Vec<_>>().join(", "),
        })?;
    Config::from_toml(text)
}
