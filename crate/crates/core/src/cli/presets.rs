//! Bundled run configurations named after the classic moving-wall scenarios.

use super::config::{parse_config_str, RunConfig};
use crate::{Error, Result};

pub const PRESETS: [(&str, &str); 5] = [
    ("galilean", include_str!("../../presets/galilean.toml")),
    ("elevator", include_str!("../../presets/elevator.toml")),
    ("linear-expansion", include_str!("../../presets/linear-expansion.toml")),
    ("sinusoidal", include_str!("../../presets/sinusoidal.toml")),
    ("fermi-ulam", include_str!("../../presets/fermi-ulam.toml")),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    PRESETS.iter().map(|(n, _)| *n)
}

/// The annotated TOML source of a preset.
pub fn source(name: &str) -> Result<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| {
            Error::Validation(format!(
                "unknown preset {name:?}; available: {}",
                names().collect::<Vec<_>>().join(", ")
            ))
        })
}

pub fn load(name: &str) -> Result<RunConfig> {
    parse_config_str(source(name)?, std::path::Path::new("."))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_parses() {
        for name in names() {
            let c = load(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(c.propagation.dt, 1e-4, "{name}");
            assert_eq!(c.propagator_config().step_sizes().len(), 10_000, "{name}");
        }
        assert!(load("nope").is_err());
    }
}
