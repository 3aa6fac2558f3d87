//! Built-in complexes with their integral homology, checked before every command.

use std::sync::OnceLock;

use nborient_core::corpus::by_name;
use nborient_core::homology::homology;
use nborient_core::Ring;

use crate::error::{CliError, Result};

/// `(name, H_0(Z), H_1(Z), …)`.
pub const FIXTURES: &[(&str, &[&str])] = &[
    ("sphere(2)", &["Z", "0", "Z"]),
    ("sphere(4)", &["Z", "0", "0", "0", "Z"]),
    ("cross_polytope_sphere(3)", &["Z", "0", "0", "Z"]),
    ("circle(3)", &["Z", "Z"]),
    ("RP2_6", &["Z", "Z2", "0"]),
    ("T2_7", &["Z", "Z^2", "Z"]),
    ("klein_8", &["Z", "Z+Z2", "0"]),
    ("CP2_kuehnel_9", &["Z", "0", "Z", "0", "Z"]),
    ("RP3", &["Z", "Z2", "0", "Z"]),
    ("poincare_16", &["Z", "0", "0", "Z"]),
    ("disk", &["Z", "0", "0"]),
];

pub fn run() -> Result<()> {
    for (name, expected) in FIXTURES {
        let x = by_name(name).ok_or_else(|| CliError::SelfTest(format!("{name} is not built in")))?;
        let got: Vec<String> = homology(&x, Ring::Z).iter().map(|g| g.to_string()).collect();
        if got != *expected {
            return Err(CliError::SelfTest(format!("{name}: expected {expected:?}, got {got:?}")));
        }
    }
    Ok(())
}

/// Runs the self-test once per process.
pub fn ensure() -> Result<()> {
    static DONE: OnceLock<std::result::Result<(), String>> = OnceLock::new();
    DONE.get_or_init(|| run().map_err(|e| e.to_string()))
        .clone()
        .map_err(CliError::SelfTest)
}

#[cfg(test)]
mod tests {
    #[test]
    fn fixtures_pass() {
        super::run().unwrap();
    }
}
