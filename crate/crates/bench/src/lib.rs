//! Shared inputs for the criterion benches.

use nashset::game::{builtin, Fixture};

/// A built-in game by name; panics on an unknown name.
pub fn fixture(name: &str) -> Fixture {
    builtin(name).unwrap_or_else(|| panic!("unknown fixture {name}"))
}
