//! Subcommand implementations. Each command consumes a resolved `RunConfig`,
//! produces a `CsvReport`, and states whether its built-in consistency
//! checks passed; the binary turns that verdict into the exit status.

pub mod d2_exact;
pub mod gauge_invariance;
pub mod gue_table;
pub mod stability_sweep;
pub mod weyl_check;
pub mod z_table;

use anyhow::{ensure, Result};

use crate::report::CsvReport;

pub struct CommandOutcome {
    pub report: CsvReport,
    pub checks_passed: bool,
}

/// Commands that do not sweep a parameter take exactly one value for it.
pub(crate) fn single<T: Copy>(items: &[T], key: &str) -> Result<T> {
    ensure!(
        items.len() == 1,
        "this command takes a single {key} value, got {}",
        items.len()
    );
    Ok(items[0])
}
