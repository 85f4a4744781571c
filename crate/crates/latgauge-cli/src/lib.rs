//! Experiment drivers, run configuration, and CSV reporting around the
//! `latgauge` numerics. The binary dispatches to `commands`; the library
//! form exists so integration tests can drive the same code paths directly.

pub mod commands;
pub mod config;
pub mod par;
pub mod report;
