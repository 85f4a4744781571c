//! Run configuration: built-in defaults, flat `key = value` config files,
//! and command-line overlay (flags win over file values, file values win
//! over defaults).

use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use latgauge::group::GroupKind;
use latgauge::weyl::QuadratureGrid;

use crate::report::CsvReport;

pub const DEFAULT_SEED: u64 = 1729;
pub const DEFAULT_SAMPLES: u64 = 100_000;

/// Partially specified configuration, before defaults are applied.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RawConfig {
    pub group: Option<String>,
    pub ns: Option<Vec<usize>>,
    pub dims: Option<Vec<usize>>,
    pub sites: Option<Vec<usize>>,
    pub spacings: Option<Vec<f64>>,
    pub gsqs: Option<Vec<f64>>,
    pub g0sq: Option<f64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
    pub couplings: Option<Vec<f64>>,
    pub us: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub no_meta: Option<bool>,
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let mut items = Vec::new();
    for token in value.split(',') {
        let token = token.trim();
        items.push(
            token
                .parse()
                .map_err(|e| anyhow::anyhow!("bad {key} entry {token:?}: {e}"))?,
        );
    }
    Ok(items)
}

fn parse_scalar<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| anyhow::anyhow!("bad {key} value {value:?}: {e}"))
}

impl RawConfig {
    /// Parses a flat `key = value` file. Blank lines and lines starting with
    /// `#` are ignored; unknown keys are errors so typos do not silently
    /// fall back to defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut raw = RawConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(
                    "{}:{}: expected `key = value`, got {line:?}",
                    path.display(),
                    lineno + 1
                );
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "group" => raw.group = Some(value.to_string()),
                "n" => raw.ns = Some(parse_list(key, value)?),
                "dim" => raw.dims = Some(parse_list(key, value)?),
                "sites" => raw.sites = Some(parse_list(key, value)?),
                "spacing" => raw.spacings = Some(parse_list(key, value)?),
                "gsq" => raw.gsqs = Some(parse_list(key, value)?),
                "g0sq" => raw.g0sq = Some(parse_scalar(key, value)?),
                "samples" => raw.samples = Some(parse_scalar(key, value)?),
                "seed" => raw.seed = Some(parse_scalar(key, value)?),
                "grid" => raw.grid = Some(parse_scalar(key, value)?),
                "couplings" => raw.couplings = Some(parse_list(key, value)?),
                "us" => raw.us = Some(parse_list(key, value)?),
                "out" => raw.out = Some(PathBuf::from(value)),
                "no_meta" => raw.no_meta = Some(parse_scalar(key, value)?),
                other => bail!(
                    "{}:{}: unknown config key {other:?}",
                    path.display(),
                    lineno + 1
                ),
            }
        }
        Ok(raw)
    }

    /// Returns `self` with any value present in `flags` replacing the
    /// corresponding field.
    pub fn overlay(self, flags: RawConfig) -> RawConfig {
        RawConfig {
            group: flags.group.or(self.group),
            ns: flags.ns.or(self.ns),
            dims: flags.dims.or(self.dims),
            sites: flags.sites.or(self.sites),
            spacings: flags.spacings.or(self.spacings),
            gsqs: flags.gsqs.or(self.gsqs),
            g0sq: flags.g0sq.or(self.g0sq),
            samples: flags.samples.or(self.samples),
            seed: flags.seed.or(self.seed),
            grid: flags.grid.or(self.grid),
            couplings: flags.couplings.or(self.couplings),
            us: flags.us.or(self.us),
            out: flags.out.or(self.out),
            no_meta: flags.no_meta.or(self.no_meta),
        }
    }
}

/// Fully resolved configuration every command runs from.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub group: String,
    pub ns: Vec<usize>,
    pub dims: Vec<usize>,
    pub sites: Vec<usize>,
    pub spacings: Vec<f64>,
    pub gsqs: Vec<f64>,
    pub g0sq: f64,
    pub samples: u64,
    pub seed: u64,
    /// Quadrature points per eigenphase dimension; 0 means the per-group
    /// default.
    pub grid: usize,
    pub couplings: Vec<f64>,
    pub us: Vec<f64>,
    pub out: Option<PathBuf>,
    pub no_meta: bool,
}

fn nonempty<T>(items: Vec<T>, key: &str) -> Result<Vec<T>> {
    if items.is_empty() {
        bail!("{key} list must not be empty");
    }
    Ok(items)
}

impl RunConfig {
    pub fn resolve(raw: RawConfig) -> Result<Self> {
        let group = raw.group.unwrap_or_else(|| "u".to_string());
        if group != "u" && group != "su" {
            bail!("group must be `u` or `su`, got {group:?}");
        }
        Ok(RunConfig {
            group,
            ns: nonempty(raw.ns.unwrap_or_else(|| vec![1]), "n")?,
            dims: nonempty(raw.dims.unwrap_or_else(|| vec![2]), "dim")?,
            sites: nonempty(raw.sites.unwrap_or_else(|| vec![2]), "sites")?,
            spacings: nonempty(raw.spacings.unwrap_or_else(|| vec![1.0]), "spacing")?,
            gsqs: nonempty(raw.gsqs.unwrap_or_else(|| vec![1.0]), "gsq")?,
            g0sq: raw.g0sq.unwrap_or(1.0),
            samples: raw.samples.unwrap_or(DEFAULT_SAMPLES),
            seed: raw.seed.unwrap_or(DEFAULT_SEED),
            grid: raw.grid.unwrap_or(0),
            couplings: nonempty(
                raw.couplings.unwrap_or_else(|| vec![0.5, 1.0, 2.0]),
                "couplings",
            )?,
            us: nonempty(
                raw.us.unwrap_or_else(|| vec![0.0, 1.0, 2.0, 4.0, 8.0, 12.0]),
                "us",
            )?,
            out: raw.out,
            no_meta: raw.no_meta.unwrap_or(false),
        })
    }

    pub fn kind(&self, n: usize) -> GroupKind {
        if self.group == "su" {
            GroupKind::Su(n)
        } else {
            GroupKind::U(n)
        }
    }

    pub fn quadrature_grid(&self, kind: GroupKind) -> Result<QuadratureGrid> {
        if self.grid == 0 {
            Ok(QuadratureGrid::default_for(kind))
        } else {
            Ok(QuadratureGrid::new(self.grid)?)
        }
    }

    /// Records the shared run parameters on a report so an output file is
    /// self-describing.
    pub fn stamp_meta(&self, report: &mut CsvReport) {
        let join_us = |v: &[usize]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        let join_f = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        };
        report.push_meta("group", &self.group);
        report.push_meta("n", join_us(&self.ns));
        report.push_meta("dim", join_us(&self.dims));
        report.push_meta("sites", join_us(&self.sites));
        report.push_meta("spacing", join_f(&self.spacings));
        report.push_meta("gsq", join_f(&self.gsqs));
        report.push_meta("g0sq", self.g0sq);
        report.push_meta("samples", self.samples);
        report.push_meta("seed", self.seed);
        report.push_meta("grid", self.grid);
    }
}
