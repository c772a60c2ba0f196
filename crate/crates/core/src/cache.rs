//! Optional on-disk store for expensive rational expansions, in the plain
//! text series format.

use std::fs;
use std::path::PathBuf;

use crate::eisenstein::{delta_series, eisenstein_e, eisenstein_g};
use crate::error::Result;
use crate::series::QSeries;
use crate::text::{parse_series, write_qseries, AnySeries};

/// Get-or-compute access to Eisenstein and Delta expansions.  With no
/// directory configured every call just computes.
#[derive(Clone, Debug, Default)]
pub struct SeriesCache {
    dir: Option<PathBuf>,
}

impl SeriesCache {
    pub fn disabled() -> Self {
        SeriesCache { dir: None }
    }

    pub fn at_dir(dir: impl Into<PathBuf>) -> Self {
        SeriesCache { dir: Some(dir.into()) }
    }

    fn lookup(&self, name: &str, compute: impl FnOnce() -> Result<QSeries>) -> Result<QSeries> {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let path = dir.join(format!("{name}.series"));
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(AnySeries::Rational(series)) = parse_series(&text) {
                return Ok(series);
            }
        }
        let series = compute()?;
        fs::create_dir_all(dir)?;
        fs::write(&path, write_qseries(&series))?;
        Ok(series)
    }

    pub fn g_series(&self, k: u64, precision: usize) -> Result<QSeries> {
        self.lookup(&format!("G{k}.prec{precision}"), || eisenstein_g(k, precision))
    }

    pub fn e_series(&self, k: u64, precision: usize) -> Result<QSeries> {
        self.lookup(&format!("E{k}.prec{precision}"), || eisenstein_e(k, precision))
    }

    pub fn delta(&self, precision: usize) -> Result<QSeries> {
        self.lookup(&format!("Delta.prec{precision}"), || delta_series(precision))
    }
}
