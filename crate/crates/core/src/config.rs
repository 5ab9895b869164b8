//! Run configuration shared by the library pipeline and the command line.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{FockSpace, Split, Statistics};
use crate::twist::PivotRule;
use crate::verify::Convention;

/// Environment variable capping the truncation order.
pub const MAX_ORDER_ENV: &str = "TWISTFORGE_MAX_ORDER";
pub const DEFAULT_MAX_ORDER: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub order: usize,
    pub cutoff: usize,
    pub statistics: Statistics,
    pub unitary: bool,
    pub pivot_rule: PivotRule,
    /// PBW degree cap; `None` means `2K + 2`.
    pub cap: Option<u32>,
    pub split: Split,
    pub convention: Convention,
    pub qcr_band: usize,
    pub covariance_band: usize,
    pub alpha: String,
    pub twist_cache: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            order: 2,
            cutoff: 6,
            statistics: Statistics::Bose,
            unitary: true,
            pivot_rule: PivotRule::LexMin,
            cap: None,
            split: Split::Symmetric,
            convention: Convention::Mirrored,
            qcr_band: 2,
            covariance_band: 1,
            alpha: "1".into(),
            twist_cache: None,
            format: OutputFormat::Json,
        }
    }
}

/// Largest admissible order: `TWISTFORGE_MAX_ORDER` if set, else 4.
pub fn max_order() -> Result<usize> {
    match std::env::var(MAX_ORDER_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{MAX_ORDER_ENV}='{v}' is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_MAX_ORDER),
    }
}

impl RunConfig {
    pub fn space(&self) -> FockSpace {
        FockSpace::new(self.statistics, self.cutoff)
    }

    pub fn cap(&self) -> u32 {
        self.cap.unwrap_or_else(|| crate::hopf::default_cap(self.order))
    }

    /// Checks every field against `max_order` and the other fields, and
    /// parses the alpha expression.
    pub fn validate_with(&self, max_order: usize) -> Result<()> {
        if self.order > max_order {
            return Err(Error::Config(format!(
                "order {} is above the supported maximum {max_order}",
                self.order
            )));
        }
        if self.statistics == Statistics::Fermi && self.cutoff != 2 {
            return Err(Error::Config(format!(
                "fermionic space has cutoff 2, got {}",
                self.cutoff
            )));
        }
        if self.cutoff == 0 {
            return Err(Error::Config("cutoff must be positive".into()));
        }
        for (name, band) in [("qcr band", self.qcr_band), ("covariance band", self.covariance_band)] {
            if band > self.cutoff {
                return Err(Error::Config(format!(
                    "{name} {band} exceeds cutoff {}",
                    self.cutoff
                )));
            }
        }
        if let Some(cap) = self.cap {
            if cap < 2 * self.order as u32 {
                return Err(Error::Config(format!(
                    "degree cap {cap} is below the ansatz degree {}",
                    2 * self.order
                )));
            }
        }
        crate::deform::Alpha::parse(&self.alpha, &self.space(), self.order)?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with(max_order()?)
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}
