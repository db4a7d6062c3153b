use oklab_core::Rat;
use serde_json::{json, Value};

use crate::encode::rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// `None` runs every catalog testbed.
    pub testbed: Option<String>,
    pub flag: Option<String>,
    pub m_max: u32,
    pub grid_den: i128,
    pub coeffs: Vec<Rat>,
    pub seed: u64,
    /// Random samples per testbed (or per dimension for polytope sweeps).
    pub samples: usize,
    /// Coordinate bound for the strict-inclusion search.
    pub search_bound: i128,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            testbed: None,
            flag: None,
            m_max: 3,
            grid_den: 12,
            coeffs: [(1, 2), (1, 1), (3, 2), (2, 1), (3, 1)].iter().map(|&(n, d)| Rat::new(n, d)).collect(),
            seed: 0,
            samples: 200,
            search_bound: 3,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.m_max == 0 {
            return Err("--mmax must be positive".into());
        }
        if self.grid_den <= 0 {
            return Err("--grid-den must be positive".into());
        }
        if self.search_bound <= 0 {
            return Err("--bound must be positive".into());
        }
        if self.coeffs.is_empty() || self.coeffs.iter().any(|c| !c.is_positive()) {
            return Err("sweep coefficients must be positive".into());
        }
        Ok(())
    }

    pub fn echo(&self) -> Value {
        json!({
            "testbed": self.testbed,
            "flag": self.flag,
            "m_max": self.m_max,
            "grid_den": self.grid_den as i64,
            "coeffs": self.coeffs.iter().map(|c| rat(*c)).collect::<Vec<_>>(),
            "seed": self.seed,
            "samples": self.samples,
            "search_bound": self.search_bound as i64,
            "format": match self.format { Format::Json => "json", Format::Csv => "csv" },
        })
    }
}
