//! Run configuration shared by all subcommands.
//!
//! Every number in a report depends on these choices, so reports embed the
//! full configuration for provenance.

use anyhow::{bail, Result};
use serde::{Deserialize, Serialize};

/// Analysis and prediction parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Time-bin width in seconds.
    pub bin_width: u64,
    /// Cap on gap symbols, in bins.
    pub gap_cap: u64,
    /// Individuals with fewer partner symbols than this are excluded.
    pub min_sequence_length: usize,
    /// Rolling-evaluation window in seconds.
    pub window: u64,
    /// Prediction list sizes, ascending.
    pub ks: Vec<usize>,
    /// Seed for synthetic generation.
    pub seed: u64,
    /// Whether model updates bridge across window boundaries.
    pub bridge: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            bin_width: 300,
            gap_cap: 288,
            min_sequence_length: 50,
            window: 7 * 86_400,
            ks: vec![1, 5],
            seed: 0,
            bridge: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bin_width == 0 {
            bail!("bin width must be positive");
        }
        if self.gap_cap == 0 {
            bail!("gap cap must be positive");
        }
        if self.min_sequence_length == 0 {
            bail!("minimum sequence length must be positive");
        }
        if self.window == 0 {
            bail!("window must be positive");
        }
        if self.ks.is_empty() || self.ks.contains(&0) {
            bail!("top-k list must contain positive sizes");
        }
        if self.ks.windows(2).any(|w| w[0] >= w[1]) {
            bail!("top-k list must be strictly ascending");
        }
        Ok(())
    }
}
