//! Reproducible integer weight vectors.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood), one draw per vertex,
//! mapped to `lo + x mod (hi - lo + 1)`. The modulo bias is below 2^-40 for
//! any range that fits the weight cap, and keeping the mapping this simple
//! makes vectors easy to reproduce elsewhere.

use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Weight, MAX_VERTEX_WEIGHT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightSpecError {
    #[error("weight bounds must satisfy 1 <= lo <= hi <= {MAX_VERTEX_WEIGHT}, got [{lo}, {hi}]")]
    BadBounds { lo: Weight, hi: Weight },
    #[error("expected gen:uniform:LO:HI:SEED, got `{0}`")]
    BadSyntax(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightGenSpec {
    pub lo: Weight,
    pub hi: Weight,
    pub seed: u64,
}

impl WeightGenSpec {
    pub fn uniform(lo: Weight, hi: Weight, seed: u64) -> Result<Self, WeightSpecError> {
        if lo < 1 || lo > hi || hi > MAX_VERTEX_WEIGHT {
            return Err(WeightSpecError::BadBounds { lo, hi });
        }
        Ok(WeightGenSpec { lo, hi, seed })
    }
}

impl FromStr for WeightGenSpec {
    type Err = WeightSpecError;

    /// Parses `gen:uniform:LO:HI:SEED`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WeightSpecError::BadSyntax(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["gen", "uniform", lo, hi, seed] => WeightGenSpec::uniform(
                lo.parse().map_err(|_| bad())?,
                hi.parse().map_err(|_| bad())?,
                seed.parse().map_err(|_| bad())?,
            ),
            _ => Err(bad()),
        }
    }
}

/// SplitMix64 state stepper.
#[derive(Clone, Debug)]
pub struct SplitMix64(u64);

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

pub fn gen_weights(n: usize, spec: &WeightGenSpec) -> Vec<Weight> {
    let span = (spec.hi - spec.lo + 1) as u64;
    let mut rng = SplitMix64::new(spec.seed);
    (0..n).map(|_| spec.lo + (rng.next_u64() % span) as Weight).collect()
}
