use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Synthetic gate-level noise.
///
/// After every gate each touched qubit is depolarized (`p1` for one-qubit
/// gates, `p2` for CNOT) and then amplitude damped with `gamma`. Readout bits
/// flip independently with `readout_flip` when sampling.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "NoiseJson")]
pub struct NoiseConfig {
    pub p1: f64,
    pub p2: f64,
    pub gamma: f64,
    pub readout_flip: f64,
}

#[derive(Deserialize)]
struct NoiseJson {
    #[serde(default)]
    p1: f64,
    #[serde(default)]
    p2: f64,
    #[serde(default)]
    gamma: f64,
    #[serde(default)]
    readout_flip: f64,
}

impl TryFrom<NoiseJson> for NoiseConfig {
    type Error = Error;

    fn try_from(j: NoiseJson) -> Result<Self> {
        NoiseConfig::new(j.p1, j.p2, j.gamma, j.readout_flip)
    }
}

impl NoiseConfig {
    pub fn new(p1: f64, p2: f64, gamma: f64, readout_flip: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p2", p2), ("gamma", gamma), ("readout_flip", readout_flip)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("noise parameter {name} = {v} outside [0, 1]")));
            }
        }
        Ok(NoiseConfig {
            p1,
            p2,
            gamma,
            readout_flip,
        })
    }

    pub fn zero() -> Self {
        NoiseConfig::default()
    }

    pub fn depolarizing(p1: f64, p2: f64) -> Result<Self> {
        NoiseConfig::new(p1, p2, 0.0, 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.gamma == 0.0 && self.readout_flip == 0.0
    }

    /// True when the noise acts on gates, not only on readout.
    pub fn has_gate_noise(&self) -> bool {
        self.p1 > 0.0 || self.p2 > 0.0 || self.gamma > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_checked() {
        assert!(NoiseConfig::new(0.0, 1.0, 0.5, 0.1).is_ok());
        assert!(NoiseConfig::new(-0.1, 0.0, 0.0, 0.0).is_err());
        assert!(NoiseConfig::new(0.0, 0.0, 1.5, 0.0).is_err());
        assert!(NoiseConfig::new(0.0, 0.0, 0.0, f64::NAN).is_err());
        assert!(serde_json::from_str::<NoiseConfig>(r#"{"p2": 2.0}"#).is_err());
        let n: NoiseConfig = serde_json::from_str(r#"{"p2": 0.05}"#).unwrap();
        assert_eq!(n, NoiseConfig::depolarizing(0.0, 0.05).unwrap());
        assert!(NoiseConfig::zero().is_zero());
    }
}
