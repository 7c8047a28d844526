use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The triple `(γ, a, b)` that fixes one operator.
///
/// `gamma` is the effective angular quantum number and must be non-negative;
/// `a` is the Coulomb strength and `b` the strength of the linear term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
}

impl ModelParams {
    pub fn new(gamma: f64, a: f64, b: f64) -> Result<Self> {
        let params = ModelParams { gamma, a, b };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("gamma", self.gamma), ("a", self.a), ("b", self.b)] {
            if !value.is_finite() {
                return Err(Error::invalid(format!("{name} must be finite, got {value}")));
            }
        }
        if self.gamma < 0.0 {
            return Err(Error::invalid(format!(
                "gamma must be non-negative (the recurrence mixes γ and |γ|), got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    pub fn with_a(self, a: f64) -> Self {
        ModelParams { a, ..self }
    }

    pub fn with_b(self, b: f64) -> Self {
        ModelParams { b, ..self }
    }

    /// Potential part of the operator, `γ²/ξ² - a/ξ + bξ + ξ²`.
    pub fn potential(&self, xi: f64) -> f64 {
        self.gamma * self.gamma / (xi * xi) - self.a / xi + self.b * xi + xi * xi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_gamma_and_non_finite() {
        assert!(ModelParams::new(-0.5, 0.0, 0.0).is_err());
        assert!(ModelParams::new(0.0, f64::NAN, 0.0).is_err());
        assert!(ModelParams::new(0.0, 0.0, f64::INFINITY).is_err());
        assert!(ModelParams::new(0.5, -3.0, 2.0).is_ok());
    }
}
