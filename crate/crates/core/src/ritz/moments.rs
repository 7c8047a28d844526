use statrs::function::gamma::{gamma, ln_gamma};

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `M(p) = ∫_0^∞ ξ^p e^{-ξ²} dξ = Γ((p+1)/2) / 2`. Integer orders run the
/// recurrence up from the exact seeds `M(0) = √π/2`, `M(1) = 1/2`.
pub fn moment(p: f64) -> f64 {
    if p >= 0.0 && p.fract() == 0.0 && p < 400.0 {
        let k = p as usize;
        let mut m = if k % 2 == 0 { 0.5 * PI.sqrt() } else { 0.5 };
        let mut q = (k % 2) as f64;
        while q < p {
            m *= (q + 1.0) / 2.0;
            q += 2.0;
        }
        return m;
    }
    0.5 * gamma(0.5 * (p + 1.0))
}

/// `ln M(p)`; finite well past the point where `M(p)` overflows.
pub fn ln_moment(p: f64) -> f64 {
    ln_gamma(0.5 * (p + 1.0)) - std::f64::consts::LN_2
}

/// Gaussian moments `M(offset + k)` for `k = 0..len`, built from the two
/// seeds `M(offset)`, `M(offset + 1)` and `M(p + 2) = M(p) (p + 1) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    offset: f64,
    values: Vec<f64>,
}

impl MomentTable {
    pub fn new(offset: f64, len: usize) -> Result<Self> {
        if !(offset > -1.0) || !offset.is_finite() {
            return Err(Error::invalid(format!("moment offset must exceed -1, got {offset}")));
        }
        let mut values = Vec::with_capacity(len);
        for k in 0..len {
            let p = offset + k as f64;
            let v = match k {
                0 | 1 => moment(p),
                _ => values[k - 2] * (p - 1.0) / 2.0,
            };
            if !v.is_finite() {
                return Err(Error::MomentOverflow { order: p });
            }
            values.push(v);
        }
        Ok(MomentTable { offset, values })
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `M(offset + k)`.
    pub fn at(&self, k: usize) -> f64 {
        self.values[k]
    }
}

/// Integer-order moments `M(0..=p_max)`.
pub fn moments(p_max: usize) -> Result<MomentTable> {
    if p_max < 1 {
        return Err(Error::invalid("p_max must be at least 1"));
    }
    MomentTable::new(0.0, p_max + 1)
}
