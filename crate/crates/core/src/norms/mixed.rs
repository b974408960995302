use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::dyadic::DyadicPower;
use crate::error::{Error, Result};
use crate::tensor::CoeffTensor;

/// The coefficient norm `(Σ |a|^p)^{1/p}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedNorm {
    pub exponent: Rational64,
    /// `K = Σ |a|^p` as an integer when every nonzero `|a|` is 1 (then `K`
    /// is the support size and the norm is exactly `K^{1/p}`).
    pub power_sum: Option<u64>,
    pub value: f64,
}

impl MixedNorm {
    /// `K^{1/p}` as an exact power of two, when `K` is one.
    pub fn dyadic(&self) -> Option<DyadicPower> {
        let k = self.power_sum?;
        Some(DyadicPower::from_integer(k)?.pow(self.exponent.recip()))
    }
}

/// The Bohnenblust–Hille exponent `2m/(m+1)`.
pub fn bh_exponent(m: u32) -> Result<Rational64> {
    if m == 0 {
        return Err(Error::argument("arity must be at least 1"));
    }
    Ok(Rational64::new(2 * m as i64, m as i64 + 1))
}

pub fn mixed_norm(form: &CoeffTensor, p: Rational64) -> Result<MixedNorm> {
    if p <= Rational64::zero() {
        return Err(Error::argument(format!(
            "exponent must be positive, got {p}"
        )));
    }
    let pf = p.to_f64().expect("finite rational");
    let unit = form.entries().all(|(_, c)| c.abs() == 1);
    let power_sum = unit.then(|| form.nonzero_count() as u64);
    let value = match power_sum {
        Some(k) => (k as f64).powf(1.0 / pf),
        None => {
            // Scale by the largest magnitude first so large coefficients
            // cannot overflow the power sum.
            let max = form
                .entries()
                .map(|(_, c)| c.unsigned_abs())
                .max()
                .unwrap_or(0) as f64;
            if max == 0.0 {
                0.0
            } else {
                let s: f64 = form
                    .entries()
                    .map(|(_, c)| (c.unsigned_abs() as f64 / max).powf(pf))
                    .sum();
                max * s.powf(1.0 / pf)
            }
        }
    };
    Ok(MixedNorm {
        exponent: p,
        power_sum,
        value,
    })
}
