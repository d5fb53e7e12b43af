//! Precision `ε`, separation sparsity `B'` and the constant `C`.
//!
//! `ε = |Â(ω_B)| / (√2 C)` and `B'` is the smallest (one-based) rank whose
//! tail `Σ_{b >= B'} |Â(ω_b)|` drops below `ε/2`. For the compressible model
//! classes both are fixed up front from the decay law alone.

use core::f64::consts::{LN_2, SQRT_2};

use crate::error::{Error, Result};
use crate::signals::CompressibilityModel;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecoveryParameters {
    /// Number of output terms.
    pub b: usize,
    /// Separation sparsity the measurement plan is built for.
    pub b_prime: u64,
    /// Precision constant.
    pub c: f64,
    /// Diagnostic only.
    pub epsilon: Option<f64>,
    /// Target relative excess error, when chosen from a decay model.
    pub delta: Option<f64>,
}

impl RecoveryParameters {
    pub fn new(b: usize, b_prime: u64, c: f64) -> Result<Self> {
        let params = Self {
            b,
            b_prime,
            c,
            epsilon: None,
            delta: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b == 0 {
            return Err(Error::InvalidParameter("B must be at least 1"));
        }
        if (self.b as u64) > self.b_prime {
            return Err(Error::InvalidParameter("B must not exceed B'"));
        }
        if self.b_prime < 2 {
            return Err(Error::InvalidParameter("B' must be at least 2"));
        }
        if self.c.is_nan() || self.c < 1.0 {
            return Err(Error::InvalidParameter("C must be at least 1"));
        }
        Ok(())
    }

    /// `6 B |Â(ω_B)|² / C`, the excess error allowed over the best B-term
    /// approximation.
    pub fn excess_bound(&self, magnitude_b: f64) -> f64 {
        6.0 * self.b as f64 * magnitude_b * magnitude_b / self.c
    }
}

/// `(ε, B')` from magnitudes sorted in descending order.
///
/// Returns `B' = N` when no rank satisfies the tail bound (for example when
/// `|Â(ω_B)| = 0`); callers must treat that as a degenerate signal.
pub fn compute_epsilon_bprime(sorted_magnitudes: &[f64], b: usize, c: f64) -> Result<(f64, usize)> {
    let n = sorted_magnitudes.len();
    if b == 0 || b > n {
        return Err(Error::InvalidParameter("B must lie in [1, N]"));
    }
    if c.is_nan() || c < 1.0 {
        return Err(Error::InvalidParameter("C must be at least 1"));
    }
    if sorted_magnitudes.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter(
            "magnitudes must be sorted descending",
        ));
    }
    let epsilon = sorted_magnitudes[b - 1] / (SQRT_2 * c);
    let half = epsilon / 2.0;

    // Walk ranks from the back; `tail` is Σ_{b >= rank}. Summing small terms
    // first keeps the tail accurate.
    let mut tail = 0.0;
    let mut b_prime = None;
    for rank in (1..=n).rev() {
        tail += sorted_magnitudes[rank - 1];
        if tail < half {
            b_prime = Some(rank);
        } else {
            break;
        }
    }
    let b_prime = match b_prime {
        Some(rank) => rank,
        // An empty tail satisfies the bound only when ε > 0.
        None if half > 0.0 => n + 1,
        None => n,
    };
    Ok((epsilon, b_prime.min(n)))
}

/// Upper bound on `Σ_{b >= start} c b^{-p}`: explicit terms, then the
/// integral from the last summed index.
fn algebraic_tail_bound(start: u64, p: f64, c: f64) -> f64 {
    const EXPLICIT: u64 = 4096;
    let end = start + EXPLICIT;
    let mut sum = 0.0;
    for b in (start..end).rev() {
        sum += libm::pow(b as f64, -p);
    }
    c * (sum + libm::pow((end - 1) as f64, 1.0 - p) / (p - 1.0))
}

fn exponential_tail(start: u64, alpha: f64, c: f64) -> f64 {
    c * libm::exp2(-alpha * start as f64) / (1.0 - libm::exp2(-alpha))
}

/// Parameters for a decay model and target `δ`.
///
/// The closed forms bound the tail by an integral starting at `B'`, which
/// slightly undercounts the series; the result is advanced until the series
/// tail itself is below `ε/2`.
pub fn select_parameters(
    b: usize,
    delta: f64,
    model: &CompressibilityModel,
) -> Result<RecoveryParameters> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter("delta must lie in (0, 1)"));
    }
    if b == 0 {
        return Err(Error::InvalidParameter("B must be at least 1"));
    }
    model.validate()?;
    let bf = b as f64;
    let (c, epsilon, b_prime) = match *model {
        CompressibilityModel::ExactSparse { .. } => (1.0, None, b as u64 + 1),
        CompressibilityModel::Algebraic { p, c: scale } => {
            let c = libm::ceil(6.0 / delta);
            let epsilon = scale * libm::pow(bf, -p) / (SQRT_2 * c);
            let half = epsilon / 2.0;
            let closed = |x: u64| scale * libm::pow(x as f64, 1.0 - p) / (p - 1.0);
            let mut bp = libm::floor(libm::pow(
                2.0 * scale / ((p - 1.0) * epsilon),
                1.0 / (p - 1.0),
            )) as u64;
            bp = bp.max(1);
            while bp > 1 && closed(bp - 1) < half {
                bp -= 1;
            }
            while closed(bp) >= half {
                bp += 1;
            }
            while algebraic_tail_bound(bp, p, scale) >= half {
                bp += 1;
            }
            (c, Some(epsilon), bp)
        }
        CompressibilityModel::Exponential { alpha, c: scale } => {
            let c = libm::ceil(6.0 * bf / delta);
            let epsilon = scale * libm::exp2(-alpha * bf) / (SQRT_2 * c);
            let half = epsilon / 2.0;
            let closed = |x: u64| scale * libm::exp2(-alpha * x as f64) / (alpha * LN_2);
            let mut bp = libm::floor(libm::log2(2.0 * scale / (alpha * LN_2 * epsilon)) / alpha)
                .max(1.0) as u64;
            while bp > 1 && closed(bp - 1) < half {
                bp -= 1;
            }
            while closed(bp) >= half {
                bp += 1;
            }
            while exponential_tail(bp, alpha, scale) >= half {
                bp += 1;
            }
            (c, Some(epsilon), bp)
        }
    };
    let params = RecoveryParameters {
        b,
        b_prime: b_prime.max(b as u64 + 1),
        c,
        epsilon,
        delta: Some(delta),
    };
    params.validate()?;
    Ok(params)
}
