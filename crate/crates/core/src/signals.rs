//! Test signals for the compressibility classes and the brute-force oracle
//! used to score recoveries.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dft::idft_unnormalized;
use crate::error::{Error, Result};
use crate::measurement::{Convention, Spectrum};
use crate::reconstruct::{SparseRepresentation, Term};

pub use crate::interp::interpolate_sample;

/// Decay law of the sorted coefficient magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum CompressibilityModel {
    /// `terms` nonzero coefficients with magnitudes in `[1, 2]`.
    ExactSparse { terms: usize },
    /// `|Â(ω_b)| = c b^{-p}`, `p > 1`.
    Algebraic { p: f64, c: f64 },
    /// `|Â(ω_b)| = c 2^{-αb}`, `α > 0`.
    Exponential { alpha: f64, c: f64 },
}

impl CompressibilityModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CompressibilityModel::ExactSparse { .. } => Ok(()),
            CompressibilityModel::Algebraic { p, c } => {
                if p.is_nan() || p <= 1.0 {
                    Err(Error::InvalidParameter("algebraic decay needs p > 1"))
                } else if c.is_nan() || c <= 0.0 {
                    Err(Error::InvalidParameter("decay constant c must be positive"))
                } else {
                    Ok(())
                }
            }
            CompressibilityModel::Exponential { alpha, c } => {
                if alpha.is_nan() || alpha <= 0.0 {
                    Err(Error::InvalidParameter("exponential decay needs alpha > 0"))
                } else if c.is_nan() || c <= 0.0 {
                    Err(Error::InvalidParameter("decay constant c must be positive"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Magnitude of the rank-`b` coefficient (one-based), for the decaying
    /// models.
    pub fn magnitude(&self, b: usize) -> Option<f64> {
        match *self {
            CompressibilityModel::ExactSparse { .. } => None,
            CompressibilityModel::Algebraic { p, c } => Some(c * libm::pow(b as f64, -p)),
            CompressibilityModel::Exponential { alpha, c } => {
                Some(c * libm::exp2(-alpha * b as f64))
            }
        }
    }
}

fn unit_phase(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(-PI..PI))
}

/// Random length-`n` spectrum following `model`, deterministic in `seed`.
///
/// Positions are uniform over the array, so with the signed convention the
/// energetic frequencies land on both sides of zero.
pub fn gen_signal(
    n: usize,
    model: &CompressibilityModel,
    seed: u64,
    convention: Convention,
) -> Result<Spectrum> {
    if n < 4 {
        return Err(Error::SignalTooShort {
            n: n as u64,
            min: 4,
        });
    }
    model.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = Spectrum::zeros(n, convention);
    match *model {
        CompressibilityModel::ExactSparse { terms } => {
            if terms > n {
                return Err(Error::InvalidParameter(
                    "more sparse terms than frequencies",
                ));
            }
            let positions = rand::seq::index::sample(&mut rng, n, terms);
            let values = spectrum.values_mut();
            for i in positions.iter() {
                let magnitude = rng.gen_range(1.0..=2.0);
                values[i] = unit_phase(&mut rng) * magnitude;
            }
        }
        _ => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let values = spectrum.values_mut();
            for (rank, &i) in order.iter().enumerate() {
                let magnitude = model.magnitude(rank + 1).expect("decaying model");
                values[i] = unit_phase(&mut rng) * magnitude;
            }
        }
    }
    Ok(spectrum)
}

/// Symmetric DFT `Â(ω) = N^{-1/2} Σ_j e^{-2πiωj/N} A(j)`, evaluated directly.
pub fn oracle_dft(time: &[Complex64]) -> Vec<Complex64> {
    direct_transform(time, -1.0)
}

/// Inverse of [`oracle_dft`].
pub fn oracle_idft(spectrum: &[Complex64]) -> Vec<Complex64> {
    direct_transform(spectrum, 1.0)
}

fn direct_transform(input: &[Complex64], sign: f64) -> Vec<Complex64> {
    let n = input.len();
    let scale = 1.0 / libm::sqrt(n as f64);
    let roots: Vec<Complex64> = (0..n)
        .map(|r| Complex64::from_polar(1.0, sign * TAU * r as f64 / n as f64))
        .collect();
    (0..n)
        .map(|w| {
            let sum: Complex64 = input
                .iter()
                .enumerate()
                .map(|(j, &a)| a * roots[(w * j) % n])
                .sum();
            sum * scale
        })
        .collect()
}

/// Grid samples `f(2πj/N)` of the Fourier series whose coefficients are the
/// spectrum entries (the band-limited interpolant, so signed frequencies
/// matter only off the grid).
pub fn synthesize_grid(spectrum: &Spectrum) -> Vec<Complex64> {
    idft_unnormalized(spectrum.values())
}

/// Best `b`-term representation and its residual energy.
///
/// Ties in magnitude are broken by ascending frequency; the residual does
/// not depend on the choice.
pub fn oracle_top_b(spectrum: &Spectrum, b: usize) -> (SparseRepresentation, f64) {
    let n = spectrum.values().len();
    let mut order: Vec<usize> = (0..n).collect();
    let values = spectrum.values();
    order.sort_by(|&x, &y| {
        values[y]
            .norm()
            .total_cmp(&values[x].norm())
            .then(spectrum.frequency(x).cmp(&spectrum.frequency(y)))
    });
    let keep = b.min(n);
    let terms = order[..keep]
        .iter()
        .map(|&i| Term {
            omega: spectrum.frequency(i),
            coeff: values[i],
        })
        .collect();
    // Smallest terms first for an accurate sum.
    let tail: f64 = order[keep..]
        .iter()
        .rev()
        .map(|&i| values[i].norm_sqr())
        .sum();
    (
        SparseRepresentation {
            terms,
            convention: spectrum.convention(),
            b,
        },
        tail,
    )
}

/// Interpolation half-width for target accuracy `δ` on a signal whose
/// coefficients decay like `b^{-p}`: `⌈(log₂(1/δ) + p) / 2⌉ + 1`.
pub fn default_kappa(delta: f64, p: f64) -> Result<usize> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter("delta must lie in (0, 1)"));
    }
    if p.is_nan() || p < 0.0 {
        return Err(Error::InvalidParameter(
            "decay exponent must be non-negative",
        ));
    }
    Ok(libm::ceil((libm::log2(1.0 / delta) + p) / 2.0) as usize + 1)
}

/// `Σ_ω |Â(ω) - R̂(ω)|²` with the representation zero-extended. Terms
/// outside the window count against a zero coefficient.
pub fn error_l2(spectrum: &Spectrum, rep: &SparseRepresentation) -> f64 {
    let n = spectrum.len();
    let convention = spectrum.convention();
    let mut approx = alloc::vec![Complex64::new(0.0, 0.0); n as usize];
    let mut outside = 0.0;
    for t in &rep.terms {
        match convention.index(t.omega, n) {
            Some(i) => approx[i as usize] += t.coeff,
            None => outside += t.coeff.norm_sqr(),
        }
    }
    // Summed term by term (no cancellation), so exact comparisons are fair.
    let inside: f64 = spectrum
        .values()
        .iter()
        .zip(&approx)
        .map(|(a, r)| (a - r).norm_sqr())
        .sum();
    inside + outside
}
