//! Local polynomial interpolation on a periodic uniform grid.
//!
//! `values[i]` holds `f(2πi/N)`. An off-grid value is reconstructed from the
//! `2κ` nearest samples (κ on each side, wrapping around the period) by a
//! degree `2κ - 1` polynomial, evaluated with the barycentric formula. The
//! real and imaginary parts are interpolated independently; since the
//! barycentric form is linear in the data this is the same as interpolating
//! the complex samples directly.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Barycentric weights `(-1)^j C(n-1, j)` for `n` equispaced nodes.
fn equispaced_weights(n: usize) -> Vec<f64> {
    let mut weights = Vec::with_capacity(n);
    let mut binom = 1.0f64;
    for j in 0..n {
        weights.push(if j % 2 == 0 { binom } else { -binom });
        binom = binom * (n - 1 - j) as f64 / (j + 1) as f64;
    }
    weights
}

fn check(values: &[Complex64], kappa: usize) -> Result<()> {
    if kappa == 0 {
        return Err(Error::InvalidParameter("kappa must be positive"));
    }
    let n = values.len() as u64;
    let min = 4 * kappa as u64;
    if n < min {
        return Err(Error::SignalTooShort { n, min });
    }
    Ok(())
}

/// Evaluates the local interpolant at grid coordinate `base + frac`, where
/// `frac` is in `(0, 1)`.
fn evaluate(values: &[Complex64], base: i64, frac: f64, kappa: usize) -> Complex64 {
    let n = values.len() as i64;
    let weights = equispaced_weights(2 * kappa);
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for (j, &w) in weights.iter().enumerate() {
        let offset = j as i64 - (kappa as i64 - 1);
        let node = (base + offset).rem_euclid(n) as usize;
        let c = w / (frac - offset as f64);
        num += values[node] * c;
        den += c;
    }
    num / den
}

/// `f(t)` from the uniform samples in `values` using `2κ` neighbours.
pub fn interpolate_sample(values: &[Complex64], t: f64, kappa: usize) -> Result<Complex64> {
    check(values, kappa)?;
    let n = values.len();
    let turns = t / TAU;
    let u = (turns - libm::floor(turns)) * n as f64;
    let nearest = libm::round(u);
    if (u - nearest).abs() <= 1e-12 * n as f64 {
        return Ok(values[(nearest as usize) % n]);
    }
    let base = libm::floor(u);
    Ok(evaluate(values, base as i64, u - base, kappa))
}

/// `f(2πk/m)` computed with exact rational grid arithmetic. Returns the stored
/// sample untouched when the point falls on the grid.
pub fn interpolate_rational(
    values: &[Complex64],
    k: u64,
    m: u64,
    kappa: usize,
) -> Result<Complex64> {
    check(values, kappa)?;
    let n = values.len() as u128;
    let scaled = k as u128 * n;
    let m = m as u128;
    let base = scaled / m;
    let rem = scaled % m;
    if rem == 0 {
        return Ok(values[(base % n) as usize]);
    }
    Ok(evaluate(values, base as i64, rem as f64 / m as f64, kappa))
}

/// Whether `2πk/m` is a grid point of a length-`n` grid.
pub fn on_grid(k: u64, m: u64, n: u64) -> bool {
    (k as u128 * n as u128).is_multiple_of(m as u128)
}
