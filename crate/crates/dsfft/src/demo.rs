//! The `demo-crt` command: locate one tone from three aliased FFTs.

use std::fmt::Write;

use anyhow::Result;
use dsfft_core::{crt_combine, dft_arbitrary_length, ResidueSystem};
use num_complex::Complex64;

pub const FREQUENCY: i64 = 104_134;
pub const MODULI: [u64; 3] = [100, 101, 103];
/// Nyquist-rate samples for a band of width 500,000 around the tone.
pub const NYQUIST_SAMPLES: u64 = 1_000_000;

/// Index of the largest bin of the `n`-point DFT of `f(2πk/n)` with
/// `f(x) = C e^{iωx}`.
fn aliased_residue(omega: i64, coeff: Complex64, n: u64) -> (u64, Complex64) {
    let samples: Vec<Complex64> = (0..n)
        .map(|k| {
            let r = (omega as i128 * k as i128).rem_euclid(n as i128) as f64;
            coeff * Complex64::from_polar(1.0, std::f64::consts::TAU * r / n as f64)
        })
        .collect();
    let spectrum = dft_arbitrary_length(&samples);
    let (h, v) = spectrum
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .expect("non-empty");
    (h as u64, v / n as f64)
}

pub fn transcript() -> Result<String> {
    let coeff = Complex64::new(1.0, 0.5);
    let mut out = String::new();
    writeln!(
        out,
        "tone f(x) = C e^(i w x), w unknown, C = {} + {}i",
        coeff.re, coeff.im
    )?;
    let mut residues = Vec::new();
    for &n in &MODULI {
        let (h, estimate) = aliased_residue(FREQUENCY, coeff, n);
        writeln!(
            out,
            "{n}-point FFT: w ≡ {h} (mod {n}), coefficient estimate {:.6} + {:.6}i",
            estimate.re, estimate.im
        )?;
        residues.push(h);
    }
    let product: u64 = MODULI.iter().product();
    let omega = crt_combine(&ResidueSystem::new(residues, MODULI.to_vec())?)?;
    writeln!(out, "CRT: w = {omega} (unique modulo {product})")?;
    let samples: u64 = MODULI.iter().sum();
    writeln!(
        out,
        "samples: 100 + 101 + 103 = {samples}, versus {NYQUIST_SAMPLES} at the Nyquist rate"
    )?;
    Ok(out)
}
