//! Unnormalized DFT of arbitrary length.
//!
//! Measurement lengths are products `p_l q_j` of two primes, so the transform
//! cannot assume smooth sizes. Short inputs use the direct sum; longer ones go
//! through Bluestein's chirp-z identity on a power-of-two FFT.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

/// Lengths below this use the O(n²) sum.
pub const NAIVE_THRESHOLD: usize = 256;

/// `X[h] = Σ_k x[k] e^{-2πi hk/n}`.
pub fn dft_arbitrary_length(samples: &[Complex64]) -> Vec<Complex64> {
    dft_with_threshold(samples, NAIVE_THRESHOLD)
}

pub fn dft_with_threshold(samples: &[Complex64], threshold: usize) -> Vec<Complex64> {
    let n = samples.len();
    if n == 0 {
        return Vec::new();
    }
    if n < threshold {
        naive_dft(samples)
    } else if n.is_power_of_two() {
        let mut buf = samples.to_vec();
        fft_pow2(&mut buf, false);
        buf
    } else {
        bluestein(samples)
    }
}

/// Inverse without the `1/n` factor: `x[k] = Σ_h X[h] e^{+2πi hk/n}`.
pub fn idft_unnormalized(spectrum: &[Complex64]) -> Vec<Complex64> {
    let conj: Vec<Complex64> = spectrum.iter().map(|c| c.conj()).collect();
    dft_arbitrary_length(&conj)
        .into_iter()
        .map(|c| c.conj())
        .collect()
}

/// `e^{-2πi r/n}` with the exponent reduced exactly.
fn twiddle(r: u64, n: u64) -> Complex64 {
    let r = r % n;
    let angle = -2.0 * PI * r as f64 / n as f64;
    Complex64::new(libm::cos(angle), libm::sin(angle))
}

pub fn naive_dft(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len() as u64;
    let roots: Vec<Complex64> = (0..n).map(|r| twiddle(r, n)).collect();
    (0..n)
        .map(|h| {
            samples
                .iter()
                .enumerate()
                .map(|(k, &x)| x * roots[((h * k as u64) % n) as usize])
                .sum()
        })
        .collect()
}

fn bluestein(samples: &[Complex64]) -> Vec<Complex64> {
    let n = samples.len();
    let two_n = 2 * n as u64;
    // chirp[k] = e^{-πi k²/n}; k² reduced mod 2n keeps the angle small.
    let chirp: Vec<Complex64> = (0..n as u64)
        .map(|k| {
            let r = (k * k) % two_n;
            let angle = -PI * r as f64 / n as f64;
            Complex64::new(libm::cos(angle), libm::sin(angle))
        })
        .collect();

    let size = (2 * n - 1).next_power_of_two();
    let mut a = vec![Complex64::new(0.0, 0.0); size];
    for (slot, (&x, &w)) in a.iter_mut().zip(samples.iter().zip(&chirp)) {
        *slot = x * w;
    }
    let mut b = vec![Complex64::new(0.0, 0.0); size];
    b[0] = chirp[0].conj();
    for k in 1..n {
        let c = chirp[k].conj();
        b[k] = c;
        b[size - k] = c;
    }

    fft_pow2(&mut a, false);
    fft_pow2(&mut b, false);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft_pow2(&mut a, true);
    let scale = 1.0 / size as f64;
    (0..n).map(|k| a[k] * scale * chirp[k]).collect()
}

/// In-place iterative radix-2 FFT; `inverse` flips the sign, no scaling.
fn fft_pow2(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    if n <= 1 {
        return;
    }
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            buf.swap(i, j);
        }
    }
    let sign = if inverse { -1.0 } else { 1.0 };
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let roots: Vec<Complex64> = (0..half as u64)
            .map(|r| {
                let w = twiddle(r, len as u64);
                Complex64::new(w.re, sign * w.im)
            })
            .collect();
        for start in (0..n).step_by(len) {
            for (k, &w) in roots.iter().enumerate() {
                let u = buf[start + k];
                let v = buf[start + k + half] * w;
                buf[start + k] = u + v;
                buf[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}
