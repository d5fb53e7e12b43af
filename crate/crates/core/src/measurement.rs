//! Acquisition of the residue-class sums `Σ_{ω ≡ h mod p_l q_j} Â(ω)`.
//!
//! Three routes produce the same [`MeasurementSet`]:
//!
//! * [`measure_vector`] sums an explicit spectrum directly;
//! * [`measure_function`] samples a function at `p_l q_j` equispaced points
//!   and takes one small DFT per group, exploiting aliasing;
//! * [`measure_from_grid`] does the same when only a uniform length-N grid
//!   of samples exists, interpolating the off-grid points locally.
//!
//! Bins always hold plain sums of Fourier-series coefficients, so the
//! sampled routes divide each length-n DFT by n. For a vector `A` of grid
//! samples this means the recovered coefficients are `DFT(A)/N`, which is the
//! symmetric `1/√N` transform scaled by `1/√N`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::design::{residue, PrimePlan};
use crate::dft::dft_arbitrary_length;
use crate::error::{Error, Result};
use crate::interp::interpolate_rational;

/// How spectrum indices map to integer frequencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Convention {
    /// Index `n` is frequency `n`, window `[0, N)`.
    UnsignedWindow,
    /// Index `n` is the representative of `n mod N` in `(-⌈N/2⌉, ⌊N/2⌋]`.
    SignedWindow,
}

impl Convention {
    /// Frequency stored at index `index` of a length-`n` array.
    pub fn frequency(self, index: u64, n: u64) -> i64 {
        match self {
            Convention::UnsignedWindow => index as i64,
            Convention::SignedWindow => {
                if index <= n / 2 {
                    index as i64
                } else {
                    index as i64 - n as i64
                }
            }
        }
    }

    /// Array index of `omega`, if it lies in the window.
    pub fn index(self, omega: i64, n: u64) -> Option<u64> {
        if self.contains(omega, n) {
            Some(residue(omega, n))
        } else {
            None
        }
    }

    pub fn contains(self, omega: i64, n: u64) -> bool {
        let n = n as i128;
        let omega = omega as i128;
        match self {
            Convention::UnsignedWindow => (0..n).contains(&omega),
            Convention::SignedWindow => {
                let upper = n / 2;
                let lower = -(n - upper);
                omega > lower && omega <= upper
            }
        }
    }

    /// The representative of `x mod modulus` inside the window, if any.
    /// `modulus >= n` guarantees at most one.
    pub fn representative(self, x: u128, modulus: u128, n: u64) -> Option<i64> {
        let n128 = n as u128;
        match self {
            Convention::UnsignedWindow => (x < n128).then_some(x as i64),
            Convention::SignedWindow => {
                let upper = n128 / 2;
                let depth = n128 - upper; // ⌈N/2⌉
                if x <= upper {
                    Some(x as i64)
                } else if modulus - x < depth {
                    Some(-((modulus - x) as i64))
                } else {
                    None
                }
            }
        }
    }
}

/// A length-N spectrum with its frequency convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<Complex64>,
    convention: Convention,
}

impl Spectrum {
    pub fn new(values: Vec<Complex64>, convention: Convention) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SignalTooShort { n: 0, min: 1 });
        }
        Ok(Self { values, convention })
    }

    pub fn zeros(n: usize, convention: Convention) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); n.max(1)],
            convention,
        }
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn frequency(&self, index: usize) -> i64 {
        self.convention.frequency(index as u64, self.len())
    }

    /// Coefficient of `omega`, zero outside the window.
    pub fn get(&self, omega: i64) -> Complex64 {
        match self.convention.index(omega, self.len()) {
            Some(i) => self.values[i as usize],
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn set(&mut self, omega: i64, value: Complex64) -> Result<()> {
        let i = self
            .convention
            .index(omega, self.len())
            .ok_or(Error::InvalidParameter(
                "frequency outside the spectrum window",
            ))?;
        self.values[i as usize] = value;
        Ok(())
    }

    /// `(frequency, coefficient)` for every nonzero entry, in index order.
    pub fn support(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| v.re != 0.0 || v.im != 0.0)
            .map(|(i, &v)| (self.frequency(i), v))
    }

    /// Coefficient magnitudes sorted descending.
    pub fn sorted_magnitudes(&self) -> Vec<f64> {
        let mut mags: Vec<f64> = self.values.iter().map(|v| v.norm()).collect();
        mags.sort_by(|a, b| b.total_cmp(a));
        mags
    }

    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// A periodic function on `[0, 2π)` that can be sampled anywhere.
///
/// Implementations must be pure; measurement may call them from several
/// threads at once.
pub trait FunctionSampler: Sync {
    fn sample(&self, t: f64) -> Complex64;

    /// `f(2πk/m)`. Override when the rational position can be used exactly
    /// (e.g. to reduce large frequencies modulo `m` before forming angles).
    fn sample_grid(&self, k: u64, m: u64) -> Complex64 {
        self.sample(TAU * k as f64 / m as f64)
    }
}

impl<F> FunctionSampler for F
where
    F: Fn(f64) -> Complex64 + Sync,
{
    fn sample(&self, t: f64) -> Complex64 {
        self(t)
    }
}

/// Finite Fourier series `f(x) = Σ c_ω e^{iωx}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial {
    terms: Vec<(i64, Complex64)>,
}

impl TrigPolynomial {
    pub fn new(terms: Vec<(i64, Complex64)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(i64, Complex64)] {
        &self.terms
    }

    /// The series whose coefficients are the nonzero spectrum entries.
    pub fn from_spectrum(spectrum: &Spectrum) -> Self {
        Self::new(spectrum.support().collect())
    }
}

impl FunctionSampler for TrigPolynomial {
    fn sample(&self, t: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(omega, c)| c * Complex64::from_polar(1.0, omega as f64 * t))
            .sum()
    }

    fn sample_grid(&self, k: u64, m: u64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(omega, c)| {
                let r = (residue(omega, m) as u128 * k as u128 % m as u128) as f64;
                c * Complex64::from_polar(1.0, TAU * r / m as f64)
            })
            .sum()
    }
}

/// All measurements of one plan, grouped by `(j, l)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeasurementSet {
    n: u64,
    levels: usize,
    moduli: Vec<u64>,
    bins: Vec<Vec<Complex64>>,
    sample_count: u64,
    convention: Convention,
}

impl MeasurementSet {
    /// Assembles per-group bins listed in [`PrimePlan::groups`] order.
    pub fn from_groups(
        plan: &PrimePlan,
        bins: Vec<Vec<Complex64>>,
        sample_count: u64,
        convention: Convention,
    ) -> Result<Self> {
        let moduli: Vec<u64> = plan.groups().map(|(j, l)| plan.modulus(j, l)).collect();
        if bins.len() != moduli.len() || bins.iter().zip(&moduli).any(|(b, &m)| b.len() as u64 != m)
        {
            return Err(Error::InvalidParameter(
                "bin layout does not match the plan's (j, l) groups",
            ));
        }
        Ok(Self {
            n: plan.n(),
            levels: plan.m() + 1,
            moduli,
            bins,
            sample_count,
            convention,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Bins of group `(j, l)`; index `h` holds the class `h mod p_l q_j`.
    pub fn bins(&self, j: usize, l: usize) -> &[Complex64] {
        &self.bins[j * self.levels + l]
    }

    pub fn groups(&self) -> impl Iterator<Item = ((usize, usize), &[Complex64])> + '_ {
        let levels = self.levels;
        self.bins
            .iter()
            .enumerate()
            .map(move |(i, b)| ((i / levels, i % levels), b.as_slice()))
    }

    pub fn q_count(&self) -> usize {
        self.bins.len() / self.levels
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn modulus(&self, j: usize, l: usize) -> u64 {
        self.moduli[j * self.levels + l]
    }

    pub fn sample_count(&self) -> u64 {
        self.sample_count
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn total_bins(&self) -> usize {
        self.bins.iter().map(Vec::len).sum()
    }

    /// Largest violation of `Σ_b bins[(j,l)][h + b q_j] = bins[(j,0)][h]`
    /// relative to `1 + |bins[(j,0)][h]|`.
    pub fn telescoping_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.q_count() {
            let coarse = self.bins(j, 0);
            let q = coarse.len();
            for l in 1..self.levels {
                let fine = self.bins(j, l);
                let p = fine.len() / q;
                for (h, &c) in coarse.iter().enumerate() {
                    let sum: Complex64 = (0..p).map(|b| fine[h + b * q]).sum();
                    worst = worst.max((sum - c).norm() / (1.0 + c.norm()));
                }
            }
        }
        worst
    }
}

#[cfg(feature = "parallel")]
fn map_groups<T, F>(plan: &PrimePlan, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    let groups: Vec<(usize, usize)> = plan.groups().collect();
    groups.into_par_iter().map(|(j, l)| f(j, l)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_groups<T, F>(plan: &PrimePlan, f: F) -> Vec<T>
where
    F: Fn(usize, usize) -> T,
{
    plan.groups().map(|(j, l)| f(j, l)).collect()
}

/// Direct residue sums over an explicit spectrum.
pub fn measure_vector(spectrum: &Spectrum, plan: &PrimePlan) -> Result<MeasurementSet> {
    if spectrum.len() != plan.n() {
        return Err(Error::SignalLength {
            expected: plan.n(),
            actual: spectrum.len(),
        });
    }
    let support: Vec<(i64, Complex64)> = spectrum.support().collect();
    let bins = map_groups(plan, |j, l| {
        let modulus = plan.modulus(j, l);
        let mut bins = vec![Complex64::new(0.0, 0.0); modulus as usize];
        for &(omega, value) in &support {
            bins[residue(omega, modulus) as usize] += value;
        }
        bins
    });
    MeasurementSet::from_groups(plan, bins, plan.n(), spectrum.convention())
}

/// Aliased measurements of one group: `n = p_l q_j` samples, DFT, divide by `n`.
pub fn measure_group<S: FunctionSampler + ?Sized>(
    f: &S,
    plan: &PrimePlan,
    j: usize,
    l: usize,
) -> Vec<Complex64> {
    let n = plan.modulus(j, l);
    let samples: Vec<Complex64> = (0..n).map(|k| f.sample_grid(k, n)).collect();
    scale_dft(&samples)
}

fn scale_dft(samples: &[Complex64]) -> Vec<Complex64> {
    let inv = 1.0 / samples.len() as f64;
    dft_arbitrary_length(samples)
        .into_iter()
        .map(|v| v * inv)
        .collect()
}

/// Fourier measurements from function samples. Every group is sampled
/// independently, including level 0.
pub fn measure_function<S: FunctionSampler + ?Sized>(f: &S, plan: &PrimePlan) -> MeasurementSet {
    let bins = map_groups(plan, |j, l| measure_group(f, plan, j, l));
    MeasurementSet::from_groups(
        plan,
        bins,
        plan.total_measurements(),
        Convention::SignedWindow,
    )
    .expect("group layout comes from the plan")
}

/// Fourier measurements from a uniform grid `values[i] = f(2πi/N)`.
///
/// Off-grid sample positions are interpolated from the `2κ` nearest grid
/// values. `sample_count` counts grid reads: one per on-grid position, `2κ`
/// per interpolated one.
pub fn measure_from_grid(
    values: &[Complex64],
    plan: &PrimePlan,
    kappa: usize,
) -> Result<MeasurementSet> {
    let n = values.len() as u64;
    if n != plan.n() {
        return Err(Error::SignalLength {
            expected: plan.n(),
            actual: n,
        });
    }
    if kappa == 0 {
        return Err(Error::InvalidParameter("kappa must be positive"));
    }
    if n < 4 * kappa as u64 {
        return Err(Error::SignalTooShort {
            n,
            min: 4 * kappa as u64,
        });
    }
    let groups = map_groups(plan, |j, l| -> Result<(Vec<Complex64>, u64)> {
        let m = plan.modulus(j, l);
        let mut reads = 0u64;
        let mut samples = Vec::with_capacity(m as usize);
        for k in 0..m {
            reads += if crate::interp::on_grid(k, m, n) {
                1
            } else {
                2 * kappa as u64
            };
            samples.push(interpolate_rational(values, k, m, kappa)?);
        }
        Ok((scale_dft(&samples), reads))
    });
    let mut bins = Vec::with_capacity(groups.len());
    let mut reads = 0;
    for group in groups {
        let (b, r) = group?;
        bins.push(b);
        reads += r;
    }
    MeasurementSet::from_groups(plan, bins, reads, Convention::SignedWindow)
}
