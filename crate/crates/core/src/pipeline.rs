//! End-to-end recovery: plan, measure, identify, estimate.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::design::{plan_parameters, PrimePlan};
use crate::error::{Error, Result};
use crate::measurement::{
    measure_from_grid, measure_function, measure_vector, Convention, FunctionSampler, Spectrum,
};
use crate::params::RecoveryParameters;
use crate::reconstruct::{candidate_counts, estimate, identify, SparseRepresentation};
use crate::signals::{error_l2, oracle_top_b};

/// Where the measurements come from.
#[derive(Clone, Copy)]
pub enum SignalSource<'a> {
    /// Explicit spectrum, measured by direct residue sums.
    Spectrum(&'a Spectrum),
    /// `values[i] = f(2πi/N)`; off-grid samples are interpolated with `2κ`
    /// neighbours.
    TimeVector {
        values: &'a [Complex64],
        kappa: usize,
    },
    /// Sampleable function with frequencies in the signed window of length `n`.
    Function {
        sampler: &'a dyn FunctionSampler,
        n: u64,
    },
}

impl SignalSource<'_> {
    pub fn len(&self) -> u64 {
        match self {
            SignalSource::Spectrum(s) => s.len(),
            SignalSource::TimeVector { values, .. } => values.len() as u64,
            SignalSource::Function { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn path(&self) -> AcquisitionPath {
        match self {
            SignalSource::Spectrum(_) => AcquisitionPath::Vector,
            SignalSource::TimeVector { .. } => AcquisitionPath::Grid,
            SignalSource::Function { .. } => AcquisitionPath::Function,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AcquisitionPath {
    Vector,
    Function,
    Grid,
}

/// Millisecond clock used to time the phases. The core crate has no clock of
/// its own; [`NoClock`] disables timings.
pub trait Clock {
    fn now_ms(&self) -> Option<f64>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now_ms(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseTimings {
    pub plan_ms: f64,
    pub measure_ms: f64,
    pub identify_ms: f64,
    pub estimate_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrequencyCount {
    pub omega: i64,
    pub count: usize,
}

/// Recovered error against the true spectrum.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleComparison {
    /// `‖Â − R̂‖²`.
    pub error: f64,
    /// `‖Â − R̂_opt‖²`, the best B-term residual.
    pub optimal_error: f64,
    /// `|Â(ω_B)|`.
    pub magnitude_b: f64,
    /// `ε = |Â(ω_B)| / (√2 C)` for this instance.
    pub epsilon: f64,
    /// `B'` the instance actually needs for `C`.
    pub required_b_prime: usize,
    /// `optimal_error + 6 B |Â(ω_B)|² / C`.
    pub excess_bound: f64,
    /// `optimal_error + δ optimal_error`, when `δ` is known.
    pub relative_bound: Option<f64>,
    /// Largest `|Â(ω) − c̃|` over the reported terms.
    pub max_coefficient_error: f64,
    /// The reported frequency set equals an optimal one.
    pub optimal_support: bool,
    pub bound_satisfied: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecoveryReport {
    pub plan: PrimePlan,
    pub params: RecoveryParameters,
    pub path: AcquisitionPath,
    pub convention: Convention,
    pub sample_count: u64,
    pub candidate_total: usize,
    /// Smallest count that passes the majority test.
    pub acceptance_count: usize,
    /// Ascending by frequency.
    pub candidate_counts: Vec<FrequencyCount>,
    pub oracle: Option<OracleComparison>,
    pub timings: Option<PhaseTimings>,
}

/// Recovers the `B` most energetic terms of `src`.
pub fn sparse_approximate(
    src: SignalSource<'_>,
    params: &RecoveryParameters,
) -> Result<(SparseRepresentation, RecoveryReport)> {
    sparse_approximate_timed(src, params, &NoClock)
}

pub fn sparse_approximate_timed(
    src: SignalSource<'_>,
    params: &RecoveryParameters,
    clock: &dyn Clock,
) -> Result<(SparseRepresentation, RecoveryReport)> {
    params.validate()?;
    let n = src.len();
    if params.b_prime >= n {
        return Err(Error::InvalidSparsity {
            k: params.b_prime,
            n,
        });
    }

    let t0 = clock.now_ms();
    let plan = plan_parameters(n, params.b_prime)?;
    let t1 = clock.now_ms();
    let ms = match src {
        SignalSource::Spectrum(s) => measure_vector(s, &plan)?,
        SignalSource::TimeVector { values, kappa } => measure_from_grid(values, &plan, kappa)?,
        SignalSource::Function { sampler, .. } => measure_function(sampler, &plan),
    };
    let t2 = clock.now_ms();
    let candidates = identify(&ms, &plan, params.b_prime)?;
    let t3 = clock.now_ms();
    let rep = estimate(&candidates, &plan, params.b, ms.convention());
    let t4 = clock.now_ms();

    let timings = match (t0, t1, t2, t3, t4) {
        (Some(t0), Some(t1), Some(t2), Some(t3), Some(t4)) => Some(PhaseTimings {
            plan_ms: t1 - t0,
            measure_ms: t2 - t1,
            identify_ms: t3 - t2,
            estimate_ms: t4 - t3,
        }),
        _ => None,
    };
    let report = RecoveryReport {
        acceptance_count: 2 * plan.q_count() / 3 + 1,
        candidate_total: candidates.len(),
        candidate_counts: candidate_counts(&candidates)
            .into_iter()
            .map(|(omega, count)| FrequencyCount { omega, count })
            .collect(),
        sample_count: ms.sample_count(),
        convention: ms.convention(),
        path: src.path(),
        params: *params,
        plan,
        oracle: None,
        timings,
    };
    Ok((rep, report))
}

/// Scores `rep` against the true spectrum.
///
/// The bound checked is the relative one when `params.delta` is set and the
/// excess bound otherwise. Both are compared exactly, without tolerance.
pub fn compare_with_oracle(
    spectrum: &Spectrum,
    rep: &SparseRepresentation,
    params: &RecoveryParameters,
) -> Result<OracleComparison> {
    let b = params.b;
    if b as u64 > spectrum.len() {
        return Err(Error::InvalidParameter("B exceeds the signal length"));
    }
    let sorted = spectrum.sorted_magnitudes();
    let (epsilon, required_b_prime) = crate::params::compute_epsilon_bprime(&sorted, b, params.c)?;
    let magnitude_b = sorted[b - 1];
    let (optimal, optimal_error) = oracle_top_b(spectrum, b);
    let error = error_l2(spectrum, rep);
    let excess_bound = optimal_error + params.excess_bound(magnitude_b);
    let relative_bound = params.delta.map(|d| optimal_error + d * optimal_error);
    let max_coefficient_error = rep
        .terms
        .iter()
        .map(|t| (spectrum.get(t.omega) - t.coeff).norm())
        .fold(0.0, f64::max);

    // Any B-term set whose magnitudes match the optimal ones is optimal.
    let mut got: Vec<f64> = rep
        .terms
        .iter()
        .map(|t| spectrum.get(t.omega).norm())
        .collect();
    got.sort_by(|a, b| b.total_cmp(a));
    let want: Vec<f64> = optimal.terms.iter().map(|t| t.coeff.norm()).collect();
    let mut distinct = rep.frequencies();
    distinct.dedup();
    let optimal_support = got == want && distinct.len() == rep.terms.len();

    let bound_satisfied = match relative_bound {
        Some(bound) => error <= bound,
        None => error <= excess_bound,
    };
    Ok(OracleComparison {
        error,
        optimal_error,
        magnitude_b,
        epsilon,
        required_b_prime,
        excess_bound,
        relative_bound,
        max_coefficient_error,
        optimal_support,
        bound_satisfied,
    })
}
