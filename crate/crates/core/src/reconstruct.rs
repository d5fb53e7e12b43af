//! Identification by residue voting and estimation by medians.
//!
//! For each q-prime the `k + 1` largest coarse bins are treated as anchors.
//! An anchor sitting on an isolated energetic frequency is matched, at every
//! finer level, by exactly one refinement bin of nearly the same value; the
//! position of that bin gives the frequency modulo `p_l`, and CRT assembles
//! the residues into a candidate. A frequency that is reconstructed by more
//! than two thirds of the q-primes is accepted, and its coefficient is the
//! coordinate-wise median of the anchors that produced it.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::design::{exceeds_two_thirds, PrimePlan};
use crate::error::{Error, Result};
use crate::measurement::{Convention, MeasurementSet};
use crate::number_theory::CrtAccumulator;

/// One reconstructed frequency vote.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Candidate {
    pub omega: i64,
    /// Zero-based q-prime index.
    pub j: usize,
    /// One-based rank of the anchor among the coarse bins of `q_j`.
    pub rank: usize,
    pub anchor: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Term {
    pub omega: i64,
    pub coeff: Complex64,
}

/// At most `b` distinct `(frequency, coefficient)` pairs.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SparseRepresentation {
    pub terms: Vec<Term>,
    pub convention: Convention,
    pub b: usize,
}

impl SparseRepresentation {
    pub fn empty(b: usize, convention: Convention) -> Self {
        Self {
            terms: Vec::new(),
            convention,
            b,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, omega: i64) -> Option<Complex64> {
        self.terms
            .iter()
            .find(|t| t.omega == omega)
            .map(|t| t.coeff)
    }

    /// Frequencies in ascending order.
    pub fn frequencies(&self) -> Vec<i64> {
        let mut f: Vec<i64> = self.terms.iter().map(|t| t.omega).collect();
        f.sort_unstable();
        f
    }
}

/// Coarse bins of one q-prime ranked by magnitude; equal magnitudes keep
/// ascending residue order.
fn ranked_residues(coarse: &[Complex64], take: usize) -> Vec<usize> {
    let mags: Vec<f64> = coarse.iter().map(|v| v.norm()).collect();
    let mut order: Vec<usize> = (0..coarse.len()).collect();
    order.sort_by(|&a, &b| mags[b].total_cmp(&mags[a]));
    order.truncate(take);
    order
}

fn identify_prime(
    ms: &MeasurementSet,
    plan: &PrimePlan,
    j: usize,
    take: usize,
) -> Result<Vec<Candidate>> {
    let coarse = ms.bins(j, 0);
    let q = coarse.len();
    let mut out = Vec::with_capacity(take);
    for (rank, r0) in ranked_residues(coarse, take).into_iter().enumerate() {
        let anchor = coarse[r0];
        let mut acc = CrtAccumulator::new();
        acc.merge(r0 as u64, q as u64)?;
        for l in 1..ms.levels() {
            let fine = ms.bins(j, l);
            let p = fine.len() / q;
            let mut t_min = 0;
            let mut best = f64::INFINITY;
            for t in 0..p {
                let d = (anchor - fine[r0 + t * q]).norm();
                if d < best {
                    best = d;
                    t_min = t;
                }
            }
            // The chosen class modulo p_l q_j carries the residue modulo p_l;
            // merging the full class also covers p_l = q_j.
            acc.merge((r0 + t_min * q) as u64, fine.len() as u64)?;
        }
        if let Some(omega) = ms
            .convention()
            .representative(acc.value(), acc.modulus(), plan.n())
        {
            out.push(Candidate {
                omega,
                j,
                rank: rank + 1,
                anchor,
            });
        }
    }
    Ok(out)
}

/// Candidate frequencies from every q-prime, duplicates kept.
pub fn identify(ms: &MeasurementSet, plan: &PrimePlan, b_prime: u64) -> Result<Vec<Candidate>> {
    if plan.k() != b_prime {
        return Err(Error::PlanSparsityMismatch {
            plan_k: plan.k(),
            b_prime,
        });
    }
    if ms.n() != plan.n() || ms.q_count() != plan.q_count() || ms.levels() != plan.m() + 1 {
        return Err(Error::InvalidParameter(
            "measurement set was not acquired with this plan",
        ));
    }
    let per_prime = |j: usize| {
        let take = (b_prime as usize + 1).min(plan.q(j) as usize);
        identify_prime(ms, plan, j, take)
    };

    #[cfg(feature = "parallel")]
    let batches: Vec<Result<Vec<Candidate>>> = {
        use rayon::prelude::*;
        (0..plan.q_count()).into_par_iter().map(per_prime).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let batches: Vec<Result<Vec<Candidate>>> = (0..plan.q_count()).map(per_prime).collect();

    let mut all = Vec::new();
    for batch in batches {
        all.extend(batch?);
    }
    Ok(all)
}

/// Median of a non-empty slice; mean of the middle pair for even lengths.
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty set");
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Median of real parts plus `i` times median of imaginary parts.
pub fn coordinate_median(values: &[Complex64]) -> Complex64 {
    let mut re: Vec<f64> = values.iter().map(|v| v.re).collect();
    let mut im: Vec<f64> = values.iter().map(|v| v.im).collect();
    Complex64::new(median(&mut re), median(&mut im))
}

/// How many times each frequency was reconstructed, ascending by frequency.
pub fn candidate_counts(candidates: &[Candidate]) -> Vec<(i64, usize)> {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for c in candidates {
        *counts.entry(c.omega).or_default() += 1;
    }
    counts.into_iter().collect()
}

/// Accepts frequencies reconstructed by more than `2K/3` q-primes, estimates
/// each by the coordinate-wise median of its anchors and keeps the `b`
/// largest. `convention` only labels the output.
pub fn estimate(
    candidates: &[Candidate],
    plan: &PrimePlan,
    b: usize,
    convention: Convention,
) -> SparseRepresentation {
    let mut anchors: BTreeMap<i64, Vec<Complex64>> = BTreeMap::new();
    for c in candidates {
        anchors.entry(c.omega).or_default().push(c.anchor);
    }
    let mut terms: Vec<Term> = anchors
        .into_iter()
        .filter(|(_, votes)| exceeds_two_thirds(votes.len(), plan.q_count()))
        .map(|(omega, votes)| Term {
            omega,
            coeff: coordinate_median(&votes),
        })
        .collect();
    // BTreeMap order makes ascending frequency the tie-break.
    terms.sort_by(|a, b| b.coeff.norm().total_cmp(&a.coeff.norm()));
    terms.truncate(b);
    SparseRepresentation {
        terms,
        convention,
        b,
    }
}
