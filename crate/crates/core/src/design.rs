//! Prime-grouped measurement plan.
//!
//! Level `l` of the plan partitions the integers into residue classes modulo
//! `p_l * q_j` for every q-prime `q_j`, with `p_0 = 1`. Level 0 alone is a
//! K-majority k-strongly selective collection: any element of a set of at most
//! `k` frequencies is alone in its class for more than `2K/3` of the q-primes.
//! The finer levels pin down each isolated frequency modulo `p_l`.
//!
//! Subsets are never materialized; membership is a residue comparison.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::number_theory::{floor_log, generate_primes};

/// Immutable measurement design for length `n` and separation sparsity `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrimePlan {
    n: u64,
    k: u64,
    p_primes: Vec<u64>,
    q_primes: Vec<u64>,
    total_measurements: u64,
}

/// Address of the subset `{ n : n ≡ h (mod p_l q_j) }`.
///
/// `l` indexes levels (`0` means `p_0 = 1`, `l >= 1` the l-th p-prime);
/// `j` is the zero-based q-prime index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetAddress {
    pub l: usize,
    pub j: usize,
    pub h: u64,
}

/// `3 k floor(log_k n) + 1`.
pub fn majority_prime_count(n: u64, k: u64) -> usize {
    (3 * k * floor_log(n, k) as u64 + 1) as usize
}

/// Strict majority test: `count > 2K/3`.
pub fn exceeds_two_thirds(count: usize, q_count: usize) -> bool {
    3 * count > 2 * q_count
}

/// Builds the plan for signal length `n` and sparsity `k`.
pub fn plan_parameters(n: u64, k: u64) -> Result<PrimePlan> {
    if n < 4 {
        return Err(Error::SignalTooShort { n, min: 4 });
    }
    if k < 2 || k >= n {
        return Err(Error::InvalidSparsity { k, n });
    }

    // Smallest m with p_1 ... p_m >= n / k, i.e. k * Π p >= n.
    let mut p_primes = Vec::new();
    let mut product: u128 = 1;
    let mut next = 2;
    loop {
        let p = generate_primes(1, next)[0];
        p_primes.push(p);
        product *= p as u128;
        next = p + 1;
        if product * k as u128 >= n as u128 {
            break;
        }
    }

    let q_count = majority_prime_count(n, k);
    let p_max = *p_primes.last().expect("at least one p-prime");
    let q_primes = generate_primes(q_count, p_max.max(k));

    let p_sum: u128 = 1 + p_primes.iter().map(|&p| p as u128).sum::<u128>();
    let q_sum: u128 = q_primes.iter().map(|&q| q as u128).sum();
    let total = u64::try_from(p_sum * q_sum).map_err(|_| Error::ModulusOverflow)?;

    Ok(PrimePlan {
        n,
        k,
        p_primes,
        q_primes,
        total_measurements: total,
    })
}

impl PrimePlan {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Separation sparsity the plan was built for.
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn p_primes(&self) -> &[u64] {
        &self.p_primes
    }

    pub fn q_primes(&self) -> &[u64] {
        &self.q_primes
    }

    /// Number of p-primes (levels are `0..=m`).
    pub fn m(&self) -> usize {
        self.p_primes.len()
    }

    /// Number of q-primes, `K`.
    pub fn q_count(&self) -> usize {
        self.q_primes.len()
    }

    /// `Σ_j Σ_{l=0..m} p_l q_j`: one sample per measurement on the function path.
    pub fn total_measurements(&self) -> u64 {
        self.total_measurements
    }

    /// `p_l` with `p_0 = 1`.
    pub fn p(&self, l: usize) -> u64 {
        if l == 0 {
            1
        } else {
            self.p_primes[l - 1]
        }
    }

    pub fn q(&self, j: usize) -> u64 {
        self.q_primes[j]
    }

    /// Modulus `p_l q_j` of the `(j, l)` measurement group.
    pub fn modulus(&self, j: usize, l: usize) -> u64 {
        self.p(l) * self.q(j)
    }

    /// `q_1 · p_1 ⋯ p_m`, the smallest CRT range produced during identification.
    pub fn crt_range(&self) -> u128 {
        self.p_primes
            .iter()
            .fold(self.q_primes[0] as u128, |acc, &p| acc * p as u128)
    }

    pub fn contains(&self, addr: SubsetAddress) -> bool {
        addr.l <= self.m() && addr.j < self.q_count() && addr.h < self.modulus(addr.j, addr.l)
    }

    /// Every `(j, l)` group in storage order (j-major).
    pub fn groups(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let levels = self.m() + 1;
        (0..self.q_count()).flat_map(move |j| (0..levels).map(move |l| (j, l)))
    }
}

/// Whether `n` lies in `S_{l,j,h}`; `n` may be negative.
pub fn subset_membership(addr: SubsetAddress, plan: &PrimePlan, n: i64) -> bool {
    let modulus = plan.modulus(addr.j, addr.l) as i128;
    (n as i128).rem_euclid(modulus) as u64 == addr.h
}

/// Residue of a (possibly negative) frequency in `[0, modulus)`.
pub fn residue(n: i64, modulus: u64) -> u64 {
    (n as i128).rem_euclid(modulus as i128) as u64
}

/// For each element of `xs`, the number of q-primes isolating it from the
/// rest of `xs`.
pub fn isolation_counts(plan: &PrimePlan, xs: &[i64]) -> Vec<usize> {
    let mut counts = alloc::vec![0usize; xs.len()];
    let mut residues = alloc::vec![0u64; xs.len()];
    for &q in plan.q_primes() {
        for (r, &x) in residues.iter_mut().zip(xs) {
            *r = residue(x, q);
        }
        for (i, count) in counts.iter_mut().enumerate() {
            let alone = residues
                .iter()
                .enumerate()
                .all(|(other, &r)| other == i || r != residues[i]);
            if alone {
                *count += 1;
            }
        }
    }
    counts
}

/// Isolation counts for `xs`, failing if any count misses the strict
/// two-thirds majority (which would mean the plan itself is wrong).
pub fn verify_k_majority(plan: &PrimePlan, xs: &[i64]) -> Result<Vec<usize>> {
    if xs.len() as u64 > plan.k() {
        return Err(Error::SubsetTooLarge {
            len: xs.len(),
            k: plan.k(),
        });
    }
    let counts = isolation_counts(plan, xs);
    for (&x, &count) in xs.iter().zip(&counts) {
        if !exceeds_two_thirds(count, plan.q_count()) {
            return Err(Error::MajorityViolated {
                element: x,
                count,
                threshold: 2.0 * plan.q_count() as f64 / 3.0,
            });
        }
    }
    Ok(counts)
}

/// All `b in [0, p_l)` such that `S_{l,j,h + b q_j} ∩ xs = {x}`, where
/// `h = x mod q_j`. When `x` is isolated modulo `q_j` there is exactly one.
pub fn lift_offsets(plan: &PrimePlan, xs: &[i64], x: i64, j: usize, l: usize) -> Vec<u64> {
    let q = plan.q(j);
    let h = residue(x, q);
    let modulus = plan.modulus(j, l);
    (0..plan.p(l))
        .filter(|&b| {
            let class = h + b * q;
            let mut members = xs.iter().filter(|&&y| residue(y, modulus) == class);
            matches!((members.next(), members.next()), (Some(&y), None) if y == x)
        })
        .collect()
}
