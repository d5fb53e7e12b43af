//! Prime generation and Chinese Remainder reconstruction.
//!
//! All CRT arithmetic runs in `u128`: a q-prime times the p-prime product can
//! exceed 64 bits for large signal lengths.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Residues `x mod moduli[i]` describing an integer `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSystem {
    residues: Vec<u64>,
    moduli: Vec<u64>,
}

impl ResidueSystem {
    /// Validates shape and residue ranges. Coprimality is checked by
    /// [`crt_combine`], which needs the gcds anyway.
    pub fn new(residues: Vec<u64>, moduli: Vec<u64>) -> Result<Self> {
        if residues.len() != moduli.len() {
            return Err(Error::LengthMismatch {
                residues: residues.len(),
                moduli: moduli.len(),
            });
        }
        for (&residue, &modulus) in residues.iter().zip(&moduli) {
            if modulus == 0 {
                return Err(Error::ZeroModulus);
            }
            if residue >= modulus {
                return Err(Error::ResidueOutOfRange { residue, modulus });
            }
        }
        Ok(Self { residues, moduli })
    }

    /// Reduces `x` modulo every modulus.
    pub fn from_value(x: u128, moduli: Vec<u64>) -> Result<Self> {
        let residues = moduli
            .iter()
            .map(|&m| if m == 0 { 0 } else { (x % m as u128) as u64 })
            .collect();
        Self::new(residues, moduli)
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }
}

/// Running solution of a growing set of congruences.
///
/// Holds the unique `value` in `[0, modulus)` satisfying every congruence
/// folded in so far. Folding is the pairwise substitution step
/// `x = value + modulus * t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrtAccumulator {
    value: u128,
    modulus: u128,
}

impl Default for CrtAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl CrtAccumulator {
    pub const fn new() -> Self {
        Self {
            value: 0,
            modulus: 1,
        }
    }

    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn modulus(&self) -> u128 {
        self.modulus
    }

    /// Adds the congruence `x ≡ residue (mod modulus)`.
    pub fn fold(&mut self, residue: u64, modulus: u64) -> Result<()> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let m2 = modulus as u128;
        let r2 = residue as u128 % m2;
        let (g, inv) = inverse_mod(self.modulus % m2, m2);
        if g != 1 {
            return Err(Error::NotCoprime {
                a: self.modulus,
                b: m2,
                gcd: gcd_u128(self.modulus, m2),
            });
        }
        let combined = self.modulus.checked_mul(m2).ok_or(Error::ModulusOverflow)?;
        // t = (r2 - value) * inv(modulus) mod m2; every factor is below m2 < 2^64.
        let diff = (r2 + m2 - self.value % m2) % m2;
        let t = diff * inv % m2;
        self.value += self.modulus * t;
        self.modulus = combined;
        Ok(())
    }

    /// Adds `x ≡ residue (mod modulus)` where `modulus` may share factors
    /// with the current modulus. The congruences must agree on the shared
    /// part; the new modulus is the lcm.
    pub fn merge(&mut self, residue: u64, modulus: u64) -> Result<()> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let m2 = modulus as u128;
        let r2 = residue as u128 % m2;
        let g = gcd_u128(self.modulus, m2);
        if !(r2 + g - self.value % g).is_multiple_of(g) {
            return Err(Error::InconsistentResidues { modulus: m2 });
        }
        let reduced = m2 / g;
        let combined = self
            .modulus
            .checked_mul(reduced)
            .ok_or(Error::ModulusOverflow)?;
        let (_, inv) = inverse_mod((self.modulus / g) % reduced, reduced);
        let diff = ((r2 + m2 - self.value % m2) % m2) / g;
        let t = diff % reduced * inv % reduced;
        self.value += self.modulus * t;
        self.modulus = combined;
        Ok(())
    }
}

/// Returns the unique `x` in `[0, Π moduli)` matching every residue.
pub fn crt_combine(rs: &ResidueSystem) -> Result<u128> {
    let mut acc = CrtAccumulator::new();
    for (&r, &m) in rs.residues.iter().zip(&rs.moduli) {
        acc.fold(r, m)?;
    }
    Ok(acc.value)
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd(a: u64, b: u64) -> u64 {
    gcd_u128(a as u128, b as u128) as u64
}

/// Extended Euclid for `a < m`, `m < 2^64`: returns `(gcd, a^{-1} mod m)`.
/// The inverse is meaningful only when the gcd is 1.
fn inverse_mod(a: u128, m: u128) -> (u128, u128) {
    if m == 1 {
        return (1, 0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    let inv = old_s.rem_euclid(m as i128) as u128;
    (old_r as u128, inv)
}

/// Deterministic primality for all `u64` (Miller-Rabin with the first twelve
/// prime bases, which is exact below 3.3e24).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn isqrt(n: u64) -> u64 {
    let mut r = libm::sqrt(n as f64) as u64;
    while r.saturating_mul(r) > n {
        r -= 1;
    }
    while (r + 1).saturating_mul(r + 1) <= n {
        r += 1;
    }
    r
}

fn small_primes_upto(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// The first `count` primes `>= lower_bound`, ascending.
///
/// Segmented sieve over windows of doubling width until enough primes are
/// collected.
pub fn generate_primes(count: usize, lower_bound: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut lo = lower_bound.max(2);
    let mut width: u64 = 1024.max(count as u64 * 16);
    while out.len() < count {
        let hi = lo.saturating_add(width);
        let base = small_primes_upto(isqrt(hi - 1));
        let mut composite = vec![false; (hi - lo) as usize];
        for &p in &base {
            let first = (lo.div_ceil(p) * p).max(p * p);
            let mut multiple = first;
            while multiple < hi {
                composite[(multiple - lo) as usize] = true;
                multiple += p;
            }
        }
        for (offset, &c) in composite.iter().enumerate() {
            if !c {
                out.push(lo + offset as u64);
                if out.len() == count {
                    break;
                }
            }
        }
        lo = hi;
        width = width.saturating_mul(2);
    }
    out
}

/// Largest `e` with `base^e <= n` (integer loop, no floating log).
pub fn floor_log(n: u64, base: u64) -> u32 {
    assert!(base >= 2, "logarithm base must be at least 2");
    let mut e = 0;
    let mut power: u128 = base as u128;
    while power <= n as u128 {
        e += 1;
        power *= base as u128;
    }
    e
}
