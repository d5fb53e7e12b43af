//! The `bench` command: sample counts and phase timings across signal sizes.
//!
//! Each trial plants `sparsity - 1` tones at random frequencies of the signed
//! window and recovers them from function samples, so nothing of length N is
//! ever materialized and N can be astronomically large.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use anyhow::{bail, ensure, Result};
use dsfft_core::{
    estimate, identify, measure_function, plan_parameters, Convention, PrimePlan, TrigPolynomial,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const HEADER: &str = "N,K,m,samples,samples/N,identify_ms,estimate_ms";

#[derive(Debug, Clone, Copy)]
pub struct BenchOptions {
    pub sparsity: u64,
    pub trials: usize,
    pub seed: u64,
    /// Skip signal recovery; timing columns stay empty.
    pub plan_only: bool,
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: u64,
    pub q_count: usize,
    pub m: usize,
    pub samples: u64,
    pub identify_ms: Option<f64>,
    pub estimate_ms: Option<f64>,
}

impl BenchRow {
    pub fn samples_per_n(&self) -> f64 {
        self.samples as f64 / self.n as f64
    }

    fn csv_line(&self) -> String {
        let ms = |v: Option<f64>| v.map(|x| format!("{x:.3}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{}",
            self.n,
            self.q_count,
            self.m,
            self.samples,
            self.samples_per_n(),
            ms(self.identify_ms),
            ms(self.estimate_ms)
        )
    }
}

fn planted_tones(n: u64, count: usize, rng: &mut ChaCha8Rng) -> TrigPolynomial {
    let lo = -((n / 2 + n % 2) as i64) + 1;
    let hi = (n / 2) as i64;
    let mut terms: Vec<(i64, Complex64)> = Vec::with_capacity(count);
    while terms.len() < count {
        let omega = rng.gen_range(lo..=hi);
        if terms.iter().any(|&(w, _)| w == omega) {
            continue;
        }
        let c = Complex64::from_polar(rng.gen_range(1.0..=2.0), rng.gen_range(-PI..PI));
        terms.push((omega, c));
    }
    TrigPolynomial::new(terms)
}

fn trial(plan: &PrimePlan, opts: &BenchOptions, seed: u64) -> Result<(f64, f64)> {
    let b = (opts.sparsity - 1) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = planted_tones(plan.n(), b, &mut rng);
    let ms = measure_function(&f, plan);
    let t0 = Instant::now();
    let candidates = identify(&ms, plan, plan.k())?;
    let t1 = Instant::now();
    let rep = estimate(&candidates, plan, b, Convention::SignedWindow);
    let t2 = Instant::now();

    let mut want: Vec<i64> = f.terms().iter().map(|t| t.0).collect();
    want.sort_unstable();
    ensure!(
        rep.frequencies() == want,
        "N={}: recovered {:?}, planted {:?}",
        plan.n(),
        rep.frequencies(),
        want
    );
    Ok(((t1 - t0).as_secs_f64() * 1e3, (t2 - t1).as_secs_f64() * 1e3))
}

pub fn run(n_list: &[u64], opts: &BenchOptions) -> Result<Vec<BenchRow>> {
    if opts.sparsity < 2 {
        bail!("--sparsity must be at least 2");
    }
    let mut rows = Vec::new();
    for (i, &n) in n_list.iter().enumerate() {
        let plan = plan_parameters(n, opts.sparsity)?;
        for t in 0..opts.trials {
            let (identify_ms, estimate_ms) = if opts.plan_only {
                (None, None)
            } else {
                let seed = opts.seed ^ ((i as u64) << 32) ^ t as u64;
                let (a, b) = trial(&plan, opts, seed)?;
                if opts.timings {
                    (Some(a), Some(b))
                } else {
                    (None, None)
                }
            };
            rows.push(BenchRow {
                n,
                q_count: plan.q_count(),
                m: plan.m(),
                samples: plan.total_measurements(),
                identify_ms,
                estimate_ms,
            });
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(mut out: W, rows: &[BenchRow]) -> std::io::Result<()> {
    writeln!(out, "{HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(trials: usize) -> BenchOptions {
        BenchOptions {
            sparsity: 2,
            trials,
            seed: 1,
            plan_only: true,
            timings: false,
        }
    }

    #[test]
    fn plan_only_rows() {
        let rows = run(&[1_000_000, 1_000_000_000, 1_000_000_000_000], &opts(1)).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows
            .windows(2)
            .all(|w| w[1].samples_per_n() < w[0].samples_per_n()));
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().ends_with(",,"));
    }

    #[test]
    fn zero_trials_is_header_only() {
        let rows = run(&[1000], &opts(0)).unwrap();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{HEADER}\n"));
    }

    #[test]
    fn recovers_planted_tones() {
        let o = BenchOptions {
            sparsity: 3,
            plan_only: false,
            timings: true,
            ..opts(2)
        };
        let rows = run(&[5000], &o).unwrap();
        assert!(rows.iter().all(|r| r.identify_ms.is_some()));
    }

    #[test]
    fn rejects_sparsity_one() {
        let o = BenchOptions {
            sparsity: 1,
            ..opts(1)
        };
        assert!(run(&[1000], &o).is_err());
    }
}
