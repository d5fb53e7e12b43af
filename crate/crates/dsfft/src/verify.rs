//! The `verify` command: randomized checks of the structural guarantees.

use std::collections::HashSet;

use dsfft_core::design::{lift_offsets, residue, verify_k_majority};
use dsfft_core::dft::naive_dft;
use dsfft_core::params::compute_epsilon_bprime;
use dsfft_core::reconstruct::candidate_counts;
use dsfft_core::{
    compare_with_oracle, crt_combine, dft_arbitrary_length, estimate, gen_signal, generate_primes,
    identify, measure_function, measure_vector, plan_parameters, select_parameters,
    sparse_approximate, CompressibilityModel, Convention, RecoveryParameters, ResidueSystem,
    SignalSource, Spectrum, TrigPolynomial,
};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn(&mut ChaCha8Rng) -> Result<(), String>;

pub const SUITES: [(&str, Check); 8] = [
    ("crt_round_trip", crt_round_trip),
    ("k_majority_and_lift", k_majority_and_lift),
    ("refinement_telescoping", refinement_telescoping),
    ("aliasing_equivalence", aliasing_equivalence),
    ("dft_vs_direct_sum", dft_vs_direct_sum),
    ("exact_sparse_recovery", exact_sparse_recovery),
    ("excess_error_bound", excess_error_bound),
    ("relative_error_bound", relative_error_bound),
];

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn run(trials: usize, seed: u64) -> Vec<SuiteOutcome> {
    SUITES
        .iter()
        .enumerate()
        .map(|(i, &(name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let mut failures = 0;
            let mut first_failure = None;
            for t in 0..trials {
                if let Err(msg) = check(&mut rng) {
                    failures += 1;
                    first_failure.get_or_insert_with(|| format!("trial {t}: {msg}"));
                }
            }
            SuiteOutcome {
                name,
                trials,
                failures,
                first_failure,
            }
        })
        .collect()
}

pub fn summary(outcomes: &[SuiteOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        if o.passed() {
            out.push_str(&format!("PASS {} ({} trials)\n", o.name, o.trials));
        } else {
            out.push_str(&format!(
                "FAIL {} ({}/{} trials failed; {})\n",
                o.name,
                o.failures,
                o.trials,
                o.first_failure.as_deref().unwrap_or("")
            ));
        }
    }
    let failed = outcomes.iter().filter(|o| !o.passed()).count();
    if failed == 0 {
        out.push_str(&format!("all {} suites passed\n", outcomes.len()));
    } else {
        out.push_str(&format!("{failed} of {} suites failed\n", outcomes.len()));
    }
    out
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn crt_round_trip(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let count = rng.gen_range(1..=6);
    let moduli = generate_primes(count, rng.gen_range(2..100_000));
    let product: u128 = moduli.iter().map(|&m| m as u128).product();
    let x = rng.gen_range(0..product);
    let rs = ResidueSystem::from_value(x, moduli.clone()).map_err(|e| e.to_string())?;
    let got = crt_combine(&rs).map_err(|e| e.to_string())?;
    check(got < product, || {
        format!("{got} not reduced modulo {product}")
    })?;
    for &m in &moduli {
        check(got % m as u128 == x % m as u128, || {
            format!("{got} != {x} mod {m}")
        })?;
    }
    Ok(())
}

fn k_majority_and_lift(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (n, k) = *[(1000u64, 5u64), (512, 2), (30030, 4)]
        .choose(rng)
        .expect("non-empty");
    let plan = plan_parameters(n, k).map_err(|e| e.to_string())?;
    let size = rng.gen_range(1..=k as usize);
    let mut xs = HashSet::new();
    while xs.len() < size {
        xs.insert(rng.gen_range(0..n as i64));
    }
    let xs: Vec<i64> = xs.into_iter().collect();
    verify_k_majority(&plan, &xs).map_err(|e| format!("plan ({n},{k}): {e}"))?;
    for &x in &xs {
        for j in 0..plan.q_count() {
            let q = plan.q(j);
            if xs
                .iter()
                .filter(|&&y| residue(y, q) == residue(x, q))
                .count()
                != 1
            {
                continue;
            }
            for l in 1..=plan.m() {
                let offsets = lift_offsets(&plan, &xs, x, j, l);
                check(offsets.len() == 1, || {
                    format!("plan ({n},{k}) x={x} j={j} l={l}: {} lifts", offsets.len())
                })?;
            }
        }
    }
    Ok(())
}

fn random_spectrum(rng: &mut ChaCha8Rng, n: usize, terms: usize) -> Spectrum {
    let mut s = Spectrum::zeros(n, Convention::SignedWindow);
    for _ in 0..terms {
        let i = rng.gen_range(0..n);
        s.values_mut()[i] = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    }
    s
}

fn refinement_telescoping(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let plan = plan_parameters(1000, 3).map_err(|e| e.to_string())?;
    let terms = rng.gen_range(0..20);
    let s = random_spectrum(rng, 1000, terms);
    let ms = measure_vector(&s, &plan).map_err(|e| e.to_string())?;
    let defect = ms.telescoping_defect();
    check(defect <= 1e-9, || format!("defect {defect:e}"))
}

fn aliasing_equivalence(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let plan = plan_parameters(1000, 2).map_err(|e| e.to_string())?;
    let terms = rng.gen_range(1..8);
    let s = random_spectrum(rng, 1000, terms);
    let f = TrigPolynomial::from_spectrum(&s);
    let a = measure_vector(&s, &plan).map_err(|e| e.to_string())?;
    let b = measure_function(&f, &plan);
    for (((j, l), x), (_, y)) in a.groups().zip(b.groups()) {
        for (h, (u, v)) in x.iter().zip(y).enumerate() {
            let d = (u - v).norm();
            check(d <= 1e-9 * (1.0 + u.norm()), || {
                format!("bin ({j},{l},{h}) differs by {d:e}")
            })?;
        }
    }
    Ok(())
}

fn dft_vs_direct_sum(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(2..=2000);
    let x: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let l1: f64 = x.iter().map(|v| v.norm()).sum();
    let fast = dft_arbitrary_length(&x);
    let slow = naive_dft(&x);
    let err = fast
        .iter()
        .zip(&slow)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    check(err <= 1e-10 * l1, || format!("length {n}: error {err:e}"))
}

fn exact_sparse_recovery(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = *[210usize, 1000, 4096].choose(rng).expect("non-empty");
    let b = *[1usize, 2, 3, 5].choose(rng).expect("non-empty");
    let s = gen_signal(
        n,
        &CompressibilityModel::ExactSparse { terms: b },
        rng.gen(),
        Convention::SignedWindow,
    )
    .map_err(|e| e.to_string())?;
    let params = RecoveryParameters::new(b, b as u64 + 1, 1.0).map_err(|e| e.to_string())?;
    let (rep, _) =
        sparse_approximate(SignalSource::Spectrum(&s), &params).map_err(|e| e.to_string())?;
    let mut want: Vec<i64> = s.support().map(|(w, _)| w).collect();
    want.sort_unstable();
    check(rep.frequencies() == want, || {
        format!("N={n}: got {:?}, want {want:?}", rep.frequencies())
    })?;
    for t in &rep.terms {
        let err = (t.coeff - s.get(t.omega)).norm();
        check(err < 1e-9, || {
            format!("N={n} ω={}: coefficient error {err:e}", t.omega)
        })?;
    }
    Ok(())
}

fn excess_error_bound(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (n, b, c) = (1024usize, 2usize, 10.0);
    let s = gen_signal(
        n,
        &CompressibilityModel::Algebraic { p: 3.0, c: 1.0 },
        rng.gen(),
        Convention::SignedWindow,
    )
    .map_err(|e| e.to_string())?;
    let sorted = s.sorted_magnitudes();
    let (eps, b_prime) = compute_epsilon_bprime(&sorted, b, c).map_err(|e| e.to_string())?;
    let params = RecoveryParameters::new(b, b_prime as u64, c).map_err(|e| e.to_string())?;
    let plan = plan_parameters(n as u64, b_prime as u64).map_err(|e| e.to_string())?;
    let ms = measure_vector(&s, &plan).map_err(|e| e.to_string())?;
    let candidates = identify(&ms, &plan, b_prime as u64).map_err(|e| e.to_string())?;
    let counts = candidate_counts(&candidates);
    for (w, v) in s.support() {
        if v.norm() >= sorted[b - 1] {
            let count = counts.iter().find(|c| c.0 == w).map_or(0, |c| c.1);
            check(3 * count > 2 * plan.q_count(), || {
                format!("ω={w} reconstructed {count} of {} times", plan.q_count())
            })?;
        }
    }
    let rep = estimate(&candidates, &plan, b, Convention::SignedWindow);
    for t in &rep.terms {
        let err = (t.coeff - s.get(t.omega)).norm();
        check(err < eps, || {
            format!("ω={}: coefficient error {err:e} >= ε = {eps:e}", t.omega)
        })?;
    }
    let cmp = compare_with_oracle(&s, &rep, &params).map_err(|e| e.to_string())?;
    check(cmp.error <= cmp.excess_bound, || {
        format!("error {:e} > bound {:e}", cmp.error, cmp.excess_bound)
    })
}

fn relative_error_bound(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (model, delta) = *[
        (CompressibilityModel::Algebraic { p: 3.0, c: 1.0 }, 0.1),
        (
            CompressibilityModel::Exponential { alpha: 1.0, c: 1.0 },
            0.25,
        ),
    ]
    .choose(rng)
    .expect("non-empty");
    let params = select_parameters(2, delta, &model).map_err(|e| e.to_string())?;
    let s =
        gen_signal(1024, &model, rng.gen(), Convention::SignedWindow).map_err(|e| e.to_string())?;
    let (rep, _) =
        sparse_approximate(SignalSource::Spectrum(&s), &params).map_err(|e| e.to_string())?;
    let cmp = compare_with_oracle(&s, &rep, &params).map_err(|e| e.to_string())?;
    let bound = cmp.optimal_error + delta * cmp.optimal_error;
    check(cmp.error <= bound, || {
        format!("{model:?}: error {:e} > bound {bound:e}", cmp.error)
    })
}
