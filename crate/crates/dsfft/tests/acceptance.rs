//! Acceptance gate: ten end-to-end criteria, one PASS/FAIL line each.
//!
//! Reference values are computed here from first principles (direct sums,
//! trial division, brute-force residue counts) rather than through the
//! library's own helpers.

use std::collections::HashMap;
use std::f64::consts::{SQRT_2, TAU};
use std::time::{Duration, Instant};

use dsfft::demo;
use dsfft_core::{
    crt_combine, dft_arbitrary_length, gen_signal, measure_from_grid, measure_function,
    measure_vector, plan_parameters, select_parameters, sparse_approximate, CompressibilityModel,
    Convention, PrimePlan, RecoveryParameters, ResidueSystem, SignalSource, SparseRepresentation,
    Spectrum, TrigPolynomial,
};
use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

fn signed(index: usize, n: usize) -> i64 {
    if index <= n / 2 {
        index as i64
    } else {
        index as i64 - n as i64
    }
}

fn frequency(s: &Spectrum, index: usize) -> i64 {
    match s.convention() {
        Convention::SignedWindow => signed(index, s.values().len()),
        Convention::UnsignedWindow => index as i64,
    }
}

/// `Σ_ω |Â(ω) − R̂(ω)|²`, accumulated term by term.
fn squared_error(s: &Spectrum, rep: &SparseRepresentation) -> f64 {
    let mut by_freq: HashMap<i64, Complex64> = HashMap::new();
    for t in &rep.terms {
        *by_freq.entry(t.omega).or_default() += t.coeff;
    }
    let mut total = 0.0;
    for (i, &a) in s.values().iter().enumerate() {
        let r = by_freq.remove(&frequency(s, i)).unwrap_or_default();
        total += (a - r).norm_sqr();
    }
    total + by_freq.values().map(|c| c.norm_sqr()).sum::<f64>()
}

/// Magnitudes in descending order.
fn sorted_magnitudes(s: &Spectrum) -> Vec<f64> {
    let mut m: Vec<f64> = s.values().iter().map(|v| v.norm()).collect();
    m.sort_by(|a, b| b.partial_cmp(a).unwrap());
    m
}

/// `Σ_{b > B} |Â(ω_b)|²`, smallest terms first.
fn tail_energy(sorted: &[f64], b: usize) -> f64 {
    sorted[b..].iter().rev().map(|m| m * m).sum()
}

fn demo_crt() -> Outcome {
    let start = Instant::now();
    let rs = ResidueSystem::new(vec![34, 3, 1], vec![100, 101, 103]).map_err(|e| e.to_string())?;
    let x = crt_combine(&rs).map_err(|e| e.to_string())?;
    let transcript = demo::transcript().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();

    ensure(x == 104_134, || format!("crt_combine gave {x}"))?;
    ensure(x % 100 == 34 && x % 101 == 3 && x % 103 == 1, || {
        "congruences fail".into()
    })?;
    let scan = (0..100u128 * 101 * 103).find(|v| v % 100 == 34 && v % 101 == 3 && v % 103 == 1);
    ensure(scan == Some(104_134), || {
        format!("linear scan found {scan:?}")
    })?;
    ensure(transcript.contains("104134"), || {
        "transcript lacks 104134".into()
    })?;
    ensure(transcript.contains("100 + 101 + 103 = 304"), || {
        "transcript lacks the 304-sample total".into()
    })?;
    ensure(elapsed < Duration::from_millis(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "104134 from 304 samples in {:.3} ms",
        elapsed.as_secs_f64() * 1e3
    ))
}

fn exact_sparse_recovery() -> Outcome {
    let start = Instant::now();
    let sizes = [210usize, 1000, 4096, 30030];
    let sparsities = [1usize, 2, 3, 5];
    let mut worst = 0.0f64;
    for trial in 0..200u64 {
        let n = sizes[trial as usize % 4];
        let b = sparsities[(trial as usize / 4) % 4];
        let convention = if trial % 2 == 0 {
            Convention::SignedWindow
        } else {
            Convention::UnsignedWindow
        };
        let s = gen_signal(
            n,
            &CompressibilityModel::ExactSparse { terms: b },
            1000 + trial,
            convention,
        )
        .map_err(|e| e.to_string())?;
        let mut want: Vec<i64> = s
            .values()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.norm() > 0.0)
            .map(|(i, _)| frequency(&s, i))
            .collect();
        want.sort_unstable();
        ensure(want.len() == b, || {
            format!("generator planted {} terms, wanted {b}", want.len())
        })?;

        let params = RecoveryParameters::new(b, b as u64 + 1, 1.0).map_err(|e| e.to_string())?;
        let (rep, _) =
            sparse_approximate(SignalSource::Spectrum(&s), &params).map_err(|e| e.to_string())?;
        let mut got: Vec<i64> = rep.terms.iter().map(|t| t.omega).collect();
        got.sort_unstable();
        ensure(got == want, || {
            format!("trial {trial} (N={n}, B={b}): got {got:?}, want {want:?}")
        })?;
        for t in &rep.terms {
            let truth = s.values()[s
                .values()
                .iter()
                .enumerate()
                .position(|(i, _)| frequency(&s, i) == t.omega)
                .unwrap()];
            let err = (t.coeff - truth).norm();
            worst = worst.max(err);
            ensure(err < 1e-9, || {
                format!("trial {trial}: coefficient error {err:e}")
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "200/200 exact, max coefficient error {worst:.1e}, {:.1} s",
        elapsed.as_secs_f64()
    ))
}

struct BoundInstance {
    error: f64,
    bound: f64,
    epsilon: f64,
    worst_coefficient: f64,
}

fn algebraic_instances() -> Result<Vec<BoundInstance>, String> {
    let (n, b, c) = (4096usize, 2usize, 10.0);
    let mut out = Vec::new();
    for seed in 0..100u64 {
        let s = gen_signal(
            n,
            &CompressibilityModel::Algebraic { p: 3.0, c: 1.0 },
            5000 + seed,
            Convention::SignedWindow,
        )
        .map_err(|e| e.to_string())?;
        let sorted = sorted_magnitudes(&s);
        let epsilon = sorted[b - 1] / (SQRT_2 * c);
        // Smallest one-based rank whose tail 1-norm is below ε/2.
        let mut suffix = vec![0.0; n + 1];
        for i in (0..n).rev() {
            suffix[i] = suffix[i + 1] + sorted[i];
        }
        let b_prime = (1..=n)
            .find(|&r| suffix[r - 1] < epsilon / 2.0)
            .ok_or("no valid B'")?;

        let params = RecoveryParameters::new(b, b_prime as u64, c).map_err(|e| e.to_string())?;
        let (rep, _) =
            sparse_approximate(SignalSource::Spectrum(&s), &params).map_err(|e| e.to_string())?;
        let error = squared_error(&s, &rep);
        let bound = tail_energy(&sorted, b) + 6.0 * b as f64 * sorted[b - 1] * sorted[b - 1] / c;
        let worst_coefficient = rep
            .terms
            .iter()
            .map(|t| (t.coeff - s.get(t.omega)).norm())
            .fold(0.0, f64::max);
        out.push(BoundInstance {
            error,
            bound,
            epsilon,
            worst_coefficient,
        });
    }
    Ok(out)
}

fn excess_error_bound(instances: &[BoundInstance]) -> Outcome {
    let failures = instances
        .iter()
        .filter(|i| i.error.is_nan() || i.error > i.bound)
        .count();
    ensure(failures == 0, || {
        format!("{failures}/100 instances exceed the bound")
    })?;
    let slack = instances
        .iter()
        .map(|i| i.error / i.bound)
        .fold(0.0, f64::max);
    Ok(format!(
        "100/100 within bound, worst error/bound {slack:.3}"
    ))
}

fn relative_error_bound() -> Outcome {
    let cases = [
        (CompressibilityModel::Algebraic { p: 3.0, c: 1.0 }, 0.1),
        (
            CompressibilityModel::Exponential { alpha: 1.0, c: 1.0 },
            0.25,
        ),
    ];
    let mut worst = 0.0f64;
    for (k, (model, delta)) in cases.into_iter().enumerate() {
        let params = select_parameters(2, delta, &model).map_err(|e| e.to_string())?;
        for seed in 0..50u64 {
            let s = gen_signal(
                4096,
                &model,
                9000 + 100 * k as u64 + seed,
                Convention::SignedWindow,
            )
            .map_err(|e| e.to_string())?;
            let (rep, _) = sparse_approximate(SignalSource::Spectrum(&s), &params)
                .map_err(|e| e.to_string())?;
            let tail = tail_energy(&sorted_magnitudes(&s), 2);
            let error = squared_error(&s, &rep);
            ensure(error <= tail + delta * tail, || {
                format!(
                    "{model:?} seed {seed}: error {error:e} > {:e}",
                    tail + delta * tail
                )
            })?;
            worst = worst.max((error - tail) / (delta * tail));
        }
    }
    Ok(format!(
        "100/100 within bound, worst excess/(δ·tail) {worst:.2e}"
    ))
}

fn aliasing_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = 0.0f64;
    for trial in 0..50 {
        let n = *[210u64, 1000, 4096].choose(&mut rng).unwrap();
        let k = rng.gen_range(2..=4);
        let plan = plan_parameters(n, k).map_err(|e| e.to_string())?;
        let lo = -((n as i64 + 1) / 2) + 1;
        let hi = n as i64 / 2;
        let count = rng.gen_range(1..=8);
        let mut s = Spectrum::zeros(n as usize, Convention::SignedWindow);
        let mut terms = Vec::new();
        for _ in 0..count {
            let w = rng.gen_range(lo..=hi);
            let c = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            terms.push((w, c));
            let old = s.get(w);
            s.set(w, old + c).map_err(|e| e.to_string())?;
        }
        let f = TrigPolynomial::new(terms.clone());
        let by_function = measure_function(&f, &plan);
        let by_vector = measure_vector(&s, &plan).map_err(|e| e.to_string())?;
        for (((j, l), fb), (_, vb)) in by_function.groups().zip(by_vector.groups()) {
            let modulus = plan.modulus(j, l) as i64;
            for h in 0..modulus as usize {
                let direct: Complex64 = terms
                    .iter()
                    .filter(|(w, _)| w.rem_euclid(modulus) as usize == h)
                    .map(|t| t.1)
                    .sum();
                for (label, got) in [("vector", vb[h]), ("function", fb[h])] {
                    let d = (got - direct).norm();
                    ensure(d <= 1e-9 * (1.0 + direct.norm()), || {
                        format!("trial {trial} {label} bin ({j},{l},{h}): off by {d:e}")
                    })?;
                }
                let d = (fb[h] - vb[h]).norm();
                worst = worst.max(d);
                ensure(d <= 1e-9 * (1.0 + vb[h].norm()), || {
                    format!("trial {trial} bin ({j},{l},{h}): {d:e}")
                })?;
            }
        }
    }
    Ok(format!(
        "50/50 polynomials, max bin discrepancy {worst:.1e}"
    ))
}

fn majority_and_lift() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut min_margin = usize::MAX;
    for (n, k) in [(1000u64, 5u64), (512, 2), (30030, 4)] {
        let plan = plan_parameters(n, k).map_err(|e| e.to_string())?;
        check_plan_shape(&plan)?;
        let q_count = plan.q_primes().len();
        for _ in 0..1000 {
            let size = rng.gen_range(1..=k as usize);
            let mut xs: Vec<i64> = Vec::new();
            while xs.len() < size {
                let x = rng.gen_range(0..n as i64);
                if !xs.contains(&x) {
                    xs.push(x);
                }
            }
            for &x in &xs {
                let mut isolated = 0;
                for (j, &q) in plan.q_primes().iter().enumerate() {
                    let q = q as i64;
                    if xs
                        .iter()
                        .any(|&y| y != x && y.rem_euclid(q) == x.rem_euclid(q))
                    {
                        continue;
                    }
                    isolated += 1;
                    for &p in plan.p_primes() {
                        let p = p as i64;
                        let modulus = p * q;
                        let lifts = (0..p)
                            .filter(|b| {
                                let class = x.rem_euclid(q) + b * q;
                                let members: Vec<i64> = xs
                                    .iter()
                                    .copied()
                                    .filter(|y| y.rem_euclid(modulus) == class)
                                    .collect();
                                members == [x]
                            })
                            .count();
                        ensure(lifts == 1, || {
                            format!("plan ({n},{k}) x={x} j={j} p={p}: {lifts} lifts")
                        })?;
                    }
                }
                ensure(3 * isolated > 2 * q_count, || {
                    format!("plan ({n},{k}) set {xs:?}: {x} isolated {isolated}/{q_count}")
                })?;
                min_margin = min_margin.min(isolated - 2 * q_count / 3);
            }
        }
    }
    Ok(format!(
        "3000 subsets, smallest margin over 2K/3 is {min_margin}"
    ))
}

/// Plan sizes recomputed from their definitions.
fn check_plan_shape(plan: &PrimePlan) -> Result<(), String> {
    let (n, k) = (plan.n(), plan.k());
    let ps = plan.p_primes();
    let first_primes: Vec<u64> = (2..).filter(|&x| is_prime(x)).take(ps.len()).collect();
    ensure(ps == first_primes.as_slice(), || format!("p-primes {ps:?}"))?;
    let product = |m: usize| ps[..m].iter().map(|&p| p as u128).product::<u128>() * k as u128;
    ensure(product(ps.len()) >= n as u128, || {
        "p-prime product too small".into()
    })?;
    ensure(ps.len() == 1 || product(ps.len() - 1) < n as u128, || {
        "m is not minimal".into()
    })?;

    let mut log = 0;
    let mut power = 1u128;
    while power * k as u128 <= n as u128 {
        power *= k as u128;
        log += 1;
    }
    let q_count = 3 * k as usize * log + 1;
    ensure(plan.q_primes().len() == q_count, || {
        format!("K = {}, expected {q_count}", plan.q_primes().len())
    })?;

    let lower = (*ps.last().unwrap()).max(k);
    let qs = plan.q_primes();
    ensure(qs[0] == (lower..).find(|&x| is_prime(x)).unwrap(), || {
        "first q-prime".into()
    })?;
    for w in qs.windows(2) {
        ensure(
            is_prime(w[1]) && (w[0] + 1..w[1]).all(|x| !is_prime(x)),
            || format!("gap after {}", w[0]),
        )?;
    }
    let total = (1 + ps.iter().sum::<u64>()) * qs.iter().sum::<u64>();
    ensure(plan.total_measurements() == total, || {
        format!("total {} != {total}", plan.total_measurements())
    })
}

fn tone_samples(terms: &[(i64, Complex64)], n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|j| {
            terms
                .iter()
                .map(|&(w, c)| {
                    let r = (w * j as i64).rem_euclid(n as i64) as f64;
                    c * Complex64::from_polar(1.0, TAU * r / n as f64)
                })
                .sum()
        })
        .collect()
}

fn interpolated_path() -> Outcome {
    const N: usize = 4096;
    const MAX_FREQ: i64 = 256;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let plan = plan_parameters(N as u64, 3).map_err(|e| e.to_string())?;
    let mut worst_coeff = 0.0f64;
    let mut sweep_at_8 = 0.0f64;
    for trial in 0..10 {
        let w1 = rng.gen_range(-MAX_FREQ..=MAX_FREQ);
        let mut w2 = w1;
        while w2 == w1 {
            w2 = rng.gen_range(-MAX_FREQ..=MAX_FREQ);
        }
        let terms: Vec<(i64, Complex64)> = [w1, w2]
            .iter()
            .map(|&w| {
                (
                    w,
                    Complex64::from_polar(rng.gen_range(1.0..2.0), rng.gen_range(-3.0..3.0)),
                )
            })
            .collect();
        let grid = tone_samples(&terms, N);

        let params = RecoveryParameters::new(2, 3, 1.0).map_err(|e| e.to_string())?;
        let src = SignalSource::TimeVector {
            values: &grid,
            kappa: 8,
        };
        let (rep, _) = sparse_approximate(src, &params).map_err(|e| e.to_string())?;
        let mut got: Vec<i64> = rep.terms.iter().map(|t| t.omega).collect();
        got.sort_unstable();
        let mut want = vec![w1, w2];
        want.sort_unstable();
        ensure(got == want, || {
            format!("trial {trial}: got {got:?}, want {want:?}")
        })?;
        for &(w, c) in &terms {
            let err = (rep.terms.iter().find(|t| t.omega == w).unwrap().coeff - c).norm();
            worst_coeff = worst_coeff.max(err);
            ensure(err < 1e-6, || {
                format!("trial {trial} ω={w}: coefficient error {err:e}")
            })?;
        }

        let f = TrigPolynomial::new(terms.clone());
        let exact = measure_function(&f, &plan);
        let mut previous = f64::INFINITY;
        for kappa in [2, 4, 6, 8] {
            let approx = measure_from_grid(&grid, &plan, kappa).map_err(|e| e.to_string())?;
            let d = exact
                .groups()
                .zip(approx.groups())
                .flat_map(|((_, a), (_, b))| a.iter().zip(b).map(|(x, y)| (x - y).norm()))
                .fold(0.0, f64::max);
            ensure(d < previous, || {
                format!("trial {trial}: κ={kappa} discrepancy {d:e} >= {previous:e}")
            })?;
            previous = d;
        }
        sweep_at_8 = sweep_at_8.max(previous);
    }
    Ok(format!(
        "10/10 exact with |ω| <= {MAX_FREQ}, max coefficient error {worst_coeff:.1e}, κ=8 discrepancy {sweep_at_8:.1e}"
    ))
}

fn sample_scaling() -> Outcome {
    let start = Instant::now();
    let mut ratios = Vec::new();
    for n in [1_000_000u64, 1_000_000_000, 1_000_000_000_000] {
        let plan = plan_parameters(n, 2).map_err(|e| e.to_string())?;
        check_plan_shape(&plan)?;
        ratios.push(plan.total_measurements() as f64 / n as f64);
    }
    let elapsed = start.elapsed();
    ensure(ratios.windows(2).all(|w| w[1] < w[0]), || {
        format!("ratios {ratios:?}")
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "samples/N = {:.3e}, {:.3e}, {:.3e} in {:.0} ms",
        ratios[0],
        ratios[1],
        ratios[2],
        elapsed.as_secs_f64() * 1e3
    ))
}

fn direct_dft(x: &[Complex64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|h| {
            x.iter()
                .enumerate()
                .map(|(k, &v)| {
                    let r = (h * k) % n;
                    v * Complex64::from_polar(1.0, -TAU * r as f64 / n as f64)
                })
                .sum()
        })
        .collect()
}

fn dft_lengths() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut lengths: Vec<usize> = vec![
        2, 3, 7, 97, 211, 257, 1021, 1999, // primes
        221, 667, 1001, 1763, 1994, 2000, 1024, 255, // products and powers
    ];
    while lengths.len() < 100 {
        lengths.push(rng.gen_range(2..=2000));
    }
    let mut worst = 0.0f64;
    for &n in &lengths {
        let x: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let l1: f64 = x.iter().map(|v| v.norm()).sum();
        let fast = dft_arbitrary_length(&x);
        let slow = direct_dft(&x);
        let err = fast
            .iter()
            .zip(&slow)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        worst = worst.max(err / l1);
        ensure(err <= 1e-10 * l1, || {
            format!("length {n}: error {err:e} vs ‖x‖₁ {l1:e}")
        })?;
    }
    Ok(format!("100 lengths, worst error/‖x‖₁ {worst:.1e}"))
}

fn main() {
    let mut failed = 0;
    let mut report = |id: usize, name: &str, outcome: Outcome| match outcome {
        Ok(detail) => println!("PASS {id:>2} {name}: {detail}"),
        Err(detail) => {
            failed += 1;
            println!("FAIL {id:>2} {name}: {detail}");
        }
    };

    report(1, "CRT demo", demo_crt());
    report(2, "exact-sparse recovery", exact_sparse_recovery());
    let instances = algebraic_instances();
    match &instances {
        Ok(list) => {
            report(3, "excess error bound", excess_error_bound(list));
            let outside = list
                .iter()
                .filter(|i| i.worst_coefficient.is_nan() || i.worst_coefficient >= i.epsilon)
                .count();
            let worst = list
                .iter()
                .map(|i| i.worst_coefficient / i.epsilon)
                .fold(0.0, f64::max);
            report(
                7,
                "coefficients within ε",
                if outside == 0 {
                    Ok(format!("100/100 instances, worst error/ε {worst:.2e}"))
                } else {
                    Err(format!(
                        "{outside}/100 instances have a coefficient off by ε or more"
                    ))
                },
            );
        }
        Err(e) => {
            report(3, "excess error bound", Err(e.clone()));
            report(7, "coefficients within ε", Err(e.clone()));
        }
    }
    report(4, "relative error bound", relative_error_bound());
    report(5, "aliasing equivalence", aliasing_equivalence());
    report(
        6,
        "majority isolation and unique lifts",
        majority_and_lift(),
    );
    report(8, "interpolated measurements", interpolated_path());
    report(9, "sub-linear sample scaling", sample_scaling());
    report(10, "arbitrary-length DFT", dft_lengths());

    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
