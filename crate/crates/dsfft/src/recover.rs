//! The `recover` command.
//!
//! Coefficients are Fourier-series coefficients throughout: a time vector `A`
//! stands for `A(j) = Σ_ω f̂(ω) e^{2πiωj/N}`, so its spectrum is `DFT(A)/N`.
//! All three acquisition modes therefore report the same numbers for the same
//! input.

use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Result};
use dsfft_core::pipeline::{Clock, NoClock};
use dsfft_core::signals::{default_kappa, synthesize_grid};
use dsfft_core::{
    compare_with_oracle, dft_arbitrary_length, gen_signal, select_parameters,
    sparse_approximate_timed, AcquisitionPath, CompressibilityModel, Convention,
    RecoveryParameters, RecoveryReport, SignalSource, SparseRepresentation, Spectrum,
    TrigPolynomial,
};
use serde::Serialize;

use crate::io::{Domain, Signal};

/// Above this length the oracle comparison is skipped.
pub const ORACLE_LIMIT: u64 = 1 << 20;

/// Interpolation half-width when neither `--kappa` nor `--delta` is given.
pub const DEFAULT_KAPPA: usize = 8;

/// Wall-clock milliseconds since construction.
pub struct InstantClock(Instant);

impl InstantClock {
    pub fn new() -> Self {
        Self(Instant::now())
    }
}

impl Default for InstantClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for InstantClock {
    fn now_ms(&self) -> Option<f64> {
        Some(self.0.elapsed().as_secs_f64() * 1e3)
    }
}

#[derive(Debug, Clone)]
pub enum Input {
    File {
        path: PathBuf,
        signal: Signal,
    },
    Generated {
        model: CompressibilityModel,
        spec: String,
        seed: u64,
    },
}

#[derive(Debug, Clone)]
pub struct RecoverOptions {
    pub input: Input,
    pub n: Option<u64>,
    pub b: usize,
    pub b_prime: Option<u64>,
    pub c: Option<f64>,
    pub delta: Option<f64>,
    pub mode: AcquisitionPath,
    pub kappa: Option<usize>,
    pub timings: bool,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceInfo {
    File {
        path: String,
        domain: &'static str,
    },
    Generated {
        spec: String,
        model: CompressibilityModel,
        seed: u64,
    },
}

#[derive(Debug, Serialize)]
pub struct RecoverOutput {
    pub n: u64,
    pub source: SourceInfo,
    pub mode: AcquisitionPath,
    pub kappa: Option<usize>,
    pub representation: SparseRepresentation,
    pub report: RecoveryReport,
    pub oracle_skipped: bool,
}

pub fn run(opts: &RecoverOptions) -> Result<RecoverOutput> {
    let (spectrum, time, source, model) = load(opts)?;
    let n = spectrum.len();

    let params = match opts.delta {
        Some(delta) => {
            let model = model.ok_or_else(|| anyhow!("--delta needs a decay model from --gen"))?;
            select_parameters(opts.b, delta, &model)?
        }
        None => RecoveryParameters::new(
            opts.b,
            opts.b_prime.unwrap_or(opts.b as u64 + 1),
            opts.c.unwrap_or(1.0),
        )?,
    };

    let kappa = match (opts.mode, opts.kappa) {
        (AcquisitionPath::Grid, Some(k)) => Some(k),
        (AcquisitionPath::Grid, None) => Some(match opts.delta {
            Some(delta) => {
                let p = match model {
                    Some(CompressibilityModel::Algebraic { p, .. }) => p,
                    _ => 0.0,
                };
                default_kappa(delta, p)?
            }
            None => DEFAULT_KAPPA,
        }),
        (_, Some(_)) => bail!("--kappa only applies to --mode grid"),
        (_, None) => None,
    };

    let poly;
    let grid;
    let src = match opts.mode {
        AcquisitionPath::Vector => SignalSource::Spectrum(&spectrum),
        AcquisitionPath::Function => {
            poly = TrigPolynomial::from_spectrum(&spectrum);
            SignalSource::Function { sampler: &poly, n }
        }
        AcquisitionPath::Grid => {
            grid = time.unwrap_or_else(|| synthesize_grid(&spectrum));
            SignalSource::TimeVector {
                values: &grid,
                kappa: kappa.expect("grid mode has a kappa"),
            }
        }
    };

    let clock: Box<dyn Clock> = if opts.timings {
        Box::new(InstantClock::new())
    } else {
        Box::new(NoClock)
    };
    let (rep, mut report) = sparse_approximate_timed(src, &params, clock.as_ref())?;
    let oracle_skipped = n > ORACLE_LIMIT;
    if !oracle_skipped {
        report.oracle = Some(compare_with_oracle(&spectrum, &rep, &params)?);
    }
    Ok(RecoverOutput {
        n,
        source,
        mode: opts.mode,
        kappa,
        representation: rep,
        report,
        oracle_skipped,
    })
}

type Loaded = (
    Spectrum,
    Option<Vec<num_complex::Complex64>>,
    SourceInfo,
    Option<CompressibilityModel>,
);

fn load(opts: &RecoverOptions) -> Result<Loaded> {
    match &opts.input {
        Input::Generated { model, spec, seed } => {
            let n = opts.n.ok_or_else(|| anyhow!("--gen needs --n"))?;
            let spectrum = gen_signal(n as usize, model, *seed, Convention::SignedWindow)?;
            let info = SourceInfo::Generated {
                spec: spec.clone(),
                model: *model,
                seed: *seed,
            };
            Ok((spectrum, None, info, Some(*model)))
        }
        Input::File { path, signal } => {
            let n = signal.values.len() as u64;
            if let Some(expected) = opts.n {
                if expected != n {
                    bail!(
                        "--n {expected} does not match the {n} rows of {}",
                        path.display()
                    );
                }
            }
            let info = SourceInfo::File {
                path: path.display().to_string(),
                domain: signal.domain.name(),
            };
            match signal.domain {
                Domain::Spectrum => {
                    let spectrum = Spectrum::new(signal.values.clone(), Convention::SignedWindow)?;
                    Ok((spectrum, None, info, None))
                }
                Domain::Time => {
                    let scale = 1.0 / n as f64;
                    let coeffs = dft_arbitrary_length(&signal.values)
                        .into_iter()
                        .map(|v| v * scale)
                        .collect();
                    let spectrum = Spectrum::new(coeffs, Convention::SignedWindow)?;
                    Ok((spectrum, Some(signal.values.clone()), info, None))
                }
            }
        }
    }
}
