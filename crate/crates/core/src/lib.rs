//! Deterministic sparse Fourier recovery.
//!
//! A length-N spectrum dominated by a few terms is recovered from residue
//! sums over prime-grouped classes. Each q-prime splits the frequencies into
//! coarse bins; frequencies alone in their bin are located by refining the
//! bin with small p-primes and combining the residues by CRT, and accepted
//! once more than two thirds of the q-primes agree. Coefficients are medians
//! of the agreeing bins.
//!
//! ```
//! use dsfft_core::{sparse_approximate, Convention, RecoveryParameters, SignalSource, Spectrum};
//! use num_complex::Complex64;
//!
//! let mut s = Spectrum::zeros(1000, Convention::UnsignedWindow);
//! s.set(17, Complex64::new(2.0, 0.0)).unwrap();
//! s.set(503, Complex64::new(0.0, -1.0)).unwrap();
//! let params = RecoveryParameters::new(2, 3, 1.0).unwrap();
//! let (rep, _) = sparse_approximate(SignalSource::Spectrum(&s), &params).unwrap();
//! assert_eq!(rep.frequencies(), vec![17, 503]);
//! ```
//!
//! The crate is `no_std` (it needs `alloc`). The `parallel` feature spreads
//! measurement and identification over a rayon pool; `serde` derives
//! serialization for the report types.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod design;
pub mod dft;
pub mod error;
pub mod interp;
pub mod measurement;
pub mod number_theory;
pub mod params;
pub mod pipeline;
pub mod reconstruct;
pub mod signals;

pub use design::{plan_parameters, PrimePlan, SubsetAddress};
pub use dft::dft_arbitrary_length;
pub use error::{Error, Result};
pub use measurement::{
    measure_from_grid, measure_function, measure_vector, Convention, FunctionSampler,
    MeasurementSet, Spectrum, TrigPolynomial,
};
pub use number_theory::{crt_combine, generate_primes, ResidueSystem};
pub use params::{compute_epsilon_bprime, select_parameters, RecoveryParameters};
pub use pipeline::{
    compare_with_oracle, sparse_approximate, sparse_approximate_timed, AcquisitionPath, Clock,
    NoClock, OracleComparison, RecoveryReport, SignalSource,
};
pub use reconstruct::{estimate, identify, Candidate, SparseRepresentation, Term};
pub use signals::{gen_signal, CompressibilityModel};
