use thiserror::Error;

/// Errors raised by plan construction, measurement and recovery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("residue system has {residues} residues but {moduli} moduli")]
    LengthMismatch { residues: usize, moduli: usize },
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("residue {residue} is not reduced modulo {modulus}")]
    ResidueOutOfRange { residue: u64, modulus: u64 },
    #[error("moduli are not pairwise coprime (gcd of {a} and {b} is {gcd})")]
    NotCoprime { a: u128, b: u128, gcd: u128 },
    #[error("congruence modulo {modulus} contradicts the residues merged so far")]
    InconsistentResidues { modulus: u128 },
    #[error("product of moduli overflows 128 bits")]
    ModulusOverflow,
    #[error("signal length {n} is too small (need at least {min})")]
    SignalTooShort { n: u64, min: u64 },
    #[error("sparsity {k} must satisfy 2 <= k < N = {n}")]
    InvalidSparsity { k: u64, n: u64 },
    #[error("expected a length-{expected} signal, got {actual}")]
    SignalLength { expected: u64, actual: u64 },
    #[error("subset of {len} elements exceeds plan sparsity {k}")]
    SubsetTooLarge { len: usize, k: u64 },
    #[error("element {element} isolated {count} times, majority needs more than {threshold:.3}")]
    MajorityViolated {
        element: i64,
        count: usize,
        threshold: f64,
    },
    #[error("plan was built for sparsity {plan_k}, identification asked for {b_prime}")]
    PlanSparsityMismatch { plan_k: u64, b_prime: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("degenerate signal: {0}")]
    Degenerate(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
