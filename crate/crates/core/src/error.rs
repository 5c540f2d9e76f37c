use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Hamiltonian has no levels")]
    EmptyHamiltonian,
    #[error("energy level {0} is not finite")]
    NonFiniteLevel(usize),
    #[error("Gibbs weight {0} must be strictly positive")]
    NonPositiveWeight(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("probability at index {0} is negative or not finite")]
    InvalidProbability(usize),
    #[error("probabilities sum to {sum}, outside tolerance of 1")]
    NotNormalized { sum: f64 },
    #[error("states are defined over different Hamiltonians")]
    HamiltonianMismatch,
    #[error("subsystem dimensions multiply to {product}, joint has {len} entries")]
    DimensionMismatch { product: usize, len: usize },
    #[error("subsystem {which} out of range for {count} subsystems")]
    SubsystemOutOfRange { which: usize, count: usize },
    #[error("curve x-extents differ: {left} vs {right}")]
    ExtentMismatch { left: f64, right: f64 },
    #[error("parameter `{name}` = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("x10 = {x10} gives a negative catalyst entry; feasible interval is [{lo}, {hi}]")]
    InfeasibleCatalyst { x10: f64, lo: f64, hi: f64 },
    #[error("max_denominator {max} cannot give {levels} levels a positive block each")]
    DenominatorTooSmall { max: u64, levels: usize },
    #[error("embedding reference deviates from the Gibbs state by {deviation}")]
    GibbsMismatch { deviation: f64 },
    #[error("declared marginal {index} deviates from the joint's marginal by {deviation}")]
    MarginalMismatch { index: usize, deviation: f64 },
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    #[error("{levels} levels exceed the configured limit of {limit}")]
    DimensionLimit { levels: usize, limit: usize },
    #[error("numerical failure: {0}")]
    Numerical(&'static str),
    #[error("catalyst layout {0:?} is not supported (only 2 or 3 qubits)")]
    UnsupportedDims(alloc::vec::Vec<usize>),
}
