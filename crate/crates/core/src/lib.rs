//! Decision procedures for single-shot thermodynamic transitions between
//! states that are block-diagonal in energy.
//!
//! A state is a probability vector over labeled energy levels. Energies are
//! stored pre-multiplied by the inverse temperature (`kT = 1`), and every
//! logarithm is natural, so free energies come out in nats.
//!
//! | Module | Provides |
//! |--------|----------|
//! | [`state`] | Hamiltonians, Gibbs states, tensor products, joint catalysts |
//! | [`entropy`] | Rényi entropies/divergences, α-free energies, ΔF_α sweeps |
//! | [`majorization`] | β-ordering, (thermal) Lorenz curves, curve dominance |
//! | [`embedding`] | the block-embedding map onto a uniform reference |
//! | [`catalysis`] | catalytic and correlating-catalytic decisions, catalyst search |
//! | [`witness`] | Gibbs-preserving stochastic matrices certifying transitions |
//! | [`work_extraction`] | the qubit work-extraction instance used as a reference scenario |
//!
//! Probability-valued routines that only need field arithmetic are generic
//! over [`Scalar`], which is implemented for `f64` (tolerance based) and for
//! [`Rational`] (exact). Entropic quantities are always evaluated in `f64`.
//!
//! The crate is `no_std` and needs only `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
mod lp;
mod scalar;

pub mod catalysis;
pub mod embedding;
pub mod entropy;
pub mod majorization;
pub mod state;
pub mod witness;
pub mod work_extraction;

pub use error::{Error, Result};
pub use scalar::{parse_rational, ExtReal, Rational, Scalar};

pub use catalysis::{
    catalytic_possible, correlating_catalytic_possible, ctrump_possible, free_energy_balance,
    plain_possible, qubit_pair_catalyst, search_correlating_catalyst, shrinking_epsilon_demo,
    verify_correlating_transition, work_quantities, SearchConfig, Selection, TransitionMode,
    TransitionVerdict, WorkQuantities,
};
pub use embedding::{embed, embedding_identity_check, rational_gibbs, unembed, EmbeddingSpec};
pub use entropy::{
    default_alpha_grid, delta_f_sweep, free_energy_alpha, mutual_info_bound, renyi_divergence,
    renyi_entropy, total_correlation, Alpha, AlphaProfile,
};
pub use majorization::{
    beta_order, compare, lorenz, majorizes, thermal_lorenz, thermomajorizes, BetaOrdering,
    CurveComparison, LorenzCurve, Verdict,
};
pub use state::{
    gibbs_state, tensor, BlockState, GibbsFactors, Hamiltonian, JointCatalyst, NumericMode,
};
pub use witness::{
    apply, find_witness, random_gibbs_stochastic, StochasticWitness, WitnessConfig, WitnessOutcome,
};
pub use work_extraction::WorkExtraction;
