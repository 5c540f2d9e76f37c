//! Gibbs-preserving stochastic matrices.
//!
//! [`find_witness`] decides whether some column-stochastic `M ≥ 0` with
//! `Mγ = γ` maps `p` to `q`, and returns it. Small problems are solved in
//! exact rational arithmetic; larger ones in `f64` with post-hoc validation.
//! Infeasibility is reported together with the thermomajorization breakpoint
//! that fails.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::{feasible_point, LpOutcome};
use crate::majorization::thermomajorizes;
use crate::scalar::Scalar;
use crate::state::{BlockState, Hamiltonian};

/// Largest constraint violations of a witness, in `f64`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Residuals {
    /// `max_j |Σ_i M_ij − 1|`.
    pub column_sums: f64,
    /// `max_i |(Mγ)_i − γ_i|` for the normalized Gibbs state.
    pub gibbs: f64,
    /// `max_i |(Mp)_i − q_i|`, when the witness was built for a pair.
    pub target: Option<f64>,
    /// Most negative entry (zero when all entries are non-negative).
    pub negativity: f64,
}

/// Column-stochastic `n × n` matrix, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticWitness<S = f64> {
    n: usize,
    m: Vec<S>,
    residuals: Residuals,
}

const FLOAT_COLUMN_TOL: f64 = 1e-10;
const FLOAT_GIBBS_TOL: f64 = 1e-12;
const FLOAT_TARGET_TOL: f64 = 1e-8;

impl<S: Scalar> StochasticWitness<S> {
    /// Wraps a row-major matrix and records its residuals against `gamma`
    /// and, if given, the pair `(p, q)`.
    pub fn new(n: usize, m: Vec<S>, gamma: &[S], pair: Option<(&[S], &[S])>) -> Result<Self> {
        if m.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                found: m.len(),
            });
        }
        if gamma.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: gamma.len(),
            });
        }
        let mut w = Self {
            n,
            m,
            residuals: Residuals::default(),
        };
        let mut r = Residuals::default();
        for j in 0..n {
            let sum = (0..n).fold(S::zero(), |acc, i| acc + w.m[i * n + j].clone());
            r.column_sums = r.column_sums.max((sum - S::one()).abs().to_f64());
        }
        r.gibbs = max_abs_diff(&w.mul_vec(gamma), gamma);
        if let Some((p, q)) = pair {
            r.target = Some(max_abs_diff(&w.mul_vec(p), q));
        }
        r.negativity = w.m.iter().map(S::to_f64).fold(0.0, f64::min);
        w.residuals = r;
        Ok(w)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = vec![S::zero(); n * n];
        (0..n).for_each(|i| m[i * n + i] = S::one());
        Self {
            n,
            m,
            residuals: Residuals::default(),
        }
    }

    /// Every column equal to `gamma`: sends any distribution to `gamma`.
    pub fn constant(gamma: &[S]) -> Self {
        let n = gamma.len();
        let m = (0..n)
            .flat_map(|i| core::iter::repeat_n(gamma[i].clone(), n))
            .collect();
        Self::new(n, m, gamma, None).expect("square by construction")
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &S {
        &self.m[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.m.chunks(self.n).map(<[S]>::to_vec).collect()
    }

    pub fn residuals(&self) -> Residuals {
        self.residuals
    }

    /// Whether every recorded residual is within the mode's tolerance:
    /// zero for exact arithmetic.
    pub fn validated(&self) -> bool {
        let r = &self.residuals;
        if S::EXACT {
            return r.column_sums == 0.0
                && r.gibbs == 0.0
                && r.target.unwrap_or(0.0) == 0.0
                && r.negativity == 0.0;
        }
        r.column_sums <= FLOAT_COLUMN_TOL
            && r.gibbs <= FLOAT_GIBBS_TOL.max(1e-15 * self.n as f64)
            && r.target.unwrap_or(0.0) <= FLOAT_TARGET_TOL
            && r.negativity >= -1e-12
    }

    fn mul_vec(&self, v: &[S]) -> Vec<S> {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n).fold(S::zero(), |acc, j| {
                    let a = &self.m[i * n + j];
                    if a.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        acc + a.clone() * v[j].clone()
                    }
                })
            })
            .collect()
    }

    /// The product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self, gamma: &[S]) -> Result<Self> {
        let n = self.n;
        if other.n != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: other.n,
            });
        }
        let mut m = vec![S::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.m[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.m[k * n + j];
                    if !b.is_zero() {
                        m[i * n + j] = m[i * n + j].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Self::new(n, m, gamma, None)
    }

    /// `(1 − λ)·self + λ·other`.
    pub fn mix(&self, other: &Self, lambda: S, gamma: &[S]) -> Result<Self> {
        if other.n != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let keep = S::one() - lambda.clone();
        let m = self
            .m
            .iter()
            .zip(&other.m)
            .map(|(a, b)| keep.clone() * a.clone() + lambda.clone() * b.clone())
            .collect();
        Self::new(self.n, m, gamma, None)
    }

    pub fn to_f64(&self) -> StochasticWitness<f64> {
        StochasticWitness {
            n: self.n,
            m: self.m.iter().map(S::to_f64).collect(),
            residuals: self.residuals,
        }
    }
}

fn max_abs_diff<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y.clone()).abs().to_f64())
        .fold(0.0, f64::max)
}

/// `M p`. In `f64` the result is renormalized when its sum is within `1e-12`
/// of one; anything further off is returned as computed.
pub fn apply<S: Scalar>(w: &StochasticWitness<S>, p: &[S]) -> Result<Vec<S>> {
    if p.len() != w.n {
        return Err(Error::LengthMismatch {
            expected: w.n,
            found: p.len(),
        });
    }
    let out: Vec<S> = w
        .mul_vec(p)
        .into_iter()
        .map(S::clamp_tiny_negative)
        .collect();
    let sum = out.iter().cloned().fold(S::zero(), |a, b| a + b);
    if !S::EXACT && !sum.is_zero() && (sum.clone() - S::one()).abs() <= S::norm_tol() {
        return Ok(out.into_iter().map(|x| x / sum.clone()).collect());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessConfig {
    /// Refuse problems with more levels than this.
    pub dimension_limit: usize,
    /// Solve exactly up to this many levels, in `f64` above.
    pub exact_limit: usize,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            dimension_limit: 64,
            exact_limit: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WitnessOutcome<S = f64> {
    Feasible(StochasticWitness<S>),
    /// No Gibbs-preserving map exists. `violation` is the first breakpoint
    /// `(x, gap)` where the initial curve falls below the target's, if the
    /// curve comparison located one.
    Infeasible {
        violation: Option<(f64, f64)>,
    },
}

impl<S> WitnessOutcome<S> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, WitnessOutcome::Feasible(_))
    }
}

/// Searches for a Gibbs-preserving map `p → q` with the default config.
pub fn find_witness(p: &BlockState<f64>, q: &BlockState<f64>) -> Result<WitnessOutcome<f64>> {
    find_witness_with(p, q, &WitnessConfig::default())
}

/// Dispatches on size: exact solve (converted back to `f64` and revalidated)
/// up to `exact_limit` levels, floating solve above.
pub fn find_witness_with(
    p: &BlockState<f64>,
    q: &BlockState<f64>,
    config: &WitnessConfig,
) -> Result<WitnessOutcome<f64>> {
    check_pair(p, q, config)?;
    if let Some(w) = shortcut(p, q)? {
        return Ok(WitnessOutcome::Feasible(w));
    }
    if p.len() > config.exact_limit {
        return find_witness_in(p, q, config);
    }
    let outcome = find_witness_in(&p.to_exact(), &q.to_exact(), config)?;
    Ok(match outcome {
        WitnessOutcome::Feasible(w) => {
            let gamma = p.ham().gibbs_factors().probabilities();
            let m = w.m.iter().map(Scalar::to_f64).collect();
            let w = StochasticWitness::new(p.len(), m, &gamma, Some((p.probs(), q.probs())))?;
            if !w.validated() {
                return Err(Error::Numerical(
                    "exact witness failed validation after conversion",
                ));
            }
            WitnessOutcome::Feasible(w)
        }
        WitnessOutcome::Infeasible { violation } => WitnessOutcome::Infeasible { violation },
    })
}

fn check_pair<S: Scalar>(
    p: &BlockState<S>,
    q: &BlockState<S>,
    config: &WitnessConfig,
) -> Result<()> {
    if !p.ham().same_as(q.ham()) {
        return Err(Error::HamiltonianMismatch);
    }
    if p.len() > config.dimension_limit {
        return Err(Error::DimensionLimit {
            levels: p.len(),
            limit: config.dimension_limit,
        });
    }
    Ok(())
}

/// Identity for `p = q`, the constant Gibbs map when `q` is the Gibbs state.
fn shortcut<S: Scalar>(
    p: &BlockState<S>,
    q: &BlockState<S>,
) -> Result<Option<StochasticWitness<S>>> {
    let n = p.len();
    let gamma = p.ham().gibbs_factors_in::<S>().probabilities();
    let (pv, qv) = (p.probs(), q.probs());
    let w = if pv == qv {
        StochasticWitness::identity(n)
    } else if qv
        .iter()
        .zip(&gamma)
        .all(|(x, y)| (x.clone() - y.clone()).abs() <= S::norm_tol())
    {
        StochasticWitness::constant(&gamma)
    } else {
        return Ok(None);
    };
    Ok(Some(StochasticWitness::new(
        n,
        w.m,
        &gamma,
        Some((pv, qv)),
    )?))
}

/// Solves the feasibility problem in the arithmetic of `S`.
pub fn find_witness_in<S: Scalar>(
    p: &BlockState<S>,
    q: &BlockState<S>,
    config: &WitnessConfig,
) -> Result<WitnessOutcome<S>> {
    check_pair(p, q, config)?;
    let n = p.len();
    let gamma = p.ham().gibbs_factors_in::<S>().probabilities();
    let (pv, qv) = (p.probs(), q.probs());

    if let Some(w) = shortcut(p, q)? {
        return Ok(WitnessOutcome::Feasible(w));
    }

    let vars = n * n;
    let mut a = vec![S::zero(); 3 * n * vars];
    let mut b = Vec::with_capacity(3 * n);
    // Column sums.
    for j in 0..n {
        for i in 0..n {
            a[j * vars + i * n + j] = S::one();
        }
        b.push(S::one());
    }
    // M γ = γ and M p = q, one row per output level.
    for (block, (src, dst)) in [(&gamma[..], &gamma[..]), (pv, qv)].into_iter().enumerate() {
        for i in 0..n {
            let row = (n + block * n + i) * vars;
            for j in 0..n {
                a[row + i * n + j] = src[j].clone();
            }
            b.push(dst[i].clone());
        }
    }
    let eps = if S::EXACT {
        S::zero()
    } else {
        S::from_f64(1e-13).unwrap_or_else(S::zero)
    };
    match feasible_point(&a, &b, vars, &eps)? {
        LpOutcome::Feasible(x) => {
            let x = x
                .into_iter()
                .map(|v| if v < S::zero() { S::zero() } else { v })
                .collect();
            let w = StochasticWitness::new(n, x, &gamma, Some((pv, qv)))?;
            if !w.validated() {
                return Err(Error::Numerical("floating-point witness failed validation"));
            }
            Ok(WitnessOutcome::Feasible(w))
        }
        LpOutcome::Infeasible => {
            let cmp = thermomajorizes(p, q)?;
            Ok(WitnessOutcome::Infeasible {
                violation: cmp.violations.first().copied(),
            })
        }
    }
}

/// A random Gibbs-preserving stochastic matrix `(1 − λ)·1 + λ·T`, where `T`
/// is a product of `2n` random pairwise exchanges and `λ` is drawn from the
/// same seeded stream.
pub fn random_gibbs_stochastic(ham: &Hamiltonian, seed: u64) -> StochasticWitness<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lambda = rng.gen_range(0.0..=1.0);
    random_exchange_mixture(ham, &mut rng, lambda)
}

/// As [`random_gibbs_stochastic`] with a fixed mixing weight.
pub fn random_gibbs_stochastic_with(
    ham: &Hamiltonian,
    seed: u64,
    lambda: f64,
) -> StochasticWitness<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_exchange_mixture(ham, &mut rng, lambda)
}

fn random_exchange_mixture(
    ham: &Hamiltonian,
    rng: &mut ChaCha8Rng,
    lambda: f64,
) -> StochasticWitness<f64> {
    let n = ham.len();
    let gf = ham.gibbs_factors();
    let gamma = gf.probabilities();
    let mut m = StochasticWitness::<f64>::identity(n).m;
    if lambda > 0.0 && n > 1 {
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let t: f64 = rng.gen_range(0.0..=1.0);
            exchange(&mut m, n, &gf.g, i, j, t);
        }
        for (k, v) in m.iter_mut().enumerate() {
            let id = if k / n == k % n { 1.0 } else { 0.0 };
            *v = (1.0 - lambda) * id + lambda * *v;
        }
    }
    StochasticWitness::new(n, m, &gamma, None).expect("square by construction")
}

/// Left-multiplies by the exchange moving a fraction `t` of the population
/// of the less-populated-at-equilibrium level into the other, balanced so
/// that the Gibbs state is fixed.
fn exchange(m: &mut [f64], n: usize, g: &[f64], a: usize, b: usize, t: f64) {
    let (hi, lo) = if g[a] >= g[b] { (a, b) } else { (b, a) };
    let r = t * g[lo] / g[hi];
    for c in 0..n {
        let (x_hi, x_lo) = (m[hi * n + c], m[lo * n + c]);
        m[hi * n + c] = (1.0 - r) * x_hi + t * x_lo;
        m[lo * n + c] = r * x_hi + (1.0 - t) * x_lo;
    }
}
