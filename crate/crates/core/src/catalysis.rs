//! Catalytic and correlating-catalytic transitions.
//!
//! * Catalytic: the catalyst is returned exactly, uncorrelated. Decided by
//!   the full family `F_α(a) ≥ F_α(b)`.
//! * Correlating-catalytic: the catalysts keep their marginals but may end
//!   up correlated with each other. Decided by `F_1(a) ≥ F_1(b)` alone, with
//!   the target reached to arbitrary accuracy.
//!
//! Catalysts always carry trivial Hamiltonians here. For a concrete joint
//! catalyst, [`verify_correlating_transition`] checks
//! `a ⊗ c_1 ⊗ … ⊗ c_N ⪰ b ⊗ c_{1…N}` by thermal Lorenz curves, and
//! [`search_correlating_catalyst`] scans the two- and three-qubit
//! transportation polytopes for a joint that passes.

use alloc::vec;
use alloc::vec::Vec;

use crate::entropy::{free_energy_alpha, renyi_entropy, total_correlation, Alpha};
use crate::error::{Error, Result};
use crate::majorization::{thermomajorizes, CurveComparison};
use crate::scalar::{ExtReal, Scalar};
use crate::state::{gibbs_state, tensor, BlockState, JointCatalyst};

/// Slack allowed in free-energy comparisons.
pub const FREE_ENERGY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionMode {
    Plain,
    Catalytic,
    CorrelatingCatalytic,
}

impl TransitionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TransitionMode::Plain => "plain",
            TransitionMode::Catalytic => "catalytic",
            TransitionMode::CorrelatingCatalytic => "correlating",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionVerdict {
    pub possible: bool,
    pub mode: TransitionMode,
    /// Non-negative α at which `F_α(a) < F_α(b) − τ`.
    pub violations: Vec<Alpha>,
    /// Negative α at which the same inequality fails.
    pub negative_violations: Vec<Alpha>,
    /// Curve comparison, for plain transitions.
    pub comparison: Option<CurveComparison>,
    /// `F_1(a) − F_1(b)`, for correlating-catalytic transitions.
    pub free_energy_gap: Option<f64>,
    /// Set when the free energies agree within tolerance. The transition is
    /// reported possible, but catalyst dimension must then grow without
    /// bound as the target accuracy improves.
    pub free_energy_equal: bool,
}

impl TransitionVerdict {
    fn new(possible: bool, mode: TransitionMode) -> Self {
        Self {
            possible,
            mode,
            violations: Vec::new(),
            negative_violations: Vec::new(),
            comparison: None,
            free_energy_gap: None,
            free_energy_equal: false,
        }
    }

    /// Every violating α, negative ones last.
    pub fn diagnostics(&self) -> Vec<Alpha> {
        self.violations
            .iter()
            .chain(&self.negative_violations)
            .copied()
            .collect()
    }
}

fn same_ham(a: &BlockState<f64>, b: &BlockState<f64>) -> Result<()> {
    if a.ham().same_as(b.ham()) {
        Ok(())
    } else {
        Err(Error::HamiltonianMismatch)
    }
}

/// Thermal operation without catalysts: thermomajorization.
pub fn plain_possible(a: &BlockState<f64>, b: &BlockState<f64>) -> Result<TransitionVerdict> {
    let cmp = thermomajorizes(a, b)?;
    let mut v = TransitionVerdict::new(cmp.verdict.allows(), TransitionMode::Plain);
    v.comparison = Some(cmp);
    Ok(v)
}

/// `F_α(a) ≥ F_α(b) − τ` for every α in `alphas`.
pub fn catalytic_possible(
    a: &BlockState<f64>,
    b: &BlockState<f64>,
    alphas: &[Alpha],
) -> Result<TransitionVerdict> {
    same_ham(a, b)?;
    let mut v = TransitionVerdict::new(true, TransitionMode::Catalytic);
    for &alpha in alphas {
        let fa = free_energy_alpha(a, alpha)?;
        let fb = free_energy_alpha(b, alpha)?;
        if !fa.ge_within(fb, FREE_ENERGY_TOL) {
            v.possible = false;
            if alpha.is_negative() {
                v.negative_violations.push(alpha);
            } else {
                v.violations.push(alpha);
            }
        }
    }
    Ok(v)
}

fn f1(s: &BlockState<f64>) -> Result<f64> {
    free_energy_alpha(s, Alpha::One)?
        .finite()
        .ok_or(Error::Numerical("free energy is not finite"))
}

/// `F(a) ≥ F(b) − τ`.
pub fn correlating_catalytic_possible(
    a: &BlockState<f64>,
    b: &BlockState<f64>,
) -> Result<TransitionVerdict> {
    same_ham(a, b)?;
    let gap = f1(a)? - f1(b)?;
    let mut v = TransitionVerdict::new(
        gap >= -FREE_ENERGY_TOL,
        TransitionMode::CorrelatingCatalytic,
    );
    v.free_energy_gap = Some(gap);
    v.free_energy_equal = gap.abs() <= FREE_ENERGY_TOL;
    if !v.possible {
        v.violations.push(Alpha::One);
    }
    Ok(v)
}

/// Correlating-catalytic majorization for trivial Hamiltonians. Possible iff
/// `q` is a rearrangement of `p`, or `rank p ≤ rank q` and `H(p) < H(q)`.
/// The shorter vector is zero-padded.
pub fn ctrump_possible(p: &[f64], q: &[f64]) -> Result<TransitionVerdict> {
    let n = p.len().max(q.len());
    let sorted = |v: &[f64]| {
        let mut s = v.to_vec();
        s.resize(n, 0.0);
        s.sort_by(|a, b| b.total_cmp(a));
        s
    };
    let (ps, qs) = (sorted(p), sorted(q));
    if ps == qs {
        return Ok(TransitionVerdict::new(
            true,
            TransitionMode::CorrelatingCatalytic,
        ));
    }
    let rank = |v: &[f64]| v.iter().filter(|&&x| x > 0.0).count();
    // Entropies of the sorted vectors, so rearrangements agree bit for bit.
    let hp = renyi_entropy(&ps, Alpha::One)?.to_f64();
    let hq = renyi_entropy(&qs, Alpha::One)?.to_f64();
    let possible = rank(&ps) <= rank(&qs) && hp < hq;
    let mut v = TransitionVerdict::new(possible, TransitionMode::CorrelatingCatalytic);
    v.free_energy_gap = Some(hq - hp);
    Ok(v)
}

/// Endpoints of the `x10` interval keeping every entry of the two-qubit
/// joint with ground marginals `s`, `q` non-negative.
pub fn qubit_pair_interval<S: Scalar>(s: &S, q: &S) -> (S, S) {
    let lo = (q.clone() - s.clone()).max_of(S::zero());
    let hi = {
        let a = q.clone();
        let b = S::one() - s.clone();
        if a < b {
            a
        } else {
            b
        }
    };
    (lo, hi)
}

/// The two-qubit joint `(q − x10, x10 + s − q, x10, 1 − s − x10)` with
/// ground-state marginals `s` and `q`.
pub fn qubit_pair_catalyst(s: f64, q: f64, x10: f64) -> Result<JointCatalyst<f64>> {
    qubit_pair_catalyst_in(s, q, x10)
}

pub fn qubit_pair_catalyst_in<S: Scalar>(s: S, q: S, x10: S) -> Result<JointCatalyst<S>> {
    for (name, v) in [("s", &s), ("q", &q)] {
        if *v <= S::zero() || *v >= S::one() {
            return Err(Error::OutOfRange {
                name,
                value: v.to_f64(),
            });
        }
    }
    let (lo, hi) = qubit_pair_interval(&s, &q);
    if x10 < lo || x10 > hi {
        return Err(Error::InfeasibleCatalyst {
            x10: x10.to_f64(),
            lo: lo.to_f64(),
            hi: hi.to_f64(),
        });
    }
    let probs = vec![
        q.clone() - x10.clone(),
        x10.clone() + s.clone() - q,
        x10.clone(),
        S::one() - s - x10,
    ];
    let probs = probs.into_iter().map(S::clamp_tiny_negative).collect();
    JointCatalyst::new(probs, vec![2, 2])
}

/// Three-qubit joint from ground marginals `(s, q, r)`, the pairwise
/// excited-excited probabilities `a = P(11·)`, `b = P(1·1)`, `c = P(·11)`
/// and `d = P(111)`. `None` if some entry would be negative.
pub fn qubit_triple_catalyst(
    marginals: [f64; 3],
    pairs: [f64; 3],
    d: f64,
) -> Option<JointCatalyst<f64>> {
    let [s, q, r] = marginals;
    let (u, v, w) = (1.0 - s, 1.0 - q, 1.0 - r);
    let [a, b, c] = pairs;
    let x = [
        1.0 - u - v - w + a + b + c - d,
        w - b - c + d,
        v - a - c + d,
        c - d,
        u - a - b + d,
        b - d,
        a - d,
        d,
    ];
    if x.iter().any(|&e| e < -1e-12) {
        return None;
    }
    let probs = x.iter().map(|&e| e.max(0.0)).collect();
    JointCatalyst::new(probs, vec![2, 2, 2]).ok()
}

fn pair_range(u: f64, v: f64) -> (f64, f64) {
    ((u + v - 1.0).max(0.0), u.min(v))
}

/// Builds `a ⊗ c_1 ⊗ … ⊗ c_N` and `b ⊗ c_{1…N}`, with the `c_i` the joint's
/// own marginals, and compares their thermal Lorenz curves.
pub fn verify_correlating_transition<S: Scalar>(
    a: &BlockState<S>,
    b: &BlockState<S>,
    joint: &JointCatalyst<S>,
) -> Result<CurveComparison> {
    let marginals = joint.marginals();
    verify_with_marginals(a, b, joint, &marginals)
}

/// As [`verify_correlating_transition`] with explicitly declared local
/// catalyst states, which must match the joint's marginals to the mode's
/// normalization tolerance.
pub fn verify_with_marginals<S: Scalar>(
    a: &BlockState<S>,
    b: &BlockState<S>,
    joint: &JointCatalyst<S>,
    declared: &[Vec<S>],
) -> Result<CurveComparison> {
    if declared.len() != joint.subsystems() {
        return Err(Error::LengthMismatch {
            expected: joint.subsystems(),
            found: declared.len(),
        });
    }
    for (index, (c, m)) in declared.iter().zip(joint.marginals()).enumerate() {
        if c.len() != m.len() {
            return Err(Error::LengthMismatch {
                expected: m.len(),
                found: c.len(),
            });
        }
        let deviation = c
            .iter()
            .zip(&m)
            .map(|(x, y)| (x.clone() - y.clone()).abs())
            .fold(S::zero(), S::max_of);
        if deviation > S::norm_tol() {
            return Err(Error::MarginalMismatch {
                index,
                deviation: deviation.to_f64(),
            });
        }
    }
    let product = JointCatalyst::product(declared)?;
    let lhs = tensor(a, &product.as_state());
    let rhs = tensor(b, &joint.as_state());
    thermomajorizes(&lhs, &rhs)
}

/// One α of the balance `F_α(a) + Σ F_α(c_i) ≥ F_α(b) + F_α(c_{1…N})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyBalance {
    pub alpha: Alpha,
    pub lhs: ExtReal,
    pub rhs: ExtReal,
}

impl FreeEnergyBalance {
    pub fn holds(&self, tol: f64) -> bool {
        self.lhs.ge_within(self.rhs, tol)
    }
}

/// Evaluates both sides of the free-energy balance that any correlating
/// catalytic transition must satisfy, at every α in `alphas`. Catalysts are
/// taken with trivial Hamiltonians.
pub fn free_energy_balance(
    a: &BlockState<f64>,
    b: &BlockState<f64>,
    joint: &JointCatalyst<f64>,
    alphas: &[Alpha],
) -> Result<Vec<FreeEnergyBalance>> {
    same_ham(a, b)?;
    let locals: Vec<BlockState<f64>> = (0..joint.subsystems())
        .map(|i| joint.marginal(i))
        .collect::<Result<_>>()?;
    let joint_state = joint.as_state();
    let sum = |terms: &[ExtReal]| {
        terms
            .iter()
            .try_fold(ExtReal::Finite(0.0), |acc, t| acc.checked_add(*t))
            .ok_or(Error::Numerical("∞ − ∞ in free-energy balance"))
    };
    alphas
        .iter()
        .map(|&alpha| {
            let mut left = vec![free_energy_alpha(a, alpha)?];
            for c in &locals {
                left.push(free_energy_alpha(c, alpha)?);
            }
            let right = [
                free_energy_alpha(b, alpha)?,
                free_energy_alpha(&joint_state, alpha)?,
            ];
            Ok(FreeEnergyBalance {
                alpha,
                lhs: sum(&left)?,
                rhs: sum(&right)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Selection {
    /// Lexicographically first passing cell.
    #[default]
    First,
    /// Among passing cells at the resolution of the first success, the one
    /// with least total correlation (ties to the first).
    MinCorrelation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Catalyst layouts to try, in order. Supported: `[2, 2]`, `[2, 2, 2]`.
    pub dims: Vec<Vec<usize>>,
    /// Ground-state marginals range over `k / marginal_grid`, `0 < k < marginal_grid`.
    pub marginal_grid: usize,
    /// Free polytope parameters take `polytope_grid + 1` evenly spaced values
    /// across their feasible interval.
    pub polytope_grid: usize,
    /// Maximum number of candidate joints evaluated.
    pub budget_cells: usize,
    pub selection: Selection,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            dims: vec![vec![2, 2], vec![2, 2, 2]],
            marginal_grid: 20,
            polytope_grid: 20,
            budget_cells: 200_000,
            selection: Selection::First,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalystFound {
    pub joint: JointCatalyst<f64>,
    pub comparison: CurveComparison,
    pub total_correlation: f64,
    /// Grid coordinates of the cell: ground marginals, then polytope parameters.
    pub parameters: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub found: Option<CatalystFound>,
    pub cells_evaluated: usize,
}

/// Resolutions visited, coarse to fine.
fn levels(n: usize) -> Vec<usize> {
    let mut out: Vec<usize> = [n / 4, n / 2, n].into_iter().filter(|&k| k >= 1).collect();
    out.dedup();
    out
}

struct Scan<'a> {
    a: &'a BlockState<f64>,
    b: &'a BlockState<f64>,
    budget: usize,
    evaluated: usize,
}

impl Scan<'_> {
    /// `None` once the budget is spent.
    fn try_cell(
        &mut self,
        joint: JointCatalyst<f64>,
        parameters: Vec<f64>,
    ) -> Option<Option<CatalystFound>> {
        if self.evaluated >= self.budget {
            return None;
        }
        self.evaluated += 1;
        let cmp = verify_correlating_transition(self.a, self.b, &joint).ok()?;
        if !cmp.verdict.allows() {
            return Some(None);
        }
        let total = total_correlation(&joint).ok()?;
        Some(Some(CatalystFound {
            joint,
            comparison: cmp,
            total_correlation: total,
            parameters,
        }))
    }
}

/// Enumerates every candidate joint of one layout at one resolution, in
/// lexicographic order, until `visit` returns `false`.
fn for_each_cell(
    dims: &[usize],
    mg: usize,
    pg: usize,
    mut visit: impl FnMut(JointCatalyst<f64>, Vec<f64>) -> bool,
) {
    let grid = |k: usize, n: usize| k as f64 / n as f64;
    let interp = |lo: f64, hi: f64, j: usize| lo + (hi - lo) * grid(j, pg);
    match dims.len() {
        2 => {
            for ks in 1..mg {
                for kq in 1..mg {
                    let (s, q) = (grid(ks, mg), grid(kq, mg));
                    let (lo, hi) = qubit_pair_interval(&s, &q);
                    for j in 0..=pg {
                        let x10 = interp(lo, hi, j);
                        if let Ok(joint) = qubit_pair_catalyst(s, q, x10) {
                            if !visit(joint, vec![s, q, x10]) {
                                return;
                            }
                        }
                    }
                }
            }
        }
        3 => {
            for ks in 1..mg {
                for kq in 1..mg {
                    for kr in 1..mg {
                        let m = [grid(ks, mg), grid(kq, mg), grid(kr, mg)];
                        let (u, v, w) = (1.0 - m[0], 1.0 - m[1], 1.0 - m[2]);
                        let (ra, rb, rc) = (pair_range(u, v), pair_range(u, w), pair_range(v, w));
                        for ja in 0..=pg {
                            let a = interp(ra.0, ra.1, ja);
                            for jb in 0..=pg {
                                let b = interp(rb.0, rb.1, jb);
                                for jc in 0..=pg {
                                    let c = interp(rc.0, rc.1, jc);
                                    let lo = 0f64.max(a + b - u).max(a + c - v).max(b + c - w);
                                    let hi = a.min(b).min(c).min(1.0 - u - v - w + a + b + c);
                                    if lo > hi + 1e-12 {
                                        continue;
                                    }
                                    for jd in 0..=pg {
                                        let d = interp(lo, hi.max(lo), jd);
                                        if let Some(joint) = qubit_triple_catalyst(m, [a, b, c], d)
                                        {
                                            if !visit(joint, vec![m[0], m[1], m[2], a, b, c, d]) {
                                                return;
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        _ => unreachable!("layouts are validated before scanning"),
    }
}

fn supported(dims: &[usize]) -> bool {
    matches!(dims, [2, 2] | [2, 2, 2])
}

/// Grid search over qubit catalysts for a joint passing
/// [`verify_correlating_transition`].
///
/// Requires `F(a) ≥ F(b) − τ`. If `a` already thermomajorizes `b`, a
/// uniform product catalyst (zero correlation) is returned at once. A `None`
/// result means nothing was found at this resolution and budget, not that
/// the transition is impossible.
pub fn search_correlating_catalyst(
    a: &BlockState<f64>,
    b: &BlockState<f64>,
    config: &SearchConfig,
) -> Result<SearchResult> {
    if let Some(bad) = config.dims.iter().find(|d| !supported(d)) {
        return Err(Error::UnsupportedDims(bad.clone()));
    }
    if !correlating_catalytic_possible(a, b)?.possible {
        return Err(Error::Precondition(
            "free energy of the initial state is below that of the target",
        ));
    }
    if thermomajorizes(a, b)?.verdict.allows() {
        let layout = config.dims.first().cloned().unwrap_or_else(|| vec![2, 2]);
        let locals: Vec<Vec<f64>> = layout.iter().map(|&d| vec![1.0 / d as f64; d]).collect();
        let joint = JointCatalyst::product(&locals)?;
        let comparison = verify_correlating_transition(a, b, &joint)?;
        let parameters = vec![0.5; layout.len()];
        let found = CatalystFound {
            joint,
            comparison,
            total_correlation: 0.0,
            parameters,
        };
        return Ok(SearchResult {
            found: Some(found),
            cells_evaluated: 0,
        });
    }

    let mut scan = Scan {
        a,
        b,
        budget: config.budget_cells,
        evaluated: 0,
    };
    for dims in &config.dims {
        for (mg, pg) in levels(config.marginal_grid)
            .into_iter()
            .zip(levels(config.polytope_grid))
        {
            let mut best: Option<CatalystFound> = None;
            let mut exhausted = false;
            for_each_cell(dims, mg, pg, |joint, params| {
                match scan.try_cell(joint, params) {
                    None => {
                        exhausted = true;
                        false
                    }
                    Some(None) => true,
                    Some(Some(hit)) => {
                        let better = best
                            .as_ref()
                            .is_none_or(|b| hit.total_correlation < b.total_correlation);
                        if better {
                            best = Some(hit);
                        }
                        config.selection == Selection::MinCorrelation
                    }
                }
            });
            if best.is_some() {
                return Ok(SearchResult {
                    found: best,
                    cells_evaluated: scan.evaluated,
                });
            }
            if exhausted {
                return Ok(SearchResult {
                    found: None,
                    cells_evaluated: scan.evaluated,
                });
            }
        }
    }
    Ok(SearchResult {
        found: None,
        cells_evaluated: scan.evaluated,
    })
}

/// Free energies relative to the Gibbs state, in units of `kT`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkQuantities {
    pub f0: f64,
    pub f1: f64,
    pub finf: f64,
}

impl WorkQuantities {
    /// Work extractable deterministically.
    pub fn deterministic_extraction(&self) -> f64 {
        self.f0
    }

    /// Work needed to form the state deterministically.
    pub fn formation(&self) -> f64 {
        self.finf
    }

    /// Work extractable with correlating catalysts.
    pub fn correlated_extraction(&self) -> f64 {
        self.f1
    }
}

/// `f_k = F_k(s) − F_k(γ)` for `k ∈ {0, 1, ∞}`.
pub fn work_quantities(s: &BlockState<f64>) -> Result<WorkQuantities> {
    let gamma = gibbs_state(s.ham());
    let rel = |alpha| -> Result<f64> {
        free_energy_alpha(s, alpha)?
            .checked_sub(free_energy_alpha(&gamma, alpha)?)
            .and_then(ExtReal::finite)
            .ok_or(Error::Numerical("relative free energy is not finite"))
    };
    Ok(WorkQuantities {
        f0: rel(Alpha::Zero)?,
        f1: rel(Alpha::One)?,
        finf: rel(Alpha::PosInf)?,
    })
}

/// `‖c‖_α` and whether `1 ≤ n^{1−1/α} ‖c‖_α` holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormProbe {
    pub alpha: f64,
    pub norm: f64,
    pub holds: bool,
}

pub fn norm_probe(c: &[f64], alpha: f64) -> NormProbe {
    let n = c.len() as f64;
    let norm = libm::pow(
        c.iter().map(|&x| libm::pow(x, alpha)).sum::<f64>(),
        1.0 / alpha,
    );
    let holds = libm::pow(n, 1.0 - 1.0 / alpha) * norm >= 1.0 - 1e-12;
    NormProbe { alpha, norm, holds }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonRun {
    pub epsilon: f64,
    pub found: Option<CatalystFound>,
    pub cells_evaluated: usize,
    /// `F(b) − F(b_ε)`, an upper bound on the correlation a joint that
    /// restores its marginals can carry.
    pub bound: f64,
    /// Norm checks on the found joint at α ∈ {2, 4, 10}.
    pub norms: Vec<NormProbe>,
    /// Set when the search errored; the run is recorded rather than aborted.
    pub error: Option<Error>,
}

impl EpsilonRun {
    pub fn total_correlation(&self) -> Option<f64> {
        self.found.as_ref().map(|f| f.total_correlation)
    }
}

/// For each ε, smooths the target to `b_ε = (1 − ε) b + ε γ` and searches for
/// a correlating catalyst reaching it.
pub fn shrinking_epsilon_demo(
    a: &BlockState<f64>,
    b: &BlockState<f64>,
    epsilons: &[f64],
    config: &SearchConfig,
) -> Result<Vec<EpsilonRun>> {
    if !correlating_catalytic_possible(a, b)?.possible {
        return Err(Error::Precondition(
            "free energy of the initial state is below that of the target",
        ));
    }
    let gamma = gibbs_state(b.ham());
    let fb = f1(b)?;
    epsilons
        .iter()
        .map(|&epsilon| {
            if !(0.0..=1.0).contains(&epsilon) {
                return Err(Error::OutOfRange {
                    name: "epsilon",
                    value: epsilon,
                });
            }
            let mixed: Vec<f64> = b
                .probs()
                .iter()
                .zip(gamma.probs())
                .map(|(x, g)| (1.0 - epsilon) * x + epsilon * g)
                .collect();
            let b_eps = BlockState::new(mixed, b.ham().clone())?;
            let bound = fb - f1(&b_eps)?;
            let (found, cells_evaluated, error) =
                match search_correlating_catalyst(a, &b_eps, config) {
                    Ok(r) => (r.found, r.cells_evaluated, None),
                    Err(e) => (None, 0, Some(e)),
                };
            let norms = found
                .as_ref()
                .map(|f| {
                    [2.0, 4.0, 10.0]
                        .iter()
                        .map(|&al| norm_probe(f.joint.probs(), al))
                        .collect()
                })
                .unwrap_or_default();
            Ok(EpsilonRun {
                epsilon,
                found,
                cells_evaluated,
                bound,
                norms,
                error,
            })
        })
        .collect()
}
