//! The block-embedding map onto a uniform reference.
//!
//! Given positive integers `d_1, …, d_n` with sum `D`, level `i` is split into
//! `d_i` equal sub-levels. A state whose Gibbs distribution is exactly
//! `d_i / D` then embeds onto a `D`-level system whose reference state is
//! uniform, and thermal Lorenz curves become ordinary ones (scaled by `D`).

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::entropy::{free_energy_alpha, renyi_entropy, Alpha};
use crate::error::{Error, Result};
use crate::scalar::{ExtReal, Rational, Scalar};
use crate::state::{gibbs_state, BlockState, Hamiltonian};

/// Block sizes `d_i ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingSpec {
    pub d: Vec<u64>,
}

impl EmbeddingSpec {
    pub fn new(d: Vec<u64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::EmptyHamiltonian);
        }
        if let Some(i) = d.iter().position(|&x| x == 0) {
            return Err(Error::NonPositiveWeight(i));
        }
        Ok(Self { d })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// `D = Σ d_i`.
    pub fn total(&self) -> u64 {
        self.d.iter().sum()
    }

    /// The reference distribution `d_i / D`, exactly.
    pub fn gibbs(&self) -> Vec<Rational> {
        let total = Rational::from_u64(self.total());
        self.d
            .iter()
            .map(|&x| Rational::from_u64(x) / total.clone())
            .collect()
    }

    /// Hamiltonian whose Gibbs state is exactly `d_i / D`.
    pub fn hamiltonian(&self) -> Hamiltonian {
        Hamiltonian::from_gibbs_weights(self.d.iter().map(|&x| Rational::from_u64(x)).collect())
            .expect("block sizes are positive")
    }
}

/// Approximates the Gibbs state of `ham` by `d_i / D` with `D ≤ max_denominator`
/// and every `d_i ≥ 1`, minimizing `max_i |d_i/D − γ_i|`. Ties go to the
/// smallest `D`.
///
/// When the Hamiltonian carries exact weights whose Gibbs state has a common
/// denominator within range, that representation is returned with error 0.
pub fn rational_gibbs(ham: &Hamiltonian, max_denominator: u64) -> Result<(EmbeddingSpec, f64)> {
    let n = ham.len();
    if max_denominator < n as u64 {
        return Err(Error::DenominatorTooSmall {
            max: max_denominator,
            levels: n,
        });
    }
    if let Some(spec) = exact_blocks(ham, max_denominator) {
        return Ok((spec, 0.0));
    }
    let gamma = gibbs_state(ham).into_parts().0;
    let mut best: Option<(Vec<u64>, f64)> = None;
    for total in n as u64..=max_denominator {
        let d = round_to_total(&gamma, total);
        let err = max_error(&d, total, &gamma);
        if best.as_ref().is_none_or(|(_, e)| err < *e) {
            best = Some((d, err));
            if err == 0.0 {
                break;
            }
        }
    }
    let (d, err) = best.expect("scan range is non-empty");
    Ok((EmbeddingSpec { d }, err))
}

fn exact_blocks(ham: &Hamiltonian, max_denominator: u64) -> Option<EmbeddingSpec> {
    let w = ham.exact_weights()?;
    let z = w
        .iter()
        .cloned()
        .fold(<Rational as Zero>::zero(), |a, b| a + b);
    let gamma: Vec<Rational> = w.iter().map(|x| x / z.clone()).collect();
    let lcm = gamma
        .iter()
        .fold(BigInt::one(), |acc, g| acc.lcm(g.denom()));
    if lcm > BigInt::from(max_denominator) {
        return None;
    }
    let d = gamma
        .iter()
        .map(|g| (g.numer() * (&lcm / g.denom())).to_u64())
        .collect::<Option<Vec<u64>>>()?;
    Some(EmbeddingSpec { d })
}

/// Rounds `γ·D`, floors every block at 1, then restores `Σ d_i = D` by
/// moving units where the rounding error is largest.
fn round_to_total(gamma: &[f64], total: u64) -> Vec<u64> {
    let target: Vec<f64> = gamma.iter().map(|g| g * total as f64).collect();
    let mut d: Vec<u64> = target
        .iter()
        .map(|t| (libm::round(*t) as u64).max(1))
        .collect();
    let mut sum: u64 = d.iter().sum();
    while sum > total {
        let i = (0..d.len())
            .filter(|&i| d[i] > 1)
            .max_by(|&i, &j| (d[i] as f64 - target[i]).total_cmp(&(d[j] as f64 - target[j])))
            .expect("total ≥ number of levels");
        d[i] -= 1;
        sum -= 1;
    }
    while sum < total {
        let i = (0..d.len())
            .max_by(|&i, &j| (target[i] - d[i] as f64).total_cmp(&(target[j] - d[j] as f64)))
            .expect("non-empty");
        d[i] += 1;
        sum += 1;
    }
    d
}

fn max_error(d: &[u64], total: u64, gamma: &[f64]) -> f64 {
    d.iter()
        .zip(gamma)
        .map(|(&x, g)| (x as f64 / total as f64 - g).abs())
        .fold(0.0, f64::max)
}

/// `Γ_d(p)`: block `i` holds `d_i` copies of `p_i / d_i`.
pub fn embed<S: Scalar>(p: &[S], spec: &EmbeddingSpec) -> Result<Vec<S>> {
    if p.len() != spec.len() {
        return Err(Error::LengthMismatch {
            expected: spec.len(),
            found: p.len(),
        });
    }
    let mut out = Vec::with_capacity(spec.total() as usize);
    for (pi, &di) in p.iter().zip(&spec.d) {
        let share = pi.clone() / S::from_u64(di);
        out.extend(core::iter::repeat_n(share, di as usize));
    }
    Ok(out)
}

/// Left inverse of [`embed`]: sums each block.
pub fn unembed<S: Scalar>(v: &[S], spec: &EmbeddingSpec) -> Result<Vec<S>> {
    let total = spec.total() as usize;
    if v.len() != total {
        return Err(Error::LengthMismatch {
            expected: total,
            found: v.len(),
        });
    }
    let mut out = vec![S::zero(); spec.len()];
    let mut offset = 0;
    for (slot, &di) in out.iter_mut().zip(&spec.d) {
        let di = di as usize;
        *slot = v[offset..offset + di]
            .iter()
            .cloned()
            .fold(S::zero(), |a, b| a + b);
        offset += di;
    }
    Ok(out)
}

/// Largest deviation, over `alphas`, between `F_α(s) − F_α(γ)` and
/// `±ln D − H_α(Γ_d(p))` (the sign is that of α; α = 0 uses `+`).
///
/// The spec's reference `d_i/D` must match the Gibbs state of `s`: exactly
/// when the Hamiltonian carries exact weights, to `1e-12` otherwise.
pub fn embedding_identity_check(
    s: &BlockState<f64>,
    spec: &EmbeddingSpec,
    alphas: &[Alpha],
) -> Result<f64> {
    if s.len() != spec.len() {
        return Err(Error::LengthMismatch {
            expected: spec.len(),
            found: s.len(),
        });
    }
    let reference = spec.gibbs();
    let deviation = gibbs_deviation(s.ham(), &reference);
    let exact_match = s.ham().exact_weights().map(|w| {
        let z = w
            .iter()
            .cloned()
            .fold(<Rational as Zero>::zero(), |a, b| a + b);
        w.iter().zip(&reference).all(|(x, r)| x / z.clone() == *r)
    });
    if exact_match == Some(false) || deviation > 1e-12 {
        return Err(Error::GibbsMismatch { deviation });
    }

    let gamma = gibbs_state(s.ham());
    let embedded = embed(s.probs(), spec)?;
    let ln_d = libm::log(spec.total() as f64);
    let mut worst: f64 = 0.0;
    for &a in alphas {
        let lhs = free_energy_alpha(s, a)?.checked_sub(free_energy_alpha(&gamma, a)?);
        let offset = if a.is_negative() { -ln_d } else { ln_d };
        let rhs = (-renyi_entropy(&embedded, a)?).checked_add(ExtReal::Finite(offset));
        let dev = match (lhs, rhs) {
            (Some(ExtReal::Finite(l)), Some(ExtReal::Finite(r))) => (l - r).abs(),
            (Some(l), Some(r)) if l == r => 0.0,
            _ => f64::INFINITY,
        };
        worst = worst.max(dev);
    }
    Ok(worst)
}

fn gibbs_deviation(ham: &Hamiltonian, reference: &[Rational]) -> f64 {
    let g = gibbs_state(ham);
    g.probs()
        .iter()
        .zip(reference)
        .map(|(x, r)| (x - Scalar::to_f64(r)).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::nonnegative_alpha_grid;

    fn r(s: &str) -> Rational {
        crate::parse_rational(s).unwrap()
    }

    #[test]
    fn rational_gibbs_examples() {
        let (spec, err) = rational_gibbs(&Hamiltonian::trivial(4), 100).unwrap();
        assert_eq!(spec.d, vec![1, 1, 1, 1]);
        assert_eq!(err, 0.0);

        let exact = Hamiltonian::from_gibbs_weights(vec![r("2"), r("1")]).unwrap();
        let (spec, err) = rational_gibbs(&exact, 3).unwrap();
        assert_eq!(spec.d, vec![2, 1]);
        assert_eq!(err, 0.0);

        let float = Hamiltonian::new(vec![0.0, 2f64.ln()]).unwrap();
        let (spec, err) = rational_gibbs(&float, 10).unwrap();
        assert_eq!(spec.d, vec![2, 1]);
        assert!(err < 1e-15);

        let qubit = Hamiltonian::new(vec![0.0, 1.0]).unwrap();
        let (spec, err) = rational_gibbs(&qubit, 1000).unwrap();
        assert!(err < 1e-3);
        assert!(spec.total() <= 1000 && spec.d.iter().all(|&x| x >= 1));

        assert!(matches!(
            rational_gibbs(&Hamiltonian::trivial(5), 4),
            Err(Error::DenominatorTooSmall { .. })
        ));
    }

    #[test]
    fn blocks_stay_positive_for_tiny_weights() {
        let ham = Hamiltonian::new(vec![0.0, 30.0, 30.0]).unwrap();
        let (spec, _) = rational_gibbs(&ham, 5).unwrap();
        assert!(spec.d.iter().all(|&x| x >= 1));
        assert!(spec.total() <= 5);
    }

    #[test]
    fn embed_examples() {
        let spec = EmbeddingSpec::new(vec![2, 1]).unwrap();
        assert_eq!(embed(&[1.0, 0.0], &spec).unwrap(), vec![0.5, 0.5, 0.0]);
        let e = embed(&[0.73, 0.27], &spec).unwrap();
        assert!((e[0] - 0.365).abs() < 1e-15 && (e[1] - 0.365).abs() < 1e-15 && e[2] == 0.27);
        assert_eq!(unembed(&[0.5, 0.5, 0.0], &spec).unwrap(), vec![1.0, 0.0]);

        let uniform = vec![r("1/3"); 3];
        assert_eq!(unembed(&uniform, &spec).unwrap(), spec.gibbs());
        assert_eq!(embed(&spec.gibbs(), &spec).unwrap(), uniform);
        assert!(matches!(
            embed(&[1.0], &spec),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(EmbeddingSpec::new(vec![1, 0]).is_err());
    }

    #[test]
    fn identity_check_examples() {
        let spec = EmbeddingSpec::new(vec![2, 1]).unwrap();
        let ham = spec.hamiltonian();
        let grid = crate::entropy::default_alpha_grid();

        let gamma = gibbs_state(&ham);
        assert!(embedding_identity_check(&gamma, &spec, &grid).unwrap() < 1e-12);

        let pure = BlockState::new(vec![1.0, 0.0], ham.clone()).unwrap();
        let zero = [Alpha::Zero];
        assert!(embedding_identity_check(&pure, &spec, &zero).unwrap() < 1e-15);
        let f0 = free_energy_alpha(&pure, Alpha::Zero)
            .unwrap()
            .finite()
            .unwrap()
            - free_energy_alpha(&gamma, Alpha::Zero)
                .unwrap()
                .finite()
                .unwrap();
        assert!((f0 - 1.5f64.ln()).abs() < 1e-15);
        assert!(embedding_identity_check(&pure, &spec, &grid).unwrap() < 1e-10);

        let mixed = BlockState::new(vec![0.2, 0.8], ham).unwrap();
        assert!(embedding_identity_check(&mixed, &spec, &grid).unwrap() < 1e-10);
        assert!(
            embedding_identity_check(&mixed, &spec, &nonnegative_alpha_grid()).unwrap() < 1e-10
        );

        let wrong =
            BlockState::new(vec![0.2, 0.8], Hamiltonian::new(vec![0.0, 1.0]).unwrap()).unwrap();
        assert!(matches!(
            embedding_identity_check(&wrong, &spec, &grid),
            Err(Error::GibbsMismatch { .. })
        ));
    }

    #[test]
    fn exact_round_trip() {
        let spec = EmbeddingSpec::new(vec![3, 1, 2]).unwrap();
        let p = vec![r("1/7"), r("2/7"), r("4/7")];
        assert_eq!(unembed(&embed(&p, &spec).unwrap(), &spec).unwrap(), p);
    }
}
