//! Energy-block-diagonal states, Gibbs states and composite systems.
//!
//! Tensor products flatten in row-major order: index `i * len(b) + j` of
//! `a ⊗ b` holds `a[i] * b[j]` at level `E_i + E_j`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Energy levels in units of `kT` (the stored numbers are `βE_i`).
///
/// A Hamiltonian may additionally carry exact rational Gibbs weights. When
/// present they define `g_i` in both numeric modes and the levels are
/// `-ln g_i`; this is how exactly-rational Gibbs states are expressed.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    levels: Vec<f64>,
    weights: Option<Vec<Rational>>,
}

impl Hamiltonian {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::EmptyHamiltonian);
        }
        if let Some(i) = levels.iter().position(|e| !e.is_finite()) {
            return Err(Error::NonFiniteLevel(i));
        }
        Ok(Self {
            levels,
            weights: None,
        })
    }

    /// All levels degenerate at zero energy.
    pub fn trivial(n: usize) -> Self {
        assert!(n > 0, "trivial Hamiltonian needs at least one level");
        Self {
            levels: vec![0.0; n],
            weights: None,
        }
    }

    /// Builds the Hamiltonian whose unnormalized Gibbs factors are exactly
    /// `weights`.
    pub fn from_gibbs_weights(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyHamiltonian);
        }
        if let Some(i) = weights.iter().position(|w| *w <= Rational::zero()) {
            return Err(Error::NonPositiveWeight(i));
        }
        let levels = weights.iter().map(|w| -libm::log(w.to_f64())).collect();
        Ok(Self {
            levels,
            weights: Some(weights),
        })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn exact_weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        match &self.weights {
            Some(w) => w.iter().all(|x| *x == w[0]),
            None => self.levels.iter().all(|&e| e == self.levels[0]),
        }
    }

    pub fn gibbs_factors(&self) -> GibbsFactors<f64> {
        self.gibbs_factors_in()
    }

    /// Gibbs factors `g_i = exp(-βE_i)` in the requested arithmetic. In exact
    /// mode, levels without exact weights are rationalized after evaluating
    /// the exponential in `f64`.
    pub fn gibbs_factors_in<S: Scalar>(&self) -> GibbsFactors<S> {
        let g: Vec<S> = match &self.weights {
            Some(w) => w.iter().map(S::from_rational).collect(),
            None => self
                .levels
                .iter()
                .map(|&e| S::from_f64(libm::exp(-e)).unwrap_or_else(S::zero))
                .collect(),
        };
        let z = g.iter().cloned().fold(S::zero(), |acc, x| acc + x);
        GibbsFactors { g, z }
    }

    /// Composite Hamiltonian `H_a ⊗ 1 + 1 ⊗ H_b`, flattened row-major.
    pub fn combine(&self, other: &Hamiltonian) -> Hamiltonian {
        let levels = self
            .levels
            .iter()
            .flat_map(|&a| other.levels.iter().map(move |&b| a + b))
            .collect();
        let weights = match (&self.weights, &other.weights) {
            (Some(wa), Some(wb)) => Some(
                wa.iter()
                    .flat_map(|a| wb.iter().map(move |b| a * b))
                    .collect(),
            ),
            _ => None,
        };
        Hamiltonian { levels, weights }
    }

    /// Same spectrum and, if both carry them, same exact weights.
    pub fn same_as(&self, other: &Hamiltonian) -> bool {
        self.levels == other.levels
            && match (&self.weights, &other.weights) {
                (Some(a), Some(b)) => a == b,
                _ => true,
            }
    }
}

/// Unnormalized Gibbs factors and their sum, the partition function.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsFactors<S = f64> {
    pub g: Vec<S>,
    pub z: S,
}

impl<S: Scalar> GibbsFactors<S> {
    pub fn probabilities(&self) -> Vec<S> {
        self.g.iter().map(|x| x.clone() / self.z.clone()).collect()
    }
}

/// Arithmetic used for probability-valued decisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NumericMode {
    Float64 { tol: f64 },
    ExactRational,
}

impl Default for NumericMode {
    fn default() -> Self {
        NumericMode::Float64 { tol: 1e-12 }
    }
}

/// Checks non-negativity and normalization within `tol`.
pub(crate) fn validate_distribution<S: Scalar>(probs: &[S], tol: &S) -> Result<()> {
    for (i, p) in probs.iter().enumerate() {
        if !(p.to_f64().is_finite() || S::EXACT) || *p < S::zero() {
            return Err(Error::InvalidProbability(i));
        }
    }
    let sum = probs.iter().cloned().fold(S::zero(), |acc, x| acc + x);
    if (sum.clone() - S::one()).abs() > *tol {
        return Err(Error::NotNormalized { sum: sum.to_f64() });
    }
    Ok(())
}

/// Occupation probabilities over the levels of a Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockState<S = f64> {
    probs: Vec<S>,
    ham: Hamiltonian,
}

impl<S: Scalar> BlockState<S> {
    /// Validates with the mode's default normalization tolerance. States that
    /// fail are rejected, never renormalized.
    pub fn new(probs: Vec<S>, ham: Hamiltonian) -> Result<Self> {
        Self::with_tolerance(probs, ham, &S::norm_tol())
    }

    pub fn with_tolerance(probs: Vec<S>, ham: Hamiltonian, tol: &S) -> Result<Self> {
        if probs.len() != ham.len() {
            return Err(Error::LengthMismatch {
                expected: ham.len(),
                found: probs.len(),
            });
        }
        validate_distribution(&probs, tol)?;
        Ok(Self { probs, ham })
    }

    /// A state over the trivial Hamiltonian of matching size.
    pub fn trivial(probs: Vec<S>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::EmptyHamiltonian);
        }
        let ham = Hamiltonian::trivial(probs.len());
        Self::new(probs, ham)
    }

    pub fn probs(&self) -> &[S] {
        &self.probs
    }

    pub fn ham(&self) -> &Hamiltonian {
        &self.ham
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.probs.iter().filter(|p| !p.is_zero()).count()
    }

    pub fn to_f64(&self) -> BlockState<f64> {
        BlockState {
            probs: self.probs.iter().map(Scalar::to_f64).collect(),
            ham: self.ham.clone(),
        }
    }

    pub fn into_parts(self) -> (Vec<S>, Hamiltonian) {
        (self.probs, self.ham)
    }
}

impl BlockState<f64> {
    /// Exact copy: each entry becomes its shortest round-trip decimal, then
    /// the vector is rescaled to sum to exactly one.
    pub fn to_exact(&self) -> BlockState<Rational> {
        let probs = exact_normalized(&self.probs);
        BlockState {
            probs,
            ham: self.ham.clone(),
        }
    }
}

pub(crate) fn exact_normalized(probs: &[f64]) -> Vec<Rational> {
    let raw: Vec<Rational> = probs
        .iter()
        .map(|&p| <Rational as Scalar>::from_f64(p).unwrap_or_else(Rational::zero))
        .collect();
    let sum = raw.iter().cloned().fold(Rational::zero(), |a, b| a + b);
    if Scalar::is_zero(&sum) {
        return raw;
    }
    raw.into_iter().map(|p| p / sum.clone()).collect()
}

/// Thermal equilibrium state `g_i / Z`.
pub fn gibbs_state(ham: &Hamiltonian) -> BlockState<f64> {
    gibbs_state_in(ham)
}

pub fn gibbs_state_in<S: Scalar>(ham: &Hamiltonian) -> BlockState<S> {
    let probs = ham.gibbs_factors_in::<S>().probabilities();
    BlockState {
        probs,
        ham: ham.clone(),
    }
}

/// Composite state `a ⊗ b` over the summed Hamiltonian.
pub fn tensor<S: Scalar>(a: &BlockState<S>, b: &BlockState<S>) -> BlockState<S> {
    BlockState {
        probs: outer(&a.probs, &b.probs),
        ham: a.ham.combine(&b.ham),
    }
}

pub(crate) fn outer<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.clone() * y.clone()))
        .collect()
}

/// Joint distribution over auxiliary systems with trivial Hamiltonians.
#[derive(Debug, Clone, PartialEq)]
pub struct JointCatalyst<S = f64> {
    probs: Vec<S>,
    dims: Vec<usize>,
}

impl<S: Scalar> JointCatalyst<S> {
    pub fn new(probs: Vec<S>, dims: Vec<usize>) -> Result<Self> {
        let product: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) || product != probs.len() {
            return Err(Error::DimensionMismatch {
                product,
                len: probs.len(),
            });
        }
        validate_distribution(&probs, &S::norm_tol())?;
        Ok(Self { probs, dims })
    }

    /// The uncorrelated joint `c_1 ⊗ … ⊗ c_N`.
    pub fn product(factors: &[Vec<S>]) -> Result<Self> {
        let dims = factors.iter().map(Vec::len).collect();
        let probs = factors.iter().fold(vec![S::one()], |acc, f| outer(&acc, f));
        Self::new(probs, dims)
    }

    pub fn probs(&self) -> &[S] {
        &self.probs
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Sums out every subsystem except `which`.
    pub fn marginal(&self, which: usize) -> Result<BlockState<S>> {
        Ok(BlockState::trivial(self.marginal_probs(which)?).expect("marginal of a valid joint"))
    }

    pub fn marginal_probs(&self, which: usize) -> Result<Vec<S>> {
        if which >= self.dims.len() {
            return Err(Error::SubsystemOutOfRange {
                which,
                count: self.dims.len(),
            });
        }
        let inner: usize = self.dims[which + 1..].iter().product();
        let d = self.dims[which];
        let mut out = vec![S::zero(); d];
        for (idx, p) in self.probs.iter().enumerate() {
            let k = (idx / inner) % d;
            out[k] = out[k].clone() + p.clone();
        }
        Ok(out)
    }

    pub fn marginals(&self) -> Vec<Vec<S>> {
        (0..self.dims.len())
            .map(|i| self.marginal_probs(i).expect("index in range"))
            .collect()
    }

    /// Product of this joint's own marginals.
    pub fn decorrelated(&self) -> Self {
        Self::product(&self.marginals()).expect("marginals of a valid joint")
    }

    /// The joint as a state of the trivial composite Hamiltonian.
    pub fn as_state(&self) -> BlockState<S> {
        BlockState {
            probs: self.probs.clone(),
            ham: Hamiltonian::trivial(self.probs.len()),
        }
    }

    pub fn to_f64(&self) -> JointCatalyst<f64> {
        JointCatalyst {
            probs: self.probs.iter().map(Scalar::to_f64).collect(),
            dims: self.dims.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn gibbs_examples() {
        let single = gibbs_state(&Hamiltonian::new(vec![0.0]).unwrap());
        assert_eq!(single.probs(), &[1.0]);

        let qubit = gibbs_state(&Hamiltonian::new(vec![0.0, 1.0]).unwrap());
        let e = (-1.0f64).exp();
        assert!(close(
            qubit.probs(),
            &[1.0 / (1.0 + e), e / (1.0 + e)],
            1e-15
        ));

        let flat = gibbs_state(&Hamiltonian::trivial(3));
        assert!(close(flat.probs(), &[1.0 / 3.0; 3], 1e-15));
    }

    #[test]
    fn exact_weights_give_exact_gibbs() {
        let ham =
            Hamiltonian::from_gibbs_weights(vec![Rational::from_u64(2), Rational::from_u64(1)])
                .unwrap();
        let g = gibbs_state_in::<Rational>(&ham);
        assert_eq!(g.probs()[0], Rational::new(2.into(), 3.into()));
        assert!((ham.levels()[1] - 0.0).abs() < 1e-15);
        assert!((ham.levels()[0] + 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn tensor_examples() {
        let unit = BlockState::new(vec![1.0], Hamiltonian::new(vec![0.0]).unwrap()).unwrap();
        let p =
            BlockState::new(vec![0.73, 0.27], Hamiltonian::new(vec![0.0, 1.0]).unwrap()).unwrap();
        let t = tensor(&unit, &p);
        assert_eq!(t.probs(), p.probs());
        assert_eq!(t.ham().levels(), p.ham().levels());

        let bit =
            BlockState::new(vec![1.0, 0.0], Hamiltonian::new(vec![0.0, 0.01]).unwrap()).unwrap();
        let t = tensor(&p, &bit);
        assert_eq!(t.probs(), &[0.73, 0.0, 0.27, 0.0]);
        assert_eq!(t.ham().levels(), &[0.0, 0.01, 1.0, 1.01]);

        let u = BlockState::trivial(vec![0.5, 0.5]).unwrap();
        assert_eq!(tensor(&u, &u).probs(), &[0.25; 4]);
    }

    #[test]
    fn marginal_examples() {
        let joint = JointCatalyst::new(vec![0.66, 0.29, 0.04, 0.01], vec![2, 2]).unwrap();
        assert!(close(
            joint.marginal(0).unwrap().probs(),
            &[0.95, 0.05],
            1e-15
        ));
        assert!(close(
            joint.marginal(1).unwrap().probs(),
            &[0.70, 0.30],
            1e-15
        ));

        let prod = JointCatalyst::product(&[vec![0.2, 0.8], vec![0.1, 0.3, 0.6]]).unwrap();
        assert!(close(prod.marginal(0).unwrap().probs(), &[0.2, 0.8], 1e-15));
        assert!(close(
            prod.marginal(1).unwrap().probs(),
            &[0.1, 0.3, 0.6],
            1e-15
        ));
        assert!(matches!(
            joint.marginal(2),
            Err(Error::SubsystemOutOfRange { .. })
        ));
        assert!(matches!(
            JointCatalyst::new(vec![0.5, 0.5], vec![2, 2]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn exact_marginals_of_decimal_joint() {
        let joint = JointCatalyst::new(
            ["0.66", "0.29", "0.04", "0.01"]
                .iter()
                .map(|s| crate::parse_rational(s).unwrap())
                .collect(),
            vec![2, 2],
        )
        .unwrap();
        assert_eq!(
            joint.marginal_probs(0).unwrap(),
            vec![
                crate::parse_rational("0.95").unwrap(),
                crate::parse_rational("0.05").unwrap()
            ]
        );
        assert_eq!(
            joint.marginal_probs(1).unwrap(),
            vec![
                crate::parse_rational("7/10").unwrap(),
                crate::parse_rational("3/10").unwrap()
            ]
        );
    }

    #[test]
    fn rejects_invalid_states() {
        let ham = Hamiltonian::trivial(2);
        assert!(matches!(
            BlockState::new(vec![0.5, 0.6], ham.clone()),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            BlockState::new(vec![1.5, -0.5], ham.clone()),
            Err(Error::InvalidProbability(1))
        ));
        assert!(matches!(
            BlockState::new(vec![f64::NAN, 1.0], ham.clone()),
            Err(Error::InvalidProbability(0))
        ));
        assert!(matches!(
            BlockState::new(vec![1.0], ham),
            Err(Error::LengthMismatch { .. })
        ));
        assert_eq!(Hamiltonian::new(vec![]), Err(Error::EmptyHamiltonian));
        assert_eq!(
            Hamiltonian::new(vec![0.0, f64::INFINITY]),
            Err(Error::NonFiniteLevel(1))
        );
    }

    #[test]
    fn zero_probabilities_are_kept() {
        let s = BlockState::trivial(vec![0.5, 0.5, 0.0]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.rank(), 2);
    }
}
