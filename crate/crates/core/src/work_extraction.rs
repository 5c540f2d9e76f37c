//! Work extraction from a qubit into a two-level work bit.
//!
//! A qubit with gap `βE` and ground population `p` is coupled to a work bit
//! with gap `βw`, initially in its ground state. The target leaves the qubit
//! thermal and the work bit excited up to a failure probability `ε`:
//!
//! ```text
//! ρ ⊗ |0⟩⟨0|  →  γ_S ⊗ χ_ε,   χ_ε = (ε, 1 − ε)
//! ```
//!
//! Composite levels are ordered `(0, w, E, E + w)`.

use alloc::vec;

use crate::entropy::Alpha;
use crate::error::{Error, Result};
use crate::state::{gibbs_state, tensor, BlockState, Hamiltonian};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkExtraction {
    pub beta_e: f64,
    pub beta_w: f64,
    /// Ground-state population of the qubit.
    pub p: f64,
    /// Probability that the work bit is left in its ground state.
    pub epsilon: f64,
}

impl Default for WorkExtraction {
    /// `βE = 1`, `βw = 0.01`, `p = 0.73`, `ε = 0.007`.
    fn default() -> Self {
        Self {
            beta_e: 1.0,
            beta_w: 0.01,
            p: 0.73,
            epsilon: 0.007,
        }
    }
}

impl WorkExtraction {
    pub fn validate(&self) -> Result<()> {
        let unit = |name, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::OutOfRange { name, value: v })
            }
        };
        unit("p", self.p)?;
        unit("epsilon", self.epsilon)?;
        for (name, v) in [("beta_e", self.beta_e), ("beta_w", self.beta_w)] {
            if !v.is_finite() {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        Ok(())
    }

    pub fn system_hamiltonian(&self) -> Hamiltonian {
        Hamiltonian::new(vec![0.0, self.beta_e]).expect("finite levels")
    }

    pub fn work_bit_hamiltonian(&self) -> Hamiltonian {
        Hamiltonian::new(vec![0.0, self.beta_w]).expect("finite levels")
    }

    pub fn rho(&self) -> Result<BlockState<f64>> {
        self.validate()?;
        BlockState::new(vec![self.p, 1.0 - self.p], self.system_hamiltonian())
    }

    /// `ρ ⊗ |0⟩⟨0|`.
    pub fn initial(&self) -> Result<BlockState<f64>> {
        let bit = BlockState::new(vec![1.0, 0.0], self.work_bit_hamiltonian())?;
        Ok(tensor(&self.rho()?, &bit))
    }

    /// `γ_S ⊗ χ_ε`.
    pub fn target(&self) -> Result<BlockState<f64>> {
        self.validate()?;
        let chi = BlockState::new(
            vec![self.epsilon, 1.0 - self.epsilon],
            self.work_bit_hamiltonian(),
        )?;
        Ok(tensor(&gibbs_state(&self.system_hamiltonian()), &chi))
    }

    /// `ΔF_α = F_α(target) − F_α(initial)` from its closed form, for
    /// `0 < α < ∞`:
    ///
    /// ```text
    /// −ln(1 + e^{−βE}) + 1/(α−1) · ln[(ε^α + (1−ε)^α e^{−βw(1−α)}) / (p^α + (1−p)^α e^{−βE(1−α)})]
    /// ```
    ///
    /// At α = 1 the limit `−ln Z + [ε ln ε + (1−ε)(ln(1−ε) + βw)] − [p ln p + (1−p)(ln(1−p) + βE)]`
    /// is used.
    pub fn closed_form_delta_f(&self, alpha: Alpha) -> Result<f64> {
        self.validate()?;
        let (e, w, p, eps) = (self.beta_e, self.beta_w, self.p, self.epsilon);
        let ln = libm::log;
        let ln_z = ln(1.0 + libm::exp(-e));
        match alpha.normalized() {
            Alpha::One => {
                let xlnx = |x: f64| if x > 0.0 { x * ln(x) } else { 0.0 };
                let bit = xlnx(eps) + xlnx(1.0 - eps) + (1.0 - eps) * w;
                let sys = xlnx(p) + xlnx(1.0 - p) + (1.0 - p) * e;
                Ok(-ln_z + bit - sys)
            }
            Alpha::Finite(a) if a > 0.0 => {
                let pw = libm::pow;
                let num = pw(eps, a) + pw(1.0 - eps, a) * libm::exp(-w * (1.0 - a));
                let den = pw(p, a) + pw(1.0 - p, a) * libm::exp(-e * (1.0 - a));
                Ok(-ln_z + ln(num / den) / (a - 1.0))
            }
            _ => Err(Error::OutOfRange {
                name: "alpha",
                value: alpha.value(),
            }),
        }
    }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::entropy::free_energy_alpha;

    #[test]
    fn reference_states() {
        let inst = WorkExtraction::default();
        let init = inst.initial().unwrap();
        assert_eq!(init.probs(), &[0.73, 0.0, 0.27, 0.0]);
        assert_eq!(init.ham().levels(), &[0.0, 0.01, 1.0, 1.01]);
        let fin = inst.target().unwrap();
        let z = 1.0 + (-1f64).exp();
        let expected = [
            0.007 / z,
            0.993 / z,
            0.007 * (-1f64).exp() / z,
            0.993 * (-1f64).exp() / z,
        ];
        assert!(fin
            .probs()
            .iter()
            .zip(expected)
            .all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(fin.ham().same_as(init.ham()));
    }

    #[test]
    fn closed_form_matches_oracle() {
        let inst = WorkExtraction::default();
        let cases = [
            (0.5, -0.14499587284437766),
            (1.0, -0.031781205931519315),
            (2.0, -0.0040057317483198437),
            (4.0, 0.00062242982485864840),
            (10.0, 0.0021661878545297370),
        ];
        for (a, expected) in cases {
            let got = inst.closed_form_delta_f(Alpha::new(a)).unwrap();
            assert!((got - expected).abs() < 1e-14, "α = {a}: {got}");
        }
    }

    #[test]
    fn closed_form_matches_generic_path() {
        let inst = WorkExtraction::default();
        let (init, fin) = (inst.initial().unwrap(), inst.target().unwrap());
        for a in [0.3, 0.5, 0.999, 1.0, 1.7, 2.0, 4.0, 10.0] {
            let a = Alpha::new(a);
            let generic = free_energy_alpha(&fin, a).unwrap().finite().unwrap()
                - free_energy_alpha(&init, a).unwrap().finite().unwrap();
            assert!(
                (generic - inst.closed_form_delta_f(a).unwrap()).abs() < 1e-12,
                "{a}"
            );
        }
        assert!(inst.closed_form_delta_f(Alpha::Zero).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        let bad = WorkExtraction {
            p: 1.2,
            ..WorkExtraction::default()
        };
        assert!(matches!(
            bad.initial(),
            Err(Error::OutOfRange { name: "p", .. })
        ));
    }
}
