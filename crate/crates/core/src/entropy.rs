//! Rényi entropies and divergences over the extended α line, α-free
//! energies, ΔF_α sweeps and total correlation.
//!
//! For α ∉ {0, 1, ±∞}:
//!
//! ```text
//! H_α(p)   = sgn(α)/(1−α) · ln Σ p_i^α
//! S_α(p‖q) = sgn(α)/(α−1) · ln Σ p_i^α q_i^(1−α)
//! F_α(s)   = −ln Z + S_α(p‖γ)
//! ```
//!
//! The limits α ∈ {−∞, 0, 1, +∞} are separate [`Alpha`] variants evaluated
//! by their closed forms. Values within `1e-6` of 1 are snapped to α = 1.
//!
//! With the `sgn(α)` convention the Rényi entropy of a uniform distribution
//! is `−ln d` for negative α, so identities such as
//! `S_α(p‖η) = ln d − H_α(p)` hold for α ≥ 0 and take the form
//! `S_α(p‖η) = −ln d − H_α(p)` for α < 0.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::scalar::ExtReal;
use crate::state::{gibbs_state, validate_distribution, BlockState, JointCatalyst};

/// `|α − 1|` below which the Shannon formula is used.
pub const ALPHA_ONE_SNAP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Alpha {
    NegInf,
    Zero,
    One,
    PosInf,
    Finite(f64),
}

impl Alpha {
    /// Classifies a real α, mapping the limit points onto their variants.
    pub fn new(value: f64) -> Alpha {
        if value == f64::INFINITY {
            Alpha::PosInf
        } else if value == f64::NEG_INFINITY {
            Alpha::NegInf
        } else if value == 0.0 {
            Alpha::Zero
        } else if (value - 1.0).abs() < ALPHA_ONE_SNAP {
            Alpha::One
        } else {
            Alpha::Finite(value)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Alpha::NegInf => f64::NEG_INFINITY,
            Alpha::Zero => 0.0,
            Alpha::One => 1.0,
            Alpha::PosInf => f64::INFINITY,
            Alpha::Finite(a) => a,
        }
    }

    /// Re-classifies `Finite` values that sit on a limit point.
    pub fn normalized(self) -> Alpha {
        match self {
            Alpha::Finite(v) => Alpha::new(v),
            other => other,
        }
    }

    pub fn is_negative(self) -> bool {
        self.value() < 0.0
    }

    /// Export label: limits print as `0`, `1`, `inf`, `-inf`.
    pub fn label(self) -> alloc::string::String {
        alloc::format!("{self}")
    }

    /// Parses an export label or a plain number.
    pub fn parse(text: &str) -> Option<Alpha> {
        match text.trim() {
            "inf" | "+inf" | "infinity" => Some(Alpha::PosInf),
            "-inf" | "-infinity" => Some(Alpha::NegInf),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|v| !v.is_nan())
                .map(Alpha::new),
        }
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::NegInf => f.write_str("-inf"),
            Alpha::Zero => f.write_str("0"),
            Alpha::One => f.write_str("1"),
            Alpha::PosInf => f.write_str("inf"),
            Alpha::Finite(a) => write!(f, "{a}"),
        }
    }
}

/// The α values every sweep evaluates unless told otherwise: the four limit
/// points, 60 log-spaced values between 0.01 and 20, and the reference
/// values 0.5, 2, 4 and 10. Sorted ascending.
pub fn default_alpha_grid() -> Vec<Alpha> {
    let (lo, hi) = (libm::log(0.01), libm::log(20.0));
    let mut values: Vec<f64> = (0..60)
        .map(|k| libm::exp(lo + (hi - lo) * k as f64 / 59.0))
        .collect();
    values[0] = 0.01;
    values[59] = 20.0;
    values.extend_from_slice(&[0.5, 1.0, 2.0, 4.0, 10.0]);
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let mut grid = Vec::with_capacity(values.len() + 3);
    grid.push(Alpha::NegInf);
    grid.push(Alpha::Zero);
    grid.extend(values.into_iter().map(Alpha::new));
    grid.push(Alpha::PosInf);
    grid.dedup();
    grid
}

/// The default grid without negative α.
pub fn nonnegative_alpha_grid() -> Vec<Alpha> {
    default_alpha_grid()
        .into_iter()
        .filter(|a| !a.is_negative())
        .collect()
}

fn ln(x: f64) -> f64 {
    libm::log(x)
}

fn check(p: &[f64]) -> Result<()> {
    validate_distribution(p, &1e-9)
}

/// Rényi entropy `H_α(p)`.
pub fn renyi_entropy(p: &[f64], a: Alpha) -> Result<ExtReal> {
    check(p)?;
    let a = a.normalized();
    let has_zero = p.contains(&0.0);
    let support = || p.iter().copied().filter(|&x| x > 0.0);
    let value = match a {
        Alpha::Zero => ln(support().count() as f64),
        Alpha::One => -support().map(|x| x * ln(x)).sum::<f64>(),
        Alpha::PosInf => -ln(support().fold(0.0, f64::max)),
        Alpha::NegInf => {
            if has_zero {
                return Ok(ExtReal::NegInf);
            }
            ln(support().fold(f64::INFINITY, f64::min))
        }
        Alpha::Finite(a) if a < 0.0 => {
            if has_zero {
                return Ok(ExtReal::NegInf);
            }
            -ln(support().map(|x| libm::pow(x, a)).sum::<f64>()) / (1.0 - a)
        }
        Alpha::Finite(a) => ln(support().map(|x| libm::pow(x, a)).sum::<f64>()) / (1.0 - a),
    };
    Ok(ExtReal::from_f64(value))
}

/// Rényi divergence `S_α(p‖q)`.
///
/// Zero conventions: entries with `p_i = q_i = 0` are dropped; for α > 1 (and
/// α = 1, ∞) any `p_i > 0 = q_i` diverges to `+∞`; for α ∈ (0, 1) the sum runs
/// over the joint support; `S_0 = −ln Σ_{p_i≠0} q_i`; `S_{−∞}(p‖q) = S_∞(q‖p)`.
pub fn renyi_divergence(p: &[f64], q: &[f64], a: Alpha) -> Result<ExtReal> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    check(p)?;
    check(q)?;
    let a = a.normalized();
    let pairs = || {
        p.iter()
            .copied()
            .zip(q.iter().copied())
            .filter(|&(x, y)| x > 0.0 || y > 0.0)
    };
    let escapes = || pairs().any(|(x, y)| x > 0.0 && y == 0.0);
    let value = match a {
        Alpha::Zero => -ln(pairs()
            .filter(|&(x, _)| x > 0.0)
            .map(|(_, y)| y)
            .sum::<f64>()),
        Alpha::One => {
            if escapes() {
                return Ok(ExtReal::PosInf);
            }
            pairs()
                .filter(|&(x, _)| x > 0.0)
                .map(|(x, y)| x * ln(x / y))
                .sum::<f64>()
        }
        Alpha::PosInf => {
            if escapes() {
                return Ok(ExtReal::PosInf);
            }
            ln(pairs()
                .filter(|&(x, _)| x > 0.0)
                .map(|(x, y)| x / y)
                .fold(0.0, f64::max))
        }
        Alpha::NegInf => return renyi_divergence(q, p, Alpha::PosInf),
        Alpha::Finite(a) if a > 1.0 => {
            if escapes() {
                return Ok(ExtReal::PosInf);
            }
            let s: f64 = pairs()
                .filter(|&(x, _)| x > 0.0)
                .map(|(x, y)| libm::pow(x, a) * libm::pow(y, 1.0 - a))
                .sum();
            ln(s) / (a - 1.0)
        }
        Alpha::Finite(a) if a > 0.0 => {
            let s: f64 = pairs()
                .filter(|&(x, y)| x > 0.0 && y > 0.0)
                .map(|(x, y)| libm::pow(x, a) * libm::pow(y, 1.0 - a))
                .sum();
            // ln 0 = −∞ and 1/(a−1) < 0 give +∞ for disjoint supports.
            ln(s) / (a - 1.0)
        }
        Alpha::Finite(a) => {
            // a < 0: p_i = 0 < q_i makes p_i^a blow up; p_i > 0 = q_i contributes 0.
            if pairs().any(|(x, y)| x == 0.0 && y > 0.0) {
                return Ok(ExtReal::PosInf);
            }
            let s: f64 = pairs()
                .filter(|&(_, y)| y > 0.0)
                .map(|(x, y)| libm::pow(x, a) * libm::pow(y, 1.0 - a))
                .sum();
            -ln(s) / (a - 1.0)
        }
    };
    Ok(ExtReal::from_f64(value))
}

/// α-free energy in units of `kT`: `−ln Z + S_α(p‖γ)`.
pub fn free_energy_alpha(s: &BlockState<f64>, a: Alpha) -> Result<ExtReal> {
    let gibbs = gibbs_state(s.ham());
    let z = s.ham().gibbs_factors().z;
    let div = renyi_divergence(s.probs(), gibbs.probs(), a)?;
    Ok(div
        .checked_add(ExtReal::Finite(-ln(z)))
        .expect("finite offset"))
}

/// One sampled point of an α profile. `value` is `None` when both free
/// energies diverge and their difference is indeterminate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileEntry {
    pub alpha: Alpha,
    pub value: Option<ExtReal>,
}

impl ProfileEntry {
    pub fn is_finite(&self) -> bool {
        matches!(self.value, Some(ExtReal::Finite(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AlphaProfile {
    pub entries: Vec<ProfileEntry>,
}

impl AlphaProfile {
    pub fn get(&self, a: Alpha) -> Option<ExtReal> {
        self.entries
            .iter()
            .find(|e| e.alpha == a)
            .and_then(|e| e.value)
    }

    /// Consecutive grid points (ascending α) across which the finite values
    /// change sign.
    pub fn sign_changes(&self) -> Vec<(Alpha, Alpha)> {
        let finite: Vec<(Alpha, f64)> = self
            .entries
            .iter()
            .filter_map(|e| e.value.and_then(ExtReal::finite).map(|v| (e.alpha, v)))
            .collect();
        finite
            .windows(2)
            .filter(|w| (w[0].1 < 0.0 && w[1].1 > 0.0) || (w[0].1 > 0.0 && w[1].1 < 0.0))
            .map(|w| (w[0].0, w[1].0))
            .collect()
    }
}

/// `F_α(final) − F_α(initial)` at every requested α.
pub fn delta_f_sweep(
    initial: &BlockState<f64>,
    fin: &BlockState<f64>,
    alphas: &[Alpha],
) -> Result<AlphaProfile> {
    if !initial.ham().same_as(fin.ham()) {
        return Err(Error::HamiltonianMismatch);
    }
    let entries = alphas
        .iter()
        .map(|&alpha| {
            let before = free_energy_alpha(initial, alpha)?;
            let after = free_energy_alpha(fin, alpha)?;
            Ok(ProfileEntry {
                alpha,
                value: after.checked_sub(before),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlphaProfile { entries })
}

/// `Σ_i H(c_i) − H(c_1..N)`, clamped at zero against rounding.
pub fn total_correlation(joint: &JointCatalyst<f64>) -> Result<f64> {
    let shannon = |p: &[f64]| -> Result<f64> {
        Ok(renyi_entropy(p, Alpha::One)?
            .finite()
            .expect("Shannon entropy is finite"))
    };
    let mut sum = 0.0;
    for m in joint.marginals() {
        sum += shannon(&m)?;
    }
    let value = sum - shannon(joint.probs())?;
    Ok(if value < 0.0 && value > -1e-12 {
        0.0
    } else {
        value
    })
}

/// Upper bound `H(ε, 1−ε) + ε·w` on the correlation a work-extraction
/// catalyst may build up (`w` in units of `kT`).
pub fn mutual_info_bound(epsilon: f64, w: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: epsilon,
        });
    }
    let h = -(epsilon * ln(epsilon) + (1.0 - epsilon) * ln(1.0 - epsilon));
    Ok(h + epsilon * w)
}
