//! β-ordering, Lorenz curves and the (thermo)majorization decision.
//!
//! A thermal Lorenz curve is built by sorting levels by their Gibbs-rescaled
//! probability `p_i / g_i` (largest first) and joining the cumulative points
//! `(Σ g_i, Σ p_i)`. One curve dominates another iff it lies on or above it;
//! because both are concave with shared endpoints, it suffices to compare
//! them at the union of their breakpoints.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::state::BlockState;

/// β-ordered permutation of a state's levels.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaOrdering<S = f64> {
    /// `perm[k]` is the original index placed at position `k`.
    pub perm: Vec<usize>,
    /// `p_i / g_i` in the order of `perm` (non-increasing).
    pub rescaled: Vec<S>,
    /// `group[k]` labels the run of tied rescaled values containing position `k`.
    pub group: Vec<usize>,
}

/// Sorts levels by `p_i / g_i`, non-increasing. Values within the mode's tie
/// tolerance are tied; ties put the larger `p_i` first, then the smaller
/// index.
pub fn beta_order<S: Scalar>(s: &BlockState<S>) -> BetaOrdering<S> {
    let g = s.ham().gibbs_factors_in::<S>().g;
    order_by_rescaled(s.probs(), &g)
}

fn order_by_rescaled<S: Scalar>(p: &[S], g: &[S]) -> BetaOrdering<S> {
    let rescaled: Vec<S> = p
        .iter()
        .zip(g)
        .map(|(p, g)| p.clone() / g.clone())
        .collect();
    let mut perm: Vec<usize> = (0..p.len()).collect();
    perm.sort_by(|&i, &j| {
        rescaled[j]
            .partial_cmp(&rescaled[i])
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });

    // Split into tie runs relative to the first element of each run, then
    // reorder within each run by probability.
    let tol = S::tie_tol();
    let mut group = vec![0usize; perm.len()];
    let mut start = 0;
    let mut label = 0;
    for k in 1..=perm.len() {
        let ends = k == perm.len() || {
            let head = &rescaled[perm[start]];
            let cur = &rescaled[perm[k]];
            let scale = head.abs().max_of(S::one());
            head.clone() - cur.clone() > tol.clone() * scale
        };
        if ends {
            perm[start..k].sort_by(|&i, &j| {
                p[j].partial_cmp(&p[i])
                    .unwrap_or(core::cmp::Ordering::Equal)
                    .then(i.cmp(&j))
            });
            group[start..k].iter_mut().for_each(|g| *g = label);
            label += 1;
            start = k;
        }
    }
    let ordered = perm.iter().map(|&i| rescaled[i].clone()).collect();
    BetaOrdering {
        perm,
        rescaled: ordered,
        group,
    }
}

/// Concave piecewise-linear curve from `(0, 0)` to `(X, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LorenzCurve<S = f64> {
    points: Vec<(S, S)>,
}

impl<S: Scalar> LorenzCurve<S> {
    pub fn points(&self) -> &[(S, S)] {
        &self.points
    }

    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    /// Total horizontal extent (the partition function for thermal curves).
    pub fn extent(&self) -> S {
        self.points.last().expect("curve has points").0.clone()
    }

    /// Linear interpolation; clamps outside `[0, extent]`.
    pub fn eval(&self, x: &S) -> S {
        let pts = &self.points;
        if *x <= pts[0].0 {
            return pts[0].1.clone();
        }
        for w in pts.windows(2) {
            let (x0, y0) = &w[0];
            let (x1, y1) = &w[1];
            if *x <= *x1 {
                let t = (x.clone() - x0.clone()) / (x1.clone() - x0.clone());
                return y0.clone() + t * (y1.clone() - y0.clone());
            }
        }
        pts.last().expect("curve has points").1.clone()
    }

    pub fn to_f64(&self) -> LorenzCurve<f64> {
        LorenzCurve {
            points: self
                .points
                .iter()
                .map(|(x, y)| (x.to_f64(), y.to_f64()))
                .collect(),
        }
    }
}

/// Builds the curve from per-level `(width, height)` pieces already in
/// β-order. Runs with equal slope (same tie group) merge into one segment.
fn curve_from_pieces<S: Scalar>(pieces: impl Iterator<Item = (S, S, usize)>) -> LorenzCurve<S> {
    let mut points = vec![(S::zero(), S::zero())];
    let mut last_group = None;
    for (w, h, group) in pieces {
        let (x, y) = points.last().expect("non-empty").clone();
        let next = (x + w, y + h);
        if last_group == Some(group) && points.len() > 1 {
            *points.last_mut().expect("non-empty") = next;
        } else {
            points.push(next);
        }
        last_group = Some(group);
    }
    LorenzCurve { points }
}

/// Ordinary Lorenz curve: breakpoints `(k, Σ_{i≤k} p↓_i)`.
pub fn lorenz<S: Scalar>(p: &[S]) -> LorenzCurve<S> {
    let ones = vec![S::one(); p.len()];
    let ord = order_by_rescaled(p, &ones);
    curve_from_pieces(
        ord.perm
            .iter()
            .zip(&ord.group)
            .map(|(&i, &g)| (S::one(), p[i].clone(), g)),
    )
}

/// Thermal Lorenz curve: cumulative β-ordered Gibbs factors against
/// cumulative β-ordered probabilities, ending at `(Z, 1)`.
pub fn thermal_lorenz<S: Scalar>(s: &BlockState<S>) -> LorenzCurve<S> {
    let g = s.ham().gibbs_factors_in::<S>().g;
    let ord = order_by_rescaled(s.probs(), &g);
    let p = s.probs();
    curve_from_pieces(
        ord.perm
            .iter()
            .zip(&ord.group)
            .map(|(&i, &k)| (g[i].clone(), p[i].clone(), k)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Candidate-above dominates and the curves differ somewhere.
    Above,
    /// Candidate-below dominates and the curves differ somewhere.
    Below,
    Crossing,
    Equal,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Above => "Above",
            Verdict::Below => "Below",
            Verdict::Crossing => "Crossing",
            Verdict::Equal => "Equal",
        }
    }

    /// Whether the transition `above → below` is allowed.
    pub fn allows(self) -> bool {
        matches!(self, Verdict::Above | Verdict::Equal)
    }
}

/// Result of comparing two curves at the union of their breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveComparison {
    pub verdict: Verdict,
    /// `(x, gap)` for every breakpoint where the upper candidate dips more
    /// than the tolerance below the lower one; `gap` is negative.
    pub violations: Vec<(f64, f64)>,
    /// Smallest `above(x) − below(x)` over interior breakpoints; zero when
    /// both curves are single segments.
    pub min_gap: f64,
    /// Set when the verdict allows the transition but some interior
    /// breakpoint lies within tolerance of tangency.
    pub marginal: bool,
}

/// Decides whether `above` lies on or above `below`, within `tol`.
pub fn compare<S: Scalar>(
    above: &LorenzCurve<S>,
    below: &LorenzCurve<S>,
    tol: &S,
) -> Result<CurveComparison> {
    let (xa, xb) = (above.extent(), below.extent());
    let scale = xa.abs().max_of(S::one());
    if (xa.clone() - xb.clone()).abs()
        > (tol.clone() + S::from_f64(1e-12).unwrap_or_else(S::zero)) * scale
    {
        return Err(Error::ExtentMismatch {
            left: xa.to_f64(),
            right: xb.to_f64(),
        });
    }
    let mut xs: Vec<S> = above
        .points
        .iter()
        .chain(&below.points)
        .map(|(x, _)| x.clone())
        .collect();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
    xs.dedup_by(|a, b| *a == *b);

    let mut violations = Vec::new();
    let mut any_above = false;
    let mut min_gap: Option<S> = None;
    let last = xs.len() - 1;
    for (k, x) in xs.iter().enumerate() {
        let d = above.eval(x) - below.eval(x);
        if d < -tol.clone() {
            violations.push((x.to_f64(), d.to_f64()));
        } else if d > *tol {
            any_above = true;
        }
        // Endpoints coincide by construction; x-extents may differ by rounding.
        if k != 0 && k != last && x.clone() < xa.clone().min_of(xb.clone()) {
            min_gap = Some(match min_gap {
                Some(m) if m <= d => m,
                _ => d,
            });
        }
    }
    let verdict = match (any_above, violations.is_empty()) {
        (false, true) => Verdict::Equal,
        (true, true) => Verdict::Above,
        (false, false) => Verdict::Below,
        (true, false) => Verdict::Crossing,
    };
    let min_gap = min_gap.map_or(0.0, |m| m.to_f64());
    let marginal = verdict == Verdict::Above && min_gap <= tol.to_f64();
    Ok(CurveComparison {
        verdict,
        violations,
        min_gap,
        marginal,
    })
}

trait MinOf {
    fn min_of(self, other: Self) -> Self;
}

impl<S: Scalar> MinOf for S {
    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Thermal Lorenz comparison of two states over the same Hamiltonian.
pub fn thermomajorizes<S: Scalar>(a: &BlockState<S>, b: &BlockState<S>) -> Result<CurveComparison> {
    thermomajorizes_with(a, b, &S::cmp_tol())
}

pub fn thermomajorizes_with<S: Scalar>(
    a: &BlockState<S>,
    b: &BlockState<S>,
    tol: &S,
) -> Result<CurveComparison> {
    if !a.ham().same_as(b.ham()) {
        return Err(Error::HamiltonianMismatch);
    }
    compare(&thermal_lorenz(a), &thermal_lorenz(b), tol)
}

/// Plain majorization; the shorter vector is zero-padded.
pub fn majorizes<S: Scalar>(p: &[S], q: &[S]) -> Result<CurveComparison> {
    let n = p.len().max(q.len());
    let pad = |v: &[S]| {
        let mut out = v.to_vec();
        out.resize(n, S::zero());
        out
    };
    compare(&lorenz(&pad(p)), &lorenz(&pad(q)), &S::cmp_tol())
}
