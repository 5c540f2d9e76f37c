//! The built-in reference run: a qubit at `βE = 1` with ground population
//! 0.73 pays `βw = 0.01` into a work bit with failure probability 0.007,
//! assisted by a correlated two-qubit catalyst with ground marginals 0.95 and
//! 0.70 and `P(10) = 0.04`.

use std::path::{Path, PathBuf};

use anyhow::Result;
use serde_json::json;
use thermo_order_core::catalysis::qubit_pair_catalyst_in;
use thermo_order_core::entropy::nonnegative_alpha_grid;
use thermo_order_core::majorization::Verdict;
use thermo_order_core::work_extraction::WorkExtraction;
use thermo_order_core::{
    apply, catalytic_possible, correlating_catalytic_possible, default_alpha_grid, delta_f_sweep,
    find_witness, free_energy_alpha, mutual_info_bound, parse_rational, qubit_pair_catalyst,
    random_gibbs_stochastic, tensor, thermal_lorenz, total_correlation,
    verify_correlating_transition, Alpha, BlockState, JointCatalyst, Rational, Scalar,
    WitnessOutcome,
};

use crate::commands::{Outcome, EXIT_IMPOSSIBLE, EXIT_POSSIBLE};
use crate::formats;
use crate::report::RunReport;
use crate::NumericChoice;

#[derive(Debug, Clone, PartialEq)]
pub struct ExampleParams {
    pub s: f64,
    pub q: f64,
    pub x10: f64,
    pub epsilon: f64,
    pub seed: u64,
}

impl Default for ExampleParams {
    fn default() -> Self {
        Self {
            s: 0.95,
            q: 0.70,
            x10: 0.04,
            epsilon: 0.007,
            seed: 7,
        }
    }
}

impl ExampleParams {
    fn instance(&self) -> WorkExtraction {
        WorkExtraction {
            epsilon: self.epsilon,
            ..WorkExtraction::default()
        }
    }

    fn canonical(&self) -> String {
        let inst = self.instance();
        format!(
            "beta_e={};beta_w={};p={};epsilon={};s={};q={};x10={};seed={}\n",
            inst.beta_e, inst.beta_w, inst.p, self.epsilon, self.s, self.q, self.x10, self.seed
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

struct Steps(Vec<Step>);

impl Steps {
    fn push(&mut self, name: &'static str, status: Status, detail: impl Into<String>) -> Status {
        self.0.push(Step {
            name,
            status,
            detail: detail.into(),
        });
        status
    }

    fn skip(&mut self, name: &'static str, needs: &str) {
        self.push(name, Status::Skip, format!("requires {needs}"));
    }
}

/// Exact decimal reading of an `f64` parameter, e.g. `0.95 → 19/20`.
fn exact(x: f64) -> Rational {
    parse_rational(&format!("{x}")).expect("finite parameter")
}

const CLOSED_FORM_TOL: f64 = 1e-10;
const WITNESS_TOL: f64 = 1e-8;

pub fn run(params: &ExampleParams, out_dir: Option<&Path>) -> Result<Outcome> {
    let inst = params.instance();
    let a = inst.initial()?;
    let b = inst.target()?;
    let grid = default_alpha_grid();
    let mut steps = Steps(Vec::new());
    let mut files: Vec<(PathBuf, String)> = Vec::new();
    let mut report = RunReport::new(
        "example",
        NumericChoice::Float,
        thermo_order_core::catalysis::FREE_ENERGY_TOL,
    );
    report.seed = Some(params.seed);
    report.add_input_bytes("parameters", "builtin", params.canonical().as_bytes());

    // 1. Free-energy sweep.
    let profile = delta_f_sweep(&a, &b, &grid)?;
    let at = |alpha| profile.get(alpha).and_then(|v| v.finite());
    let (d1, d4) = (at(Alpha::One), at(Alpha::Finite(4.0)));
    let mut deviation: f64 = 0.0;
    for alpha in [0.5, 2.0, 4.0, 10.0].map(Alpha::new) {
        let generic = at(alpha).unwrap_or(f64::NAN);
        deviation = deviation.max((generic - inst.closed_form_delta_f(alpha)?).abs());
    }
    let signs = d1.is_some_and(|v| v < 0.0) && d4.is_some_and(|v| v > 0.0);
    steps.push(
        "free-energy sweep",
        Status::from_bool(signs && deviation < CLOSED_FORM_TOL),
        format!(
            "dF_1 = {:.6e}, dF_4 = {:.6e}, closed-form deviation {deviation:.1e}",
            d1.unwrap_or(f64::NAN),
            d4.unwrap_or(f64::NAN)
        ),
    );
    report.output("delta_f_1", d1.unwrap_or(f64::NAN));
    report.output("delta_f_4", d4.unwrap_or(f64::NAN));
    files.push(("sweep.csv".into(), formats::sweep_csv(&profile)));

    // 2–3. Transition checks without and with correlations.
    let catalytic = catalytic_possible(&a, &b, &grid)?;
    let listed = catalytic.violations.contains(&Alpha::Finite(4.0));
    steps.push(
        "catalytic check",
        Status::from_bool(!catalytic.possible && listed),
        format!(
            "{}, {} violating alpha values{}",
            if catalytic.possible {
                "possible"
            } else {
                "impossible"
            },
            catalytic.diagnostics().len(),
            if listed { " including 4" } else { "" }
        ),
    );
    let correlating = correlating_catalytic_possible(&a, &b)?;
    steps.push(
        "correlating check",
        Status::from_bool(correlating.possible),
        format!(
            "F gap {:.6e}",
            correlating.free_energy_gap.unwrap_or(f64::NAN)
        ),
    );
    report.verdict(
        "catalytic",
        if catalytic.possible {
            "possible"
        } else {
            "impossible"
        },
    );
    report.verdict(
        "correlating",
        if correlating.possible {
            "possible"
        } else {
            "impossible"
        },
    );

    // 4. Catalyst.
    let joint = match qubit_pair_catalyst(params.s, params.q, params.x10) {
        Ok(j) => {
            steps.push(
                "catalyst construction",
                Status::Pass,
                format!("c12 = {:?}", j.probs()),
            );
            Some(j)
        }
        Err(e) => {
            steps.push("catalyst construction", Status::Fail, e.to_string());
            None
        }
    };

    match joint {
        Some(joint) => catalyst_steps(
            params,
            &inst,
            &a,
            &b,
            &joint,
            d1,
            &mut steps,
            &mut files,
            &mut report,
        )?,
        None => {
            for name in [
                "exact marginals",
                "product catalyst check",
                "correlated catalyst check",
                "correlation bounds",
                "witness",
            ] {
                steps.skip(name, "a valid catalyst");
            }
        }
    }

    // 10. Data processing under a seeded Gibbs-preserving map.
    let m = random_gibbs_stochastic(a.ham(), params.seed);
    let mapped = BlockState::new(apply(&m, a.probs())?, a.ham().clone())?;
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut monotone = true;
    for alpha in nonnegative_alpha_grid() {
        let before = free_energy_alpha(&a, alpha)?;
        let after = free_energy_alpha(&mapped, alpha)?;
        monotone &= before.ge_within(after, 1e-9);
        if let (Some(x), Some(y)) = (before.finite(), after.finite()) {
            worst = worst.max(y - x);
        }
    }
    steps.push(
        "data processing",
        Status::from_bool(monotone && m.validated()),
        format!(
            "seed {}, largest free-energy change {worst:.3e}",
            params.seed
        ),
    );

    let all_pass = steps.0.iter().all(|s| s.status == Status::Pass);
    let mut lines = Vec::new();
    for (i, s) in steps.0.iter().enumerate() {
        lines.push(format!(
            "[{}] {:>2}. {}: {}",
            s.status.as_str(),
            i + 1,
            s.name,
            s.detail
        ));
        report.verdict(&format!("step {:02} {}", i + 1, s.name), s.status.as_str());
    }
    let failed: Vec<&str> = steps
        .0
        .iter()
        .filter(|s| s.status == Status::Fail)
        .map(|s| s.name)
        .collect();
    lines.push(if all_pass {
        "all steps passed".to_string()
    } else {
        format!("failed: {}", failed.join(", "))
    });
    let code = if all_pass {
        EXIT_POSSIBLE
    } else {
        EXIT_IMPOSSIBLE
    };
    report.exit_code = code;

    if let Some(dir) = out_dir {
        for (name, text) in &files {
            formats::write(&dir.join(name), text)?;
        }
        let mut names: Vec<String> = files.iter().map(|(n, _)| n.display().to_string()).collect();
        names.push("report.json".into());
        report.output("files", names);
        formats::write(&dir.join("report.json"), &report.to_json())?;
    }
    Ok(Outcome {
        code,
        lines,
        report,
    })
}

#[allow(clippy::too_many_arguments)]
fn catalyst_steps(
    params: &ExampleParams,
    inst: &WorkExtraction,
    a: &BlockState<f64>,
    b: &BlockState<f64>,
    joint: &JointCatalyst<f64>,
    d1: Option<f64>,
    steps: &mut Steps,
    files: &mut Vec<(PathBuf, String)>,
    report: &mut RunReport,
) -> Result<()> {
    // 5. Marginals in exact arithmetic.
    let (s, q) = (exact(params.s), exact(params.q));
    let one = <Rational as Scalar>::one();
    match qubit_pair_catalyst_in(s.clone(), q.clone(), exact(params.x10)) {
        Ok(ej) => {
            let ok =
                ej.marginals() == vec![vec![s.clone(), one.clone() - s], vec![q.clone(), one - q]];
            let m = ej.marginals();
            steps.push(
                "exact marginals",
                Status::from_bool(ok),
                format!("({}, {}) and ({}, {})", m[0][0], m[0][1], m[1][0], m[1][1]),
            );
        }
        Err(e) => {
            steps.push("exact marginals", Status::Fail, e.to_string());
        }
    }

    // 6–7. Curves with the uncorrelated and correlated catalyst.
    let product = joint.decorrelated();
    let uncorrelated = verify_correlating_transition(a, b, &product)?;
    steps.push(
        "product catalyst check",
        Status::from_bool(uncorrelated.verdict == Verdict::Crossing),
        format!("curves {}", uncorrelated.verdict.as_str()),
    );
    let correlated = verify_correlating_transition(a, b, joint)?;
    let correlated_ok = correlated.verdict == Verdict::Above;
    steps.push(
        "correlated catalyst check",
        Status::from_bool(correlated_ok),
        format!(
            "curves {}, min gap {:.6e}",
            correlated.verdict.as_str(),
            correlated.min_gap
        ),
    );
    report.verdict("product catalyst", uncorrelated.verdict.as_str());
    report.verdict("correlated catalyst", correlated.verdict.as_str());

    let lhs = tensor(a, &product.as_state());
    let rhs = tensor(b, &joint.as_state());
    files.push((
        "curve_initial_product.csv".into(),
        formats::curve_csv(&thermal_lorenz(&lhs)),
    ));
    files.push((
        "curve_final_correlated.csv".into(),
        formats::curve_csv(&thermal_lorenz(&rhs)),
    ));
    files.push((
        "curve_final_product.csv".into(),
        formats::curve_csv(&thermal_lorenz(&tensor(b, &product.as_state()))),
    ));

    // 8. Correlation against the free-energy budget.
    let i = total_correlation(joint)?;
    let budget = d1.map(|d| -d).unwrap_or(f64::NAN);
    let bound = mutual_info_bound(inst.epsilon, inst.beta_w)?;
    steps.push(
        "correlation bounds",
        Status::from_bool(i <= budget && i <= bound),
        format!("I = {i:.6e}, -dF_1 = {budget:.6e}, H(eps) + eps w = {bound:.6e}"),
    );
    report.output("total_correlation", i);
    let catalyst = json!({
        "joint": formats::joint_value(joint),
        "marginals": joint.marginals(),
        "total_correlation": i,
        "product_comparison": formats::comparison_value(&uncorrelated),
        "correlated_comparison": formats::comparison_value(&correlated),
    });
    files.push((
        "catalyst.json".into(),
        format!("{}\n", serde_json::to_string_pretty(&catalyst)?),
    ));

    // 9. Explicit map for the correlated transition.
    if !correlated_ok {
        steps.skip("witness", "the correlated catalyst check");
        return Ok(());
    }
    match find_witness(&lhs, &rhs)? {
        WitnessOutcome::Feasible(w) => {
            let r = w.residuals();
            let target = r.target.unwrap_or(f64::INFINITY);
            steps.push(
                "witness",
                Status::from_bool(w.validated() && target < WITNESS_TOL),
                format!(
                    "{} levels, target residual {target:.1e}, Gibbs residual {:.1e}",
                    w.dim(),
                    r.gibbs
                ),
            );
            files.push((
                "witness.json".into(),
                formats::witness_json(&w, lhs.ham(), Some((lhs.probs(), rhs.probs()))),
            ));
        }
        WitnessOutcome::Infeasible { .. } => {
            steps.push("witness", Status::Fail, "no Gibbs-preserving map found");
        }
    }
    Ok(())
}
