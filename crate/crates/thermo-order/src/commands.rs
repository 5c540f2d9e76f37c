//! Subcommand implementations. Each returns the lines to print, the exit
//! code and a [`RunReport`]; `main` does the printing.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::json;
use thermo_order_core::catalysis::SearchResult;
use thermo_order_core::majorization::thermomajorizes_with;
use thermo_order_core::witness::{find_witness_in, WitnessConfig};
use thermo_order_core::{
    catalytic_possible, correlating_catalytic_possible, default_alpha_grid, delta_f_sweep,
    find_witness, search_correlating_catalyst, thermal_lorenz, work_quantities, Alpha, BlockState,
    Error, Rational, Scalar, SearchConfig, TransitionVerdict, WitnessOutcome,
};

use crate::formats::{self, JsonScalar};
use crate::report::RunReport;
use crate::{NumericChoice, Settings};

pub const EXIT_POSSIBLE: i32 = 0;
pub const EXIT_IMPOSSIBLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub lines: Vec<String>,
    pub report: RunReport,
}

impl Outcome {
    fn new(code: i32, lines: Vec<String>, mut report: RunReport) -> Self {
        report.exit_code = code;
        Self {
            code,
            lines,
            report,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CheckMode {
    Plain,
    Catalytic,
    Correlating,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepFormat {
    Csv,
    Json,
}

/// Parses a comma-separated α list such as `0.5,1,2,inf`. `default` selects
/// the built-in grid.
pub fn parse_alphas(text: &str) -> Result<Vec<Alpha>> {
    if text.trim() == "default" {
        return Ok(default_alpha_grid());
    }
    text.split(',')
        .map(|t| Alpha::parse(t).with_context(|| format!("invalid alpha {t:?}")))
        .collect()
}

struct Pair {
    a: BlockState<f64>,
    b: BlockState<f64>,
    exact: Option<(BlockState<Rational>, BlockState<Rational>)>,
}

fn load_state(
    settings: &Settings,
    path: &Path,
) -> Result<(BlockState<f64>, Option<BlockState<Rational>>)> {
    Ok(match settings.numeric {
        NumericChoice::Float => (formats::read_state(path)?.state, None),
        NumericChoice::Rational => {
            let exact = formats::read_state_exact(path)?.state;
            (exact.to_f64(), Some(exact))
        }
    })
}

fn load_pair(
    settings: &Settings,
    report: &mut RunReport,
    initial: &Path,
    fin: &Path,
) -> Result<Pair> {
    report.add_input_file("initial", initial)?;
    report.add_input_file("final", fin)?;
    let (a, ea) = load_state(settings, initial)?;
    let (b, eb) = load_state(settings, fin)?;
    if !a.ham().same_as(b.ham()) {
        bail!(Error::HamiltonianMismatch);
    }
    Ok(Pair {
        a,
        b,
        exact: ea.zip(eb),
    })
}

fn alpha_list(alphas: &[Alpha]) -> String {
    alphas
        .iter()
        .map(|a| a.label())
        .collect::<Vec<_>>()
        .join(", ")
}

fn verdict_json(v: &TransitionVerdict) -> serde_json::Value {
    let labels = |xs: &[Alpha]| xs.iter().map(|a| a.label()).collect::<Vec<_>>();
    json!({
        "mode": v.mode.as_str(),
        "possible": v.possible,
        "violations": labels(&v.violations),
        "negative_violations": labels(&v.negative_violations),
        "comparison": v.comparison.as_ref().map(formats::comparison_value),
        "free_energy_gap": v.free_energy_gap,
        "free_energy_equal": v.free_energy_equal,
    })
}

pub fn check(
    settings: &Settings,
    initial: &Path,
    fin: &Path,
    mode: CheckMode,
    alphas: &[Alpha],
    out: Option<&Path>,
) -> Result<Outcome> {
    let mut report = RunReport::new("check", settings.numeric, settings.tol);
    let pair = load_pair(settings, &mut report, initial, fin)?;
    let mut lines = Vec::new();
    let body = match mode {
        CheckMode::Plain => {
            let cmp = match &pair.exact {
                Some((ea, eb)) => thermomajorizes_with(ea, eb, &<Rational as Scalar>::zero())?,
                None => thermomajorizes_with(&pair.a, &pair.b, &settings.tol)?,
            };
            lines.push(format!(
                "curve comparison: {} (min gap {:.6e})",
                cmp.verdict.as_str(),
                cmp.min_gap
            ));
            for (x, gap) in &cmp.violations {
                lines.push(format!(
                    "  initial curve below target at x = {x:.12} by {:.6e}",
                    -gap
                ));
            }
            if cmp.marginal {
                lines.push("  curves touch within tolerance at an interior breakpoint".into());
            }
            let possible = cmp.verdict.allows();
            let mut body = formats::comparison_value(&cmp);
            body["possible"] = json!(possible);
            report.verdict("curve", cmp.verdict.as_str());
            body
        }
        CheckMode::Catalytic => {
            let v = catalytic_possible(&pair.a, &pair.b, alphas)?;
            if !v.violations.is_empty() {
                lines.push(format!(
                    "free energy increases at alpha = {}",
                    alpha_list(&v.violations)
                ));
            }
            if !v.negative_violations.is_empty() {
                lines.push(format!(
                    "free energy increases at negative alpha = {}",
                    alpha_list(&v.negative_violations)
                ));
            }
            verdict_json(&v)
        }
        CheckMode::Correlating => {
            let v = correlating_catalytic_possible(&pair.a, &pair.b)?;
            let gap = v.free_energy_gap.unwrap_or(f64::NAN);
            lines.push(format!("F(initial) - F(final) = {gap:.12e}"));
            if v.free_energy_equal {
                lines.push(
                    "warning: free energies are equal; the catalyst dimension must grow without bound \
                     as the target accuracy improves"
                        .into(),
                );
            }
            verdict_json(&v)
        }
    };
    let possible = body["possible"].as_bool().unwrap_or(false);
    let mode_name = match mode {
        CheckMode::Plain => "plain",
        CheckMode::Catalytic => "catalytic",
        CheckMode::Correlating => "correlating",
    };
    lines.insert(
        0,
        format!(
            "{mode_name}: {}",
            if possible { "possible" } else { "impossible" }
        ),
    );
    report.verdict(mode_name, if possible { "possible" } else { "impossible" });
    report.output("check", body.clone());
    if let Some(path) = out {
        formats::write(path, &format!("{}\n", serde_json::to_string_pretty(&body)?))?;
        report.output("file", file_name(path));
    }
    let code = if possible {
        EXIT_POSSIBLE
    } else {
        EXIT_IMPOSSIBLE
    };
    Ok(Outcome::new(code, lines, report))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn sweep_format(out: &Path, format: Option<SweepFormat>) -> SweepFormat {
    format.unwrap_or_else(|| match out.extension().and_then(|e| e.to_str()) {
        Some("json") => SweepFormat::Json,
        _ => SweepFormat::Csv,
    })
}

pub fn sweep(
    settings: &Settings,
    initial: &Path,
    fin: &Path,
    out: &Path,
    format: Option<SweepFormat>,
    alphas: &[Alpha],
) -> Result<Outcome> {
    let mut report = RunReport::new("sweep", settings.numeric, settings.tol);
    let pair = load_pair(settings, &mut report, initial, fin)?;
    let profile = delta_f_sweep(&pair.a, &pair.b, alphas)?;
    let text = match sweep_format(out, format) {
        SweepFormat::Csv => formats::sweep_csv(&profile),
        SweepFormat::Json => formats::sweep_json(&profile),
    };
    formats::write(out, &text)?;
    let changes = profile.sign_changes();
    let intervals: Vec<String> = changes
        .iter()
        .map(|(lo, hi)| format!("({lo}, {hi})"))
        .collect();
    let mut lines = vec![format!(
        "wrote {} alpha values to {}",
        profile.entries.len(),
        out.display()
    )];
    lines.push(if intervals.is_empty() {
        "delta F keeps one sign across the grid".into()
    } else {
        format!("delta F changes sign in {}", intervals.join(", "))
    });
    let positive: Vec<Alpha> = profile
        .entries
        .iter()
        .filter(|e| e.value.and_then(|v| v.finite()).is_some_and(|v| v > 0.0))
        .map(|e| e.alpha)
        .collect();
    report.output("sign_changes", intervals);
    report.output("positive_count", positive.len());
    report.output("file", file_name(out));
    Ok(Outcome::new(EXIT_POSSIBLE, lines, report))
}

pub fn lorenz(settings: &Settings, state: &Path, out: &Path) -> Result<Outcome> {
    let mut report = RunReport::new("lorenz", settings.numeric, settings.tol);
    report.add_input_file("state", state)?;
    let (s, exact) = load_state(settings, state)?;
    let (csv, segments) = match exact {
        Some(e) => {
            let curve = thermal_lorenz(&e);
            (formats::curve_csv(&curve), curve.segments())
        }
        None => {
            let curve = thermal_lorenz(&s);
            (formats::curve_csv(&curve), curve.segments())
        }
    };
    formats::write(out, &csv)?;
    report.output("segments", segments);
    report.output("file", file_name(out));
    let lines = vec![format!(
        "thermal Lorenz curve with {segments} segments written to {}",
        out.display()
    )];
    Ok(Outcome::new(EXIT_POSSIBLE, lines, report))
}

pub fn search(
    settings: &Settings,
    initial: &Path,
    fin: &Path,
    config: Option<&Path>,
    out: Option<&Path>,
) -> Result<Outcome> {
    let mut report = RunReport::new("search", settings.numeric, settings.tol);
    let pair = load_pair(settings, &mut report, initial, fin)?;
    let config = match config {
        Some(path) => {
            report.add_input_file("config", path)?;
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            formats::parse_search_config(&text)
                .with_context(|| format!("parsing {}", path.display()))?
        }
        None => SearchConfig::default(),
    };
    let result = match search_correlating_catalyst(&pair.a, &pair.b, &config) {
        Ok(r) => r,
        Err(Error::Precondition(msg)) => {
            report.verdict("search", "precondition failed");
            return Ok(Outcome::new(
                EXIT_IMPOSSIBLE,
                vec![format!("precondition failed: {msg}")],
                report,
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let lines = search_lines(&result);
    report.output("cells_evaluated", result.cells_evaluated);
    let code = match &result.found {
        Some(found) => {
            report.verdict("search", "found");
            report.output("total_correlation", found.total_correlation);
            report.output("catalyst", formats::catalyst_value(found));
            EXIT_POSSIBLE
        }
        None => {
            report.verdict("search", "not found at this resolution");
            EXIT_IMPOSSIBLE
        }
    };
    if let Some(path) = out {
        formats::write(path, &formats::search_result_json(&result))?;
        report.output("file", file_name(path));
    }
    Ok(Outcome::new(code, lines, report))
}

fn search_lines(result: &SearchResult) -> Vec<String> {
    match &result.found {
        Some(f) => vec![
            format!("catalyst found after {} cells", result.cells_evaluated),
            format!("  dims {:?}, probs {:?}", f.joint.dims(), f.joint.probs()),
            format!("  total correlation {:.12e}", f.total_correlation),
            format!(
                "  curve comparison {} (min gap {:.6e})",
                f.comparison.verdict.as_str(),
                f.comparison.min_gap
            ),
        ],
        None => vec![format!(
            "not found at this resolution ({} cells evaluated)",
            result.cells_evaluated
        )],
    }
}

fn witness_outcome<S: JsonScalar>(
    outcome: WitnessOutcome<S>,
    a: &BlockState<S>,
    b: &BlockState<S>,
    out: Option<&Path>,
    report: &mut RunReport,
) -> Result<(i32, Vec<String>)> {
    match outcome {
        WitnessOutcome::Feasible(w) => {
            let r = w.residuals();
            report.verdict("witness", "feasible");
            report.output("validated", w.validated());
            report.output("target_residual", r.target.unwrap_or(0.0));
            report.output("gibbs_residual", r.gibbs);
            let mut lines = vec![format!(
                "Gibbs-preserving map found ({} x {})",
                w.dim(),
                w.dim()
            )];
            lines.push(format!(
                "  residuals: column sums {:.3e}, Gibbs {:.3e}, target {:.3e}",
                r.column_sums,
                r.gibbs,
                r.target.unwrap_or(0.0)
            ));
            if let Some(path) = out {
                formats::write(
                    path,
                    &formats::witness_json(&w, a.ham(), Some((a.probs(), b.probs()))),
                )?;
                report.output("file", file_name(path));
            }
            Ok((EXIT_POSSIBLE, lines))
        }
        WitnessOutcome::Infeasible { violation } => {
            report.verdict("witness", "infeasible");
            let mut lines = vec!["no Gibbs-preserving map exists".to_string()];
            if let Some((x, gap)) = violation {
                lines.push(format!(
                    "  initial curve below target at x = {x:.12} by {:.6e}",
                    -gap
                ));
                report.output("violation", json!({ "x": x, "gap": gap }));
            }
            Ok((EXIT_IMPOSSIBLE, lines))
        }
    }
}

pub fn witness(
    settings: &Settings,
    initial: &Path,
    fin: &Path,
    out: Option<&Path>,
) -> Result<Outcome> {
    let mut report = RunReport::new("witness", settings.numeric, settings.tol);
    let pair = load_pair(settings, &mut report, initial, fin)?;
    let (code, lines) = match &pair.exact {
        Some((ea, eb)) => {
            let outcome = find_witness_in(ea, eb, &WitnessConfig::default())?;
            witness_outcome(outcome, ea, eb, out, &mut report)?
        }
        None => witness_outcome(
            find_witness(&pair.a, &pair.b)?,
            &pair.a,
            &pair.b,
            out,
            &mut report,
        )?,
    };
    Ok(Outcome::new(code, lines, report))
}

pub fn work(settings: &Settings, state: &Path) -> Result<Outcome> {
    let mut report = RunReport::new("work", settings.numeric, settings.tol);
    report.add_input_file("state", state)?;
    let (s, _) = load_state(settings, state)?;
    let w = work_quantities(&s)?;
    let lines = vec![
        format!("f0   = {:.12e}  (deterministic extraction)", w.f0),
        format!(
            "f1   = {:.12e}  (extraction with correlating catalysts)",
            w.f1
        ),
        format!("finf = {:.12e}  (deterministic formation)", w.finf),
    ];
    report.output("f0", w.f0);
    report.output("f1", w.f1);
    report.output("finf", w.finf);
    Ok(Outcome::new(EXIT_POSSIBLE, lines, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_lists() {
        assert_eq!(
            parse_alphas("0.5, 1,inf").unwrap(),
            vec![Alpha::Finite(0.5), Alpha::One, Alpha::PosInf]
        );
        assert_eq!(parse_alphas("default").unwrap(), default_alpha_grid());
        assert!(parse_alphas("1,x").is_err());
    }
}
