//! JSON and CSV file formats.
//!
//! Floating-point values in CSV are written with 17 significant digits and a
//! `.` decimal separator. JSON numbers use the shortest representation that
//! round-trips. In rational mode probabilities are written as `"n/d"` strings.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thermo_order_core::catalysis::{CatalystFound, SearchResult};
use thermo_order_core::entropy::AlphaProfile;
use thermo_order_core::majorization::{CurveComparison, LorenzCurve};
use thermo_order_core::witness::{Residuals, StochasticWitness};
use thermo_order_core::{
    parse_rational, BlockState, EmbeddingSpec, ExtReal, Hamiltonian, JointCatalyst, Rational,
    Scalar, SearchConfig, Selection,
};

/// Slack within which a rational-mode state file may miss unit sum. The
/// probabilities are then divided by their exact sum.
pub const RATIONAL_RENORMALIZE_TOL: f64 = 1e-12;

/// Scalars that can be written to and read from a JSON value.
pub trait JsonScalar: Scalar {
    fn encode(&self) -> Value;
    fn decode(v: &Value) -> Result<Self>;
}

impl JsonScalar for f64 {
    fn encode(&self) -> Value {
        json!(*self)
    }

    fn decode(v: &Value) -> Result<Self> {
        let x = match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| anyhow!("number {n} is not representable"))?,
            Value::String(s) => match parse_rational(s) {
                Some(r) => Scalar::to_f64(&r),
                None => bail!("cannot parse {s:?} as a number"),
            },
            other => bail!("expected a number, found {other}"),
        };
        if x.is_nan() {
            bail!("NaN is not a valid value");
        }
        Ok(x)
    }
}

impl JsonScalar for Rational {
    fn encode(&self) -> Value {
        Value::String(self.to_string())
    }

    fn decode(v: &Value) -> Result<Self> {
        let text = match v {
            // serde_json prints the shortest decimal that round-trips, so
            // `0.73` in the file becomes exactly 73/100.
            Value::Number(n) => n.to_string(),
            Value::String(s) => s.clone(),
            other => bail!("expected a number or \"n/d\" string, found {other}"),
        };
        parse_rational(&text).ok_or_else(|| anyhow!("cannot parse {text:?} as a rational"))
    }
}

fn decode_all<S: JsonScalar>(values: &[Value]) -> Result<Vec<S>> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| S::decode(v).with_context(|| format!("entry {i}")))
        .collect()
}

fn encode_all<S: JsonScalar>(values: &[S]) -> Vec<Value> {
    values.iter().map(JsonScalar::encode).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct StateFile {
    #[serde(default)]
    levels: Vec<f64>,
    probs: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gibbs_weights: Option<Vec<String>>,
}

/// A state read from disk, with the joint layout if the file declared one.
#[derive(Debug, Clone, PartialEq)]
pub struct StateInput<S = f64> {
    pub state: BlockState<S>,
    pub dims: Option<Vec<usize>>,
}

fn parse_hamiltonian(file: &StateFile) -> Result<Hamiltonian> {
    match &file.gibbs_weights {
        Some(weights) => {
            let exact = weights
                .iter()
                .map(|w| {
                    parse_rational(w).ok_or_else(|| anyhow!("cannot parse Gibbs weight {w:?}"))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Hamiltonian::from_gibbs_weights(exact)?)
        }
        None => Ok(Hamiltonian::new(file.levels.clone())?),
    }
}

fn check_dims(file: &StateFile) -> Result<()> {
    if let Some(dims) = &file.dims {
        let product: usize = dims.iter().product();
        if product != file.probs.len() {
            bail!(
                "dims {dims:?} multiply to {product}, but the state has {} entries",
                file.probs.len()
            );
        }
    }
    Ok(())
}

/// Parses a state in `f64` mode.
pub fn parse_state(text: &str) -> Result<StateInput<f64>> {
    let file: StateFile = serde_json::from_str(text)?;
    check_dims(&file)?;
    let ham = parse_hamiltonian(&file)?;
    let probs = decode_all::<f64>(&file.probs)?;
    Ok(StateInput {
        state: BlockState::new(probs, ham)?,
        dims: file.dims,
    })
}

/// Parses a state in exact mode. A sum within
/// [`RATIONAL_RENORMALIZE_TOL`] of one is rescaled to exactly one.
pub fn parse_state_exact(text: &str) -> Result<StateInput<Rational>> {
    let file: StateFile = serde_json::from_str(text)?;
    check_dims(&file)?;
    let ham = parse_hamiltonian(&file)?;
    let mut probs = decode_all::<Rational>(&file.probs)?;
    if let Some(i) = probs.iter().position(|p| *p < <Rational as Scalar>::zero()) {
        bail!("probability at index {i} is negative");
    }
    let sum = probs
        .iter()
        .cloned()
        .fold(<Rational as Scalar>::zero(), |a, b| a + b);
    let deviation = Scalar::to_f64(&(sum.clone() - <Rational as Scalar>::one())).abs();
    if deviation > 0.0 && deviation <= RATIONAL_RENORMALIZE_TOL {
        probs = probs.into_iter().map(|p| p / sum.clone()).collect();
    }
    Ok(StateInput {
        state: BlockState::new(probs, ham)?,
        dims: file.dims,
    })
}

pub fn read_state(path: &Path) -> Result<StateInput<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_state(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_state_exact(path: &Path) -> Result<StateInput<Rational>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_state_exact(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn state_json<S: JsonScalar>(state: &BlockState<S>, dims: Option<&[usize]>) -> String {
    let file = StateFile {
        levels: state.ham().levels().to_vec(),
        probs: encode_all(state.probs()),
        dims: dims.map(<[usize]>::to_vec),
        gibbs_weights: state
            .ham()
            .exact_weights()
            .map(|w| w.iter().map(ToString::to_string).collect()),
    };
    pretty(&file)
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Seventeen significant digits.
pub fn format_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

fn ext_value(v: Option<ExtReal>) -> (String, bool) {
    match v {
        Some(ExtReal::Finite(x)) => (format_f64(x), true),
        Some(ExtReal::PosInf) => ("inf".into(), false),
        Some(ExtReal::NegInf) => ("-inf".into(), false),
        None => ("nan".into(), false),
    }
}

pub fn sweep_csv(profile: &AlphaProfile) -> String {
    let mut out = String::from("alpha,delta_f,finite\n");
    for e in &profile.entries {
        let (value, finite) = ext_value(e.value);
        out.push_str(&format!("{},{},{}\n", e.alpha, value, finite));
    }
    out
}

pub fn sweep_json(profile: &AlphaProfile) -> String {
    let entries: Vec<Value> = profile
        .entries
        .iter()
        .map(|e| {
            let delta = match e.value {
                Some(ExtReal::Finite(x)) => json!(x),
                other => Value::String(ext_value(other).0),
            };
            json!({ "alpha": e.alpha.label(), "delta_f": delta, "finite": e.is_finite() })
        })
        .collect();
    pretty(&json!({ "entries": entries }))
}

pub fn curve_csv<S: Scalar>(curve: &LorenzCurve<S>) -> String {
    let mut out = String::from("x,y\n");
    for (x, y) in curve.points() {
        out.push_str(&format!(
            "{},{}\n",
            format_f64(x.to_f64()),
            format_f64(y.to_f64())
        ));
    }
    out
}

pub fn comparison_value(cmp: &CurveComparison) -> Value {
    let violations: Vec<Value> = cmp
        .violations
        .iter()
        .map(|(x, gap)| json!({ "x": x, "gap": gap }))
        .collect();
    json!({
        "verdict": cmp.verdict.as_str(),
        "violations": violations,
        "marginal": cmp.marginal,
        "min_gap": cmp.min_gap,
    })
}

pub fn comparison_json(cmp: &CurveComparison) -> String {
    pretty(&comparison_value(cmp))
}

pub fn embedding_spec_json(spec: &EmbeddingSpec) -> String {
    pretty(&json!({ "d": spec.d }))
}

pub fn parse_embedding_spec(text: &str) -> Result<EmbeddingSpec> {
    #[derive(Deserialize)]
    struct File {
        d: Vec<u64>,
    }
    let file: File = serde_json::from_str(text)?;
    Ok(EmbeddingSpec::new(file.d)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SearchConfigFile {
    dims: Option<Vec<Vec<usize>>>,
    marginal_grid: Option<usize>,
    polytope_grid: Option<usize>,
    budget_cells: Option<usize>,
    selection: Option<String>,
}

/// Missing fields take their defaults. `selection` is `"first"` or
/// `"min_correlation"`.
pub fn parse_search_config(text: &str) -> Result<SearchConfig> {
    let file: SearchConfigFile = serde_json::from_str(text)?;
    let default = SearchConfig::default();
    let selection = match file.selection.as_deref() {
        None | Some("first") => Selection::First,
        Some("min_correlation") => Selection::MinCorrelation,
        Some(other) => bail!("unknown selection {other:?}"),
    };
    let config = SearchConfig {
        dims: file.dims.unwrap_or(default.dims),
        marginal_grid: file.marginal_grid.unwrap_or(default.marginal_grid),
        polytope_grid: file.polytope_grid.unwrap_or(default.polytope_grid),
        budget_cells: file.budget_cells.unwrap_or(default.budget_cells),
        selection,
    };
    if config.marginal_grid < 2 || config.polytope_grid < 1 {
        bail!("marginal_grid must be at least 2 and polytope_grid at least 1");
    }
    Ok(config)
}

pub fn joint_value<S: JsonScalar>(joint: &JointCatalyst<S>) -> Value {
    json!({ "dims": joint.dims(), "probs": encode_all(joint.probs()) })
}

pub fn catalyst_value(found: &CatalystFound) -> Value {
    let marginals: Vec<Vec<Value>> = found
        .joint
        .marginals()
        .iter()
        .map(|m| encode_all(m))
        .collect();
    json!({
        "joint": joint_value(&found.joint),
        "marginals": marginals,
        "total_correlation": found.total_correlation,
        "parameters": found.parameters,
        "comparison": comparison_value(&found.comparison),
    })
}

pub fn search_result_json(result: &SearchResult) -> String {
    let body = match &result.found {
        Some(found) => {
            let mut v = catalyst_value(found);
            v["found"] = json!(true);
            v["cells_evaluated"] = json!(result.cells_evaluated);
            v
        }
        None => json!({ "found": false, "cells_evaluated": result.cells_evaluated }),
    };
    pretty(&body)
}

#[derive(Debug, Serialize, Deserialize)]
struct WitnessFile {
    matrix: Vec<Vec<Value>>,
    row_labels: Vec<String>,
    validated: bool,
    residuals: ResidualsFile,
    gibbs: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    target: Option<Vec<Value>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ResidualsFile {
    column_sums: f64,
    gibbs: f64,
    target: Option<f64>,
    negativity: f64,
}

impl From<Residuals> for ResidualsFile {
    fn from(r: Residuals) -> Self {
        Self {
            column_sums: r.column_sums,
            gibbs: r.gibbs,
            target: r.target,
            negativity: r.negativity,
        }
    }
}

/// Row labels name each output level by index and energy.
pub fn witness_json<S: JsonScalar>(
    w: &StochasticWitness<S>,
    ham: &Hamiltonian,
    pair: Option<(&[S], &[S])>,
) -> String {
    let gamma = ham.gibbs_factors_in::<S>().probabilities();
    let file = WitnessFile {
        matrix: w.rows().iter().map(|r| encode_all(r)).collect(),
        row_labels: ham
            .levels()
            .iter()
            .enumerate()
            .map(|(i, e)| format!("{i}:{e}"))
            .collect(),
        validated: w.validated(),
        residuals: w.residuals().into(),
        gibbs: encode_all(&gamma),
        initial: pair.map(|(p, _)| encode_all(p)),
        target: pair.map(|(_, q)| encode_all(q)),
    };
    pretty(&file)
}

/// Rebuilds a witness, recomputing its residuals from the stored Gibbs
/// state and pair.
pub fn parse_witness<S: JsonScalar>(text: &str) -> Result<StochasticWitness<S>> {
    let file: WitnessFile = serde_json::from_str(text)?;
    let n = file.matrix.len();
    let mut m = Vec::with_capacity(n * n);
    for row in &file.matrix {
        if row.len() != n {
            bail!("witness matrix is not square");
        }
        m.extend(decode_all::<S>(row)?);
    }
    let gamma = decode_all::<S>(&file.gibbs)?;
    let pair = match (&file.initial, &file.target) {
        (Some(p), Some(q)) => Some((decode_all::<S>(p)?, decode_all::<S>(q)?)),
        _ => None,
    };
    let pair_ref = pair.as_ref().map(|(p, q)| (&p[..], &q[..]));
    Ok(StochasticWitness::new(n, m, &gamma, pair_ref)?)
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}
