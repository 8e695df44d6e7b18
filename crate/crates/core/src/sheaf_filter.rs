//! Filters as sheaves over a line complex.
//!
//! Time is a line complex of `T` vertices and `T - 1` edges. Every edge
//! carries an `N`-dimensional state; every vertex carries the state augmented
//! by one injected input sample (`N + 1` values), plus an input cell and an
//! output cell. Four maps connect them:
//!
//! * `s`: vertex state -> next edge state (the dynamics),
//! * `r`: vertex state -> previous edge state (drop the injected input),
//! * `i`: vertex state -> input cell,
//! * `o`: vertex state -> output cell.
//!
//! A section is consistent when every edge agrees with `s` of its left vertex
//! and `r` of its right vertex, and the vertex cells agree with `i` and `o`.

use thiserror::Error;

use crate::dynamics::{sin_turns, sine_projection, wrap_unit, Phase};
use crate::embedding::TimeSeries;
use crate::formats::{data_lines, parse_f64};

/// Tolerance for values that [`verify_section`] recomputes through `s` or `o`.
pub const RECOMPUTE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SheafError {
    #[error("initial state has {got} values, the filter needs {expected}")]
    StateDimensionMismatch { expected: usize, got: usize },
    #[error("section does not fit the line complex: {0}")]
    SectionShapeMismatch(String),
    #[error("input is empty; a line complex needs at least one vertex")]
    EmptyInput,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("phase state {0} is outside [0, 1)")]
    PhaseOutOfRange(f64),
    #[error("config key '{key}': {message}")]
    Config { key: String, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    /// States in `R^N`.
    Vector,
    /// States in `(S^1)^N`, every coordinate in `[0, 1)`.
    CircleEnsemble,
}

/// Sheaf maps of a linear time-invariant filter in Direct-II form.
#[derive(Clone, Debug, PartialEq)]
pub struct LtiMaps {
    /// Feedback `a_1..a_N`.
    a: Vec<f64>,
    /// Feedforward `b_0..b_N`.
    b: Vec<f64>,
}

impl LtiMaps {
    pub fn feedback(&self) -> &[f64] {
        &self.a
    }

    pub fn feedforward(&self) -> &[f64] {
        &self.b
    }

    /// Register head of the next step: `x + Σ_j -a_j x_{N-j}`.
    fn node(&self, aug: &[f64]) -> f64 {
        let n = self.a.len();
        let x = aug[n];
        self.a
            .iter()
            .enumerate()
            .fold(x, |acc, (j, &aj)| acc - aj * aug[n - 1 - j])
    }
}

/// Sheaf maps of a two-oscillator FM voice: carrier phase `x_0`, modulator phase `z_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct FmMaps {
    pub omega: f64,
    pub index: f64,
    pub mod_omega: f64,
    pub phase_offset: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum TopologicalFilter {
    Lti(LtiMaps),
    Fm(FmMaps),
}

/// LTI filter from feedback `a_1..a_N` and feedforward `b_0..b_N`.
pub fn lti_filter(a: &[f64], b: &[f64]) -> Result<TopologicalFilter, SheafError> {
    if b.len() != a.len() + 1 {
        return Err(SheafError::InvalidParameter(format!(
            "{} feedback coefficients need {} feedforward coefficients, got {}",
            a.len(),
            a.len() + 1,
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(SheafError::InvalidParameter("coefficients must be finite".into()));
    }
    Ok(TopologicalFilter::Lti(LtiMaps { a: a.to_vec(), b: b.to_vec() }))
}

/// FM filter: carrier increment `omega`, modulation index `index`, modulator
/// increment `mod_omega` and output phase offset (radians).
pub fn fm_filter(omega: f64, index: f64, mod_omega: f64, phase_offset: f64) -> Result<TopologicalFilter, SheafError> {
    if ![omega, index, mod_omega, phase_offset].iter().all(|v| v.is_finite()) {
        return Err(SheafError::InvalidParameter("FM parameters must be finite".into()));
    }
    Ok(TopologicalFilter::Fm(FmMaps { omega, index, mod_omega, phase_offset }))
}

impl TopologicalFilter {
    /// Dimension `N` of the edge state.
    pub fn state_dim(&self) -> usize {
        match self {
            Self::Lti(m) => m.a.len(),
            Self::Fm(_) => 2,
        }
    }

    pub fn space_kind(&self) -> SpaceKind {
        match self {
            Self::Lti(_) => SpaceKind::Vector,
            Self::Fm(_) => SpaceKind::CircleEnsemble,
        }
    }

    /// Edge state with the input sample appended.
    pub fn augment(&self, state: &[f64], input: f64) -> Vec<f64> {
        let mut v = Vec::with_capacity(state.len() + 1);
        v.extend_from_slice(state);
        v.push(input);
        v
    }

    pub fn s(&self, aug: &[f64]) -> Vec<f64> {
        match self {
            Self::Lti(m) => {
                let n = m.a.len();
                let mut next = Vec::with_capacity(n);
                if n > 0 {
                    next.extend_from_slice(&aug[1..n]);
                    next.push(m.node(aug));
                }
                next
            }
            Self::Fm(m) => {
                let (x0, z0, x) = (aug[0], aug[1], aug[2]);
                vec![
                    wrap_unit(x0 + m.omega + m.index * sin_turns(z0) + x),
                    wrap_unit(z0 + m.mod_omega),
                ]
            }
        }
    }

    pub fn r(&self, aug: &[f64]) -> Vec<f64> {
        aug[..aug.len() - 1].to_vec()
    }

    pub fn i(&self, aug: &[f64]) -> f64 {
        aug[aug.len() - 1]
    }

    pub fn o(&self, aug: &[f64]) -> f64 {
        match self {
            // b_0 multiplies the register head v, not the raw input, so the
            // sheaf reproduces y = Σ b_i x[n-i] - Σ a_j y[n-j].
            Self::Lti(m) => {
                let n = m.a.len();
                let head = m.b[0] * m.node(aug);
                m.b[1..]
                    .iter()
                    .enumerate()
                    .fold(head, |acc, (k, &bi)| acc + bi * aug[n - 1 - k])
            }
            Self::Fm(m) => sine_projection(aug[0], 1.0, m.phase_offset),
        }
    }

    /// All-zero state (phase zero for circle ensembles).
    pub fn zero_state(&self) -> Vec<f64> {
        vec![0.0; self.state_dim()]
    }

    fn check_state(&self, state: &[f64]) -> Result<(), SheafError> {
        if state.len() != self.state_dim() {
            return Err(SheafError::StateDimensionMismatch { expected: self.state_dim(), got: state.len() });
        }
        match self.space_kind() {
            SpaceKind::Vector => {
                if state.iter().any(|v| !v.is_finite()) {
                    return Err(SheafError::InvalidParameter("state must be finite".into()));
                }
            }
            SpaceKind::CircleEnsemble => {
                if let Some(&v) = state.iter().find(|&&v| Phase::new(v).is_err()) {
                    return Err(SheafError::PhaseOutOfRange(v));
                }
            }
        }
        Ok(())
    }

    /// Runs the filter without recording a section.
    pub fn process(&self, input: &[f64], initial_state: &[f64]) -> Result<Vec<f64>, SheafError> {
        let mut state = initial_state.to_vec();
        self.process_from(input, &mut state)
    }

    /// Runs the filter from `state` and leaves the final edge state there, so
    /// a long signal can be fed in blocks.
    pub fn process_from(&self, input: &[f64], state: &mut Vec<f64>) -> Result<Vec<f64>, SheafError> {
        self.check_state(state)?;
        let mut out = Vec::with_capacity(input.len());
        for &x in input {
            let aug = self.augment(state, x);
            out.push(self.o(&aug));
            *state = self.s(&aug);
        }
        Ok(out)
    }
}

/// Data over one vertex of the line complex.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexCell {
    pub input: f64,
    /// Augmented state, `N + 1` values.
    pub state: Vec<f64>,
    pub output: f64,
}

/// A full assignment of data over the line complex.
///
/// `edges[k]` sits between vertex `k` and `k + 1`. The open ends of the line
/// carry `incoming` (the caller's initial state, left of vertex 0) and
/// `outgoing` (the state handed on past the last vertex).
#[derive(Clone, Debug, PartialEq)]
pub struct Section {
    pub vertices: Vec<VertexCell>,
    pub edges: Vec<Vec<f64>>,
    pub incoming: Vec<f64>,
    pub outgoing: Vec<f64>,
}

/// Which edge-like cell a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeRef {
    Incoming,
    Edge(usize),
    Outgoing,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Input cell disagrees with `i` of the vertex state or with the input series.
    Input { vertex: usize },
    Output { vertex: usize },
    /// Edge state is not `r` of the vertex to its right.
    Restriction { edge: EdgeRef, vertex: usize },
    /// Edge state is not `s` of the vertex to its left.
    Dynamics { edge: EdgeRef, vertex: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectionReport {
    pub first_violation: Option<Violation>,
}

impl SectionReport {
    pub fn is_consistent(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// Sweeps the line complex left to right, recording every cell.
pub fn propagate(
    f: &TopologicalFilter,
    input: &TimeSeries,
    initial_state: &[f64],
) -> Result<(TimeSeries, Section), SheafError> {
    if input.is_empty() {
        return Err(SheafError::EmptyInput);
    }
    f.check_state(initial_state)?;
    let t = input.len();
    let mut vertices = Vec::with_capacity(t);
    let mut edges = Vec::with_capacity(t - 1);
    let mut state = initial_state.to_vec();
    for &x in input.samples() {
        let aug = f.augment(&state, x);
        let output = f.o(&aug);
        state = f.s(&aug);
        vertices.push(VertexCell { input: f.i(&aug), state: aug, output });
        edges.push(state.clone());
    }
    let outgoing = edges.pop().expect("at least one vertex");
    let outputs: Vec<f64> = vertices.iter().map(|v| v.output).collect();
    let series = TimeSeries::with_rate(outputs, input.sample_rate())
        .map_err(|e| SheafError::InvalidParameter(e.to_string()))?;
    Ok((series, Section { vertices, edges, incoming: initial_state.to_vec(), outgoing }))
}

fn states_agree(kind: SpaceKind, a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(&x, &y)| match kind {
            SpaceKind::Vector => (x - y).abs() <= tol,
            SpaceKind::CircleEnsemble => {
                let d = (x - y).abs();
                d.min(1.0 - d) <= tol && (0.0..1.0).contains(&x) && (0.0..1.0).contains(&y)
            }
        })
}

/// Checks every consistency condition of a section, in order along the line.
pub fn verify_section(
    f: &TopologicalFilter,
    sec: &Section,
    input: &TimeSeries,
) -> Result<SectionReport, SheafError> {
    let t = sec.vertices.len();
    let n = f.state_dim();
    if t != input.len() {
        return Err(SheafError::SectionShapeMismatch(format!("{t} vertices for {} input samples", input.len())));
    }
    if t == 0 {
        return Err(SheafError::EmptyInput);
    }
    if sec.edges.len() != t - 1 {
        return Err(SheafError::SectionShapeMismatch(format!("{} edges for {t} vertices", sec.edges.len())));
    }
    if let Some(k) = sec.vertices.iter().position(|v| v.state.len() != n + 1) {
        return Err(SheafError::SectionShapeMismatch(format!("vertex {k} state has the wrong dimension")));
    }
    if sec.edges.iter().chain([&sec.incoming, &sec.outgoing]).any(|e| e.len() != n) {
        return Err(SheafError::SectionShapeMismatch("edge state has the wrong dimension".into()));
    }

    let kind = f.space_kind();
    let edge_at = |k: usize| -> (EdgeRef, &Vec<f64>) {
        if k == 0 {
            (EdgeRef::Incoming, &sec.incoming)
        } else {
            (EdgeRef::Edge(k - 1), &sec.edges[k - 1])
        }
    };
    let fail = |v| Ok(SectionReport { first_violation: Some(v) });
    for (k, cell) in sec.vertices.iter().enumerate() {
        let (left_ref, left) = edge_at(k);
        let off_circle = kind == SpaceKind::CircleEnsemble && left.iter().any(|v| !(0.0..1.0).contains(v));
        if f.r(&cell.state) != *left || off_circle {
            return fail(Violation::Restriction { edge: left_ref, vertex: k });
        }
        if cell.input != f.i(&cell.state) || cell.input != input.samples()[k] {
            return fail(Violation::Input { vertex: k });
        }
        if (cell.output - f.o(&cell.state)).abs() > RECOMPUTE_TOLERANCE {
            return fail(Violation::Output { vertex: k });
        }
        let (right_ref, right) = if k + 1 == t {
            (EdgeRef::Outgoing, &sec.outgoing)
        } else {
            (EdgeRef::Edge(k), &sec.edges[k])
        };
        if !states_agree(kind, &f.s(&cell.state), right, RECOMPUTE_TOLERANCE) {
            return fail(Violation::Dynamics { edge: right_ref, vertex: k });
        }
    }
    Ok(SectionReport { first_violation: None })
}

/// A parsed `.filt` file: the filter and its initial edge state.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterConfig {
    pub filter: TopologicalFilter,
    pub initial_state: Vec<f64>,
}

fn config_err(key: &str, message: impl Into<String>) -> SheafError {
    SheafError::Config { key: key.to_string(), message: message.into() }
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, SheafError> {
    if value.trim().is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|f| {
            parse_f64(f)
                .filter(|v| v.is_finite())
                .ok_or_else(|| config_err(key, format!("'{}' is not a finite number", f.trim())))
        })
        .collect()
}

fn parse_scalar(key: &str, value: &str) -> Result<f64, SheafError> {
    match parse_list(key, value)?.as_slice() {
        [v] => Ok(*v),
        _ => Err(config_err(key, "expected a single number")),
    }
}

/// Parses the `key=value` filter format.
///
/// ```text
/// kind=lti          # or fm
/// a=-0.5            # lti: feedback a_1..a_N (may be empty)
/// b=1,0             # lti: feedforward b_0..b_N
/// omega=0.01        # fm: carrier increment per sample (turns)
/// index=0.5         # fm: modulation index H
/// mod_omega=0.003   # fm: modulator increment per sample (turns)
/// phase=0           # fm: output phase offset (radians)
/// state=0           # optional initial edge state, defaults to zeros
/// ```
pub fn parse_filter_config(text: &str) -> Result<FilterConfig, SheafError> {
    let mut kv: Vec<(String, String)> = Vec::new();
    for (line, content) in data_lines(text) {
        let content = content.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content
            .split_once('=')
            .ok_or_else(|| config_err(content, format!("line {line} is not key=value")))?;
        let k = k.trim().to_string();
        if kv.iter().any(|(seen, _)| *seen == k) {
            return Err(config_err(&k, "given more than once"));
        }
        kv.push((k, v.trim().to_string()));
    }
    let get = |key: &str| kv.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
    let kind = get("kind").ok_or_else(|| config_err("kind", "missing"))?;
    let allowed: &[&str] = match kind {
        "lti" => &["kind", "a", "b", "state"],
        "fm" => &["kind", "omega", "index", "mod_omega", "phase", "state"],
        other => return Err(config_err("kind", format!("'{other}' is not lti or fm"))),
    };
    if let Some((k, _)) = kv.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(config_err(k, format!("unknown key for kind={kind}")));
    }
    let filter = if kind == "lti" {
        let a = parse_list("a", get("a").unwrap_or(""))?;
        let b = parse_list("b", get("b").ok_or_else(|| config_err("b", "missing"))?)?;
        lti_filter(&a, &b).map_err(|e| config_err("b", e.to_string()))?
    } else {
        let req = |k: &str| get(k).ok_or_else(|| config_err(k, "missing")).and_then(|v| parse_scalar(k, v));
        let phase = get("phase").map(|v| parse_scalar("phase", v)).transpose()?.unwrap_or(0.0);
        fm_filter(req("omega")?, req("index")?, req("mod_omega")?, phase)?
    };
    let initial_state = match get("state") {
        Some(v) => parse_list("state", v)?,
        None => filter.zero_state(),
    };
    filter.check_state(&initial_state).map_err(|e| config_err("state", e.to_string()))?;
    Ok(FilterConfig { filter, initial_state })
}
