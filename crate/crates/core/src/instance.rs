//! Wire formats: instance JSON, trace JSON and DOT export.
//!
//! Instance JSON:
//!
//! ```json
//! {"name": "intro", "num_vertices": 2, "edges": [[0, 1]], "divisor": [-1, 1]}
//! ```
//!
//! `name` is optional. Two optional extensions are accepted and emitted:
//! `"side": "dollar" | "chip"` (default dollar, omitted when dollar) and an
//! `"expected"` block with known analytics for generated families.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{CycleWitness, GameTrace, Outcome, Side};
use crate::graph::{Divisor, FiringVector, Graph, GraphError, Move};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("malformed instance at `{path}`: {message}")]
    Json { path: String, message: String },
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("`divisor` has {found} entries but `num_vertices` is {expected}")]
    DivisorLength { expected: usize, found: usize },
}

/// Analytics known in closed form for a generated instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub m0: u64,
    pub m_min: u64,
    /// `m0 / m_min`
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: Option<String>,
    pub graph: Graph,
    pub divisor: Divisor,
    pub side: Side,
    pub expected: Option<Expected>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    num_vertices: usize,
    edges: Vec<[usize; 2]>,
    divisor: Vec<i64>,
    #[serde(default, skip_serializing_if = "is_dollar")]
    side: Side,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expected: Option<Expected>,
}

fn is_dollar(side: &Side) -> bool {
    *side == Side::Dollar
}

impl Instance {
    pub fn new(graph: Graph, divisor: Divisor) -> Result<Self, InstanceError> {
        if divisor.len() != graph.num_vertices() {
            return Err(InstanceError::DivisorLength {
                expected: graph.num_vertices(),
                found: divisor.len(),
            });
        }
        Ok(Instance {
            name: None,
            graph,
            divisor,
            side: Side::Dollar,
            expected: None,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let repr: InstanceRepr = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            InstanceError::Json {
                path,
                message: e.into_inner().to_string(),
            }
        })?;
        Self::from_repr(repr)
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self, InstanceError> {
        let repr: InstanceRepr = serde_path_to_error::deserialize(value).map_err(|e| {
            let path = e.path().to_string();
            InstanceError::Json {
                path,
                message: e.into_inner().to_string(),
            }
        })?;
        Self::from_repr(repr)
    }

    fn from_repr(repr: InstanceRepr) -> Result<Self, InstanceError> {
        let edges: Vec<(usize, usize)> = repr.edges.iter().map(|&[u, v]| (u, v)).collect();
        let graph = Graph::new(repr.num_vertices, &edges)?;
        let mut instance = Instance::new(graph, Divisor(repr.divisor))?;
        instance.name = repr.name;
        instance.side = repr.side;
        instance.expected = repr.expected;
        Ok(instance)
    }

    fn to_repr(&self) -> InstanceRepr {
        InstanceRepr {
            name: self.name.clone(),
            num_vertices: self.graph.num_vertices(),
            edges: self.graph.edges().iter().map(|&(u, v)| [u, v]).collect(),
            divisor: self.divisor.0.clone(),
            side: self.side,
            expected: self.expected.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_repr()).expect("instance serializes")
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_repr()).expect("instance serializes")
    }

    pub fn to_dot(&self) -> String {
        to_dot(&self.graph, &self.divisor)
    }
}

impl Serialize for Instance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_repr().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Instance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = InstanceRepr::deserialize(deserializer)?;
        Instance::from_repr(repr).map_err(serde::de::Error::custom)
    }
}

/// One undirected DOT graph; debt vertices are drawn red.
pub fn to_dot(g: &Graph, c: &Divisor) -> String {
    let mut out = String::from("graph G {\n");
    for (i, chips) in c.values().iter().enumerate() {
        let _ = write!(out, "  {i} [label=\"{i}\\n{chips}\"");
        if *chips < 0 {
            out.push_str(", color=red");
        }
        out.push_str("];\n");
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceStatus {
    Won,
    Stable,
    Unwinnable,
    StepLimit,
}

/// Trace JSON. On `unwinnable`, `final` is the revisited configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceReport {
    pub moves: Vec<Move>,
    pub aggregate: FiringVector,
    pub move_count: u64,
    #[serde(rename = "final")]
    pub final_state: Divisor,
    pub status: TraceStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub states: Option<Vec<Divisor>>,
}

impl TraceReport {
    fn from_trace(trace: &GameTrace, status: TraceStatus, with_states: bool) -> Self {
        TraceReport {
            moves: trace.moves.clone(),
            aggregate: trace.aggregate.clone(),
            move_count: trace.move_count(),
            final_state: trace.final_state.clone(),
            status,
            states: if with_states {
                trace.states.clone()
            } else {
                None
            },
        }
    }

    pub fn settled(trace: &GameTrace, with_states: bool) -> Self {
        let status = match trace.side {
            Side::Dollar => TraceStatus::Won,
            Side::Chip => TraceStatus::Stable,
        };
        Self::from_trace(trace, status, with_states)
    }

    pub fn cycle(witness: &CycleWitness, with_states: bool) -> Self {
        Self::from_trace(&witness.trace, TraceStatus::Unwinnable, with_states)
    }

    pub fn step_limit(trace: &GameTrace, with_states: bool) -> Self {
        Self::from_trace(trace, TraceStatus::StepLimit, with_states)
    }

    /// Report for an outcome; `input` is needed for the degree shortcut,
    /// which runs no moves.
    pub fn from_outcome(outcome: &Outcome, input: &Divisor, with_states: bool) -> Self {
        match outcome {
            Outcome::Settled(trace) => Self::settled(trace, with_states),
            Outcome::Cycle(w) => Self::cycle(w, with_states),
            Outcome::NegativeDegree { .. } => TraceReport {
                moves: Vec::new(),
                aggregate: FiringVector::zeros(input.len()),
                move_count: 0,
                final_state: input.clone(),
                status: TraceStatus::Unwinnable,
                states: None,
            },
        }
    }
}
