//! Instance files: a JSON document naming the problem, capacity, length,
//! mode, both endpoints, and optionally the outer face or an explicit layer
//! assignment for the planar pipeline. Vertex ids are 1-indexed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Instance, LengthMode, ProblemKind, Vertex, VertexSet};

#[derive(Debug, Error)]
pub enum InstanceFileError {
    #[error("instance file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("instance file: field `{field}` names vertex {id} outside 1..={n}")]
    VertexOutOfRange { field: &'static str, id: usize, n: usize },
    #[error("instance file: field `layers` must assign every vertex (missing {0})")]
    MissingLayer(usize),
    #[error("instance file: fields `outer` and `layers` are mutually exclusive")]
    OuterAndLayers,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub problem: ProblemKind,
    pub k: usize,
    pub ell: usize,
    #[serde(default = "default_mode")]
    pub mode: LengthMode,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<BTreeMap<usize, usize>>,
}

fn default_mode() -> LengthMode {
    LengthMode::Exact
}

/// How the planar pipeline should layer the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Layering {
    Outer(VertexSet),
    Explicit(Vec<usize>),
}

fn to_internal(field: &'static str, ids: &[usize], n: usize) -> Result<VertexSet, InstanceFileError> {
    ids.iter()
        .map(|&id| {
            if id == 0 || id > n {
                Err(InstanceFileError::VertexOutOfRange { field, id, n })
            } else {
                Ok(id - 1)
            }
        })
        .collect()
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self, InstanceFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_instance(inst: &Instance) -> Self {
        let ids = |s: &VertexSet| s.iter().map(|v| v + 1).collect();
        InstanceFile {
            problem: inst.kind,
            k: inst.capacity,
            ell: inst.length,
            mode: inst.mode,
            source: ids(&inst.source),
            target: ids(&inst.target),
            outer: None,
            layers: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes") + "\n"
    }

    pub fn into_instance(&self, graph: Graph) -> Result<Instance, InstanceFileError> {
        let n = graph.n();
        Ok(Instance {
            source: to_internal("source", &self.source, n)?,
            target: to_internal("target", &self.target, n)?,
            graph,
            capacity: self.k,
            length: self.ell,
            kind: self.problem,
            mode: self.mode,
        })
    }

    pub fn layering(&self, n: usize) -> Result<Option<Layering>, InstanceFileError> {
        match (&self.outer, &self.layers) {
            (Some(_), Some(_)) => Err(InstanceFileError::OuterAndLayers),
            (Some(outer), None) => Ok(Some(Layering::Outer(to_internal("outer", outer, n)?))),
            (None, Some(map)) => {
                let mut layers = vec![usize::MAX; n];
                for (&id, &layer) in map {
                    if id == 0 || id > n {
                        return Err(InstanceFileError::VertexOutOfRange { field: "layers", id, n });
                    }
                    layers[id - 1] = layer;
                }
                if let Some(v) = layers.iter().position(|&l| l == usize::MAX) {
                    return Err(InstanceFileError::MissingLayer(v + 1));
                }
                Ok(Some(Layering::Explicit(layers)))
            }
            (None, None) => Ok(None),
        }
    }
}

pub fn external_ids(set: &VertexSet) -> Vec<Vertex> {
    set.iter().map(|v| v + 1).collect()
}
