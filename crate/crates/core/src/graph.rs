//! Simple undirected graphs, problem kinds and reconfiguration instances.
//!
//! Vertices are stored 0-indexed. Every file format and every printed set
//! uses 1-indexed ids; the conversion happens at the I/O boundary only.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("line {line}: malformed edge line")]
    MalformedEdge { line: usize },
    #[error("line {line}: vertex {id} out of range 1..={n}")]
    VertexOutOfRange { line: usize, id: usize, n: usize },
    #[error("line {line}: self-loop on vertex {id}")]
    SelfLoop { line: usize, id: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("header declares {declared} edges but {actual} were given")]
    EdgeCountMismatch { declared: usize, actual: usize },
    #[error("vertex {0} is not reachable from the outer set")]
    Unreachable(usize),
    #[error("outer set is empty")]
    EmptyOuter,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<Vertex>>,
    edges: Vec<(Vertex, Vertex)>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    /// Builds a graph from 0-indexed edges, silently dropping loops and
    /// duplicates. Use [`parse_graph`] for strict checking of external input.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Self {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Returns false if the edge was a loop or already present.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> bool {
        assert!(u < self.n && v < self.n, "edge ({u}, {v}) out of range");
        if u == v || self.has_edge(u, v) {
            return false;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let pos = self.edges.binary_search(&(a, b)).unwrap_err();
        self.edges.insert(pos, (a, b));
        for (x, y) in [(u, v), (v, u)] {
            let list = &mut self.adj[x];
            let pos = list.binary_search(&y).unwrap_err();
            list.insert(pos, y);
        }
        true
    }

    pub fn add_vertex(&mut self) -> Vertex {
        self.adj.push(Vec::new());
        self.n += 1;
        self.n - 1
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Subgraph induced by `keep`, re-indexed in increasing order. Returns
    /// the subgraph and the map from new ids to old ids.
    pub fn induced(&self, keep: &VertexSet) -> (Graph, Vec<Vertex>) {
        let order: Vec<Vertex> = keep.iter().copied().collect();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in order.iter().enumerate() {
            index[v] = i;
        }
        let mut sub = Graph::empty(order.len());
        for &(u, v) in &self.edges {
            if index[u] != usize::MAX && index[v] != usize::MAX {
                sub.add_edge(index[u], index[v]);
            }
        }
        (sub, order)
    }

    /// PACE `.gr`-style text with 1-indexed vertices.
    pub fn to_pace(&self) -> String {
        let mut out = format!("p tw {} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }
}

/// Parses the PACE-style graph format: `c` comment lines, a `p tw <n> <m>`
/// header, then `m` lines `<u> <v>` with 1-indexed ids.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut graph: Option<(Graph, usize)> = None;
    let mut seen = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields[0] == "p" {
            if graph.is_some() {
                return Err(GraphError::MalformedHeader {
                    line,
                    reason: "duplicate header".into(),
                });
            }
            if fields.len() != 4 || fields[1] != "tw" {
                return Err(GraphError::MalformedHeader {
                    line,
                    reason: "expected `p tw <n> <m>`".into(),
                });
            }
            let parse = |s: &str| {
                s.parse::<usize>().map_err(|_| GraphError::MalformedHeader {
                    line,
                    reason: format!("`{s}` is not a non-negative integer"),
                })
            };
            let n = parse(fields[2])?;
            let m = parse(fields[3])?;
            if n == 0 {
                return Err(GraphError::MalformedHeader {
                    line,
                    reason: "graph must have at least one vertex".into(),
                });
            }
            graph = Some((Graph::empty(n), m));
            continue;
        }
        let Some((g, _)) = graph.as_mut() else {
            return Err(GraphError::MalformedHeader {
                line,
                reason: "edge before header".into(),
            });
        };
        if fields.len() != 2 {
            return Err(GraphError::MalformedEdge { line });
        }
        let mut ends = [0usize; 2];
        for (slot, f) in ends.iter_mut().zip(&fields) {
            let id: usize = f.parse().map_err(|_| GraphError::MalformedEdge { line })?;
            if id == 0 || id > g.n() {
                return Err(GraphError::VertexOutOfRange { line, id, n: g.n() });
            }
            *slot = id;
        }
        let [u, v] = ends;
        if u == v {
            return Err(GraphError::SelfLoop { line, id: u });
        }
        if !g.add_edge(u - 1, v - 1) {
            return Err(GraphError::DuplicateEdge { line, u, v });
        }
        seen += 1;
    }
    let Some((g, declared)) = graph else {
        return Err(GraphError::MalformedHeader {
            line: 0,
            reason: "missing `p tw` header".into(),
        });
    };
    if declared != seen {
        return Err(GraphError::EdgeCountMismatch { declared, actual: seen });
    }
    Ok(g)
}

/// The hereditary graph property a solution must preserve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Edgeless,
    Bipartite,
    Forest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProblemKind {
    #[serde(rename = "vc-r")]
    VertexCover,
    #[serde(rename = "is-r")]
    IndependentSet,
    #[serde(rename = "oct-r")]
    OddCycleTransversal,
    #[serde(rename = "ibs-r")]
    InducedBipartite,
    #[serde(rename = "fvs-r")]
    FeedbackVertexSet,
    #[serde(rename = "if-r")]
    InducedForest,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 6] = [
        ProblemKind::VertexCover,
        ProblemKind::IndependentSet,
        ProblemKind::OddCycleTransversal,
        ProblemKind::InducedBipartite,
        ProblemKind::FeedbackVertexSet,
        ProblemKind::InducedForest,
    ];

    /// Minimization kinds ask that the graph minus the solution has the
    /// property; maximization kinds ask it of the induced solution.
    pub fn is_minimization(self) -> bool {
        matches!(
            self,
            ProblemKind::VertexCover | ProblemKind::OddCycleTransversal | ProblemKind::FeedbackVertexSet
        )
    }

    pub fn property(self) -> Property {
        match self {
            ProblemKind::VertexCover | ProblemKind::IndependentSet => Property::Edgeless,
            ProblemKind::OddCycleTransversal | ProblemKind::InducedBipartite => Property::Bipartite,
            ProblemKind::FeedbackVertexSet | ProblemKind::InducedForest => Property::Forest,
        }
    }

    pub fn dual(self) -> ProblemKind {
        match self {
            ProblemKind::VertexCover => ProblemKind::IndependentSet,
            ProblemKind::IndependentSet => ProblemKind::VertexCover,
            ProblemKind::OddCycleTransversal => ProblemKind::InducedBipartite,
            ProblemKind::InducedBipartite => ProblemKind::OddCycleTransversal,
            ProblemKind::FeedbackVertexSet => ProblemKind::InducedForest,
            ProblemKind::InducedForest => ProblemKind::FeedbackVertexSet,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::VertexCover => "vc-r",
            ProblemKind::IndependentSet => "is-r",
            ProblemKind::OddCycleTransversal => "oct-r",
            ProblemKind::InducedBipartite => "ibs-r",
            ProblemKind::FeedbackVertexSet => "fvs-r",
            ProblemKind::InducedForest => "if-r",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown problem `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LengthMode {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "at-most")]
    AtMost,
}

/// Does the subgraph induced by the vertices with `member[v] == true` have
/// the property?
pub fn induced_has_property(graph: &Graph, member: &[bool], property: Property) -> bool {
    match property {
        Property::Edgeless => graph.edges().iter().all(|&(u, v)| !(member[u] && member[v])),
        Property::Bipartite => {
            let mut side = vec![u8::MAX; graph.n()];
            let mut queue = VecDeque::new();
            for start in graph.vertices().filter(|&v| member[v]) {
                if side[start] != u8::MAX {
                    continue;
                }
                side[start] = 0;
                queue.push_back(start);
                while let Some(u) = queue.pop_front() {
                    for &w in graph.neighbors(u) {
                        if !member[w] {
                            continue;
                        }
                        if side[w] == u8::MAX {
                            side[w] = 1 - side[u];
                            queue.push_back(w);
                        } else if side[w] == side[u] {
                            return false;
                        }
                    }
                }
            }
            true
        }
        Property::Forest => {
            // a component is a tree iff it has one fewer edge than vertices
            let mut comp = vec![usize::MAX; graph.n()];
            let mut sizes = Vec::new();
            for start in graph.vertices().filter(|&v| member[v]) {
                if comp[start] != usize::MAX {
                    continue;
                }
                let id = sizes.len();
                let mut count = 0;
                comp[start] = id;
                let mut stack = vec![start];
                while let Some(u) = stack.pop() {
                    count += 1;
                    for &w in graph.neighbors(u) {
                        if member[w] && comp[w] == usize::MAX {
                            comp[w] = id;
                            stack.push(w);
                        }
                    }
                }
                sizes.push((count, 0usize));
            }
            for &(u, v) in graph.edges() {
                if member[u] && member[v] {
                    sizes[comp[u]].1 += 1;
                }
            }
            sizes.iter().all(|&(verts, edges)| edges + 1 == verts)
        }
    }
}

pub fn membership(n: usize, set: &VertexSet) -> Vec<bool> {
    let mut member = vec![false; n];
    for &v in set {
        member[v] = true;
    }
    member
}

/// Is `set` a feasible solution of `kind` on `graph`, ignoring capacity?
pub fn check_feasible(graph: &Graph, set: &VertexSet, kind: ProblemKind) -> bool {
    let mut member = membership(graph.n(), set);
    if kind.is_minimization() {
        member.iter_mut().for_each(|b| *b = !*b);
    }
    induced_has_property(graph, &member, kind.property())
}

/// BFS distance of every vertex from `outer`.
pub fn bfs_layers(graph: &Graph, outer: &VertexSet) -> Result<Vec<usize>, GraphError> {
    if outer.is_empty() {
        return Err(GraphError::EmptyOuter);
    }
    let mut layer = vec![usize::MAX; graph.n()];
    let mut queue = VecDeque::new();
    for &v in outer {
        if v >= graph.n() {
            return Err(GraphError::VertexOutOfRange {
                line: 0,
                id: v + 1,
                n: graph.n(),
            });
        }
        layer[v] = 0;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        for &w in graph.neighbors(u) {
            if layer[w] == usize::MAX {
                layer[w] = layer[u] + 1;
                queue.push_back(w);
            }
        }
    }
    if let Some(v) = layer.iter().position(|&l| l == usize::MAX) {
        return Err(GraphError::Unreachable(v + 1));
    }
    Ok(layer)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    Source,
    Target,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Source => "source",
            Endpoint::Target => "target",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("{endpoint} contains vertex {vertex} outside 1..={n}")]
    SetOutOfRange {
        endpoint: Endpoint,
        vertex: usize,
        n: usize,
    },
    #[error("{endpoint} has size {size}, violating capacity k={capacity}")]
    CapacityViolated {
        endpoint: Endpoint,
        size: usize,
        capacity: usize,
    },
    #[error("{endpoint} is not a feasible {kind} solution")]
    EndpointInfeasible { endpoint: Endpoint, kind: ProblemKind },
}

/// One reconfiguration question: can `source` be transformed into `target`
/// within `length` single-vertex steps, every intermediate set feasible and
/// within capacity?
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub source: VertexSet,
    pub target: VertexSet,
    pub capacity: usize,
    pub length: usize,
    pub kind: ProblemKind,
    pub mode: LengthMode,
}

impl Instance {
    /// Does a set of this size respect the capacity bound?
    pub fn within_capacity(&self, size: usize) -> bool {
        if self.kind.is_minimization() {
            size <= self.capacity
        } else {
            size >= self.capacity
        }
    }

    pub fn is_feasible(&self, set: &VertexSet) -> bool {
        self.within_capacity(set.len()) && check_feasible(&self.graph, set, self.kind)
    }

    pub fn symmetric_difference(&self) -> usize {
        self.source.symmetric_difference(&self.target).count()
    }
}

pub fn validate_instance(inst: &Instance) -> Result<(), InstanceError> {
    for (endpoint, set) in [(Endpoint::Source, &inst.source), (Endpoint::Target, &inst.target)] {
        if let Some(&v) = set.iter().find(|&&v| v >= inst.graph.n()) {
            return Err(InstanceError::SetOutOfRange {
                endpoint,
                vertex: v + 1,
                n: inst.graph.n(),
            });
        }
        if !inst.within_capacity(set.len()) {
            return Err(InstanceError::CapacityViolated {
                endpoint,
                size: set.len(),
                capacity: inst.capacity,
            });
        }
        if !check_feasible(&inst.graph, set, inst.kind) {
            return Err(InstanceError::EndpointInfeasible {
                endpoint,
                kind: inst.kind,
            });
        }
    }
    Ok(())
}

pub fn complement_set(n: usize, set: &VertexSet) -> VertexSet {
    (0..n).filter(|v| !set.contains(v)).collect()
}

/// The dual instance: complemented endpoints, capacity `n - k`, dual kind,
/// same length. Capacities above `n` behave like `n`.
pub fn complement_instance(inst: &Instance) -> Instance {
    let n = inst.graph.n();
    Instance {
        graph: inst.graph.clone(),
        source: complement_set(n, &inst.source),
        target: complement_set(n, &inst.target),
        capacity: n.saturating_sub(inst.capacity),
        length: inst.length,
        kind: inst.kind.dual(),
        mode: inst.mode,
    }
}

/// Formats a set with 1-indexed ids, space separated.
pub fn format_set(set: &VertexSet) -> String {
    set.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(" ")
}
