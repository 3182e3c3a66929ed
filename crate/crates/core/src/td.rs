//! Tree decompositions: PACE `.td` parsing, validation, and the min-fill
//! elimination heuristic.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::graph::{Graph, Vertex};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TdError {
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("decomposition tree is not a tree: {0}")]
    NotATree(String),
    #[error("vertex {0} appears in no bag")]
    VertexMissing(usize),
    #[error("edge {0} {1} is not contained in any bag")]
    EdgeUncovered(usize, usize),
    #[error("bags containing vertex {vertex} are disconnected (e.g. at node {node})")]
    SubtreeDisconnected { vertex: usize, node: usize },
}

/// An unrooted tree decomposition. Bags are sorted, node ids are 0-indexed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<Vertex>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<Vertex>>, edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|b| b.into_iter().collect::<BTreeSet<_>>().into_iter().collect())
            .collect();
        TreeDecomposition { bags, edges }
    }

    /// Largest bag size minus one; an all-empty decomposition has width 0.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Checks the three decomposition conditions against `graph`.
    pub fn validate(&self, graph: &Graph) -> Result<(), TdError> {
        let nodes = self.bags.len();
        if nodes == 0 {
            return Err(TdError::NotATree("no nodes".into()));
        }
        if self.edges.len() != nodes - 1 {
            return Err(TdError::NotATree(format!(
                "{} nodes but {} edges",
                nodes,
                self.edges.len()
            )));
        }
        for &(a, b) in &self.edges {
            if a >= nodes || b >= nodes || a == b {
                return Err(TdError::NotATree(format!("bad tree edge {} {}", a + 1, b + 1)));
            }
        }
        let adj = self.adjacency();
        let mut seen = vec![false; nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(TdError::NotATree(format!("node {} is disconnected", x + 1)));
        }

        let mut holders: Vec<Vec<usize>> = vec![Vec::new(); graph.n()];
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if v >= graph.n() {
                    return Err(TdError::Malformed {
                        line: 0,
                        reason: format!("bag {} names vertex {} beyond n={}", i + 1, v + 1, graph.n()),
                    });
                }
                holders[v].push(i);
            }
        }
        if let Some(v) = holders.iter().position(Vec::is_empty) {
            return Err(TdError::VertexMissing(v + 1));
        }
        for (v, nodes_with_v) in holders.iter().enumerate() {
            let members: HashSet<usize> = nodes_with_v.iter().copied().collect();
            let mut reached = HashSet::from([nodes_with_v[0]]);
            let mut stack = vec![nodes_with_v[0]];
            while let Some(x) = stack.pop() {
                for &y in &adj[x] {
                    if members.contains(&y) && reached.insert(y) {
                        stack.push(y);
                    }
                }
            }
            if let Some(&node) = nodes_with_v.iter().find(|i| !reached.contains(i)) {
                return Err(TdError::SubtreeDisconnected {
                    vertex: v + 1,
                    node: node + 1,
                });
            }
        }
        for &(u, v) in graph.edges() {
            let covered = holders[u].iter().any(|&i| self.bags[i].binary_search(&v).is_ok());
            if !covered {
                return Err(TdError::EdgeUncovered(u + 1, v + 1));
            }
        }
        Ok(())
    }

    /// PACE `.td` text for a graph with `n` vertices.
    pub fn to_pace(&self, n: usize) -> String {
        let max_bag = self.bags.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = format!("s td {} {} {}\n", self.bags.len(), max_bag, n);
        for (i, bag) in self.bags.iter().enumerate() {
            out.push_str(&format!("b {}", i + 1));
            for v in bag {
                out.push_str(&format!(" {}", v + 1));
            }
            out.push('\n');
        }
        for &(a, b) in &self.edges {
            out.push_str(&format!("{} {}\n", a + 1, b + 1));
        }
        out
    }
}

fn malformed(line: usize, reason: impl Into<String>) -> TdError {
    TdError::Malformed {
        line,
        reason: reason.into(),
    }
}

/// Parses PACE `.td` text without checking it against a graph.
pub fn parse_td(text: &str) -> Result<(TreeDecomposition, usize), TdError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| malformed(line, format!("`{s}` is not a non-negative integer")))
        };
        match fields[0] {
            "s" => {
                if header.is_some() {
                    return Err(malformed(line, "duplicate header"));
                }
                if fields.len() != 5 || fields[1] != "td" {
                    return Err(malformed(line, "expected `s td <#bags> <max bag size> <n>`"));
                }
                let h = (num(fields[2])?, num(fields[3])?, num(fields[4])?);
                bags = vec![None; h.0];
                header = Some(h);
            }
            "b" => {
                let Some((count, _, n)) = header else {
                    return Err(malformed(line, "bag before header"));
                };
                if fields.len() < 2 {
                    return Err(malformed(line, "bag line without id"));
                }
                let id = num(fields[1])?;
                if id == 0 || id > count {
                    return Err(malformed(line, format!("bag id {id} outside 1..={count}")));
                }
                if bags[id - 1].is_some() {
                    return Err(malformed(line, format!("bag {id} declared twice")));
                }
                let mut bag = Vec::new();
                for f in &fields[2..] {
                    let v = num(f)?;
                    if v == 0 || v > n {
                        return Err(malformed(line, format!("vertex {v} outside 1..={n}")));
                    }
                    bag.push(v - 1);
                }
                bags[id - 1] = Some(bag);
            }
            _ => {
                let Some((count, _, _)) = header else {
                    return Err(malformed(line, "tree edge before header"));
                };
                if fields.len() != 2 {
                    return Err(malformed(line, "expected `<i> <j>` tree edge"));
                }
                let (a, b) = (num(fields[0])?, num(fields[1])?);
                if a == 0 || b == 0 || a > count || b > count {
                    return Err(malformed(line, format!("tree edge {a} {b} names an unknown bag")));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let Some((_, max_bag, n)) = header else {
        return Err(malformed(0, "missing `s td` header"));
    };
    let mut out = Vec::with_capacity(bags.len());
    for (i, bag) in bags.into_iter().enumerate() {
        out.push(bag.ok_or_else(|| malformed(0, format!("bag {} never declared", i + 1)))?);
    }
    let td = TreeDecomposition::new(out, edges);
    let actual = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    if actual != max_bag {
        return Err(malformed(
            0,
            format!("header declares max bag size {max_bag} but largest bag has {actual}"),
        ));
    }
    Ok((td, n))
}

/// Parses a `.td` file and checks it against `graph`.
pub fn parse_and_validate_td(graph: &Graph, text: &str) -> Result<TreeDecomposition, TdError> {
    let (td, n) = parse_td(text)?;
    if n != graph.n() {
        return Err(malformed(
            0,
            format!("header declares n={n} but graph has {}", graph.n()),
        ));
    }
    td.validate(graph)?;
    Ok(td)
}

/// Min-fill elimination ordering: repeatedly eliminate the vertex whose
/// neighbourhood needs the fewest fill edges (ties by degree, then id).
pub fn min_fill_ordering(graph: &Graph) -> Vec<Vertex> {
    let n = graph.n();
    let mut adj: Vec<BTreeSet<Vertex>> = graph
        .vertices()
        .map(|v| graph.neighbors(v).iter().copied().collect())
        .collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let fill = |adj: &[BTreeSet<Vertex>], v: Vertex| {
        let nb: Vec<Vertex> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                if !adj[a].contains(&b) {
                    missing += 1;
                }
            }
        }
        missing
    };
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill(&adj, v), adj[v].len(), v))
            .expect("a live vertex remains");
        let nb: Vec<Vertex> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        for &a in &nb {
            adj[a].remove(&v);
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Tree decomposition induced by an elimination ordering: the bag of `v` is
/// `v` plus its later neighbours in the filled graph, attached to the bag of
/// the earliest-eliminated such neighbour. Component roots are chained.
pub fn decompose_from_ordering(graph: &Graph, order: &[Vertex]) -> TreeDecomposition {
    let n = graph.n();
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut adj: Vec<BTreeSet<Vertex>> = graph
        .vertices()
        .map(|v| graph.neighbors(v).iter().copied().collect())
        .collect();
    let mut bags = Vec::with_capacity(n);
    let mut later_of = Vec::with_capacity(n);
    for &v in order {
        let later: Vec<Vertex> = adj[v].iter().copied().filter(|&u| position[u] > position[v]).collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        let mut bag = later.clone();
        bag.push(v);
        bags.push(bag);
        later_of.push(later);
    }
    let mut edges = Vec::new();
    let mut roots = Vec::new();
    for (i, later) in later_of.iter().enumerate() {
        match later.iter().min_by_key(|&&u| position[u]) {
            Some(&parent) => edges.push((i, position[parent])),
            None => roots.push(i),
        }
    }
    for pair in roots.windows(2) {
        edges.push((pair[0], pair[1]));
    }
    TreeDecomposition::new(bags, edges)
}

pub fn min_fill_decompose(graph: &Graph) -> TreeDecomposition {
    decompose_from_ordering(graph, &min_fill_ordering(graph))
}
