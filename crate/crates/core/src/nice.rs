//! Rooted nice tree decompositions (leaf / introduce / forget / join).
//!
//! Nodes are stored children-first: every child has a smaller index than its
//! parent, and the root is the last node. A bottom-up pass is a plain
//! iteration over `nodes`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Vertex, VertexSet};
use crate::td::{TdError, TreeDecomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf(Vertex),
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    pub bag: Vec<Vertex>,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NiceError {
    #[error("node {node}: {reason}")]
    BadNode { node: usize, reason: String },
    #[error(transparent)]
    Decomposition(#[from] TdError),
}

impl NiceTreeDecomposition {
    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes
            .iter()
            .map(|n| n.bag.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    pub fn max_bag_size(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0)
    }

    /// Vertices appearing in the bags of the subtree rooted at `node`.
    pub fn subtree_vertices(&self, node: usize) -> VertexSet {
        let mut out = VertexSet::new();
        let mut stack = vec![node];
        while let Some(i) = stack.pop() {
            out.extend(self.nodes[i].bag.iter().copied());
            stack.extend(self.nodes[i].children.iter().copied());
        }
        out
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let mut edges = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                edges.push((c, i));
            }
        }
        TreeDecomposition::new(self.nodes.iter().map(|n| n.bag.clone()).collect(), edges)
    }

    /// Checks every node against its kind invariant and the whole tree against
    /// the decomposition conditions for `graph`.
    pub fn validate(&self, graph: &Graph) -> Result<(), NiceError> {
        if self.nodes.is_empty() {
            return Err(TdError::NotATree("no nodes".into()).into());
        }
        let mut parents = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            let bad = |reason: String| NiceError::BadNode { node: i, reason };
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad("bag not sorted".into()));
            }
            for &c in &node.children {
                if c >= i {
                    return Err(bad(format!("child {c} does not precede its parent")));
                }
                parents[c] += 1;
            }
            let child_bag = |k: usize| &self.nodes[node.children[k]].bag;
            match node.kind {
                NodeKind::Leaf(v) => {
                    if !node.children.is_empty() || node.bag != [v] {
                        return Err(bad("leaf must be childless with bag {v}".into()));
                    }
                }
                NodeKind::Introduce(v) => {
                    if node.children.len() != 1 {
                        return Err(bad("introduce needs one child".into()));
                    }
                    let mut expect = child_bag(0).clone();
                    if expect.contains(&v) {
                        return Err(bad(format!("introduced vertex {} already in child", v + 1)));
                    }
                    expect.push(v);
                    expect.sort_unstable();
                    if expect != node.bag {
                        return Err(bad("introduce bag mismatch".into()));
                    }
                }
                NodeKind::Forget(v) => {
                    if node.children.len() != 1 {
                        return Err(bad("forget needs one child".into()));
                    }
                    let child = child_bag(0);
                    if !child.contains(&v) {
                        return Err(bad(format!("forgotten vertex {} absent from child", v + 1)));
                    }
                    let expect: Vec<Vertex> = child.iter().copied().filter(|&u| u != v).collect();
                    if expect != node.bag {
                        return Err(bad("forget bag mismatch".into()));
                    }
                }
                NodeKind::Join => {
                    if node.children.len() != 2 {
                        return Err(bad("join needs two children".into()));
                    }
                    if child_bag(0) != &node.bag || child_bag(1) != &node.bag {
                        return Err(bad("join children must share the bag".into()));
                    }
                }
            }
        }
        let root = self.root();
        if parents[root] != 0 || parents[..root].iter().any(|&p| p != 1) {
            return Err(NiceError::BadNode {
                node: root,
                reason: "nodes must form a single tree rooted at the last node".into(),
            });
        }
        self.to_tree_decomposition().validate(graph)?;
        Ok(())
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeKind::Leaf(v) => write!(f, "leaf {}", v + 1),
            NodeKind::Introduce(v) => write!(f, "introduce {}", v + 1),
            NodeKind::Forget(v) => write!(f, "forget {}", v + 1),
            NodeKind::Join => write!(f, "join"),
        }
    }
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<Vertex>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    fn leaf_chain(&mut self, bag: &[Vertex]) -> usize {
        let mut cur = self.push(NodeKind::Leaf(bag[0]), vec![bag[0]], Vec::new());
        for &v in &bag[1..] {
            cur = self.introduce(cur, v);
        }
        cur
    }

    fn introduce(&mut self, child: usize, v: Vertex) -> usize {
        let mut bag = self.nodes[child].bag.clone();
        let pos = bag.binary_search(&v).unwrap_err();
        bag.insert(pos, v);
        self.push(NodeKind::Introduce(v), bag, vec![child])
    }

    fn forget(&mut self, child: usize, v: Vertex) -> usize {
        let bag = self.nodes[child].bag.iter().copied().filter(|&u| u != v).collect();
        self.push(NodeKind::Forget(v), bag, vec![child])
    }

    /// Forgets then introduces so the chain ends at `target` without ever
    /// exceeding `max(|child bag|, |target|)`.
    fn morph(&mut self, mut cur: usize, target: &[Vertex]) -> usize {
        let have: BTreeSet<Vertex> = self.nodes[cur].bag.iter().copied().collect();
        let want: BTreeSet<Vertex> = target.iter().copied().collect();
        for &v in have.difference(&want) {
            cur = self.forget(cur, v);
        }
        for &v in want.difference(&have) {
            cur = self.introduce(cur, v);
        }
        cur
    }
}

/// Converts a valid decomposition into a nice one of the same width, rooted
/// at node 0 of `td`. Above the old root, vertices are forgotten until the
/// root bag holds a single vertex. Transitions between bags with no common
/// vertex (disconnected graphs) pass through an empty bag.
pub fn nicify(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let adj = td.adjacency();
    let count = td.bags.len();
    let mut parent = vec![usize::MAX; count];
    let mut order = Vec::with_capacity(count);
    let mut stack = vec![0usize];
    let mut seen = vec![false; count];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                stack.push(y);
            }
        }
    }

    let mut b = Builder { nodes: Vec::new() };
    let mut built: Vec<Option<usize>> = vec![None; count];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); count];
    for &x in &order[1..] {
        children[parent[x]].push(x);
    }
    for &x in order.iter().rev() {
        let bag = &td.bags[x];
        let subtrees: Vec<usize> = children[x]
            .iter()
            .filter_map(|&c| built[c])
            .collect::<Vec<_>>()
            .into_iter()
            .map(|c| b.morph(c, bag))
            .collect();
        built[x] = match subtrees.split_first() {
            None if bag.is_empty() => None,
            None => Some(b.leaf_chain(bag)),
            Some((&first, rest)) => {
                let mut cur = first;
                for &next in rest {
                    cur = b.push(NodeKind::Join, bag.clone(), vec![cur, next]);
                }
                Some(cur)
            }
        };
    }
    let mut root = built[0].expect("decomposition of a non-empty graph has a non-empty bag");
    while b.nodes[root].bag.len() > 1 {
        let v = *b.nodes[root].bag.last().unwrap();
        root = b.forget(root, v);
    }
    debug_assert_eq!(root, b.nodes.len() - 1);
    NiceTreeDecomposition { nodes: b.nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::td::min_fill_decompose;
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_edge_bag() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        let nice = nicify(&td);
        nice.validate(&g).unwrap();
        assert_eq!(nice.nodes[0].kind, NodeKind::Leaf(0));
        assert_eq!(nice.nodes[1].kind, NodeKind::Introduce(1));
        assert_eq!(nice.nodes[1].bag, vec![0, 1]);
        // root bag shrunk to one vertex
        assert_eq!(nice.nodes[nice.root()].bag.len(), 1);
    }

    #[test]
    fn path_has_a_forget() {
        let g = parse_graph("p tw 3 2\n1 2\n2 3").unwrap();
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        let nice = nicify(&td);
        nice.validate(&g).unwrap();
        assert_eq!(nice.width(), 1);
        assert!(nice
            .nodes
            .iter()
            .any(|n| matches!(n.kind, NodeKind::Forget(0) | NodeKind::Forget(2))));
        assert_eq!(nice.subtree_vertices(nice.root()), (0..3).collect());
    }

    #[test]
    fn star_decomposition_binarizes_joins() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        let td = TreeDecomposition::new(
            vec![vec![0], vec![0, 1], vec![0, 2], vec![0, 3]],
            vec![(0, 1), (0, 2), (0, 3)],
        );
        let nice = nicify(&td);
        nice.validate(&g).unwrap();
        let joins = nice.nodes.iter().filter(|n| n.kind == NodeKind::Join).count();
        assert_eq!(joins, 2);
    }

    #[test]
    fn validator_rejects_broken_nodes() {
        let g = Graph::from_edges(2, [(0, 1)]);
        let mut nice = nicify(&TreeDecomposition::new(vec![vec![0, 1]], vec![]));
        nice.nodes[1].kind = NodeKind::Forget(1);
        assert!(matches!(nice.validate(&g), Err(NiceError::BadNode { node: 1, .. })));
    }

    #[test]
    fn random_graphs_nicify_cleanly() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=12);
            let p = rng.gen_range(0.05..0.6);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v);
                    }
                }
            }
            let td = min_fill_decompose(&g);
            let nice = nicify(&td);
            nice.validate(&g).unwrap();
            assert!(nice.width() <= td.width());
            assert_eq!(nice.subtree_vertices(nice.root()), (0..n).collect());
            // every vertex is forgotten at most once along any root-to-leaf path
            for leaf in (0..nice.nodes.len()).filter(|&i| nice.nodes[i].children.is_empty()) {
                let mut parent = vec![usize::MAX; nice.nodes.len()];
                for (i, node) in nice.nodes.iter().enumerate() {
                    for &c in &node.children {
                        parent[c] = i;
                    }
                }
                let mut forgotten = VertexSet::new();
                let mut cur = leaf;
                while cur != usize::MAX {
                    if let NodeKind::Forget(v) = nice.nodes[cur].kind {
                        assert!(forgotten.insert(v));
                    }
                    cur = parent[cur];
                }
            }
        }
    }
}
