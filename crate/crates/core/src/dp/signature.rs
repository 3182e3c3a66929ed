use std::fmt;

use crate::graph::{Graph, Vertex, VertexSet};

use super::sigma::Direction;

/// One step of a signature: untouched so far, handled by an already
/// forgotten vertex, or performed by a vertex of the current bag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Unused,
    Used,
    Vertex(Vertex),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Unused => f.write_str("_"),
            Step::Used => f.write_str("*"),
            Step::Vertex(v) => write!(f, "{}", v + 1),
        }
    }
}

/// Steps plus variant-specific per-step data (unit for vertex cover).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature<A = ()> {
    pub steps: Vec<Step>,
    pub aux: A,
}

impl<A> Signature<A> {
    pub fn has_unused(&self) -> bool {
        self.steps.contains(&Step::Unused)
    }
}

impl Signature<()> {
    pub fn new(steps: Vec<Step>) -> Self {
        Signature { steps, aux: () }
    }
}

/// The fixed data every signature is interpreted against.
#[derive(Clone, Debug)]
pub struct DpContext<'a> {
    pub graph: &'a Graph,
    pub in_source: Vec<bool>,
    pub in_target: Vec<bool>,
    pub dirs: &'a [Direction],
}

impl<'a> DpContext<'a> {
    pub fn new(graph: &'a Graph, source: &VertexSet, target: &VertexSet, dirs: &'a [Direction]) -> Self {
        let mut in_source = vec![false; graph.n()];
        let mut in_target = vec![false; graph.n()];
        source.iter().for_each(|&v| in_source[v] = true);
        target.iter().for_each(|&v| in_target[v] = true);
        DpContext {
            graph,
            in_source,
            in_target,
            dirs,
        }
    }

    pub fn ell(&self) -> usize {
        self.dirs.len()
    }
}

pub const MAX_BAG: usize = 64;

/// A bag with local adjacency bitmasks; position `p` is the `p`-th smallest
/// vertex. Bags hold at most 64 vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BagView {
    pub verts: Vec<Vertex>,
    pub adj: Vec<u64>,
}

impl BagView {
    pub fn new(graph: &Graph, verts: &[Vertex]) -> Self {
        assert!(
            verts.len() <= MAX_BAG,
            "bag of {} vertices exceeds {MAX_BAG}",
            verts.len()
        );
        let adj = verts
            .iter()
            .map(|&u| {
                verts
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| graph.has_edge(u, w))
                    .fold(0u64, |m, (q, _)| m | 1 << q)
            })
            .collect();
        BagView {
            verts: verts.to_vec(),
            adj,
        }
    }

    pub fn pos(&self, v: Vertex) -> Option<usize> {
        self.verts.binary_search(&v).ok()
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn full(&self) -> u64 {
        if self.verts.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.verts.len()) - 1
        }
    }

    pub fn mask_of(&self, flags: &[bool]) -> u64 {
        self.verts
            .iter()
            .enumerate()
            .filter(|&(_, &v)| flags[v])
            .fold(0, |m, (p, _)| m | 1 << p)
    }

    /// Is the subgraph induced by `mask` edgeless?
    pub fn edgeless(&self, mask: u64) -> bool {
        iter_bits(mask).all(|p| self.adj[p] & mask == 0)
    }
}

pub fn iter_bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let p = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(p)
        }
    })
}

/// The set reached from `start` after the first `i` steps; vertex steps add
/// or remove their vertex according to `dirs`, other steps do nothing.
pub fn apply_steps(steps: &[Step], dirs: &[Direction], i: usize, start: &VertexSet) -> VertexSet {
    let mut cur = start.clone();
    for (step, dir) in steps.iter().zip(dirs).take(i) {
        if let Step::Vertex(v) = *step {
            match dir {
                Direction::Add => cur.insert(v),
                Direction::Remove => cur.remove(&v),
            };
        }
    }
    cur
}

/// Bitmask of the current set inside the bag after each step `0..=ell`,
/// or `None` if a step removes an absent vertex, adds a present one, or the
/// final set differs from the target inside the bag. Vertex steps outside
/// the bag also yield `None`.
pub fn trajectory(ctx: &DpContext, bag: &BagView, steps: &[Step]) -> Option<Vec<u64>> {
    let mut cur = bag.mask_of(&ctx.in_source);
    let mut out = Vec::with_capacity(steps.len() + 1);
    out.push(cur);
    for (step, dir) in steps.iter().zip(ctx.dirs) {
        if let Step::Vertex(v) = *step {
            let bit = 1u64 << bag.pos(v)?;
            match dir {
                Direction::Remove if cur & bit != 0 => cur &= !bit,
                Direction::Add if cur & bit == 0 => cur |= bit,
                _ => return None,
            }
        }
        out.push(cur);
    }
    (cur == bag.mask_of(&ctx.in_target)).then_some(out)
}
