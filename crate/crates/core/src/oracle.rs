//! Exhaustive ground truth: breadth-first search over reconfiguration
//! graphs, word spaces, and feasible-set enumeration. Kept deliberately
//! plain; every answer comes from explicit state-space search.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::dp::{Direction, DpContext, Signature, Step};
use crate::dp_ext::{Partitions, Sides};
use crate::graph::{check_feasible, Graph, Instance, LengthMode, ProblemKind, Property, Vertex, VertexSet};
use crate::hardness::{ThueSystem, Word, WordDigraph};
use crate::nice::NiceTreeDecomposition;
use crate::witness::Witness;

pub const ORACLE_MAX_N: usize = 24;
pub const ORACLE_MAX_STATES: u128 = 1 << 24;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices; exhaustive search supports at most {ORACLE_MAX_N}")]
    TooLarge { n: usize },
    #[error("word space of {states} states exceeds the exhaustive limit")]
    StateSpace { states: u128 },
    #[error("{0} is not a walk in the digraph")]
    NotAWord(String),
    #[error("words have different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateSpaceResult {
    pub reachable: bool,
    pub shortest: Option<usize>,
    pub path: Option<Vec<VertexSet>>,
}

type Mask = u32;

fn to_mask(set: &VertexSet) -> Mask {
    set.iter().fold(0, |m, &v| m | 1 << v)
}

fn to_set(mask: Mask, n: usize) -> VertexSet {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Feasibility of masks under an instance, memoized.
struct Feasibility<'a> {
    inst: &'a Instance,
    cache: HashMap<Mask, bool>,
}

impl<'a> Feasibility<'a> {
    fn new(inst: &'a Instance) -> Result<Self, OracleError> {
        if inst.graph.n() > ORACLE_MAX_N {
            return Err(OracleError::TooLarge { n: inst.graph.n() });
        }
        Ok(Feasibility {
            inst,
            cache: HashMap::new(),
        })
    }

    fn ok(&mut self, mask: Mask) -> bool {
        let inst = self.inst;
        *self.cache.entry(mask).or_insert_with(|| {
            inst.within_capacity(mask.count_ones() as usize)
                && check_feasible(&inst.graph, &to_set(mask, inst.graph.n()), inst.kind)
        })
    }

    fn neighbours(&mut self, mask: Mask) -> Vec<Mask> {
        (0..self.inst.graph.n())
            .map(|v| mask ^ 1 << v)
            .filter(|&next| self.ok(next))
            .collect()
    }
}

/// Shortest reconfiguration from source to target over feasible,
/// capacity-respecting sets; the length bound of the instance is ignored.
pub fn bfs_reconfig(inst: &Instance) -> Result<StateSpaceResult, OracleError> {
    let mut feas = Feasibility::new(inst)?;
    let n = inst.graph.n();
    let (s, t) = (to_mask(&inst.source), to_mask(&inst.target));
    let unreachable = StateSpaceResult {
        reachable: false,
        shortest: None,
        path: None,
    };
    if !feas.ok(s) || !feas.ok(t) {
        return Ok(unreachable);
    }
    let mut parent: HashMap<Mask, Mask> = HashMap::from([(s, s)]);
    let mut queue = VecDeque::from([s]);
    while let Some(cur) = queue.pop_front() {
        if cur == t {
            let mut path = vec![cur];
            let mut at = cur;
            while at != s {
                at = parent[&at];
                path.push(at);
            }
            path.reverse();
            return Ok(StateSpaceResult {
                reachable: true,
                shortest: Some(path.len() - 1),
                path: Some(path.into_iter().map(|m| to_set(m, n)).collect()),
            });
        }
        for next in feas.neighbours(cur) {
            if let std::collections::hash_map::Entry::Vacant(e) = parent.entry(next) {
                e.insert(cur);
                queue.push_back(next);
            }
        }
    }
    Ok(unreachable)
}

/// A reconfiguration sequence of exactly `ell` steps, found by expanding
/// the full set of states reachable in `i` steps for `i = 0..=ell`.
pub fn exact_length_path(inst: &Instance, ell: usize) -> Result<Option<Vec<VertexSet>>, OracleError> {
    let mut feas = Feasibility::new(inst)?;
    let n = inst.graph.n();
    let (s, t) = (to_mask(&inst.source), to_mask(&inst.target));
    if !feas.ok(s) || !feas.ok(t) {
        return Ok(None);
    }
    // layers[i] maps each state reachable in exactly i steps to a predecessor
    let mut layers: Vec<HashMap<Mask, Mask>> = vec![HashMap::from([(s, s)])];
    for _ in 0..ell {
        let mut next: HashMap<Mask, Mask> = HashMap::new();
        let mut frontier: Vec<Mask> = layers.last().expect("nonempty").keys().copied().collect();
        frontier.sort_unstable();
        for cur in frontier {
            for nb in feas.neighbours(cur) {
                next.entry(nb).or_insert(cur);
            }
        }
        if next.is_empty() {
            return Ok(None);
        }
        layers.push(next);
    }
    if !layers[ell].contains_key(&t) {
        return Ok(None);
    }
    let mut path = vec![t];
    let mut at = t;
    for layer in layers[1..].iter().rev() {
        at = layer[&at];
        path.push(at);
    }
    path.reverse();
    Ok(Some(path.into_iter().map(|m| to_set(m, n)).collect()))
}

/// The oracle's verdict on an instance, honouring its length bound and mode.
pub fn oracle_answer(inst: &Instance) -> Result<Option<Witness>, OracleError> {
    let sets = match inst.mode {
        LengthMode::Exact => exact_length_path(inst, inst.length)?,
        LengthMode::AtMost => bfs_reconfig(inst)?.path.filter(|p| p.len() - 1 <= inst.length),
    };
    Ok(sets.map(|sets| Witness { sets }))
}

/// The shortcut "an exact-length path exists iff the shortest one is no
/// longer and has the same parity". Holds whenever the source has at least
/// one feasible neighbour; otherwise only `ell == 0` is realizable.
pub fn parity_rule(shortest: Option<usize>, ell: usize) -> bool {
    shortest.is_some_and(|d| d <= ell && (ell - d).is_multiple_of(2))
}

/// Every feasible set of exactly `size` vertices, in increasing mask order.
pub fn enumerate_feasible(graph: &Graph, size: usize, kind: ProblemKind) -> Result<Vec<VertexSet>, OracleError> {
    let n = graph.n();
    if n > ORACLE_MAX_N {
        return Err(OracleError::TooLarge { n });
    }
    Ok((0..1u32 << n)
        .filter(|m| m.count_ones() as usize == size)
        .map(|m| to_set(m, n))
        .filter(|s| check_feasible(graph, s, kind))
        .collect())
}

fn guard_words(alphabet: usize, len: usize) -> Result<(), OracleError> {
    let states = (alphabet as u128).saturating_pow(len as u32);
    if states > ORACLE_MAX_STATES {
        Err(OracleError::StateSpace { states })
    } else {
        Ok(())
    }
}

fn closure(start: &Word, mut step: impl FnMut(&Word) -> Vec<Word>) -> HashSet<Word> {
    let mut seen: HashSet<Word> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(w) = queue.pop_front() {
        for next in step(&w) {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

fn bfs_words(start: &Word, goal: &Word, mut step: impl FnMut(&Word) -> Vec<Word>) -> bool {
    let mut seen: HashSet<Word> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(w) = queue.pop_front() {
        if &w == goal {
            return true;
        }
        for next in step(&w) {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    false
}

fn hword_moves(h: &WordDigraph, w: &Word) -> Vec<Word> {
    let mut out = Vec::new();
    for i in 0..w.len() {
        for a in 0..h.len() {
            if a != w[i] {
                let mut next = w.clone();
                next[i] = a;
                if h.is_word(&next) {
                    out.push(next);
                }
            }
        }
    }
    out
}

/// Can `s` be turned into `t` by changing one symbol at a time while staying
/// a walk in `h`?
pub fn bfs_hword(h: &WordDigraph, s: &Word, t: &Word) -> Result<bool, OracleError> {
    for w in [s, t] {
        if !h.is_word(w) {
            return Err(OracleError::NotAWord(h.format_word(w)));
        }
    }
    if s.len() != t.len() {
        return Err(OracleError::LengthMismatch(s.len(), t.len()));
    }
    guard_words(h.len(), s.len())?;
    Ok(bfs_words(s, t, |w| hword_moves(h, w)))
}

/// Is `t` derivable from `s` in the symmetric rewriting system?
pub fn thue_reachable(ts: &ThueSystem, s: &Word, t: &Word) -> Result<bool, OracleError> {
    if s.len() != t.len() {
        return Err(OracleError::LengthMismatch(s.len(), t.len()));
    }
    guard_words(ts.symbols.len(), s.len())?;
    Ok(bfs_words(s, t, |w| ts.rewrites(w)))
}

/// Every word derivable from `s`, including `s` itself.
pub fn thue_closure(ts: &ThueSystem, s: &Word) -> Result<HashSet<Word>, OracleError> {
    guard_words(ts.symbols.len(), s.len())?;
    Ok(closure(s, |w| ts.rewrites(w)))
}

/// Step sequences over the whole subtree `below` (vertex steps and UNUSED
/// only) that alternate correctly and reach the target, with the current set
/// after each step.
fn subtree_sequences(ctx: &DpContext, below: &VertexSet) -> Vec<(Vec<Step>, Vec<VertexSet>)> {
    let choices: Vec<Step> = std::iter::once(Step::Unused)
        .chain(below.iter().map(|&v| Step::Vertex(v)))
        .collect();
    let start: VertexSet = below.iter().copied().filter(|&v| ctx.in_source[v]).collect();
    let goal: VertexSet = below.iter().copied().filter(|&v| ctx.in_target[v]).collect();
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), vec![start])];
    while let Some((steps, sets)) = stack.pop() {
        if steps.len() == ctx.ell() {
            if *sets.last().expect("nonempty") == goal {
                out.push((steps, sets));
            }
            continue;
        }
        let cur = sets.last().expect("nonempty");
        for &c in &choices {
            let mut next = cur.clone();
            if let Step::Vertex(v) = c {
                let ok = match ctx.dirs[steps.len()] {
                    Direction::Add => next.insert(v),
                    Direction::Remove => next.remove(&v),
                };
                if !ok {
                    continue;
                }
            }
            let mut steps = steps.clone();
            steps.push(c);
            let mut sets = sets.clone();
            sets.push(next);
            stack.push((steps, sets));
        }
    }
    out
}

fn residual(below: &VertexSet, cur: &VertexSet) -> VertexSet {
    below.difference(cur).copied().collect()
}

/// Proper two-colourings of `graph[keep]` restricted to `shown`, as the set
/// of RIGHT-coloured shown vertices.
fn shown_colourings(graph: &Graph, keep: &VertexSet, shown: &VertexSet) -> Vec<Vec<Vertex>> {
    let shown: Vec<Vertex> = shown.iter().copied().collect();
    let mut out = Vec::new();
    for pattern in 0u64..1 << shown.len() {
        let mut colour: HashMap<Vertex, bool> = shown
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, pattern >> i & 1 == 1))
            .collect();
        let mut queue: VecDeque<Vertex> = shown.iter().copied().collect();
        let mut ok = true;
        let mut pending: Vec<Vertex> = keep.iter().copied().collect();
        'outer: loop {
            while let Some(u) = queue.pop_front() {
                for &w in graph.neighbors(u) {
                    if !keep.contains(&w) {
                        continue;
                    }
                    match colour.get(&w) {
                        Some(&c) if c == colour[&u] => {
                            ok = false;
                            break 'outer;
                        }
                        Some(_) => {}
                        None => {
                            colour.insert(w, !colour[&u]);
                            queue.push_back(w);
                        }
                    }
                }
            }
            match pending.iter().position(|v| !colour.contains_key(v)) {
                Some(i) => {
                    let v = pending.swap_remove(i);
                    colour.insert(v, false);
                    queue.push_back(v);
                }
                None => break,
            }
        }
        if ok {
            out.push(shown.iter().copied().filter(|v| colour[v]).collect());
        }
    }
    out
}

/// Connected components of `graph[keep]` restricted to `shown`, in the
/// canonical sorted form, or `None` if `graph[keep]` has a cycle.
fn shown_components(graph: &Graph, keep: &VertexSet, shown: &VertexSet) -> Option<Vec<Vec<Vertex>>> {
    if !crate::graph::induced_has_property(graph, &crate::graph::membership(graph.n(), keep), Property::Forest) {
        return None;
    }
    let mut seen = VertexSet::new();
    let mut blocks = Vec::new();
    for &v in keep {
        if !seen.insert(v) {
            continue;
        }
        let mut comp = vec![v];
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &w in graph.neighbors(u) {
                if keep.contains(&w) && seen.insert(w) {
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        let mut block: Vec<Vertex> = comp.into_iter().filter(|u| shown.contains(u)).collect();
        block.sort_unstable();
        if !block.is_empty() {
            blocks.push(block);
        }
    }
    blocks.sort_unstable();
    Some(blocks)
}

fn project(steps: &[Step], bag: &VertexSet) -> Vec<Step> {
    steps
        .iter()
        .map(|&s| match s {
            Step::Vertex(v) if !bag.contains(&v) => Step::Used,
            other => other,
        })
        .collect()
}

fn edgeless(graph: &Graph, keep: &VertexSet) -> bool {
    graph
        .edges()
        .iter()
        .all(|(u, v)| !(keep.contains(u) && keep.contains(v)))
}

/// Signatures over the bag of `node` that extend to a valid signature over
/// all vertices below it, computed by enumerating every step sequence over
/// the subtree. Exponential; for tiny graphs only.
pub fn extendable_vc(ctx: &DpContext, ntd: &NiceTreeDecomposition, node: usize) -> BTreeSet<Signature> {
    let below = ntd.subtree_vertices(node);
    let bag: VertexSet = ntd.nodes[node].bag.iter().copied().collect();
    subtree_sequences(ctx, &below)
        .into_iter()
        .filter(|(_, sets)| sets.iter().all(|cur| edgeless(ctx.graph, &residual(&below, cur))))
        .map(|(steps, _)| Signature::new(project(&steps, &bag)))
        .collect()
}

/// As [`extendable_vc`], with the RIGHT side of every bag survivor at each
/// intermediate step for some proper two-colouring of the residual subtree
/// graph.
pub fn extendable_oct(ctx: &DpContext, ntd: &NiceTreeDecomposition, node: usize) -> BTreeSet<Signature<Sides>> {
    let below = ntd.subtree_vertices(node);
    let bag: VertexSet = ntd.nodes[node].bag.iter().copied().collect();
    let mut out = BTreeSet::new();
    for (steps, sets) in subtree_sequences(ctx, &below) {
        let mut options: Vec<Sides> = vec![Vec::new()];
        for cur in sets.iter().take(ctx.ell()).skip(1) {
            let keep = residual(&below, cur);
            let shown = bag.intersection(&keep).copied().collect();
            let colourings = shown_colourings(ctx.graph, &keep, &shown);
            options = options
                .into_iter()
                .flat_map(|o| {
                    colourings.iter().map(move |c| {
                        let mut o = o.clone();
                        o.push(c.clone());
                        o
                    })
                })
                .collect();
        }
        let projected = project(&steps, &bag);
        out.extend(options.into_iter().map(|aux| Signature {
            steps: projected.clone(),
            aux,
        }));
    }
    out
}

/// As [`extendable_vc`], with the components of the residual subtree graph
/// restricted to the bag at each intermediate step, which must be a forest.
pub fn extendable_fvs(ctx: &DpContext, ntd: &NiceTreeDecomposition, node: usize) -> BTreeSet<Signature<Partitions>> {
    let below = ntd.subtree_vertices(node);
    let bag: VertexSet = ntd.nodes[node].bag.iter().copied().collect();
    let mut out = BTreeSet::new();
    'seq: for (steps, sets) in subtree_sequences(ctx, &below) {
        let mut aux = Vec::new();
        for cur in sets.iter().take(ctx.ell()).skip(1) {
            let keep = residual(&below, cur);
            let shown = bag.intersection(&keep).copied().collect();
            match shown_components(ctx.graph, &keep, &shown) {
                Some(blocks) => aux.push(blocks),
                None => continue 'seq,
            }
        }
        out.insert(Signature {
            steps: project(&steps, &bag),
            aux,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complement_instance;
    use proptest::prelude::*;

    fn set(ids: &[usize]) -> VertexSet {
        ids.iter().map(|&v| v - 1).collect()
    }

    fn inst(graph: Graph, s: &[usize], t: &[usize], k: usize, ell: usize, kind: ProblemKind) -> Instance {
        Instance {
            graph,
            source: set(s),
            target: set(t),
            capacity: k,
            length: ell,
            kind,
            mode: LengthMode::Exact,
        }
    }

    fn p3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)])
    }

    fn k3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn reconfig_examples() {
        let r = bfs_reconfig(&inst(p3(), &[2], &[1, 3], 3, 0, ProblemKind::VertexCover)).unwrap();
        assert!(r.reachable);
        assert_eq!(r.shortest, Some(3));
        assert_eq!(r.path.unwrap().len(), 4);
        let same = bfs_reconfig(&inst(p3(), &[2], &[2], 1, 0, ProblemKind::VertexCover)).unwrap();
        assert_eq!(same.shortest, Some(0));
        let oct = bfs_reconfig(&inst(k3(), &[1], &[2], 1, 0, ProblemKind::OddCycleTransversal)).unwrap();
        assert!(!oct.reachable);
        let big = inst(Graph::empty(25), &[], &[], 0, 0, ProblemKind::VertexCover);
        assert_eq!(bfs_reconfig(&big), Err(OracleError::TooLarge { n: 25 }));
    }

    #[test]
    fn exact_length_examples() {
        let i = inst(p3(), &[2], &[1, 3], 3, 3, ProblemKind::VertexCover);
        let path = exact_length_path(&i, 3).unwrap().unwrap();
        assert_eq!(path, vec![set(&[2]), set(&[1, 2]), set(&[1, 2, 3]), set(&[1, 3])]);
        assert_eq!(exact_length_path(&i, 4).unwrap(), None);
        assert!(exact_length_path(&i, 5).unwrap().is_some());
        let tight = inst(p3(), &[2], &[1, 3], 2, 3, ProblemKind::VertexCover);
        assert_eq!(exact_length_path(&tight, 3).unwrap(), None);
        // K2 with one endpoint and capacity 1: no feasible neighbour, so
        // length 2 fails even though the parity rule would accept it
        let stuck = inst(
            Graph::from_edges(2, [(0, 1)]),
            &[1],
            &[1],
            1,
            2,
            ProblemKind::VertexCover,
        );
        assert_eq!(exact_length_path(&stuck, 2).unwrap(), None);
        assert!(parity_rule(Some(0), 2));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_feasible(&p3(), 1, ProblemKind::VertexCover).unwrap(),
            vec![set(&[2])]
        );
        assert_eq!(
            enumerate_feasible(&p3(), 2, ProblemKind::IndependentSet).unwrap(),
            vec![set(&[1, 3])]
        );
        assert_eq!(
            enumerate_feasible(&k3(), 1, ProblemKind::FeedbackVertexSet).unwrap(),
            vec![set(&[1]), set(&[2]), set(&[3])]
        );
    }

    #[test]
    fn hword_example() {
        let mut h = WordDigraph::with_symbols(["a", "b"]);
        h.add_arc(0, 1);
        h.add_arc(1, 0);
        h.add_arc(1, 1);
        assert_eq!(bfs_hword(&h, &vec![0, 1], &vec![1, 0]), Ok(true));
        assert_eq!(bfs_hword(&h, &vec![0, 1], &vec![0, 1]), Ok(true));
        let bare = WordDigraph::with_symbols(["a", "b"]);
        assert!(matches!(
            bfs_hword(&bare, &vec![0, 1], &vec![0, 1]),
            Err(OracleError::NotAWord(_))
        ));
    }

    fn arb_instance() -> impl Strategy<Value = Instance> {
        (
            2usize..=7,
            any::<u64>(),
            0usize..=4,
            0usize..=5,
            0usize..ProblemKind::ALL.len(),
        )
            .prop_filter_map("endpoints must be feasible", |(n, seed, k, ell, kind)| {
                let mut edges = Vec::new();
                let mut bits = seed;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits & 3 == 0 {
                            edges.push((u, v));
                        }
                        bits = bits.rotate_right(2) ^ 0x9e37_79b9;
                    }
                }
                let graph = Graph::from_edges(n, edges);
                let kind = ProblemKind::ALL[kind];
                let sets: Vec<VertexSet> = (0..1u32 << n)
                    .map(|m| to_set(m, n))
                    .filter(|s| check_feasible(&graph, s, kind))
                    .collect();
                let s = sets[(seed as usize) % sets.len()].clone();
                let t = sets[(seed as usize / 7) % sets.len()].clone();
                let capacity = if kind.is_minimization() {
                    s.len().max(t.len()) + k % 2
                } else {
                    s.len().min(t.len()).saturating_sub(k % 2)
                };
                let i = Instance {
                    graph,
                    source: s,
                    target: t,
                    capacity,
                    length: ell,
                    kind,
                    mode: LengthMode::Exact,
                };
                crate::graph::validate_instance(&i).is_ok().then_some(i)
            })
    }

    proptest! {
        #[test]
        fn parity_rule_agrees_when_source_can_move(i in arb_instance()) {
            let r = bfs_reconfig(&i).unwrap();
            let exact = exact_length_path(&i, i.length).unwrap();
            let mut feas = Feasibility::new(&i).unwrap();
            if !feas.neighbours(to_mask(&i.source)).is_empty() {
                prop_assert_eq!(exact.is_some(), parity_rule(r.shortest, i.length));
            } else {
                prop_assert_eq!(exact.is_some(), i.length == 0 && i.source == i.target);
            }
        }

        #[test]
        fn paths_are_valid_sequences(i in arb_instance()) {
            if let Some(sets) = exact_length_path(&i, i.length).unwrap() {
                let w = Witness { sets };
                prop_assert_eq!(crate::witness::validate_witness(&i, &w), Ok(()));
            }
            if let Some(path) = bfs_reconfig(&i).unwrap().path {
                let at_most = Instance { mode: LengthMode::AtMost, length: path.len() - 1, ..i.clone() };
                prop_assert_eq!(crate::witness::validate_witness(&at_most, &Witness { sets: path }), Ok(()));
            }
        }

        #[test]
        fn complement_preserves_reachability(i in arb_instance()) {
            let dual = complement_instance(&i);
            prop_assert_eq!(
                exact_length_path(&i, i.length).unwrap().is_some(),
                exact_length_path(&dual, i.length).unwrap().is_some()
            );
        }
    }
}
