use std::fmt::Debug;
use std::hash::Hash;

use indexmap::IndexMap;
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::nice::{NiceTreeDecomposition, NodeKind};

use super::sigma::Direction;
use super::signature::{trajectory, BagView, DpContext, Signature, Step, MAX_BAG};

/// The per-problem part of the dynamic program: what extra data a signature
/// carries and how that data evolves at each node type.
pub trait Variant: Sync {
    type Aux: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    /// Whether compatible join partners must carry identical aux data.
    const AUX_IN_JOIN_KEY: bool;

    fn name(&self) -> &'static str;

    fn initial_aux(&self, ell: usize) -> Self::Aux;

    /// Full validity of a signature over `bag`, aux data included.
    fn is_valid(&self, ctx: &DpContext, bag: &BagView, sig: &Signature<Self::Aux>) -> bool;

    /// Push every aux value extending `aux` to the bag `bag`, which contains
    /// the new vertex at position `v_pos`. `traj` is the trajectory of the
    /// new steps over `bag`.
    fn introduce_aux(
        &self,
        ctx: &DpContext,
        bag: &BagView,
        v_pos: usize,
        traj: &[u64],
        aux: &Self::Aux,
        out: &mut Vec<Self::Aux>,
    );

    fn forget_aux(&self, v: Vertex, aux: &Self::Aux) -> Self::Aux;

    fn join_aux(&self, bag: &BagView, traj: &[u64], a: &Self::Aux, b: &Self::Aux) -> Option<Self::Aux>;

    /// Upper bound on the number of signatures over a bag of `bag_size`
    /// vertices.
    fn table_bound(&self, bag_size: usize, ell: usize) -> f64;
}

/// Every valid signature over `bag` (which contains `v`) obtained from `sig`
/// by turning some UNUSED steps into `v` steps.
pub fn introduce<V: Variant>(
    variant: &V,
    ctx: &DpContext,
    bag: &BagView,
    sig: &Signature<V::Aux>,
    v: Vertex,
) -> Vec<Signature<V::Aux>> {
    let v_pos = bag.pos(v).expect("introduced vertex lies in the bag");
    let mut placements = Vec::new();
    let mut steps = sig.steps.clone();
    place(
        ctx,
        &mut steps,
        0,
        ctx.in_source[v],
        ctx.in_target[v],
        v,
        &mut placements,
    );
    let mut out = Vec::new();
    let mut auxes = Vec::new();
    for steps in placements {
        let Some(traj) = trajectory(ctx, bag, &steps) else {
            continue;
        };
        auxes.clear();
        variant.introduce_aux(ctx, bag, v_pos, &traj, &sig.aux, &mut auxes);
        for aux in auxes.drain(..) {
            out.push(Signature {
                steps: steps.clone(),
                aux,
            });
        }
    }
    out
}

/// Choose positions for `v` among UNUSED steps such that its membership
/// alternates correctly and ends as required.
fn place(
    ctx: &DpContext,
    steps: &mut Vec<Step>,
    from: usize,
    present: bool,
    want: bool,
    v: Vertex,
    out: &mut Vec<Vec<Step>>,
) {
    if from == steps.len() {
        if present == want {
            out.push(steps.clone());
        }
        return;
    }
    place(ctx, steps, from + 1, present, want, v, out);
    if steps[from] == Step::Unused && (ctx.dirs[from] == Direction::Remove) == present {
        steps[from] = Step::Vertex(v);
        place(ctx, steps, from + 1, !present, want, v, out);
        steps[from] = Step::Unused;
    }
}

pub fn forget<V: Variant>(variant: &V, sig: &Signature<V::Aux>, v: Vertex) -> Signature<V::Aux> {
    Signature {
        steps: sig
            .steps
            .iter()
            .map(|&s| if s == Step::Vertex(v) { Step::Used } else { s })
            .collect(),
        aux: variant.forget_aux(v, &sig.aux),
    }
}

/// Merge base steps: both UNUSED, the same vertex, or one USED and one
/// UNUSED.
pub fn join_steps(a: &[Step], b: &[Step]) -> Option<Vec<Step>> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| match (x, y) {
            (Step::Unused, Step::Unused) => Some(Step::Unused),
            (Step::Used, Step::Unused) | (Step::Unused, Step::Used) => Some(Step::Used),
            (Step::Vertex(u), Step::Vertex(w)) if u == w => Some(x),
            _ => None,
        })
        .collect()
}

pub fn join<V: Variant>(
    variant: &V,
    ctx: &DpContext,
    bag: &BagView,
    a: &Signature<V::Aux>,
    b: &Signature<V::Aux>,
) -> Option<Signature<V::Aux>> {
    let steps = join_steps(&a.steps, &b.steps)?;
    let traj = trajectory(ctx, bag, &steps)?;
    let aux = variant.join_aux(bag, &traj, &a.aux, &b.aux)?;
    Some(Signature { steps, aux })
}

/// Which child entries produced a table entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Origin {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join(usize, usize),
}

pub type Table<A> = IndexMap<Signature<A>, Origin>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DpError {
    #[error("bag of node {node} holds {size} vertices; at most {MAX_BAG} are supported")]
    BagTooLarge { node: usize, size: usize },
}

/// A nice decomposition with bag adjacency masks precomputed.
#[derive(Clone, Debug)]
pub struct PreparedTd<'a> {
    pub ntd: &'a NiceTreeDecomposition,
    pub views: Vec<BagView>,
}

impl<'a> PreparedTd<'a> {
    pub fn new(graph: &Graph, ntd: &'a NiceTreeDecomposition) -> Result<Self, DpError> {
        let views = ntd
            .nodes
            .iter()
            .enumerate()
            .map(|(node, nn)| {
                if nn.bag.len() > MAX_BAG {
                    Err(DpError::BagTooLarge {
                        node,
                        size: nn.bag.len(),
                    })
                } else {
                    Ok(BagView::new(graph, &nn.bag))
                }
            })
            .collect::<Result<_, _>>()?;
        Ok(PreparedTd { ntd, views })
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EngineOptions {
    /// Assert validity of every inserted signature and the size bound of
    /// every table.
    pub check_invariants: bool,
    /// Stop as soon as some table is empty (the root table will be too).
    pub stop_on_empty: bool,
}

#[derive(Clone, Debug)]
pub struct DpRun<A> {
    pub tables: Vec<Table<A>>,
    /// False if the run stopped early on an empty table.
    pub complete: bool,
    pub max_table: usize,
    /// Every table respected the variant's size bound.
    pub bound_ok: bool,
}

impl<A> DpRun<A> {
    /// Index of a root entry without UNUSED steps.
    pub fn accepting_entry(&self) -> Option<usize> {
        if !self.complete {
            return None;
        }
        self.tables.last()?.keys().position(|s| !s.has_unused())
    }
}

fn insert<V: Variant>(
    variant: &V,
    ctx: &DpContext,
    bag: &BagView,
    opts: &EngineOptions,
    table: &mut Table<V::Aux>,
    sig: Signature<V::Aux>,
    origin: Origin,
) {
    if opts.check_invariants {
        assert!(
            variant.is_valid(ctx, bag, &sig),
            "{} produced an invalid signature {sig:?} over {:?}",
            variant.name(),
            bag.verts
        );
    }
    table.entry(sig).or_insert(origin);
}

/// Fill all tables bottom-up for the direction sequence in `ctx`.
pub fn fill_tables<V: Variant>(variant: &V, ctx: &DpContext, td: &PreparedTd, opts: &EngineOptions) -> DpRun<V::Aux> {
    let ell = ctx.ell();
    let mut run = DpRun {
        tables: Vec::with_capacity(td.ntd.nodes.len()),
        complete: true,
        max_table: 0,
        bound_ok: true,
    };
    for (i, node) in td.ntd.nodes.iter().enumerate() {
        let bag = &td.views[i];
        let mut table = Table::default();
        match node.kind {
            NodeKind::Leaf(v) => {
                let empty = Signature {
                    steps: vec![Step::Unused; ell],
                    aux: variant.initial_aux(ell),
                };
                for sig in introduce(variant, ctx, bag, &empty, v) {
                    insert(variant, ctx, bag, opts, &mut table, sig, Origin::Leaf);
                }
            }
            NodeKind::Introduce(v) => {
                for (e, sig) in run.tables[node.children[0]].keys().enumerate() {
                    for out in introduce(variant, ctx, bag, sig, v) {
                        insert(variant, ctx, bag, opts, &mut table, out, Origin::Introduce(e));
                    }
                }
            }
            NodeKind::Forget(v) => {
                for (e, sig) in run.tables[node.children[0]].keys().enumerate() {
                    insert(
                        variant,
                        ctx,
                        bag,
                        opts,
                        &mut table,
                        forget(variant, sig, v),
                        Origin::Forget(e),
                    );
                }
            }
            NodeKind::Join => {
                let (l, r) = (node.children[0], node.children[1]);
                join_tables(variant, ctx, bag, opts, &run.tables[l], &run.tables[r], &mut table);
            }
        }
        let bound = variant.table_bound(bag.len(), ell);
        if table.len() as f64 > bound {
            run.bound_ok = false;
            assert!(
                !opts.check_invariants,
                "table of node {i} has {} entries, above the bound {bound}",
                table.len()
            );
        }
        run.max_table = run.max_table.max(table.len());
        let empty = table.is_empty();
        run.tables.push(table);
        if empty && opts.stop_on_empty {
            run.complete = false;
            break;
        }
    }
    run
}

fn join_key<V: Variant>(sig: &Signature<V::Aux>) -> (Vec<Step>, Option<V::Aux>) {
    let steps = sig
        .steps
        .iter()
        .map(|&s| if s == Step::Used { Step::Unused } else { s })
        .collect();
    let aux = V::AUX_IN_JOIN_KEY.then(|| sig.aux.clone());
    (steps, aux)
}

/// Index the larger child table by its USED-blind key and probe it with the
/// entries of the smaller one.
fn join_tables<V: Variant>(
    variant: &V,
    ctx: &DpContext,
    bag: &BagView,
    opts: &EngineOptions,
    left: &Table<V::Aux>,
    right: &Table<V::Aux>,
    out: &mut Table<V::Aux>,
) {
    let swapped = left.len() < right.len();
    let (small, large) = if swapped { (left, right) } else { (right, left) };
    let mut index: IndexMap<_, Vec<usize>> = IndexMap::new();
    for (e, sig) in large.keys().enumerate() {
        index.entry(join_key::<V>(sig)).or_default().push(e);
    }
    for (se, s) in small.keys().enumerate() {
        let Some(partners) = index.get(&join_key::<V>(s)) else {
            continue;
        };
        for &le in partners {
            let (l_sig, _) = large.get_index(le).expect("index entry");
            let (a, b, ea, eb) = if swapped {
                (s, l_sig, se, le)
            } else {
                (l_sig, s, le, se)
            };
            if let Some(sig) = join(variant, ctx, bag, a, b) {
                insert(variant, ctx, bag, opts, out, sig, Origin::Join(ea, eb));
            }
        }
    }
}

/// The vertex performing each step, read off the provenance links below the
/// given root entry.
pub fn reconstruct_steps<A>(run: &DpRun<A>, ntd: &NiceTreeDecomposition, root_entry: usize) -> Vec<Vertex> {
    let ell = run.tables[ntd.root()]
        .get_index(root_entry)
        .map(|(s, _)| s.steps.len())
        .expect("root entry exists");
    let mut assigned: Vec<Option<Vertex>> = vec![None; ell];
    let mut stack = vec![(ntd.root(), root_entry)];
    while let Some((node, entry)) = stack.pop() {
        let (sig, origin) = run.tables[node].get_index(entry).expect("provenance entry exists");
        for (p, step) in sig.steps.iter().enumerate() {
            if let Step::Vertex(v) = *step {
                debug_assert!(assigned[p].is_none_or(|w| w == v));
                assigned[p] = Some(v);
            }
        }
        let children = &ntd.nodes[node].children;
        match *origin {
            Origin::Leaf => {}
            Origin::Introduce(c) | Origin::Forget(c) => stack.push((children[0], c)),
            Origin::Join(a, b) => {
                stack.push((children[0], a));
                stack.push((children[1], b));
            }
        }
    }
    assigned
        .into_iter()
        .map(|a| a.expect("every step of an accepted signature is performed by some vertex"))
        .collect()
}
