//! Layer shifting for vertex cover and independent set reconfiguration:
//! for each offset `j`, delete every `(ell+1)`-th layer starting at `j`,
//! protect what the deletion removed with gadgets, and solve the remaining
//! graph (of small width when the layering comes from a planar embedding)
//! with the signature dynamic program.

use rayon::prelude::*;
use thiserror::Error;

use crate::dp::{solve, Answer, SolveError, SolveOptions};
use crate::graph::{
    bfs_layers, complement_instance, complement_set, validate_instance, Graph, GraphError, Instance, InstanceError,
    LengthMode, Property, Vertex, VertexSet,
};
use crate::io::Layering;
use crate::nice::nicify;
use crate::td::min_fill_decompose;
use crate::witness::{validate_witness, Witness, WitnessError};

#[derive(Debug, Error)]
pub enum ShiftError {
    #[error("layer list has {found} entries for {n} vertices")]
    LayerCount { found: usize, n: usize },
    #[error("edge {u}-{v} joins layers {lu} and {lv}, which are more than one apart")]
    LayerGap { u: usize, v: usize, lu: usize, lv: usize },
    #[error("the shifting engine solves vertex cover and independent set only, not {0}")]
    WrongKind(crate::graph::ProblemKind),
    #[error(transparent)]
    Layers(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("internal error: mapped witness fails validation: {0}")]
    BadWitness(#[from] WitnessError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

/// An instance together with a layer index per vertex; edges join equal or
/// consecutive layers.
#[derive(Clone, Debug)]
pub struct LayeredInstance {
    pub inst: Instance,
    pub layers: Vec<usize>,
}

impl LayeredInstance {
    pub fn new(inst: Instance, layers: Vec<usize>) -> Result<Self, ShiftError> {
        if layers.len() != inst.graph.n() {
            return Err(ShiftError::LayerCount {
                found: layers.len(),
                n: inst.graph.n(),
            });
        }
        if let Some(&(u, v)) = inst
            .graph
            .edges()
            .iter()
            .find(|&&(u, v)| layers[u].abs_diff(layers[v]) > 1)
        {
            return Err(ShiftError::LayerGap {
                u: u + 1,
                v: v + 1,
                lu: layers[u],
                lv: layers[v],
            });
        }
        Ok(LayeredInstance { inst, layers })
    }

    pub fn from_layering(inst: Instance, layering: &Layering) -> Result<Self, ShiftError> {
        let layers = match layering {
            Layering::Outer(outer) => bfs_layers(&inst.graph, outer)?,
            Layering::Explicit(layers) => layers.clone(),
        };
        LayeredInstance::new(inst, layers)
    }

    fn period(&self) -> usize {
        self.inst.length + 1
    }

    /// Vertices whose layer is congruent to `j` modulo `ell + 1`.
    pub fn deleted(&self, j: usize) -> VertexSet {
        let p = self.period();
        self.inst
            .graph
            .vertices()
            .filter(|&v| self.layers[v] % p == j)
            .collect()
    }
}

/// The graph without the layers congruent to `j`, the original id of each
/// kept vertex, and the deleted vertices.
pub fn compute_gj(layered: &LayeredInstance, j: usize) -> (Graph, Vec<Vertex>, VertexSet) {
    let deleted = layered.deleted(j);
    let kept = complement_set(layered.inst.graph.n(), &deleted);
    let (g, ids) = layered.inst.graph.induced(&kept);
    (g, ids, deleted)
}

/// One shifted instance: the kept graph plus gadgets.
#[derive(Clone, Debug)]
pub struct ShiftSubinstance {
    pub j: usize,
    pub gstar: Graph,
    /// Original vertex of each vertex of `gstar`; `None` for gadgets.
    pub original: Vec<Option<Vertex>>,
    pub deleted: VertexSet,
    /// Deleted vertices in both endpoint sets.
    pub kept_common: VertexSet,
    /// The other deleted vertices.
    pub rest: VertexSet,
    pub source: VertexSet,
    pub target: VertexSet,
    pub star_centers: VertexSet,
    pub star_leaves: VertexSet,
    pub pendant_leaves: VertexSet,
}

impl ShiftSubinstance {
    pub fn instance(&self, base: &Instance) -> Instance {
        Instance {
            graph: self.gstar.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            capacity: base.capacity,
            length: base.length,
            kind: base.kind,
            mode: base.mode,
        }
    }
}

/// Build the instance for offset `j`, or `None` when it cannot host a
/// sequence: the deleted layers meet the symmetric difference of the
/// endpoints, or a vertex that must change is adjacent to a deleted vertex
/// outside both endpoints.
///
/// Every deleted vertex in both endpoints is replaced by a fresh centre with
/// `ell + 1` leaves (kept in both sets), and every kept vertex in both sets
/// that neighbours another deleted vertex gets `ell + 1` pendant leaves.
/// Removing either kind of protected vertex would take more than `ell`
/// additions.
pub fn build_subinstance(layered: &LayeredInstance, j: usize) -> Option<ShiftSubinstance> {
    let inst = &layered.inst;
    let (mut g, ids, deleted) = compute_gj(layered, j);
    if inst
        .source
        .symmetric_difference(&inst.target)
        .any(|v| deleted.contains(v))
    {
        return None;
    }
    let kept_common: VertexSet = deleted
        .iter()
        .copied()
        .filter(|v| inst.source.contains(v) && inst.target.contains(v))
        .collect();
    let rest: VertexSet = deleted.difference(&kept_common).copied().collect();
    let map = |set: &VertexSet| -> VertexSet { (0..ids.len()).filter(|&i| set.contains(&ids[i])).collect() };
    let (mut source, mut target) = (map(&inst.source), map(&inst.target));
    let near_rest = |x: Vertex| inst.graph.neighbors(ids[x]).iter().any(|u| rest.contains(u));
    if source.symmetric_difference(&target).any(|&x| near_rest(x)) {
        return None;
    }
    let guarded: Vec<Vertex> = source
        .intersection(&target)
        .copied()
        .filter(|&x| near_rest(x))
        .collect();
    let mut original: Vec<Option<Vertex>> = ids.iter().map(|&v| Some(v)).collect();
    let leaves = inst.length + 1;
    let mut add = |g: &mut Graph| {
        original.push(None);
        g.add_vertex()
    };
    let (mut star_centers, mut star_leaves, mut pendant_leaves) =
        (VertexSet::new(), VertexSet::new(), VertexSet::new());
    for _ in &kept_common {
        let centre = add(&mut g);
        star_centers.insert(centre);
        source.insert(centre);
        target.insert(centre);
        for _ in 0..leaves {
            let leaf = add(&mut g);
            g.add_edge(centre, leaf);
            star_leaves.insert(leaf);
        }
    }
    for x in guarded {
        for _ in 0..leaves {
            let leaf = add(&mut g);
            g.add_edge(x, leaf);
            pendant_leaves.insert(leaf);
        }
    }
    Some(ShiftSubinstance {
        j,
        gstar: g,
        original,
        deleted,
        kept_common,
        rest,
        source,
        target,
        star_centers,
        star_leaves,
        pendant_leaves,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShiftStats {
    /// Offsets skipped before solving.
    pub skipped: Vec<usize>,
    /// Offsets solved, with the width of the decomposition used.
    pub widths: Vec<(usize, usize)>,
    pub solved_at: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSolution {
    pub answer: Answer,
    pub stats: ShiftStats,
}

/// Map a sequence on the gadget graph back to the original graph: drop
/// steps on gadget vertices, restore the deleted common vertices, and in
/// exact mode pad back to full length by undoing and redoing a step.
fn lift_witness(inst: &Instance, sub: &ShiftSubinstance, w: &Witness) -> Witness {
    let fixed = &sub.kept_common;
    let lift = |s: &VertexSet| -> VertexSet {
        s.iter()
            .filter_map(|&x| sub.original[x])
            .chain(fixed.iter().copied())
            .collect()
    };
    let mut sets: Vec<VertexSet> = Vec::with_capacity(w.sets.len());
    for s in &w.sets {
        let lifted = lift(s);
        if sets.last() != Some(&lifted) {
            sets.push(lifted);
        }
    }
    if inst.mode == LengthMode::Exact {
        while sets.len() - 1 < inst.length {
            let last = sets.last().expect("nonempty").clone();
            let back = if sets.len() >= 2 {
                sets[sets.len() - 2].clone()
            } else {
                let mut toggles = inst.graph.vertices().map(|v| {
                    let mut s = last.clone();
                    if !s.remove(&v) {
                        s.insert(v);
                    }
                    s
                });
                toggles
                    .find(|s| inst.is_feasible(s))
                    .expect("a feasible single toggle exists whenever padding is needed")
            };
            sets.push(back);
            sets.push(last);
        }
    }
    Witness { sets }
}

/// Offset, lifted witness if any, and width of the decomposition used.
type OffsetResult = (usize, Option<Witness>, usize);

fn solve_offset(
    layered: &LayeredInstance,
    sub: &ShiftSubinstance,
    opts: &SolveOptions,
) -> Result<(Option<Witness>, usize), ShiftError> {
    let inst = &layered.inst;
    let star = sub.instance(inst);
    if star.graph.n() == 0 {
        let trivial = star.source == star.target && (inst.mode == LengthMode::AtMost || inst.length == 0);
        let w = trivial.then(|| Witness {
            sets: vec![star.source.clone()],
        });
        return Ok((w.map(|w| lift_witness(inst, sub, &w)), 0));
    }
    let td = min_fill_decompose(&star.graph);
    let width = td.width();
    let ntd = nicify(&td);
    let sol = solve(
        &star,
        &ntd,
        &SolveOptions {
            threads: 1,
            validate_decomposition: false,
            ..*opts
        },
    )?;
    Ok((sol.answer.witness().map(|w| lift_witness(inst, sub, w)), width))
}

/// Decide a layered vertex cover or independent set reconfiguration
/// instance by trying every shift offset.
pub fn shift_solve(layered: &LayeredInstance, opts: &SolveOptions) -> Result<ShiftSolution, ShiftError> {
    let inst = &layered.inst;
    if inst.kind.property() != Property::Edgeless {
        return Err(ShiftError::WrongKind(inst.kind));
    }
    validate_instance(inst)?;
    if !inst.kind.is_minimization() {
        let dual = LayeredInstance {
            inst: complement_instance(inst),
            layers: layered.layers.clone(),
        };
        let mut sol = shift_solve(&dual, opts)?;
        if let Answer::Yes(w) = &mut sol.answer {
            w.sets = w.sets.iter().map(|s| complement_set(inst.graph.n(), s)).collect();
            validate_witness(inst, w)?;
        }
        return Ok(sol);
    }
    let subs: Vec<Option<ShiftSubinstance>> = (0..=inst.length).map(|j| build_subinstance(layered, j)).collect();
    let mut stats = ShiftStats {
        skipped: (0..=inst.length).filter(|&j| subs[j].is_none()).collect(),
        ..Default::default()
    };
    let runnable: Vec<&ShiftSubinstance> = subs.iter().flatten().collect();
    let attempt = |sub: &&ShiftSubinstance| solve_offset(layered, sub, opts).map(|(w, width)| (sub.j, w, width));
    let results: Vec<Result<OffsetResult, ShiftError>> = match opts.threads {
        1 => {
            let mut out = Vec::new();
            for sub in &runnable {
                let r = attempt(sub);
                let done = matches!(&r, Ok((_, Some(_), _)) | Err(_));
                out.push(r);
                if done {
                    break;
                }
            }
            out
        }
        t => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| ShiftError::ThreadPool(e.to_string()))?;
            pool.install(|| runnable.par_iter().map(attempt).collect())
        }
    };
    let mut answer = Answer::No;
    for r in results {
        let (j, w, width) = r?;
        stats.widths.push((j, width));
        if let Some(w) = w {
            validate_witness(inst, &w)?;
            stats.solved_at = Some(j);
            answer = Answer::Yes(w);
            break;
        }
    }
    Ok(ShiftSolution { answer, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ProblemKind;
    use crate::oracle::oracle_answer;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn set(ids: &[usize]) -> VertexSet {
        ids.iter().map(|&v| v - 1).collect()
    }

    fn vc(g: Graph, s: &[usize], t: &[usize], k: usize, ell: usize) -> Instance {
        Instance {
            graph: g,
            source: set(s),
            target: set(t),
            capacity: k,
            length: ell,
            kind: ProblemKind::VertexCover,
            mode: LengthMode::Exact,
        }
    }

    fn grid(r: usize, c: usize) -> Graph {
        let id = |i: usize, j: usize| i * c + j;
        let mut edges = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if i + 1 < r {
                    edges.push((id(i, j), id(i + 1, j)));
                }
                if j + 1 < c {
                    edges.push((id(i, j), id(i, j + 1)));
                }
            }
        }
        Graph::from_edges(r * c, edges)
    }

    #[test]
    fn deleted_layers() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let l = LayeredInstance::new(vc(g.clone(), &[2], &[2], 1, 1), vec![0, 1, 2]).unwrap();
        assert_eq!(compute_gj(&l, 0).2, set(&[1, 3]));
        let l2 = LayeredInstance::new(vc(g.clone(), &[2], &[2], 1, 2), vec![0, 1, 2]).unwrap();
        let (h, ids, d) = compute_gj(&l2, 1);
        assert_eq!(d, set(&[2]));
        assert_eq!((h.n(), h.m(), ids), (2, 0, vec![0, 2]));
        let flat = LayeredInstance::new(vc(g, &[2], &[2], 1, 2), vec![0, 0, 0]).unwrap();
        assert!(compute_gj(&flat, 1).2.is_empty());
        assert!(compute_gj(&flat, 2).2.is_empty());
    }

    #[test]
    fn rejects_bad_layers() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        assert!(matches!(
            LayeredInstance::new(vc(g.clone(), &[2], &[2], 1, 1), vec![0, 2, 2]),
            Err(ShiftError::LayerGap { .. })
        ));
        assert!(matches!(
            LayeredInstance::new(vc(g, &[2], &[2], 1, 1), vec![0, 1]),
            Err(ShiftError::LayerCount { .. })
        ));
    }

    #[test]
    fn star_gadget_for_common_deleted_vertex() {
        // path 1-2-3-4 with layers 0,1,2,3 and ell = 2: offset 1 deletes
        // layer 1 (vertex 2, kept in both sets)
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let l = LayeredInstance::new(vc(g, &[2, 3], &[2, 4], 3, 2), vec![0, 1, 2, 3]).unwrap();
        let sub = build_subinstance(&l, 1).unwrap();
        assert_eq!(sub.deleted, set(&[2]));
        assert_eq!(sub.kept_common, set(&[2]));
        assert_eq!(sub.star_centers.len(), 1);
        assert_eq!(sub.star_leaves.len(), 3);
        let centre = *sub.star_centers.iter().next().unwrap();
        assert!(sub.source.contains(&centre) && sub.target.contains(&centre));
        assert_eq!(sub.source.len(), 2);
        assert_eq!(sub.target.len(), 2);
        // offset 2 deletes vertex 3, which changes between the endpoints
        assert!(build_subinstance(&l, 2).is_none());
    }

    #[test]
    fn pendant_gadget_and_star_offset() {
        // path 1-2-3: vertex 1 is deleted and outside both sets, so 2 gets
        // pendant leaves
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let l = LayeredInstance::new(vc(g, &[2], &[2], 2, 1), vec![0, 1, 2]).unwrap();
        let sub = build_subinstance(&l, 0).unwrap();
        assert_eq!(sub.rest, set(&[1, 3]));
        assert_eq!(sub.pendant_leaves.len(), 2);
        assert!(sub.star_centers.is_empty());
        // offset 1 deletes vertex 2, kept in both sets: a centre with 2 leaves
        let other = build_subinstance(&l, 1).unwrap();
        assert_eq!((other.gstar.n(), other.gstar.m()), (5, 2));
        assert!(other.pendant_leaves.is_empty());
        assert_eq!(other.star_leaves.len(), 2);
    }

    #[test]
    fn p3_example() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]);
        let inst = vc(g.clone(), &[2], &[1, 3], 3, 3);
        let l = LayeredInstance::from_layering(inst.clone(), &Layering::Outer(set(&[1]))).unwrap();
        let sol = shift_solve(&l, &SolveOptions::default()).unwrap();
        assert!(sol.answer.is_yes());
        assert_eq!(validate_witness(&inst, sol.answer.witness().unwrap()), Ok(()));
    }

    #[test]
    fn all_offsets_skipped_gives_no() {
        // every layer holds a vertex that changes
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]);
        let inst = vc(g, &[1, 3], &[2, 4], 4, 1);
        let l = LayeredInstance::new(inst.clone(), vec![0, 1, 2, 3]).unwrap();
        let sol = shift_solve(&l, &SolveOptions::default()).unwrap();
        assert_eq!(sol.stats.skipped, vec![0, 1]);
        assert_eq!(sol.answer, Answer::No);
        assert!(oracle_answer(&inst).unwrap().is_none());
    }

    #[test]
    fn matches_oracle_on_grids() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = grid(3, 3);
        let covers: Vec<VertexSet> = (0..1u32 << 9)
            .map(|m| (0..9).filter(|&v| m >> v & 1 == 1).collect::<VertexSet>())
            .filter(|s| crate::graph::check_feasible(&g, s, ProblemKind::VertexCover))
            .collect();
        for _ in 0..25 {
            let s = covers[rng.gen_range(0..covers.len())].clone();
            let t = covers[rng.gen_range(0..covers.len())].clone();
            let ell = rng.gen_range(0..=4);
            let inst = Instance {
                graph: g.clone(),
                capacity: s.len().max(t.len()) + rng.gen_range(0..=1),
                source: s,
                target: t,
                length: ell,
                kind: ProblemKind::VertexCover,
                mode: if rng.gen_bool(0.3) {
                    LengthMode::AtMost
                } else {
                    LengthMode::Exact
                },
            };
            let l = LayeredInstance::from_layering(inst.clone(), &Layering::Outer(set(&[1]))).unwrap();
            let sol = shift_solve(&l, &SolveOptions::default()).unwrap();
            assert_eq!(sol.answer.is_yes(), oracle_answer(&inst).unwrap().is_some(), "{inst:?}");
        }
    }

    #[test]
    fn independent_set_goes_through_the_dual() {
        let g = grid(2, 3);
        let inst = Instance {
            graph: g,
            source: set(&[1, 3, 5]),
            target: set(&[2, 4, 6]),
            capacity: 2,
            length: 6,
            kind: ProblemKind::IndependentSet,
            mode: LengthMode::AtMost,
        };
        let l = LayeredInstance::from_layering(inst.clone(), &Layering::Outer(set(&[1]))).unwrap();
        let sol = shift_solve(&l, &SolveOptions::default()).unwrap();
        assert_eq!(sol.answer.is_yes(), oracle_answer(&inst).unwrap().is_some());
        if let Answer::Yes(w) = &sol.answer {
            assert_eq!(validate_witness(&inst, w), Ok(()));
        }
        let oct = Instance {
            kind: ProblemKind::OddCycleTransversal,
            ..inst
        };
        assert!(matches!(
            shift_solve(&l_for(&oct), &SolveOptions::default()),
            Err(ShiftError::WrongKind(_))
        ));
    }

    #[test]
    fn matches_oracle_on_random_layerings() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut yes = 0;
        for _ in 0..150 {
            let n = rng.gen_range(2..=8);
            let layers: Vec<usize> = (0..n).map(|_| rng.gen_range(0..4)).collect();
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|&(u, v)| layers[u].abs_diff(layers[v]) <= 1)
                .filter(|_| rng.gen_bool(0.4))
                .collect();
            let g = Graph::from_edges(n, edges);
            let covers: Vec<VertexSet> = (0..1u32 << n)
                .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect::<VertexSet>())
                .filter(|s| crate::graph::check_feasible(&g, s, ProblemKind::VertexCover))
                .collect();
            let s = covers[rng.gen_range(0..covers.len())].clone();
            let t = covers[rng.gen_range(0..covers.len())].clone();
            let kind = if rng.gen_bool(0.5) {
                ProblemKind::VertexCover
            } else {
                ProblemKind::IndependentSet
            };
            let (s, t, capacity) = match kind {
                ProblemKind::VertexCover => {
                    let k = s.len().max(t.len()) + rng.gen_range(0..=1);
                    (s, t, k)
                }
                _ => {
                    let (s, t) = (complement_set(n, &s), complement_set(n, &t));
                    let k = s.len().min(t.len()).saturating_sub(rng.gen_range(0..=1));
                    (s, t, k)
                }
            };
            let inst = Instance {
                graph: g,
                source: s,
                target: t,
                capacity,
                length: rng.gen_range(0..=4),
                kind,
                mode: if rng.gen_bool(0.5) {
                    LengthMode::AtMost
                } else {
                    LengthMode::Exact
                },
            };
            let l = LayeredInstance::new(inst.clone(), layers).unwrap();
            let sol = shift_solve(&l, &SolveOptions::default()).unwrap();
            let expected = oracle_answer(&inst).unwrap().is_some();
            assert_eq!(sol.answer.is_yes(), expected, "{inst:?} {:?}", l.layers);
            if let Answer::Yes(w) = &sol.answer {
                yes += 1;
                assert!(w.sets.iter().flatten().all(|&v| v < n));
                assert!(w.steps() <= inst.length);
            }
            let par = shift_solve(
                &l,
                &SolveOptions {
                    threads: 3,
                    ..Default::default()
                },
            )
            .unwrap();
            assert_eq!(par.answer.is_yes(), expected);
        }
        assert!(yes > 30, "only {yes} yes-instances");
    }

    fn l_for(inst: &Instance) -> LayeredInstance {
        LayeredInstance::new(inst.clone(), vec![0; inst.graph.n()]).unwrap()
    }
}
