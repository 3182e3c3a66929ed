use crate::dp::{iter_bits, trajectory, BagView, DpContext, Signature, Variant};
use crate::graph::Vertex;

/// For each step `1..ell`, the partition of the surviving bag vertices into
/// the connected components of the residual graph seen so far. Blocks are
/// sorted, and the list of blocks is sorted.
pub type Partitions = Vec<Vec<Vec<Vertex>>>;

/// Feedback vertex set: the residual graph must stay a forest, tracked via
/// component partitions of each bag.
#[derive(Clone, Copy, Debug, Default)]
pub struct FvsVariant;

/// Union-find over bag positions.
#[derive(Clone)]
struct Dsu([u8; 64]);

impl Dsu {
    fn new() -> Self {
        Dsu(std::array::from_fn(|i| i as u8))
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] as usize != r {
            r = self.0[r] as usize;
        }
        let mut c = x;
        while self.0[c] as usize != r {
            let next = self.0[c] as usize;
            self.0[c] = r as u8;
            c = next;
        }
        r
    }

    /// Returns false if `x` and `y` were already united.
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.0[rx.max(ry)] = rx.min(ry) as u8;
        true
    }
}

/// Components of the bag edges among `survivors`, or `None` if they contain
/// a cycle.
fn bag_forest(bag: &BagView, survivors: u64) -> Option<Dsu> {
    let mut dsu = Dsu::new();
    for p in iter_bits(survivors) {
        for q in iter_bits(bag.adj[p] & survivors & !((2u64 << p) - 1)) {
            if !dsu.union(p, q) {
                return None;
            }
        }
    }
    Some(dsu)
}

fn canonical(mut blocks: Vec<Vec<Vertex>>) -> Vec<Vec<Vertex>> {
    blocks.retain(|b| !b.is_empty());
    blocks.iter_mut().for_each(|b| b.sort_unstable());
    blocks.sort_unstable();
    blocks
}

fn classes(bag: &BagView, dsu: &mut Dsu, survivors: u64) -> Vec<Vec<Vertex>> {
    let mut by_root: Vec<Vec<Vertex>> = vec![Vec::new(); 64];
    for p in iter_bits(survivors) {
        by_root[dsu.find(p)].push(bag.verts[p]);
    }
    canonical(by_root)
}

impl Variant for FvsVariant {
    type Aux = Partitions;

    const AUX_IN_JOIN_KEY: bool = false;

    fn name(&self) -> &'static str {
        "feedback vertex set"
    }

    fn initial_aux(&self, ell: usize) -> Partitions {
        vec![Vec::new(); ell.saturating_sub(1)]
    }

    fn is_valid(&self, ctx: &DpContext, bag: &BagView, sig: &Signature<Partitions>) -> bool {
        let ell = ctx.ell();
        if sig.steps.len() != ell || sig.aux.len() != ell.saturating_sub(1) {
            return false;
        }
        let Some(traj) = trajectory(ctx, bag, &sig.steps) else {
            return false;
        };
        (1..ell).all(|i| {
            let survivors = bag.full() & !traj[i];
            let blocks = &sig.aux[i - 1];
            if *blocks != canonical(blocks.clone()) || bag_forest(bag, survivors).is_none() {
                return false;
            }
            let mut block_of = [usize::MAX; 64];
            let mut covered = 0u64;
            for (b, block) in blocks.iter().enumerate() {
                for &v in block {
                    match bag.pos(v) {
                        Some(p) if survivors >> p & 1 == 1 && covered >> p & 1 == 0 => {
                            covered |= 1 << p;
                            block_of[p] = b;
                        }
                        _ => return false,
                    }
                }
            }
            covered == survivors
                && iter_bits(survivors).all(|p| iter_bits(bag.adj[p] & survivors).all(|q| block_of[p] == block_of[q]))
        })
    }

    fn introduce_aux(
        &self,
        ctx: &DpContext,
        bag: &BagView,
        v_pos: usize,
        traj: &[u64],
        aux: &Partitions,
        out: &mut Vec<Partitions>,
    ) {
        let v = bag.verts[v_pos];
        let bit = 1u64 << v_pos;
        let mut next = aux.clone();
        for i in 1..ctx.ell() {
            if traj[i] & bit != 0 {
                continue;
            }
            let blocks = &aux[i - 1];
            let mut hit = vec![false; blocks.len()];
            for p in iter_bits(bag.adj[v_pos] & !traj[i]) {
                let u = bag.verts[p];
                let b = blocks
                    .iter()
                    .position(|blk| blk.binary_search(&u).is_ok())
                    .expect("surviving neighbour lies in some block");
                if hit[b] {
                    return;
                }
                hit[b] = true;
            }
            let mut merged = vec![v];
            let mut rest = Vec::new();
            for (b, blk) in blocks.iter().enumerate() {
                if hit[b] {
                    merged.extend_from_slice(blk);
                } else {
                    rest.push(blk.clone());
                }
            }
            rest.push(merged);
            next[i - 1] = canonical(rest);
        }
        out.push(next);
    }

    fn forget_aux(&self, v: Vertex, aux: &Partitions) -> Partitions {
        aux.iter()
            .map(|blocks| {
                canonical(
                    blocks
                        .iter()
                        .map(|b| b.iter().copied().filter(|&u| u != v).collect())
                        .collect(),
                )
            })
            .collect()
    }

    /// Glue the two sides' connectivity over the components of the bag
    /// edges: bag edges are present on both sides, so each side's blocks
    /// link components of the bag forest, and a cycle arises exactly when
    /// some link of the second side joins classes already connected.
    fn join_aux(&self, bag: &BagView, traj: &[u64], a: &Partitions, b: &Partitions) -> Option<Partitions> {
        let mut out = Vec::with_capacity(a.len());
        for i in 1..traj.len().saturating_sub(1) {
            let survivors = bag.full() & !traj[i];
            let mut forest = bag_forest(bag, survivors)?;
            let mut glued = forest.clone();
            for (side, blocks) in [a, b].into_iter().enumerate() {
                for block in &blocks[i - 1] {
                    let mut roots: Vec<usize> = block
                        .iter()
                        .map(|&u| forest.find(bag.pos(u).expect("block vertex lies in the bag")))
                        .collect();
                    roots.sort_unstable();
                    roots.dedup();
                    for w in roots.windows(2) {
                        if !glued.union(w[0], w[1]) && side == 1 {
                            return None;
                        }
                    }
                }
            }
            out.push(classes(bag, &mut glued, survivors));
        }
        Some(out)
    }

    fn table_bound(&self, bag_size: usize, ell: usize) -> f64 {
        // partitions of at most `bag_size` elements per step, bounded by b^b
        let b = bag_size.max(1) as f64;
        ((bag_size + 2) as f64).powi(ell as i32) * b.powf(b * ell.saturating_sub(1) as f64)
    }
}
