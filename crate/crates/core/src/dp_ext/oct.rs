use crate::dp::{iter_bits, trajectory, BagView, DpContext, Signature, Variant};
use crate::graph::Vertex;

/// For each step `1..ell`, the surviving bag vertices on the RIGHT side;
/// every other survivor is on the LEFT.
pub type Sides = Vec<Vec<Vertex>>;

/// Odd cycle transversal: after each intermediate step the surviving bag
/// vertices carry a proper two-colouring that is consistent across bags.
#[derive(Clone, Copy, Debug, Default)]
pub struct OctVariant;

fn mask(bag: &BagView, verts: &[Vertex]) -> Option<u64> {
    verts.iter().try_fold(0u64, |m, &v| Some(m | 1 << bag.pos(v)?))
}

impl Variant for OctVariant {
    type Aux = Sides;

    const AUX_IN_JOIN_KEY: bool = true;

    fn name(&self) -> &'static str {
        "odd cycle transversal"
    }

    fn initial_aux(&self, ell: usize) -> Sides {
        vec![Vec::new(); ell.saturating_sub(1)]
    }

    fn is_valid(&self, ctx: &DpContext, bag: &BagView, sig: &Signature<Sides>) -> bool {
        let ell = ctx.ell();
        if sig.steps.len() != ell || sig.aux.len() != ell.saturating_sub(1) {
            return false;
        }
        let Some(traj) = trajectory(ctx, bag, &sig.steps) else {
            return false;
        };
        (1..ell).all(|i| {
            let survivors = bag.full() & !traj[i];
            let sorted = sig.aux[i - 1].windows(2).all(|w| w[0] < w[1]);
            match mask(bag, &sig.aux[i - 1]) {
                Some(right) if sorted && right & !survivors == 0 => {
                    bag.edgeless(right) && bag.edgeless(survivors & !right)
                }
                _ => false,
            }
        })
    }

    fn introduce_aux(
        &self,
        ctx: &DpContext,
        bag: &BagView,
        v_pos: usize,
        traj: &[u64],
        aux: &Sides,
        out: &mut Vec<Sides>,
    ) {
        let v = bag.verts[v_pos];
        let bit = 1u64 << v_pos;
        let mut acc = vec![aux.clone()];
        for i in 1..ctx.ell() {
            if traj[i] & bit != 0 {
                continue;
            }
            let right = &aux[i - 1];
            let (mut right_nb, mut left_nb) = (false, false);
            for p in iter_bits(bag.adj[v_pos] & !traj[i]) {
                if right.binary_search(&bag.verts[p]).is_ok() {
                    right_nb = true;
                } else {
                    left_nb = true;
                }
            }
            let put_right = |s: &mut Sides| {
                let at = s[i - 1].binary_search(&v).unwrap_err();
                s[i - 1].insert(at, v);
            };
            match (left_nb, right_nb) {
                (true, true) => return,
                (false, true) => {}
                (true, false) => acc.iter_mut().for_each(put_right),
                (false, false) => {
                    let mut with_right = acc.clone();
                    with_right.iter_mut().for_each(put_right);
                    acc.extend(with_right);
                }
            }
        }
        out.extend(acc);
    }

    fn forget_aux(&self, v: Vertex, aux: &Sides) -> Sides {
        aux.iter()
            .map(|r| r.iter().copied().filter(|&u| u != v).collect())
            .collect()
    }

    fn join_aux(&self, _bag: &BagView, _traj: &[u64], a: &Sides, b: &Sides) -> Option<Sides> {
        (a == b).then(|| a.clone())
    }

    fn table_bound(&self, bag_size: usize, ell: usize) -> f64 {
        ((bag_size + 2) as f64).powi(ell as i32) * 2f64.powi((bag_size * ell.saturating_sub(1)) as i32)
    }
}
