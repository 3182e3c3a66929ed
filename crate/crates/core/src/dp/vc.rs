use crate::graph::Vertex;

use super::engine::Variant;
use super::signature::{trajectory, BagView, DpContext, Signature};

/// Vertex cover: the part of the bag outside the current set must be
/// edgeless after every step.
#[derive(Clone, Copy, Debug, Default)]
pub struct VcVariant;

impl Variant for VcVariant {
    type Aux = ();

    const AUX_IN_JOIN_KEY: bool = false;

    fn name(&self) -> &'static str {
        "vertex cover"
    }

    fn initial_aux(&self, _ell: usize) {}

    fn is_valid(&self, ctx: &DpContext, bag: &BagView, sig: &Signature) -> bool {
        sig.steps.len() == ctx.ell()
            && trajectory(ctx, bag, &sig.steps)
                .is_some_and(|traj| traj.iter().all(|&cur| bag.edgeless(bag.full() & !cur)))
    }

    fn introduce_aux(&self, _ctx: &DpContext, bag: &BagView, v_pos: usize, traj: &[u64], _aux: &(), out: &mut Vec<()>) {
        let bit = 1u64 << v_pos;
        let covered = traj
            .iter()
            .all(|&cur| cur & bit != 0 || bag.adj[v_pos] & !cur & bag.full() == 0);
        if covered {
            out.push(());
        }
    }

    fn forget_aux(&self, _v: Vertex, _aux: &()) {}

    fn join_aux(&self, _bag: &BagView, _traj: &[u64], _a: &(), _b: &()) -> Option<()> {
        Some(())
    }

    fn table_bound(&self, bag_size: usize, ell: usize) -> f64 {
        ((bag_size + 2) as f64).powi(ell as i32)
    }
}

/// Validity of a plain vertex-cover signature.
pub fn is_valid(ctx: &DpContext, bag: &BagView, sig: &Signature) -> bool {
    VcVariant.is_valid(ctx, bag, sig)
}
