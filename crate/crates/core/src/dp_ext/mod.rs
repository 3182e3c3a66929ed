//! The signature dynamic program extended with per-step bipartitions (odd
//! cycle transversal, induced bipartite set) and component partitions
//! (feedback vertex set, induced forest).

mod fvs;
mod oct;

pub use fvs::{FvsVariant, Partitions};
pub use oct::{OctVariant, Sides};

use crate::dp::{solve, solve_with, Solution, SolveError, SolveOptions};
use crate::graph::{Instance, Property};
use crate::nice::NiceTreeDecomposition;

/// Solve an odd cycle transversal, induced bipartite, feedback vertex set
/// or induced forest instance.
pub fn solve_variant(
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
    opts: &SolveOptions,
) -> Result<Solution, SolveError> {
    match inst.kind.property() {
        Property::Bipartite => solve_with(&OctVariant, inst, ntd, opts),
        Property::Forest => solve_with(&FvsVariant, inst, ntd, opts),
        Property::Edgeless => Err(SolveError::WrongKind {
            kind: inst.kind,
            engine: "extended",
        }),
    }
}

/// Dispatch on the problem kind.
pub fn solve_any(inst: &Instance, ntd: &NiceTreeDecomposition, opts: &SolveOptions) -> Result<Solution, SolveError> {
    match inst.kind.property() {
        Property::Edgeless => solve(inst, ntd, opts),
        _ => solve_variant(inst, ntd, opts),
    }
}
