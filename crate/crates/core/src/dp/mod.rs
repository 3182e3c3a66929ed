//! Signature dynamic programming over a nice tree decomposition, one run
//! per add/remove pattern of the steps.

mod engine;
mod sigma;
mod signature;
mod solve;
mod vc;

pub use engine::{
    fill_tables, forget, introduce, join, join_steps, reconstruct_steps, DpError, DpRun, EngineOptions, Origin,
    PreparedTd, Table, Variant,
};
pub use sigma::{sigma_sequences, Direction, StepDirections};
pub use signature::{apply_steps, iter_bits, trajectory, BagView, DpContext, Signature, Step, MAX_BAG};
pub use solve::{run_dp_for_sigma, solve, solve_with, Answer, Solution, SolveError, SolveOptions, SolveStats};
pub use vc::{is_valid, VcVariant};
