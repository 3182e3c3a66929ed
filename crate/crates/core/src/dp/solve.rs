use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{
    complement_instance, complement_set, validate_instance, Instance, InstanceError, LengthMode, ProblemKind, Property,
};
use crate::nice::{NiceError, NiceTreeDecomposition};
use crate::witness::{validate_witness, Witness, WitnessError};

use super::engine::{fill_tables, reconstruct_steps, DpError, EngineOptions, PreparedTd, Variant};
use super::sigma::{sigma_sequences, Direction, StepDirections};
use super::signature::DpContext;
use super::vc::VcVariant;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("decomposition does not fit the graph: {0}")]
    Decomposition(#[from] NiceError),
    #[error(transparent)]
    Dp(#[from] DpError),
    #[error("{kind} cannot be solved by the {engine} engine")]
    WrongKind { kind: ProblemKind, engine: &'static str },
    #[error("internal error: produced witness fails validation: {0}")]
    BadWitness(#[from] WitnessError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// 1 runs sequentially, 0 uses every core, otherwise a pool of this size.
    pub threads: usize,
    pub check_invariants: bool,
    /// Check the decomposition against the graph before running.
    pub validate_decomposition: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            threads: 1,
            check_invariants: false,
            validate_decomposition: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes(Witness),
    No,
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Answer::Yes(w) => Some(w),
            Answer::No => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    /// Direction sequences whose tables were filled.
    pub sigma_runs: usize,
    pub lengths_tried: Vec<usize>,
    pub max_table: usize,
    pub max_bag: usize,
    pub nodes: usize,
    /// Every table stayed within the size bound.
    pub bound_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub answer: Answer,
    pub stats: SolveStats,
}

/// Run the dynamic program for one direction sequence on a minimization
/// instance, returning the reconstructed sequence on acceptance.
pub fn run_dp_for_sigma<V: Variant>(
    variant: &V,
    inst: &Instance,
    td: &PreparedTd,
    dirs: &[Direction],
    opts: &EngineOptions,
) -> (Option<Witness>, usize, bool) {
    let ctx = DpContext::new(&inst.graph, &inst.source, &inst.target, dirs);
    let run = fill_tables(variant, &ctx, td, opts);
    let witness = run.accepting_entry().map(|entry| {
        let actors = reconstruct_steps(&run, td.ntd, entry);
        let mut cur = inst.source.clone();
        let mut sets = vec![cur.clone()];
        for (v, d) in actors.into_iter().zip(dirs) {
            match d {
                Direction::Add => cur.insert(v),
                Direction::Remove => cur.remove(&v),
            };
            sets.push(cur.clone());
        }
        Witness { sets }
    });
    (witness, run.max_table, run.bound_ok)
}

/// Solve with the given variant, which must match the property of the
/// instance's minimization form.
pub fn solve_with<V: Variant>(
    variant: &V,
    inst: &Instance,
    ntd: &NiceTreeDecomposition,
    opts: &SolveOptions,
) -> Result<Solution, SolveError> {
    validate_instance(inst)?;
    if opts.validate_decomposition {
        ntd.validate(&inst.graph)?;
    }
    if !inst.kind.is_minimization() {
        let dual = complement_instance(inst);
        let mut sol = solve_with(
            variant,
            &dual,
            ntd,
            &SolveOptions {
                validate_decomposition: false,
                ..*opts
            },
        )?;
        if let Answer::Yes(w) = &mut sol.answer {
            let n = inst.graph.n();
            w.sets = w.sets.iter().map(|s| complement_set(n, s)).collect();
            validate_witness(inst, w)?;
        }
        return Ok(sol);
    }
    let td = PreparedTd::new(&inst.graph, ntd)?;
    let engine_opts = EngineOptions {
        check_invariants: opts.check_invariants,
        stop_on_empty: true,
    };
    let delta = inst.symmetric_difference();
    let lengths: Vec<usize> = match inst.mode {
        LengthMode::Exact => vec![inst.length],
        LengthMode::AtMost => (delta..=inst.length).step_by(2).collect(),
    };
    let runs = AtomicUsize::new(0);
    let max_table = AtomicUsize::new(0);
    let bound_ok = AtomicBool::new(true);
    let attempt = |dirs: &StepDirections| {
        let (w, table, ok) = run_dp_for_sigma(variant, inst, &td, dirs.as_slice(), &engine_opts);
        runs.fetch_add(1, Ordering::Relaxed);
        max_table.fetch_max(table, Ordering::Relaxed);
        if !ok {
            bound_ok.store(false, Ordering::Relaxed);
        }
        w.map(|w| (w, dirs.clone()))
    };
    let pool = match opts.threads {
        1 => None,
        t => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| SolveError::ThreadPool(e.to_string()))?,
        ),
    };
    let mut found = None;
    let mut tried = Vec::new();
    for &ell in &lengths {
        if ell < delta {
            continue;
        }
        tried.push(ell);
        let sigmas = sigma_sequences(inst.source.len(), inst.target.len(), inst.capacity, ell);
        found = match &pool {
            None => sigmas.iter().find_map(attempt),
            Some(pool) => pool.install(|| sigmas.par_iter().find_map_first(attempt)),
        };
        if found.is_some() {
            break;
        }
    }
    if let Some((w, dirs)) = &found {
        validate_witness(inst, w)?;
        debug_assert!(w.follows(dirs.as_slice()));
    }
    Ok(Solution {
        answer: found.map_or(Answer::No, |(w, _)| Answer::Yes(w)),
        stats: SolveStats {
            sigma_runs: runs.into_inner(),
            lengths_tried: tried,
            max_table: max_table.into_inner(),
            max_bag: ntd.max_bag_size(),
            nodes: ntd.nodes.len(),
            bound_ok: bound_ok.into_inner(),
        },
    })
}

/// Solve a vertex cover or independent set reconfiguration instance.
pub fn solve(inst: &Instance, ntd: &NiceTreeDecomposition, opts: &SolveOptions) -> Result<Solution, SolveError> {
    if inst.kind.property() != Property::Edgeless {
        return Err(SolveError::WrongKind {
            kind: inst.kind,
            engine: "vertex cover",
        });
    }
    solve_with(&VcVariant, inst, ntd, opts)
}
