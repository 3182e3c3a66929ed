//! Independent checking of reconfiguration sequences.

use thiserror::Error;

use crate::dp::Direction;
use crate::graph::{check_feasible, format_set, Instance, LengthMode, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub sets: Vec<VertexSet>,
}

impl Witness {
    pub fn steps(&self) -> usize {
        self.sets.len().saturating_sub(1)
    }

    /// One line per set: `i: v1 v2 ...`, 1-indexed vertices.
    pub fn to_lines(&self) -> String {
        self.sets
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let body = format_set(s);
                if body.is_empty() {
                    format!("{i}:\n")
                } else {
                    format!("{i}: {body}\n")
                }
            })
            .collect()
    }

    /// Whether step `i` adds a vertex exactly when `dirs[i]` says so.
    pub fn follows(&self, dirs: &[Direction]) -> bool {
        dirs.len() == self.steps()
            && self.sets.windows(2).zip(dirs).all(|(w, d)| match d {
                Direction::Add => w[1].len() == w[0].len() + 1,
                Direction::Remove => w[1].len() + 1 == w[0].len(),
            })
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum WitnessError {
    #[error("witness is empty")]
    Empty,
    #[error("witness starts at {found} instead of the source")]
    WrongStart { found: String },
    #[error("witness ends at {found} instead of the target")]
    WrongEnd { found: String },
    #[error("witness has {steps} steps, length bound is {ell} ({mode:?})")]
    WrongLength { steps: usize, ell: usize, mode: LengthMode },
    #[error("sets {step} and {next} differ in {diff} vertices", next = step + 1)]
    NotSingleStep { step: usize, diff: usize },
    #[error("set {step} contains vertex {vertex} outside the graph")]
    OutOfRange { step: usize, vertex: usize },
    #[error("set {step} has {size} vertices, outside the capacity {capacity}")]
    Capacity { step: usize, size: usize, capacity: usize },
    #[error("set {step} is not feasible")]
    Infeasible { step: usize },
}

/// Check a sequence against the instance using only direct feasibility
/// tests.
pub fn validate_witness(inst: &Instance, w: &Witness) -> Result<(), WitnessError> {
    let (first, last) = match (w.sets.first(), w.sets.last()) {
        (Some(f), Some(l)) => (f, l),
        _ => return Err(WitnessError::Empty),
    };
    if *first != inst.source {
        return Err(WitnessError::WrongStart {
            found: format_set(first),
        });
    }
    if *last != inst.target {
        return Err(WitnessError::WrongEnd {
            found: format_set(last),
        });
    }
    let steps = w.steps();
    let length_ok = match inst.mode {
        LengthMode::Exact => steps == inst.length,
        LengthMode::AtMost => steps <= inst.length,
    };
    if !length_ok {
        return Err(WitnessError::WrongLength {
            steps,
            ell: inst.length,
            mode: inst.mode,
        });
    }
    for (step, set) in w.sets.iter().enumerate() {
        if let Some(&vertex) = set.iter().find(|&&v| v >= inst.graph.n()) {
            return Err(WitnessError::OutOfRange {
                step,
                vertex: vertex + 1,
            });
        }
        if !inst.within_capacity(set.len()) {
            return Err(WitnessError::Capacity {
                step,
                size: set.len(),
                capacity: inst.capacity,
            });
        }
        if !check_feasible(&inst.graph, set, inst.kind) {
            return Err(WitnessError::Infeasible { step });
        }
        if step > 0 {
            let diff = set.symmetric_difference(&w.sets[step - 1]).count();
            if diff != 1 {
                return Err(WitnessError::NotSingleStep { step: step - 1, diff });
            }
        }
    }
    Ok(())
}
