use std::fmt;

/// Whether a reconfiguration step removes or adds a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Remove,
    Add,
}

impl Direction {
    pub fn delta(self) -> i64 {
        match self {
            Direction::Remove => -1,
            Direction::Add => 1,
        }
    }
}

/// A fixed add/remove pattern for every step of a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepDirections(pub Vec<Direction>);

impl StepDirections {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Direction] {
        &self.0
    }

    /// Does every prefix keep the set size within `0..=capacity`, ending at
    /// `end_size`?
    pub fn respects(&self, start_size: usize, end_size: usize, capacity: usize) -> bool {
        let mut size = start_size as i64;
        for d in &self.0 {
            size += d.delta();
            if size < 0 || size > capacity as i64 {
                return false;
            }
        }
        size == end_size as i64
    }
}

impl fmt::Display for StepDirections {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|d| match d {
                Direction::Remove => "-1",
                Direction::Add => "+1",
            })
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// All capacity-respecting direction sequences of length `ell` taking a set
/// of size `size_s` to one of size `size_t`, in lexicographic order with
/// removal before addition.
pub fn sigma_sequences(size_s: usize, size_t: usize, capacity: usize, ell: usize) -> Vec<StepDirections> {
    let mut out = Vec::new();
    if ell < size_s.abs_diff(size_t) || !(ell - size_s.abs_diff(size_t)).is_multiple_of(2) {
        return out;
    }
    let mut prefix = Vec::with_capacity(ell);
    extend(
        &mut prefix,
        size_s as i64,
        size_t as i64,
        capacity as i64,
        ell,
        &mut out,
    );
    out
}

fn extend(
    prefix: &mut Vec<Direction>,
    size: i64,
    target: i64,
    capacity: i64,
    ell: usize,
    out: &mut Vec<StepDirections>,
) {
    let left = (ell - prefix.len()) as i64;
    if (size - target).abs() > left {
        return;
    }
    if left == 0 {
        out.push(StepDirections(prefix.clone()));
        return;
    }
    for d in [Direction::Remove, Direction::Add] {
        let next = size + d.delta();
        if next < 0 || next > capacity {
            continue;
        }
        prefix.push(d);
        extend(prefix, next, target, capacity, ell, out);
        prefix.pop();
    }
}
