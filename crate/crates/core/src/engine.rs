//! Zero-pattern propagation of majorization matrices of tensor powers.
//!
//! With `P_k = Z(M(A^k))`, entry `(u, j)` of `P_{k+1}` is positive iff some
//! stored entry `a[u, j_2, …, j_m]` has every `j_t` in the support of column
//! `j` of `P_k`. Column `j` of `P_{k+1}` therefore depends on column `j` of
//! `P_k` alone, and a step is one support-propagation per column.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::digraph::{necessary_conditions, Violation};
use crate::pattern::{PatternMatrix, PatternVector};
use crate::tensor::Tensor;

/// Columns are propagated on the rayon pool from this dimension upward.
const PARALLEL_MIN_DIM: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("pattern has dimension {pattern} but tensor has dimension {tensor}")]
    DimensionMismatch { tensor: usize, pattern: usize },
    #[error("column {} out of range 1..={dim}", .column + 1)]
    ColumnOutOfRange { column: usize, dim: usize },
}

/// `(n-1)^2 + 1`, the largest primitive degree any order-`m` dimension-`n`
/// primitive tensor can have.
pub fn degree_bound(n: usize) -> usize {
    let d = n.saturating_sub(1);
    d * d + 1
}

/// A tensor's entries compiled for support propagation: for every leading
/// index `u`, the inclusion-minimal sets `{j_2, …, j_m}` over stored entries
/// `a[u, j_2, …, j_m]`. A superset can never fire when its subset does not,
/// so only the minimal ones are kept.
#[derive(Debug, Clone)]
pub struct Propagator {
    dim: usize,
    rows: Vec<Vec<FixedBitSet>>,
}

impl Propagator {
    pub fn new(a: &Tensor) -> Self {
        let n = a.dim();
        let mut distinct: Vec<HashSet<FixedBitSet>> = vec![HashSet::new(); n];
        for (idx, _) in a.entries() {
            let mut mask = FixedBitSet::with_capacity(n);
            for &t in &idx[1..] {
                mask.insert(t);
            }
            distinct[idx[0]].insert(mask);
        }
        let rows = distinct
            .into_iter()
            .map(|set| {
                let mut masks: Vec<FixedBitSet> = set.into_iter().collect();
                masks.sort_by_key(|m| (m.count_ones(..), m.ones().collect::<Vec<_>>()));
                let mut minimal: Vec<FixedBitSet> = Vec::with_capacity(masks.len());
                for m in masks {
                    if !minimal.iter().any(|k| k.is_subset(&m)) {
                        minimal.push(m);
                    }
                }
                minimal
            })
            .collect();
        Propagator { dim: n, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Support of `A x` for any nonnegative `x` with support `support`.
    pub fn apply(&self, support: &PatternVector) -> PatternVector {
        let s = support.bits();
        let mut out = PatternVector::empty(self.dim);
        for (u, masks) in self.rows.iter().enumerate() {
            if masks.iter().any(|m| m.is_subset(s)) {
                out.insert(u);
            }
        }
        out
    }

    fn apply_all(&self, columns: &[PatternVector]) -> Vec<PatternVector> {
        if self.dim >= PARALLEL_MIN_DIM {
            columns.par_iter().map(|c| self.apply(c)).collect()
        } else {
            columns.iter().map(|c| self.apply(c)).collect()
        }
    }

    /// `Z(M(A^{k+1}))` from `Z(M(A^k))`.
    pub fn step(&self, current: &PatternMatrix) -> Result<PatternMatrix, EngineError> {
        if current.dim() != self.dim {
            return Err(EngineError::DimensionMismatch {
                tensor: self.dim,
                pattern: current.dim(),
            });
        }
        Ok(PatternMatrix::from_columns(
            &self.apply_all(&current.columns()),
        ))
    }
}

/// One propagation step for a tensor that has not been compiled yet.
pub fn step(a: &Tensor, current: &PatternMatrix) -> Result<PatternMatrix, EngineError> {
    Propagator::new(a).step(current)
}

/// `Z(M(A^k))` for `k = 1..=r`.
pub fn pattern_powers(a: &Tensor, r: usize) -> Vec<PatternMatrix> {
    let prop = Propagator::new(a);
    let mut out = Vec::with_capacity(r);
    if r == 0 {
        return out;
    }
    let mut columns = a.majorization().columns();
    out.push(PatternMatrix::from_columns(&columns));
    for _ in 1..r {
        columns = prop.apply_all(&columns);
        out.push(PatternMatrix::from_columns(&columns));
    }
    out
}

/// Whether the majorization matrix is entrywise positive.
pub fn essential_positive(a: &Tensor) -> bool {
    a.majorization().is_positive()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepSummary {
    pub step: usize,
    pub positive_entries: usize,
    pub full_columns: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub order: usize,
    pub dim: usize,
    pub primitive: bool,
    /// `max_j gamma_j` when primitive.
    pub gamma: Option<usize>,
    /// First step at which column `j` is entrywise positive.
    pub gamma_j: Vec<Option<usize>>,
    pub steps_run: usize,
    pub bound: usize,
    pub violation: Option<Violation>,
    pub trace: Vec<StepSummary>,
}

/// Decides primitivity and computes the primitive degree and every column
/// degree.
///
/// Iterates from `P_1 = Z(M(A))` until every column is full or the step count
/// reaches `(n-1)^2 + 1`; a column still unfilled at that point certifies
/// that the tensor is not primitive.
pub fn analyze(a: &Tensor) -> DegreeReport {
    let n = a.dim();
    let bound = degree_bound(n);
    let violation = necessary_conditions(a);
    let prop = Propagator::new(a);

    let mut columns = a.majorization().columns();
    let mut gamma_j: Vec<Option<usize>> = vec![None; n];
    let mut trace = Vec::new();
    let mut k = 1;
    loop {
        for (j, col) in columns.iter().enumerate() {
            let full = col.is_full();
            match gamma_j[j] {
                Some(first) => assert!(
                    full,
                    "column {} was full at step {first} but not at step {k}",
                    j + 1
                ),
                None if full => gamma_j[j] = Some(k),
                None => {}
            }
        }
        trace.push(StepSummary {
            step: k,
            positive_entries: columns.iter().map(PatternVector::len).sum(),
            full_columns: gamma_j.iter().filter(|g| g.is_some()).count(),
        });
        if k >= bound || gamma_j.iter().all(Option::is_some) {
            break;
        }
        columns = prop.apply_all(&columns);
        k += 1;
    }

    let primitive = gamma_j.iter().all(Option::is_some);
    let gamma = if primitive {
        gamma_j.iter().flatten().copied().max()
    } else {
        None
    };
    assert!(
        !(primitive && violation.is_some()),
        "primitive tensor failed a necessary condition: {violation:?}"
    );
    DegreeReport {
        order: a.order(),
        dim: n,
        primitive,
        gamma,
        gamma_j,
        steps_run: k,
        bound,
        violation,
        trace,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceEnd {
    /// The last set is `[n]`.
    Full,
    /// The next set would repeat the set recorded at this (1-based) step.
    Repeats { step: usize },
    /// Stopped at the length limit.
    Truncated,
}

/// The supports `S_k = {u : (M(A^k))_{uj} > 0}` for `k = 1, 2, …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnTrace {
    pub column: usize,
    pub sets: Vec<PatternVector>,
    pub end: TraceEnd,
}

/// `S_1, S_2, …` for column `j`, stopping at the first full set or just
/// before the first repeated set. At most `n · ((n-1)^2 + 1)` sets are
/// recorded.
///
/// When `(M(A))_{jj} > 0` the sets are asserted to be nested.
pub fn column_fill_trace(a: &Tensor, j: usize) -> Result<ColumnTrace, EngineError> {
    let n = a.dim();
    if j >= n {
        return Err(EngineError::ColumnOutOfRange { column: j, dim: n });
    }
    let limit = n * degree_bound(n);
    let prop = Propagator::new(a);
    let seeded = a.majorization().get(j, j);

    let mut seen: HashMap<PatternVector, usize> = HashMap::new();
    let mut sets = Vec::new();
    let mut current = a.majorization().column(j);
    let end = loop {
        sets.push(current.clone());
        seen.insert(current.clone(), sets.len());
        if current.is_full() {
            break TraceEnd::Full;
        }
        let next = prop.apply(&current);
        if seeded {
            assert!(
                current.is_subset(&next),
                "diagonal-seeded column {} shrank at step {}",
                j + 1,
                sets.len()
            );
        }
        if let Some(&step) = seen.get(&next) {
            break TraceEnd::Repeats { step };
        }
        if sets.len() >= limit {
            break TraceEnd::Truncated;
        }
        current = next;
    };
    Ok(ColumnTrace {
        column: j,
        sets,
        end,
    })
}
