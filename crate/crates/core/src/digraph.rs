//! The digraph of a majorization matrix and the diagnostics built on it.
//!
//! Edges run from column to row: `j -> u` iff `(M(A))_{uj} > 0`. A walk
//! `j_1 -> … -> j_t` of length `t - 1` therefore certifies
//! `(M(A^{t-1}))_{j_t j_1} > 0`. Loops are allowed whenever the diagonal entry
//! is positive.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::engine::Propagator;
use crate::pattern::{PatternMatrix, PatternVector};
use crate::tensor::Tensor;

/// A failed necessary condition for primitivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// Column `column` of `M(A)` has no positive off-diagonal entry.
    NoOffDiagonal { column: usize },
    /// Every column of `M(A)` has at most one positive entry.
    AtMostOnePerColumn,
    /// No stored entry has leading index `row`.
    EmptyRow { row: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoOffDiagonal { column } => write!(
                f,
                "column {} of the majorization matrix has no positive off-diagonal entry",
                column + 1
            ),
            Violation::AtMostOnePerColumn => f.write_str(
                "every column of the majorization matrix has at most one positive entry",
            ),
            Violation::EmptyRow { row } => {
                write!(f, "row {} of the tensor has no positive entry", row + 1)
            }
        }
    }
}

/// Checks, in order: every column of `M(A)` has a positive off-diagonal
/// entry; some column has two positive entries; every row of `A` is
/// nonempty. The first failure certifies that `A` is not primitive.
///
/// For `n = 1` the two column conditions are vacuous and only the row
/// condition applies.
pub fn necessary_conditions(a: &Tensor) -> Option<Violation> {
    let n = a.dim();
    if n >= 2 {
        let m = a.majorization();
        let columns = m.columns();
        if let Some(column) = columns
            .iter()
            .enumerate()
            .position(|(j, c)| !c.iter().any(|u| u != j))
        {
            return Some(Violation::NoOffDiagonal { column });
        }
        if columns.iter().all(|c| c.len() <= 1) {
            return Some(Violation::AtMostOnePerColumn);
        }
    }
    a.empty_rows()
        .first()
        .map(|&row| Violation::EmptyRow { row })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("vertex {} out of range 1..={dim}", .vertex + 1)]
    VertexOutOfRange { vertex: usize, dim: usize },
    #[error("a walk needs at least two vertices")]
    WalkTooShort,
    #[error("the vertex sequence is not a walk of the majorization matrix")]
    NotAWalk,
    #[error("vertex {} lies on a short cycle", .vertex + 1)]
    VertexInH { vertex: usize },
    #[error("no vertex lies on a cycle of length at most n-1")]
    EmptyH,
    #[error("no vertex on a short cycle is reachable from {} within {depth} steps", .vertex + 1)]
    NoWitness { vertex: usize, depth: usize },
}

/// Digraph of a pattern matrix, edge `j -> u` iff entry `(u, j)` is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    adjacency: PatternMatrix,
    successors: PatternMatrix,
}

impl Digraph {
    pub fn from_pattern(adjacency: PatternMatrix) -> Self {
        let successors = adjacency.transpose();
        Digraph {
            adjacency,
            successors,
        }
    }

    pub fn of(a: &Tensor) -> Self {
        Self::from_pattern(a.majorization())
    }

    pub fn dim(&self) -> usize {
        self.adjacency.dim()
    }

    pub fn adjacency(&self) -> &PatternMatrix {
        &self.adjacency
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.adjacency.get(to, from)
    }

    pub fn successors(&self, v: usize) -> PatternVector {
        self.successors.row(v)
    }

    fn check_vertex(&self, v: usize) -> Result<(), DigraphError> {
        if v >= self.dim() {
            Err(DigraphError::VertexOutOfRange {
                vertex: v,
                dim: self.dim(),
            })
        } else {
            Ok(())
        }
    }

    pub fn verify_walk(&self, walk: &[usize]) -> Result<bool, DigraphError> {
        if walk.len() < 2 {
            return Err(DigraphError::WalkTooShort);
        }
        for &v in walk {
            self.check_vertex(v)?;
        }
        Ok(walk.windows(2).all(|w| self.has_edge(w[0], w[1])))
    }

    /// A shortest cycle through `v`, as `[v, j_2, …, j_t]` with the closing
    /// edge `j_t -> v` implied.
    pub fn shortest_cycle_through(&self, v: usize) -> Option<Vec<usize>> {
        if self.has_edge(v, v) {
            return Some(vec![v]);
        }
        let n = self.dim();
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        parent[v] = v;
        queue.push_back(v);
        while let Some(x) = queue.pop_front() {
            for y in self.successors.row(x).iter() {
                if y == v {
                    let mut path = vec![x];
                    let mut cur = x;
                    while cur != v {
                        cur = parent[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Every simple cycle of length at most `max_len`, each listed once and
    /// rotated to start at its smallest vertex. Exponential; meant for small
    /// cross-checks.
    pub fn simple_cycles(&self, max_len: usize) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut out = Vec::new();
        if max_len == 0 {
            return out;
        }
        let mut path = Vec::new();
        let mut on_path = vec![false; n];
        for start in 0..n {
            path.push(start);
            on_path[start] = true;
            self.extend_cycles(start, max_len, &mut path, &mut on_path, &mut out);
            on_path[start] = false;
            path.pop();
        }
        out
    }

    fn extend_cycles(
        &self,
        start: usize,
        max_len: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let last = *path.last().expect("path is never empty");
        for next in self.successors.row(last).iter() {
            if next == start {
                out.push(path.clone());
            } else if next > start && !on_path[next] && path.len() < max_len {
                path.push(next);
                on_path[next] = true;
                self.extend_cycles(start, max_len, path, on_path, out);
                on_path[next] = false;
                path.pop();
            }
        }
    }
}

/// Short-cycle structure of `M(A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleInfo {
    pub adjacency: PatternMatrix,
    /// Smallest `t <= n - 1` with `(M(A)^t)_{vv}` positive, per vertex.
    pub cycle_length: Vec<Option<usize>>,
    /// One shortest cycle through each vertex of `h`, deduplicated up to
    /// rotation and rotated to start at its smallest vertex.
    pub short_cycles: Vec<Vec<usize>>,
    /// Vertices on some cycle of length at most `n - 1`.
    pub h: PatternVector,
    pub s: usize,
}

/// Membership in `H` is read off the diagonals of the Boolean powers
/// `M(A)^t`, `t = 1..n-1`. A shortest closed walk through a vertex is a
/// simple cycle, so this agrees with the cycle definition; each member's
/// cycle is then recovered by breadth-first search.
pub fn short_cycles_and_h(a: &Tensor) -> CycleInfo {
    cycle_info(&Digraph::of(a))
}

pub fn cycle_info(graph: &Digraph) -> CycleInfo {
    let n = graph.dim();
    let adjacency = graph.adjacency().clone();
    let mut cycle_length = vec![None; n];
    let mut power = adjacency.clone();
    for t in 1..n {
        for (v, len) in cycle_length.iter_mut().enumerate() {
            if len.is_none() && power.get(v, v) {
                *len = Some(t);
            }
        }
        if t + 1 < n {
            power = power.bool_mul(&adjacency);
        }
    }
    let h = PatternVector::from_indices(n, (0..n).filter(|&v| cycle_length[v].is_some()));

    let mut cycles = BTreeSet::new();
    for v in h.iter() {
        let cycle = graph
            .shortest_cycle_through(v)
            .expect("a closed walk implies a cycle");
        assert_eq!(
            Some(cycle.len()),
            cycle_length[v],
            "cycle length mismatch at vertex {}",
            v + 1
        );
        let pivot = (0..cycle.len()).min_by_key(|&k| cycle[k]).unwrap_or(0);
        let mut rotated = cycle[pivot..].to_vec();
        rotated.extend_from_slice(&cycle[..pivot]);
        cycles.insert(rotated);
    }

    let s = h.len();
    CycleInfo {
        adjacency,
        cycle_length,
        short_cycles: cycles.into_iter().collect(),
        h,
        s,
    }
}

/// Whether entry `(j_t, j_1)` of `Z(M(A^{t-1}))` is positive for a walk
/// `j_1 -> … -> j_t`. Always true for a valid walk; exposed as a check.
pub fn walk_positivity_check(a: &Tensor, walk: &[usize]) -> Result<bool, DigraphError> {
    if !Digraph::of(a).verify_walk(walk)? {
        return Err(DigraphError::NotAWalk);
    }
    let prop = Propagator::new(a);
    let first = walk[0];
    let last = walk[walk.len() - 1];
    let mut column = a.majorization().column(first);
    for _ in 1..walk.len() - 1 {
        column = prop.apply(&column);
    }
    Ok(column.contains(last))
}

/// For `j` outside `H`: the lexicographically smallest `(l, i)` with `i` in
/// `H`, `1 <= l <= n - s`, and a walk of length exactly `l` from `j` to `i`.
pub fn escape_witness(info: &CycleInfo, j: usize) -> Result<(usize, usize), DigraphError> {
    let n = info.adjacency.dim();
    if j >= n {
        return Err(DigraphError::VertexOutOfRange { vertex: j, dim: n });
    }
    if info.h.contains(j) {
        return Err(DigraphError::VertexInH { vertex: j });
    }
    if info.s == 0 {
        return Err(DigraphError::EmptyH);
    }
    let depth = n - info.s;
    let graph = Digraph::from_pattern(info.adjacency.clone());
    let mut layer = PatternVector::basis(n, j);
    for l in 1..=depth {
        let mut next = PatternVector::empty(n);
        for v in layer.iter() {
            next.union_with(&graph.successors(v));
        }
        if let Some(i) = next.iter().find(|&i| info.h.contains(i)) {
            return Ok((l, i));
        }
        layer = next;
    }
    Err(DigraphError::NoWitness { vertex: j, depth })
}
