//! Slow reference paths that do not share code with the propagation engine:
//! materialized tensor powers, the `T_A` map on supports (and on actual
//! values), and Boolean powers of a plain matrix.

use thiserror::Error;

use crate::engine::degree_bound;
use crate::pattern::{PatternMatrix, PatternVector};
use crate::tensor::{shao_product, Tensor, TensorError};

/// Default largest power the materializing oracle attempts.
pub const POWER_ORACLE_R_MAX: usize = 4;

/// Default horizon of the `T_A` oracle: one past the degree bound, so a
/// would-be counterexample shows up instead of being cut off.
pub fn default_tmap_r_max(n: usize) -> usize {
    degree_bound(n) + 1
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("A^{r} cannot be materialized: {source}")]
    Refused { r: usize, source: TensorError },
}

/// `Z(M(A^r))` read off materialized powers for `r = 1, 2, …`, up to the
/// first power the size cap refuses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaterializedPatterns {
    pub patterns: Vec<PatternMatrix>,
    /// First power that could not be built, if any within the horizon.
    pub refused_at: Option<usize>,
}

pub fn materialized_patterns(a: &Tensor, r_max: usize, max_entries: usize) -> MaterializedPatterns {
    let mut patterns = Vec::new();
    if r_max == 0 {
        return MaterializedPatterns {
            patterns,
            refused_at: None,
        };
    }
    let mut power = a.clone();
    patterns.push(power.majorization());
    for r in 2..=r_max {
        match shao_product(a, &power, max_entries) {
            Ok(next) => {
                power = next;
                patterns.push(power.majorization());
            }
            Err(_) => {
                return MaterializedPatterns {
                    patterns,
                    refused_at: Some(r),
                }
            }
        }
    }
    MaterializedPatterns {
        patterns,
        refused_at: None,
    }
}

/// First `r <= r_max` whose materialized power has an entrywise positive
/// majorization matrix.
pub fn power_oracle_degree(
    a: &Tensor,
    r_max: usize,
    max_entries: usize,
) -> Result<Option<usize>, OracleError> {
    if r_max == 0 {
        return Ok(None);
    }
    let mut power = a.clone();
    for r in 1..=r_max {
        if r > 1 {
            power = shao_product(a, &power, max_entries)
                .map_err(|source| OracleError::Refused { r, source })?;
        }
        if power.majorization().is_positive() {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Support of `T_A(x) = (A x)^{[1/(m-1)]}` for a nonnegative `x` with the
/// given support. Taking roots keeps supports, so `i` is present iff some
/// entry `a[i, i_2, …, i_m]` has every `i_t` in the support.
pub fn tmap_support_step(a: &Tensor, x: &PatternVector) -> PatternVector {
    let mut out = PatternVector::empty(a.dim());
    for (idx, _) in a.entries() {
        if idx[1..].iter().all(|&t| x.contains(t)) {
            out.insert(idx[0]);
        }
    }
    out
}

/// Smallest `r <= r_max` with `T_A^r(e_j)` positive for every `j`.
///
/// The basis vectors suffice: any nonzero support contains some `e_j` and
/// the step is monotone in its input.
pub fn tmap_oracle_degree(a: &Tensor, r_max: usize) -> Option<usize> {
    let n = a.dim();
    let mut states: Vec<PatternVector> = (0..n).map(|j| PatternVector::basis(n, j)).collect();
    for r in 1..=r_max {
        for s in states.iter_mut() {
            *s = tmap_support_step(a, s);
        }
        if states.iter().all(PatternVector::is_full) {
            return Some(r);
        }
    }
    None
}

/// A disagreement between the numeric `T_A` iteration and the support
/// iteration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("numeric T-map support differs from pattern iteration at column {}, step {step}", .column + 1)]
pub struct NumericMismatch {
    pub column: usize,
    pub step: usize,
}

/// `T_A(x)` on actual values.
pub fn tmap_numeric_step(a: &Tensor, x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; a.dim()];
    for (idx, v) in a.entries() {
        y[idx[0]] += idx[1..].iter().fold(v, |acc, &t| acc * x[t]);
    }
    let root = 1.0 / (a.order() - 1) as f64;
    y.iter().map(|&s| s.powf(root)).collect()
}

/// Iterates `T_A` on real vectors from every `e_j` for `steps` steps and
/// checks that the support of every iterate matches [`tmap_support_step`].
/// Iterates are rescaled to unit max-norm, which `T_A`'s homogeneity
/// permits.
pub fn tmap_numeric_check(a: &Tensor, steps: usize) -> Result<(), NumericMismatch> {
    let n = a.dim();
    for j in 0..n {
        let mut x = vec![0.0; n];
        x[j] = 1.0;
        let mut support = PatternVector::basis(n, j);
        for step in 1..=steps {
            x = tmap_numeric_step(a, &x);
            let max = x.iter().cloned().fold(0.0, f64::max);
            if max > 0.0 {
                x.iter_mut().for_each(|v| *v /= max);
            }
            support = tmap_support_step(a, &support);
            let numeric = PatternVector::from_indices(n, (0..n).filter(|&i| x[i] > 0.0));
            if numeric != support {
                return Err(NumericMismatch { column: j, step });
            }
        }
    }
    Ok(())
}

/// Exponent of a primitive Boolean matrix: smallest `r <= (n-1)^2 + 1` with
/// `M^r` entrywise positive.
pub fn matrix_exponent(m: &PatternMatrix) -> Option<usize> {
    let bound = degree_bound(m.dim());
    let mut power = m.clone();
    for r in 1..=bound {
        if power.is_positive() {
            return Some(r);
        }
        power = power.bool_mul(m);
    }
    None
}
