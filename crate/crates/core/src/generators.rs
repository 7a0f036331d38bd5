//! Instance generators: the Wielandt family, matrix lifts, and seeded random
//! tensors.
//!
//! Randomness comes from `SplitMix64` (rand_xoshiro), seeded with
//! `seed_from_u64`. Positions are visited in lexicographic index order and
//! each consumes exactly one `f64` draw (two when values are drawn too), so a
//! given `(n, m, density, seed)` always yields the same tensor.

use rand::{Rng, RngExt, SeedableRng};
use rand_xoshiro::SplitMix64;
use thiserror::Error;

use crate::engine::{analyze, DegreeReport};
use crate::pattern::PatternMatrix;
use crate::tensor::{all_indices, Tensor, TensorError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("the Wielandt matrix needs n >= 2, got {0}")]
    WielandtTooSmall(usize),
    #[error("density must lie in (0, 1], got {0}")]
    BadDensity(f64),
    #[error("matrix is not square: row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("matrix entry ({}, {}) = {value} is negative or not finite", .row + 1, .col + 1)]
    BadMatrixEntry { row: usize, col: usize, value: f64 },
    #[error(
        "no primitive tensor after {tries} tries (n = {n}, m = {m}, density = {density}, seed = {seed})"
    )]
    Exhausted {
        n: usize,
        m: usize,
        density: f64,
        seed: u64,
        tries: usize,
    },
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// How values of generated entries are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Values {
    /// Every present entry is 1.
    #[default]
    Ones,
    /// Uniform in `(0, 1]`.
    Uniform,
}

/// The extremal pattern `M_1`: first row positive in columns `n-1` and `n`,
/// plus the subdiagonal. For `n = 2` both first-row entries fall in columns
/// 1 and 2.
pub fn wielandt_matrix(n: usize) -> Result<PatternMatrix, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::WielandtTooSmall(n));
    }
    let mut m = PatternMatrix::zeros(n);
    m.set(0, n - 2);
    m.set(0, n - 1);
    for k in 1..n {
        m.set(k, k - 1);
    }
    Ok(m)
}

/// Order-`m` tensor with `a[i, j, …, j] = M[i][j]` and zeros elsewhere.
pub fn lift_matrix(matrix: &[Vec<f64>], m: usize) -> Result<Tensor, GeneratorError> {
    let dim = matrix.len();
    let mut entries = Vec::new();
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != dim {
            return Err(GeneratorError::NotSquare {
                row: i,
                len: row.len(),
                dim,
            });
        }
        for (j, &value) in row.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(GeneratorError::BadMatrixEntry {
                    row: i,
                    col: j,
                    value,
                });
            }
            if value > 0.0 {
                entries.push((lift_index(i, j, m), value));
            }
        }
    }
    Ok(Tensor::from_entries(m, dim, entries)?)
}

/// [`lift_matrix`] for a 0/1 pattern.
pub fn lift_pattern(pattern: &PatternMatrix, m: usize) -> Result<Tensor, GeneratorError> {
    let entries = pattern.entries().map(|(i, j)| (lift_index(i, j, m), 1.0));
    Ok(Tensor::from_entries(m, pattern.dim(), entries)?)
}

fn lift_index(i: usize, j: usize, m: usize) -> Vec<usize> {
    let mut idx = vec![j; m];
    idx[0] = i;
    idx
}

/// The sharpness instance: the lift of `M_1`, with primitive degree
/// `(n-1)^2 + 1`.
pub fn wielandt_tensor(n: usize, m: usize) -> Result<Tensor, GeneratorError> {
    lift_pattern(&wielandt_matrix(n)?, m)
}

fn check_density(density: f64) -> Result<(), GeneratorError> {
    if density > 0.0 && density <= 1.0 {
        Ok(())
    } else {
        Err(GeneratorError::BadDensity(density))
    }
}

/// Each of the `n^m` positions present independently with probability
/// `density`.
pub fn random_tensor(
    n: usize,
    m: usize,
    density: f64,
    seed: u64,
    values: Values,
) -> Result<Tensor, GeneratorError> {
    check_density(density)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    sample_tensor(&mut rng, n, m, density, values)
}

fn sample_tensor<R: Rng>(
    rng: &mut R,
    n: usize,
    m: usize,
    density: f64,
    values: Values,
) -> Result<Tensor, GeneratorError> {
    let mut entries = Vec::new();
    for idx in all_indices(m, n) {
        let draw: f64 = rng.random();
        if draw < density {
            let value = match values {
                Values::Ones => 1.0,
                Values::Uniform => 1.0 - rng.random::<f64>(),
            };
            entries.push((idx, value));
        }
    }
    Ok(Tensor::from_entries(m, n, entries)?)
}

/// Rejection-samples random tensors from a single seeded stream until one is
/// primitive.
pub fn random_primitive_tensor(
    n: usize,
    m: usize,
    density: f64,
    seed: u64,
    max_tries: usize,
) -> Result<(Tensor, DegreeReport), GeneratorError> {
    check_density(density)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    for _ in 0..max_tries {
        let a = sample_tensor(&mut rng, n, m, density, Values::Ones)?;
        let report = analyze(&a);
        if report.primitive {
            return Ok((a, report));
        }
    }
    Err(GeneratorError::Exhausted {
        n,
        m,
        density,
        seed,
        tries: max_tries,
    })
}

/// Deterministic sub-seed for trial `index` of a run seeded with `master`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut rng = SplitMix64::seed_from_u64(master);
    let a = rng.next_u64();
    let mut rng = SplitMix64::seed_from_u64(a ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let b = rng.next_u64();
    SplitMix64::seed_from_u64(b ^ index).next_u64()
}

/// Uniformly random `n x n` pattern with each entry present with
/// probability `density`.
pub fn random_pattern(n: usize, density: f64, seed: u64) -> Result<PatternMatrix, GeneratorError> {
    check_density(density)?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut p = PatternMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            if rng.random::<f64>() < density {
                p.set(i, j);
            }
        }
    }
    Ok(p)
}
