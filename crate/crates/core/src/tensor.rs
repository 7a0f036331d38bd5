//! Sparse nonnegative tensors in coordinate form.
//!
//! Only strictly positive entries are stored. Indices are 0-based here; the
//! TNS reader and writer convert to and from 1-based indices.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::pattern::PatternMatrix;

/// Default ceiling on the number of entries a materialized product may need.
pub const DEFAULT_MAX_ENTRIES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TensorError {
    #[error("order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("index tuple has {got} components, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("index {} out of range 1..={dim}", .index + 1)]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("entry value {0} is not a finite positive number")]
    BadValue(f64),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("product needs up to {estimate} entries, over the cap of {cap}")]
    SizeCap { estimate: u128, cap: usize },
    #[error("power exponent must be at least 1")]
    ZeroPower,
}

/// An order-`m`, dimension-`n` nonnegative tensor.
#[derive(Clone, PartialEq)]
pub struct Tensor {
    order: usize,
    dim: usize,
    entries: BTreeMap<Vec<usize>, f64>,
}

impl Tensor {
    /// Builds a tensor from `(index, value)` pairs. Duplicate indices are
    /// summed. Every value must be finite and strictly positive.
    pub fn from_entries<I>(order: usize, dim: usize, entries: I) -> Result<Self, TensorError>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        if order < 2 {
            return Err(TensorError::OrderTooSmall(order));
        }
        if dim == 0 {
            return Err(TensorError::ZeroDimension);
        }
        let mut map: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (index, value) in entries {
            if index.len() != order {
                return Err(TensorError::Arity {
                    expected: order,
                    got: index.len(),
                });
            }
            if let Some(&bad) = index.iter().find(|&&i| i >= dim) {
                return Err(TensorError::IndexOutOfRange { index: bad, dim });
            }
            if !(value.is_finite() && value > 0.0) {
                return Err(TensorError::BadValue(value));
            }
            *map.entry(index).or_insert(0.0) += value;
        }
        if let Some(&v) = map.values().find(|v| !v.is_finite()) {
            return Err(TensorError::BadValue(v));
        }
        Ok(Tensor {
            order,
            dim,
            entries: map,
        })
    }

    /// Every one of the `dim^order` positions set to 1.
    pub fn all_ones(order: usize, dim: usize) -> Result<Self, TensorError> {
        Self::from_entries(order, dim, all_indices(order, dim).map(|idx| (idx, 1.0)))
    }

    /// `I_n` as an order-2 tensor.
    pub fn identity_matrix(dim: usize) -> Result<Self, TensorError> {
        Self::from_entries(2, dim, (0..dim).map(|i| (vec![i, i], 1.0)))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored (positive) entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.entries.get(index).copied().unwrap_or(0.0)
    }

    /// Stored entries in lexicographic index order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.entries.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// Same support with every value replaced by 1.
    pub fn zero_pattern(&self) -> Tensor {
        Tensor {
            order: self.order,
            dim: self.dim,
            entries: self.entries.keys().map(|k| (k.clone(), 1.0)).collect(),
        }
    }

    /// True when every stored entry has the shape `a_{i j j ... j}`, i.e. the
    /// tensor is the lift of its majorization matrix.
    pub fn is_matrix_lift(&self) -> bool {
        self.entries
            .keys()
            .all(|idx| idx[2..].iter().all(|&t| t == idx[1]))
    }

    /// Zero pattern of the majorization matrix: `(i, j)` is set iff
    /// `a_{i j ... j} > 0`.
    pub fn majorization(&self) -> PatternMatrix {
        let mut m = PatternMatrix::zeros(self.dim);
        for idx in self.entries.keys() {
            let j = idx[1];
            if idx[2..].iter().all(|&t| t == j) {
                m.set(idx[0], j);
            }
        }
        m
    }

    /// Rows `u` for which no entry `a_{u ...}` is stored.
    pub fn empty_rows(&self) -> Vec<usize> {
        let mut seen = vec![false; self.dim];
        for idx in self.entries.keys() {
            seen[idx[0]] = true;
        }
        (0..self.dim).filter(|&u| !seen[u]).collect()
    }
}

impl std::fmt::Debug for Tensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Tensor")
            .field("order", &self.order)
            .field("dim", &self.dim)
            .field("entries", &self.entries)
            .finish()
    }
}

/// All of `[dim]^order` in lexicographic order.
pub fn all_indices(order: usize, dim: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (dim as u128).checked_pow(order as u32).unwrap_or(u128::MAX);
    let mut current = vec![0usize; order];
    let mut produced: u128 = 0;
    std::iter::from_fn(move || {
        if produced >= total || dim == 0 {
            return None;
        }
        let out = current.clone();
        produced += 1;
        for slot in current.iter_mut().rev() {
            *slot += 1;
            if *slot < dim {
                break;
            }
            *slot = 0;
        }
        Some(out)
    })
}

/// Upper bound on the entry count of `a * b`: the number of nonzero product
/// terms the expansion visits.
pub fn product_term_count(a: &Tensor, b: &Tensor) -> u128 {
    let mut row_sizes = vec![0u128; b.dim];
    for idx in b.entries.keys() {
        row_sizes[idx[0]] += 1;
    }
    a.entries
        .keys()
        .map(|idx| {
            idx[1..]
                .iter()
                .fold(1u128, |acc, &t| acc.saturating_mul(row_sizes[t]))
        })
        .fold(0u128, |acc, x| acc.saturating_add(x))
}

/// The general product `D = A B` of an order-`m` tensor with an order-`k`
/// tensor of the same dimension:
///
/// `d[i, α_1, …, α_{m-1}] = Σ a[i, i_2, …, i_m] · b[i_2, α_1] ⋯ b[i_m, α_{m-1}]`
///
/// where each `α_t` ranges over `[n]^{k-1}`. The result has order
/// `(m-1)(k-1)+1`. Refuses when the expansion would exceed `max_entries`.
pub fn shao_product(a: &Tensor, b: &Tensor, max_entries: usize) -> Result<Tensor, TensorError> {
    if a.dim != b.dim {
        return Err(TensorError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    let estimate = product_term_count(a, b);
    if estimate > max_entries as u128 {
        return Err(TensorError::SizeCap {
            estimate,
            cap: max_entries,
        });
    }

    let mut b_rows: Vec<Vec<(&[usize], f64)>> = vec![Vec::new(); b.dim];
    for (idx, v) in b.entries() {
        b_rows[idx[0]].push((&idx[1..], v));
    }

    let out_order = (a.order - 1) * (b.order - 1) + 1;
    let mut out: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    let mut key = Vec::with_capacity(out_order);

    for (idx, av) in a.entries() {
        let choices: Vec<&[(&[usize], f64)]> =
            idx[1..].iter().map(|&t| b_rows[t].as_slice()).collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        // odometer over one B-row entry per trailing index of `a`
        let mut pick = vec![0usize; choices.len()];
        'expand: loop {
            key.clear();
            key.push(idx[0]);
            let mut value = av;
            for (c, &p) in choices.iter().zip(&pick) {
                let (tail, bv) = c[p];
                key.extend_from_slice(tail);
                value *= bv;
            }
            *out.entry(key.clone()).or_insert(0.0) += value;

            let mut slot = pick.len();
            loop {
                if slot == 0 {
                    break 'expand;
                }
                slot -= 1;
                pick[slot] += 1;
                if pick[slot] < choices[slot].len() {
                    break;
                }
                pick[slot] = 0;
            }
        }
    }

    out.retain(|_, v| *v > 0.0);
    Ok(Tensor {
        order: out_order,
        dim: a.dim,
        entries: out,
    })
}

/// `A^r`, computed as the left fold `A · A^{r-1}`.
pub fn tensor_power(a: &Tensor, r: u32, max_entries: usize) -> Result<Tensor, TensorError> {
    if r == 0 {
        return Err(TensorError::ZeroPower);
    }
    let mut acc = a.clone();
    for _ in 1..r {
        acc = shao_product(a, &acc, max_entries)?;
    }
    Ok(acc)
}
