//! Primitivity and primitive degree of nonnegative tensors.
//!
//! A nonnegative order-`m` dimension-`n` tensor `A` is primitive when some
//! power `A^r` (under the general tensor product) has an entrywise positive
//! majorization matrix; the least such `r` is its primitive degree, and it
//! never exceeds `(n-1)^2 + 1`. Everything here works on zero patterns:
//!
//! - [`tensor`] / [`tns`]: the sparse tensor model, the general product at
//!   small scale, and the text format.
//! - [`engine`]: Boolean propagation of `Z(M(A^k))` and [`engine::analyze`].
//! - [`digraph`]: walks, short cycles and necessary conditions on `M(A)`.
//! - [`generators`]: Wielandt lifts and seeded random instances.
//! - [`oracle`]: independent slow paths used for cross-checking.
//! - [`cli`]: the `primdeg` command-line tool.

pub mod cli;
pub mod digraph;
pub mod engine;
pub mod generators;
pub mod oracle;
pub mod pattern;
pub mod tensor;
pub mod tns;

pub use digraph::{CycleInfo, Digraph, Violation};
pub use engine::{
    analyze, column_fill_trace, degree_bound, essential_positive, DegreeReport, Propagator,
};
pub use pattern::{PatternMatrix, PatternVector};
pub use tensor::{shao_product, tensor_power, Tensor, TensorError, DEFAULT_MAX_ENTRIES};
pub use tns::{parse_tensor, write_tensor, ParseError};
