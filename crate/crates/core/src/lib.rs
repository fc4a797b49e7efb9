//! Explicit bounds for primes in short intervals, with the numerical
//! machinery to check them: a segmented von Mangoldt sieve, a Riemann zero
//! table, the truncated explicit formula and the lemma bounds.

// `!(a < b)` is deliberate throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod explicit;
pub mod gaps;
pub mod numeric;
pub mod query;
pub mod report;
pub mod sieve;
pub mod verify;
pub mod zeros;

pub use bounds::{theorem_rhs, CONSTANTS};
pub use error::{Error, Result};
pub use explicit::{SmoothedResidual, TruncatedPsi1, ZeroSumSplit};
pub use gaps::{max_gap_scan, GapRecord, GapScan};
pub use numeric::DoubleF64;
pub use query::IntervalQuery;
pub use sieve::{LambdaSource, SegmentedSieve, SieveTable};
pub use verify::{BoundReport, GridOptions, GridReport, ScaleRule, XGrid};
pub use zeros::{CountingReport, ZeroTable};
