//! Exact bounds for subspace codes.
//!
//! The crate evaluates known lower and upper bounds for constant dimension
//! codes `A_q(n,d;k)` and mixed dimension codes `A_q(n,d)` in exact
//! arithmetic, propagates the recursive ones to a fixpoint over a parameter
//! grid, and renders the result as tables, rankings and JSON documents.

pub mod api;
pub mod cdc_lower;
pub mod cdc_upper;
pub mod divisible;
pub mod ef;
pub mod engine;
pub mod lookup;
pub mod mdc;
pub mod model;
pub mod qcalc;
pub mod ratlp;
pub mod spreads;

pub use model::{BoundRecord, CdcParams, Cell, Direction, MdcParams, Source};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("outside the computed grid: {0}")]
    OutOfGrid(String),
    #[error("view undefined: {0}")]
    UndefinedView(String),
    #[error("inconsistent bounds at {cell}: lower {lower} from {lower_by} exceeds upper {upper} from {upper_by}")]
    Inconsistent { cell: String, lower: String, lower_by: String, upper: String, upper_by: String },
    #[error("malformed {what} line {line}: {reason}")]
    Parse { what: &'static str, line: usize, reason: String },
    #[error("cache was built for a different configuration ({0})")]
    CacheMismatch(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
