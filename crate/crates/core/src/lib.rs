//! Logarithms of the modified Bessel functions `I_v(x)` and `K_v(x)`,
//! computed entirely in the log domain so that no intermediate underflows
//! or overflows, plus von Mises-Fisher fitting built on top of them.
//!
//! ```
//! use logbessel::{log_iv, log_kv};
//!
//! let i = log_iv(1000.0, 1000.0).unwrap();
//! let k = log_kv(0.5, 1.0).unwrap();
//! assert!(i.value.is_finite());
//! assert!((k.value + 0.774_208_647).abs() < 1e-8);
//! ```

pub mod asymptotics;
pub mod batch;
mod dd;
pub mod dispatch;
mod error;
pub mod integral_k;
pub mod logspace;
pub mod series_i;
pub mod uk_table;
pub mod vmf;

pub use batch::{evaluate_batch, BatchMode, BatchRequest, BatchResult, EvalPoint};
pub use dispatch::{
    eval, log_i0, log_i1, log_iv, log_kv, select_method, BesselFn, LogValue, MethodKind,
};
pub use error::{BesselError, Result};
pub use uk_table::UkTable;
