//! Exact generating polynomials for factorial-weighted power sums, their
//! finite and p-adic summation identities, and formal power series checks.

pub mod bfile;
pub mod cache;
pub mod error;
pub mod exec;
pub mod generators;
pub mod kernel;
pub mod padic;
pub mod poly;
pub mod report;
pub mod series;
pub mod suites;
pub mod summation;

pub use error::{Error, Result};
pub use exec::Execution;
pub use generators::{gen_a, gen_uv, GeneratedTables, SequenceId, TableFile};
pub use padic::{PadicApprox, Prime, Valuation};
pub use poly::{GenPoly, RatPoly, Sign};
pub use report::{CheckReport, SuiteReport, Verdict};
