//! Exact computation with p-adic clopen sets and locally constant functions,
//! with certificates for scaling sets, multiwavelet sets and generalized
//! scaling sets.

pub mod cyclotomic;
pub mod error;
pub mod format;
pub mod function;
pub mod gss;
pub mod padic;
pub mod report;
pub mod scaling;
pub mod set;

pub use cyclotomic::CyclotomicNumber;
pub use error::{Error, Result};
pub use function::{CharTerm, Direction, LCFunction};
pub use padic::{PAdicRational, Prime};
pub use report::{Check, Status, VerificationReport, Verdict, Witness};
pub use set::{Ball, ClopenSet, DilationProfile, Limits};
