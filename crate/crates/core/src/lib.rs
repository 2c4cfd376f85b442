//! Verifier for primitive normal pairs (alpha, f(alpha)) in F_{q^m} with a
//! prescribed trace of alpha^{-1}.

pub mod error;
pub mod exact;
pub mod gf;
pub mod intfact;
pub mod polyfact;
pub mod report;
pub mod criteria;
pub mod par;
pub mod cache;
pub mod search;
pub mod ffield;
pub mod charsum;

pub use error::{Error, Result};
