//! Exact-arithmetic toolkit for CM fields, ideal lattices and the linear-algebra
//! data of principally polarized CM abelian varieties.
//!
//! Modules, bottom-up: [`linalg`], [`ball`], [`poly`], [`field`] (CM fields and
//! certified embeddings), [`ideal`] (fractional ideals, class groups, units),
//! [`herm`] (hermitian/skew-hermitian forms), [`serre`] (skew objects and the
//! Serre tensor calculus), [`existence`], [`jphi`] (the ideal J_Phi) and
//! [`tensor_cat`] (morphism words in a tensor product over a 2-group).

pub mod ball;
pub mod db;
pub mod existence;
pub mod expr;
pub mod field;
pub mod herm;
pub mod ideal;
pub mod jphi;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod serre;
pub mod suites;
pub mod tensor_cat;

use std::fmt;

/// Errors shared by every module. The CLI maps them onto exit codes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("validation failed [{invariant}]: {detail}")]
    Invalid { invariant: String, detail: String },
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn invalid(invariant: impl fmt::Display, detail: impl fmt::Display) -> Self {
        Error::Invalid { invariant: invariant.to_string(), detail: detail.to_string() }
    }
    pub fn malformed(msg: impl fmt::Display) -> Self {
        Error::Malformed(msg.to_string())
    }
    /// Name of the violated invariant, if this is a validation failure.
    pub fn invariant(&self) -> Option<&str> {
        match self {
            Error::Invalid { invariant, .. } => Some(invariant),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Enumeration cap used when no explicit budget is given.
pub const DEFAULT_BUDGET: usize = 2_000_000;

/// Default embedding precision in bits.
pub const DEFAULT_PREC: u32 = 128;

/// Enumeration budget from `CMHT_BUDGET`, or [`DEFAULT_BUDGET`].
pub fn budget() -> usize {
    std::env::var("CMHT_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Embedding precision in bits from `CMHT_PREC`, or [`DEFAULT_PREC`].
pub fn prec() -> u32 {
    std::env::var("CMHT_PREC")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&p: &u32| (16..=1 << 16).contains(&p))
        .unwrap_or(DEFAULT_PREC)
}
