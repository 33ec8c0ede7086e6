//! Subset arithmetic and extremal sumset constants in finite abelian groups.
//!
//! The crate computes, for a finite abelian group `G` given by its invariant
//! factors, the largest size `M_k(G)` of a subset whose `k`-fold sumset misses
//! part of the group, the refined constant `N_k(G)` over aperiodic maximal
//! subsets, and the related generating-set constant `b⁺_ρ(G)`. It builds the
//! known extremal configurations (coset unions, recursive direct-sum sets,
//! one-element-short coset stacks), analyses subsets of `Z_5^n` through
//! character sums, certifies a family of small linear programs with exact
//! arithmetic, and ships a falsification harness for the classical sumset
//! inequalities and the two-coset stability property.
//!
//! The crate is `no_std`-compatible (`alloc` required); the default `std`
//! feature adds wall-clock timing and, together with `parallel`, rayon-based
//! work splitting with deterministic merges.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod bigfixed;
pub mod constructions;
pub mod group;
pub mod harness;
pub mod lp;
pub mod rng;
pub mod search;
pub mod sets;
pub mod spectral;

mod stopwatch;

pub use group::{diam_plus, diam_plus_bruteforce, enumerate_subgroups, quotient_map};
pub use group::{GroupElement, GroupSpec, Subgroup};
pub use search::{
    bt_rho_search, known_value, mk_bruteforce, mk_formula, mk_search_descending, nk_search,
    reduction_identity_check,
};
pub use search::{ConstantKind, KnownValue, SearchMethod, SearchReport};
pub use sets::{CosetProfile, DenseSubset, SetEngine, TwoCosetCover};

use core::fmt;

/// Hard cap on the order of any group handled by the dense set machinery.
pub const MAX_DENSE_ORDER: u64 = 1 << 20;

/// Errors shared by all modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A cyclic factor below 2 was supplied.
    InvalidFactor(u64),
    /// Element coordinates do not match the group rank.
    DimensionMismatch { expected: usize, found: usize },
    /// Two operands live in different groups.
    GroupMismatch,
    /// The group order exceeds what the operation supports.
    OrderLimit { order: u64, limit: u64 },
    /// An enumeration would visit more candidates than the budget allows.
    /// `covered` reports the inclusive range of subset sizes already scanned
    /// (high to low) before the refusal.
    BudgetExceeded {
        required: u64,
        budget: u64,
        covered: Option<(usize, usize)>,
    },
    /// The supplied member set is not closed under addition.
    NotASubgroup,
    /// The operation needs a group of exponent 5.
    NotExponentFive,
    /// k-fold sumsets are defined for k >= 1 only.
    ZeroFold,
    /// A construction or operation precondition failed.
    Precondition(&'static str),
    /// An exact linear-program certificate came out non-positive.
    CertificationFailed { case: u8, relaxed: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidFactor(m) => write!(f, "invalid cyclic factor {m} (must be >= 2)"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} coordinates, found {found}")
            }
            Error::GroupMismatch => write!(f, "operands belong to different groups"),
            Error::OrderLimit { order, limit } => {
                write!(f, "group order {order} exceeds supported limit {limit}")
            }
            Error::BudgetExceeded {
                required,
                budget,
                covered,
            } => {
                write!(f, "search needs {required} candidates, budget is {budget}")?;
                if let Some((hi, lo)) = covered {
                    write!(f, " (sizes {hi}..={lo} were covered)")?;
                }
                Ok(())
            }
            Error::NotASubgroup => write!(f, "member set is not a subgroup"),
            Error::NotExponentFive => write!(f, "operation requires a group of exponent 5"),
            Error::ZeroFold => write!(f, "k-fold sumset requires k >= 1"),
            Error::Precondition(msg) => write!(f, "precondition failed: {msg}"),
            Error::CertificationFailed { case, relaxed } => {
                write!(f, "certificate margin non-positive (case {case}, k={relaxed})")
            }
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
