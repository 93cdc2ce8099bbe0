//! Elliptic curves over prime fields: reduction from Q, point arithmetic,
//! point counting, group-structure extraction (d1, d2) and a brute-force
//! census oracle for small p.
//!
//! The base field is restricted to prime p >= 5; curves are reduced to short
//! Weierstrass form after the standard completion of square and cube.

mod census;
pub(crate) mod count;
mod curve;
mod point;
pub mod small;
mod structure;

pub use census::{brute_force_census, CensusEntry, DEFAULT_ORACLE_LIMIT};
pub use count::{group_order, quadratic_twist, BRUTE_COUNT_LIMIT};
pub use curve::{Curve, CurveModP, CurveReducer, Reduction};
pub use point::Point;
pub use structure::{
    group_structure, invariants_mod_p, local_invariants, point_order, LocalInvariants,
    ReductionStatus,
};

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EcfpError {
    #[error("base prime {0} below supported range (p >= 5)")]
    SmallPrime(u64),
    #[error("singular curve (discriminant zero)")]
    Singular,
    #[error("N is not a multiple of the point order")]
    BadOrderMultiple,
    #[error("group structure certification failed at p = {p}")]
    Certification { p: u64 },
    #[error("invariant violated at p = {p}: {what}")]
    Invariant { p: u64, what: &'static str },
    #[error("p = {0} beyond the brute-force oracle limit")]
    OracleLimit(u64),
}

/// Deterministic per-prime RNG: a stable mix of the global seed, the prime
/// and a stream tag, so range-partitioned scans reproduce exactly.
pub fn per_prime_rng(seed: u64, p: u64, stream: u8) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&p.to_le_bytes());
    key[16] = stream;
    key[17..24].copy_from_slice(b"ellstat");
    ChaCha8Rng::from_seed(key)
}

/// RNG streams used by the different samplers.
pub mod stream {
    pub const COUNT: u8 = 0;
    pub const STRUCTURE: u8 = 1;
    pub const SEARCH: u8 = 2;
}
