//! Exact arithmetic for the group structure of elliptic curves over prime
//! fields, and the prime statistics built on top of it: splitting sums,
//! outside primes, elliptic twins, closed-form constants and the per-prime
//! census of realizable `d1` invariants.
//!
//! All counts are exact integers; scans are deterministic given a seed and
//! merge as commutative monoids, so results are independent of how a prime
//! range is partitioned across workers.

pub mod census;
pub mod constants;
pub mod ecfp;
pub mod modmath;
pub mod scan;
pub mod splitting;
pub mod twins;

pub use census::CensusRecord;
pub use ecfp::{Curve, CurveModP, LocalInvariants, Point, ReductionStatus};
pub use modmath::{PrimeRange, QuadChar};
pub use scan::ScanError;
pub use splitting::SplitAccumulator;
pub use twins::{TwinHistogram, TwinReport};
