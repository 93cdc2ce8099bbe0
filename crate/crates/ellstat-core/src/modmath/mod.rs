//! Exact integer and modular arithmetic: deterministic primality, prime
//! streaming, modular square roots and the multiplicative functions the
//! statistics need.
//!
//! Moduli are limited to `p < 2^62` so that all modular products fit in a
//! `u128` intermediate; this is a hard documented limit, far beyond the
//! desk scale the scans run at.

mod arith;
mod factor;
mod multiplicative;
mod primality;
mod sieve;
mod sqrt;

pub use arith::{addmod, invmod, isqrt_u64, mulmod, powmod, submod};
pub use factor::{divisors, factorize};
pub use multiplicative::{
    euler_phi, gl2_order, ideal_norm_count, kronecker, phi_plus, psi, quad_field_conductor,
    QuadChar,
};
pub use primality::is_prime;
pub use sieve::{prime_count, small_primes, PrimeRange, DEFAULT_SEGMENT_SPAN};
pub use sqrt::sqrt_mod;

/// Hard upper bound on any modulus handled by this module.
pub const MODULUS_LIMIT: u64 = 1 << 62;
