//! Deterministic Miller-Rabin for the 64-bit range.

use super::arith::{mulmod, powmod};

/// The first twelve primes are a proven witness set for every `n < 2^64`
/// (Sorenson & Webster), so the test below is exact, not probabilistic.
const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Exact primality test for `n <= 2^62`.
pub fn is_prime(n: u64) -> bool {
    debug_assert!(n <= super::MODULUS_LIMIT);
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in WITNESSES.iter() {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_units() {
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(!is_prime(12818000));
        assert!(is_prime(196561));
        assert!(is_prime(4095037));
    }

    #[test]
    fn agrees_with_trial_division_to_1e4() {
        let trial = |n: u64| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
        for n in 0..10_000u64 {
            assert_eq!(is_prime(n), trial(n), "disagreement at {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // Carmichael numbers and strong pseudoprimes to small bases.
        for n in [561u64, 1105, 2047, 3215031751, 3825123056546413051] {
            assert!(!is_prime(n), "{n} accepted");
        }
        assert!(is_prime(2147483647)); // 2^31 - 1
        assert!(is_prime((1 << 61) - 1)); // Mersenne prime near the modulus limit
    }
}
