//! Modular arithmetic on `u64` with double-width intermediates.

/// `(a * b) mod m`. Requires `m < 2^62`; the product is formed in `u128`.
#[inline]
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(m < super::MODULUS_LIMIT);
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(a < m && b < m);
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64, m: u64) -> u64 {
    debug_assert!(a < m && b < m);
    if a >= b {
        a - b
    } else {
        a + m - b
    }
}

/// `base^exp mod m` by square-and-multiply.
pub fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    base %= m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m` via extended Euclid, or `None` if `gcd(a, m) != 1`.
pub fn invmod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// Exact integer square root.
#[inline]
pub fn isqrt_u64(n: u64) -> u64 {
    n.isqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powmod_small() {
        assert_eq!(powmod(2, 10, 1000), 24);
        assert_eq!(powmod(5, 0, 7), 1);
        assert_eq!(powmod(3, 4, 100), 81);
    }

    #[test]
    fn invmod_matches_fermat() {
        for p in [5u64, 7, 101, 1009, 999999937] {
            for a in 1..50.min(p) {
                let inv = invmod(a, p).unwrap();
                assert_eq!(mulmod(a, inv, p), 1);
                assert_eq!(inv, powmod(a, p - 2, p));
            }
        }
        assert_eq!(invmod(6, 9), None);
        assert_eq!(invmod(0, 7), None);
    }

    #[test]
    fn isqrt_exact_boundaries() {
        for n in 0..2000u64 {
            let r = isqrt_u64(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
        }
        assert_eq!(isqrt_u64(u64::MAX), (1u64 << 32) - 1);
    }
}
