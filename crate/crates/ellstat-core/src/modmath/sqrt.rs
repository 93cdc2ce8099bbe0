//! Tonelli-Shanks square roots modulo an odd prime.

use super::arith::{mulmod, powmod};

/// Square root of `a` modulo an odd prime `p`, normalized to the
/// representative in `[0, (p-1)/2]` so point sampling is reproducible.
/// Returns `None` when `a` is a non-residue.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    debug_assert!(p >= 3 && p % 2 == 1);
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let r = if p % 4 == 3 {
        powmod(a, (p + 1) / 4, p)
    } else {
        tonelli_shanks(a, p)
    };
    debug_assert_eq!(mulmod(r, r, p), a);
    Some(r.min(p - r))
}

fn tonelli_shanks(a: u64, p: u64) -> u64 {
    // p - 1 = q * 2^s with q odd.
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    // Smallest non-residue as the generator of the 2-Sylow action;
    // deterministic, and fast since half of all residues qualify.
    let mut z = 2u64;
    while powmod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mulmod(t2, t2, p);
            i += 1;
        }
        let mut b = c;
        for _ in 0..(m - i - 1) {
            b = mulmod(b, b, p);
        }
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    r
}
