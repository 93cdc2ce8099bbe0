//! Factorization of 62-bit integers: trial division plus Pollard rho with
//! Brent cycling. Needed only for point-order computations and the
//! multiplicative functions, so no attempt at larger inputs is made.

use super::arith::mulmod;
use super::primality::is_prime;

/// Prime factorization as ascending `(prime, exponent)` pairs. `factorize(1)`
/// is empty.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if p * p > n {
            break;
        }
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if n > 1 {
        let mut stack = vec![n];
        let mut rest = Vec::new();
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime(m) {
                rest.push(m);
                continue;
            }
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
        rest.sort_unstable();
        let mut i = 0;
        while i < rest.len() {
            let p = rest[i];
            let mut e = 0;
            while i < rest.len() && rest[i] == p {
                e += 1;
                i += 1;
            }
            out.push((p, e));
        }
    }
    out.sort_unstable_by_key(|&(p, _)| p);
    out
}

/// All divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut divs = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = divs.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            divs.extend(prev.iter().map(|d| d * pe));
        }
    }
    divs.sort_unstable();
    divs
}

/// A nontrivial factor of composite `n > 1`.
fn pollard_rho(n: u64) -> u64 {
    debug_assert!(n > 1 && !is_prime(n));
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        if let Some(d) = rho_round(n, c) {
            return d;
        }
        c += 1;
    }
}

fn rho_round(n: u64, c: u64) -> Option<u64> {
    let step = |x: u64| (mulmod(x, x, n) + c) % n;
    let (mut x, mut y) = (2u64, 2u64);
    loop {
        x = step(x);
        y = step(step(y));
        if x == y {
            return None; // cycle closed without a factor; caller retries
        }
        let d = gcd(x.abs_diff(y), n);
        if d > 1 {
            return if d < n { Some(d) } else { None };
        }
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
