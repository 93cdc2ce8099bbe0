//! Exact point counting: enumeration for small p, otherwise baby-step
//! giant-step order finding in the Hasse interval on the curve and its
//! quadratic twist, until exactly one candidate order survives.

use std::collections::HashMap;

use rand::Rng;

use super::curve::CurveModP;
use super::point::Point;
use super::{per_prime_rng, stream};
use crate::modmath::{factorize, mulmod, powmod};

/// Below this prime the order is found by direct enumeration.
pub const BRUTE_COUNT_LIMIT: u64 = 1000;

/// |E(F_p)|, exact. Satisfies the Hasse bound (p + 1 - n)^2 <= 4p.
pub fn group_order(c: &CurveModP, seed: u64) -> u64 {
    let n = if c.p < BRUTE_COUNT_LIMIT {
        brute_order(c)
    } else {
        let mut rng = per_prime_rng(seed, c.p, stream::COUNT);
        bsgs_order(c, &mut rng)
    };
    let h = (4 * c.p).isqrt();
    debug_assert!(c.p + 1 - h <= n && n <= c.p + 1 + h, "Hasse violated at p={}", c.p);
    n
}

/// Quadratic twist by the least non-residue g: y^2 = x^3 + A g^2 x + B g^3.
/// Orders pair up as n(E) + n(twist) = 2p + 2.
pub fn quadratic_twist(c: &CurveModP) -> CurveModP {
    let p = c.p;
    let mut g = 2u64;
    while powmod(g, (p - 1) / 2, p) != p - 1 {
        g += 1;
    }
    let g2 = mulmod(g, g, p);
    CurveModP { p, a: mulmod(c.a, g2, p), b: mulmod(c.b, mulmod(g2, g, p), p) }
}

/// Direct count: n = 1 + sum over x of #roots of y^2 = rhs(x).
pub(crate) fn brute_order(c: &CurveModP) -> u64 {
    let p = c.p;
    let mut is_sq = vec![false; p as usize];
    for y in 0..=(p - 1) / 2 {
        is_sq[mulmod(y, y, p) as usize] = true;
    }
    let mut n = 1u64;
    for x in 0..p {
        let rhs = c.rhs(x);
        if rhs == 0 {
            n += 1;
        } else if is_sq[rhs as usize] {
            n += 2;
        }
    }
    n
}

fn bsgs_order(c: &CurveModP, rng: &mut impl Rng) -> u64 {
    let p = c.p;
    let h = (4 * p).isqrt();
    let (lo, hi) = (p + 1 - h, p + 1 + h);
    let twist = quadratic_twist(c);
    let two_p_plus_2 = 2 * p + 2;
    let mut l_curve = 1u64;
    let mut l_twist = 1u64;
    for round in 0..200u32 {
        let on_curve = round % 2 == 0;
        let side = if on_curve { c } else { &twist };
        let pt = side.random_point(rng);
        let m = smallest_annihilator(side, pt, lo, hi);
        let ord = order_from_multiple(side, pt, m);
        if on_curve {
            l_curve = lcm(l_curve, ord);
        } else {
            l_twist = lcm(l_twist, ord);
        }
        // Candidate orders: multiples of l_curve in the window whose twist
        // complement is a multiple of l_twist.
        let mut candidate = None;
        let mut count = 0u32;
        let mut m0 = lo.div_ceil(l_curve) * l_curve;
        while m0 <= hi {
            if (two_p_plus_2 - m0) % l_twist == 0 {
                count += 1;
                if count > 1 {
                    break;
                }
                candidate = Some(m0);
            }
            m0 += l_curve;
        }
        assert!(count > 0, "no candidate order at p={p}; arithmetic bug");
        if count == 1 {
            return candidate.unwrap();
        }
    }
    unreachable!("point counting did not converge at p={p}")
}

/// Smallest m in [lo, hi] with m*P = O. The caller guarantees one exists
/// (the group order is always in the Hasse window).
fn smallest_annihilator(c: &CurveModP, pt: Point, lo: u64, hi: u64) -> u64 {
    let p = c.p;
    let width = hi - lo + 1;
    let s = width.isqrt() + 1;
    // Baby steps j*P for 0 < j < s, smallest j kept per point.
    let mut table: HashMap<(u64, u64), u64> = HashMap::with_capacity(s as usize);
    let mut baby = pt;
    for j in 1..s {
        if let Point::Affine { x, y } = baby {
            table.entry((x, y)).or_insert(j);
        }
        baby = c.add(baby, pt);
    }
    let giant = c.scalar_mul(s, pt);
    let mut r = c.scalar_mul(lo, pt);
    let mut base = lo;
    loop {
        match r {
            Point::Infinity => return base,
            Point::Affine { x, y } => {
                let neg = (x, if y == 0 { 0 } else { p - y });
                if let Some(&j) = table.get(&neg) {
                    let m = base + j;
                    if m <= hi {
                        return m;
                    }
                }
            }
        }
        base += s;
        if base > hi {
            break;
        }
        r = c.add(r, giant);
    }
    unreachable!("no annihilator of a curve point in the Hasse window at p={p}")
}

/// Exact order of P given any multiple `mult` of it.
pub(crate) fn order_from_multiple(c: &CurveModP, pt: Point, mult: u64) -> u64 {
    debug_assert!(c.scalar_mul(mult, pt).is_infinity());
    let mut ord = mult;
    for (q, _) in factorize(mult) {
        while ord % q == 0 && c.scalar_mul(ord / q, pt).is_infinity() {
            ord /= q;
        }
    }
    ord
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecfp::Curve;

    fn reduce(coeffs: [i64; 5], p: u64) -> CurveModP {
        Curve::from_i64(coeffs).unwrap().reduce_mod_p(p).unwrap().good().unwrap()
    }

    #[test]
    fn curve_a_counts() {
        // A: y^2 = x^3 - x. Orders from the spec's worked examples.
        assert_eq!(group_order(&reduce([0, 0, 0, -1, 0], 5), 1), 8);
        assert_eq!(group_order(&reduce([0, 0, 0, -1, 0], 7), 1), 8);
        assert_eq!(group_order(&reduce([0, 0, 0, -1, 0], 17), 1), 16);
    }

    #[test]
    fn twist_law_small() {
        for p in [5u64, 7, 11, 13, 101, 499] {
            for (a, b) in [(1u64, 3u64), (2, 2), (4, 1)] {
                if let Some(c) = CurveModP::try_new(p, a, b) {
                    let t = quadratic_twist(&c);
                    assert_eq!(brute_order(&c) + brute_order(&t), 2 * p + 2, "p={p} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn bsgs_matches_brute_force_above_threshold() {
        // Independent dual route: enumeration vs BSGS for primes just above
        // the production cutover.
        let primes = [1009u64, 1013, 1019, 1021, 1031, 2003, 4001];
        for &p in &primes {
            let mut rng = per_prime_rng(99, p, 7);
            for _ in 0..3 {
                let a = rng.gen_range(0..p);
                let b = rng.gen_range(0..p);
                let Some(c) = CurveModP::try_new(p, a, b) else { continue };
                let brute = brute_order(&c);
                let fast = bsgs_order(&c, &mut per_prime_rng(5, p, stream::COUNT));
                assert_eq!(brute, fast, "p={p} A={a} B={b}");
            }
        }
    }

    #[test]
    fn order_from_multiple_strips_correctly() {
        let c = reduce([0, 0, 0, -1, 0], 5);
        assert_eq!(order_from_multiple(&c, Point::affine(0, 0), 8), 2);
        assert_eq!(order_from_multiple(&c, Point::affine(3, 2), 8), 4);
        assert_eq!(order_from_multiple(&c, Point::Infinity, 8), 1);
    }

    #[test]
    fn hasse_bound_on_larger_prime() {
        let p = 1_000_003u64;
        let c = reduce([0, 0, 0, 6, -2], p);
        let n = group_order(&c, 1);
        let a = (p as i64 + 1) - n as i64;
        assert!((a * a) as u64 <= 4 * p);
        // and the twist law
        let t = quadratic_twist(&c);
        assert_eq!(n + group_order(&t, 1), 2 * p + 2);
    }
}
