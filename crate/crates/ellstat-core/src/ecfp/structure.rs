//! Group-structure extraction: E(F_p) = Z/d1 + Z/(d1 d2), with d1 certified
//! by the congruence package (d1^2 | n, d1 | p - 1, d1 | a - 2,
//! d1 <= floor(sqrt(p)) + 1).

use serde::{Deserialize, Serialize};

use super::count::{brute_order, group_order, lcm, order_from_multiple, BRUTE_COUNT_LIMIT};
use super::curve::{Curve, CurveModP, Reduction};
use super::point::Point;
use super::{per_prime_rng, stream, EcfpError};
use crate::modmath::{factorize, sqrt_mod};

/// Consecutive stable samples demanded at the prime l before the l-part of
/// the exponent is accepted: in the worst split (cyclic l-Sylow) a sample
/// misses the top layer with probability 1/l, so requiring
/// l^-K <= 2^-34 leaves no realistic room for a wrong table entry even
/// over 10^8-scale scans.
const STABLE_BITS: f64 = 34.0;
const MAX_SAMPLES: u32 = 4000;
/// Below this p a failed certification falls back to exhaustive enumeration.
const EXACT_FALLBACK_LIMIT: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReductionStatus {
    Good,
    Bad,
}

/// Per-prime record of the reduced curve's invariants. At bad primes the
/// convention d1 = 0 applies and the remaining fields are zeroed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalInvariants {
    pub p: u64,
    pub status: ReductionStatus,
    pub a: i64,
    pub n: u64,
    pub d1: u64,
    pub d2: u64,
    pub supersingular: bool,
}

impl LocalInvariants {
    pub fn bad(p: u64) -> Self {
        LocalInvariants {
            p,
            status: ReductionStatus::Bad,
            a: 0,
            n: 0,
            d1: 0,
            d2: 0,
            supersingular: false,
        }
    }

    pub fn is_good(&self) -> bool {
        self.status == ReductionStatus::Good
    }
}

/// Exact order of P given a multiple N of it; errors if N*P != O.
pub fn point_order(pt: Point, c: &CurveModP, n_multiple: u64) -> Result<u64, EcfpError> {
    if !c.scalar_mul(n_multiple, pt).is_infinity() {
        return Err(EcfpError::BadOrderMultiple);
    }
    Ok(order_from_multiple(c, pt, n_multiple))
}

/// (d1, d2) with E(F_p) = Z/d1 + Z/(d1 d2).
pub fn group_structure(c: &CurveModP, seed: u64) -> Result<(u64, u64), EcfpError> {
    let n = group_order(c, seed);
    structure_with_order(c, n, seed).map(|(d1, d2, _)| (d1, d2))
}

/// Full local record for the reduction of `curve` at p. Primes 2 and 3 are
/// outside the char >= 5 range and get the bad-prime convention directly.
pub fn local_invariants(curve: &Curve, p: u64, seed: u64) -> Result<LocalInvariants, EcfpError> {
    if p < 5 {
        return Ok(LocalInvariants::bad(p));
    }
    match curve.reduce_mod_p(p)? {
        Reduction::Bad => Ok(LocalInvariants::bad(p)),
        Reduction::Good(c) => invariants_mod_p(&c, seed),
    }
}

/// Local invariants of a curve already reduced mod p.
pub fn invariants_mod_p(c: &CurveModP, seed: u64) -> Result<LocalInvariants, EcfpError> {
    let p = c.p;
    let n = group_order(c, seed);
    let (d1, d2, _) = structure_with_order(c, n, seed)?;
    let a = (p + 1) as i64 - n as i64;
    let inv = LocalInvariants {
        p,
        status: ReductionStatus::Good,
        a,
        n,
        d1,
        d2,
        supersingular: a == 0,
    };
    check_invariants(&inv)?;
    Ok(inv)
}

fn check_invariants(inv: &LocalInvariants) -> Result<(), EcfpError> {
    let p = inv.p;
    let fail = |what| Err(EcfpError::Invariant { p, what });
    if inv.a * inv.a > (4 * p) as i64 {
        return fail("Hasse bound");
    }
    if inv.d1 * inv.d1 * inv.d2 != inv.n {
        return fail("n = d1^2 d2");
    }
    if (p - 1) % inv.d1 != 0 {
        return fail("d1 | p - 1");
    }
    if (inv.a - 2).rem_euclid(inv.d1 as i64) != 0 {
        return fail("d1 | a - 2");
    }
    if inv.d1 > p.isqrt() + 1 {
        return fail("d1 <= sqrt(p) + 1");
    }
    Ok(())
}

/// Compute (d1, d2, exponent) given the known group order.
///
/// d1 can only have a prime factor l where l^2 | n and l | p - 1, so only
/// those l need any sampling at all; for most primes d1 = 1 is forced with
/// zero work. Where sampling is needed, the l-valuation of the exponent is
/// the maximum over points of the l-part of their order, accepted once it
/// hits its ceiling (then it is proven) or after enough consecutive stable
/// samples that a miss is beyond reach (see STABLE_BITS).
fn structure_with_order(c: &CurveModP, n: u64, seed: u64) -> Result<(u64, u64, u64), EcfpError> {
    let p = c.p;
    if p < BRUTE_COUNT_LIMIT {
        let e = exact_exponent(c, n);
        return Ok(split_structure(n, e));
    }
    // Ambiguous primes: l with min(floor(v_l(n)/2), v_l(p-1)) > 0.
    struct Track {
        l: u64,
        v_n: u32,
        cofactor: u64, // n / l^v_n
        best: u32,
        ceiling: u32, // v_n - (possible v_l(d1) floor) = v_n
        min_best: u32, // v_n - max possible v_l(d1)
        stable_needed: u32,
        stable: u32,
        done: bool,
    }
    let mut tracks: Vec<Track> = Vec::new();
    for (l, v_n) in factorize(n) {
        if v_n < 2 {
            continue;
        }
        let mut v_p1 = 0u32;
        let mut m = p - 1;
        while m % l == 0 {
            v_p1 += 1;
            m /= l;
        }
        let w = (v_n / 2).min(v_p1);
        if w == 0 {
            continue;
        }
        let mut cof = n;
        for _ in 0..v_n {
            cof /= l;
        }
        tracks.push(Track {
            l,
            v_n,
            cofactor: cof,
            best: 0,
            ceiling: v_n,
            min_best: v_n - w,
            stable_needed: (STABLE_BITS / (l as f64).log2()).ceil() as u32,
            stable: 0,
            done: false,
        });
    }
    if tracks.is_empty() {
        return Ok(split_structure(n, n));
    }
    let mut rng = per_prime_rng(seed, p, stream::STRUCTURE);
    let mut samples = 0u32;
    while tracks.iter().any(|t| !t.done) && samples < MAX_SAMPLES {
        samples += 1;
        let pt = c.random_point(&mut rng);
        for t in tracks.iter_mut() {
            if t.done {
                continue;
            }
            // l-part of ord(pt): strip the cofactor, then count doublings by l.
            let mut q = c.scalar_mul(t.cofactor, pt);
            let mut v = 0u32;
            while !q.is_infinity() {
                q = c.scalar_mul(t.l, q);
                v += 1;
            }
            debug_assert!(v <= t.v_n);
            if v > t.best {
                t.best = v;
                t.stable = 0;
            } else {
                t.stable += 1;
            }
            if t.best == t.ceiling
                || (t.best >= t.min_best && t.stable >= t.stable_needed)
            {
                t.done = true;
            }
        }
    }
    if tracks.iter().any(|t| !t.done) {
        if p < EXACT_FALLBACK_LIMIT {
            let e = exact_exponent(c, n);
            return Ok(split_structure(n, e));
        }
        return Err(EcfpError::Certification { p });
    }
    let mut exponent = n;
    for t in &tracks {
        for _ in 0..(t.v_n - t.best) {
            exponent /= t.l;
        }
    }
    if !certify(c, n, exponent) {
        if p < EXACT_FALLBACK_LIMIT {
            let e = exact_exponent(c, n);
            return Ok(split_structure(n, e));
        }
        return Err(EcfpError::Certification { p });
    }
    Ok(split_structure(n, exponent))
}

fn split_structure(n: u64, exponent: u64) -> (u64, u64, u64) {
    let d1 = n / exponent;
    let d2 = exponent / d1;
    (d1, d2, exponent)
}

/// The congruence package: accepts the sampled exponent only if the implied
/// d1 satisfies every a-priori constraint.
fn certify(c: &CurveModP, n: u64, exponent: u64) -> bool {
    let p = c.p;
    if n % exponent != 0 {
        return false;
    }
    let d1 = n / exponent;
    if exponent % d1 != 0 {
        return false;
    }
    let a = (p + 1) as i64 - n as i64;
    (p - 1) % d1 == 0 && (a - 2).rem_euclid(d1 as i64) == 0 && d1 <= p.isqrt() + 1
}

fn order_with_factors(c: &CurveModP, pt: Point, n: u64, factors: &[(u64, u32)]) -> u64 {
    debug_assert!(c.scalar_mul(n, pt).is_infinity());
    let mut ord = n;
    for &(q, _) in factors {
        while ord % q == 0 && c.scalar_mul(ord / q, pt).is_infinity() {
            ord /= q;
        }
    }
    ord
}

/// Exponent by full enumeration: the lcm of the orders of all points.
fn exact_exponent(c: &CurveModP, n: u64) -> u64 {
    let factors = factorize(n);
    let mut e = 1u64;
    for pt in enumerate_points(c) {
        e = lcm(e, order_with_factors(c, pt, n, &factors));
        if e == n {
            break; // cyclic; cannot grow further
        }
    }
    e
}

/// All affine points of E(F_p); only sensible for small p.
pub(crate) fn enumerate_points(c: &CurveModP) -> Vec<Point> {
    let p = c.p;
    let mut pts = Vec::new();
    for x in 0..p {
        let rhs = c.rhs(x);
        if rhs == 0 {
            pts.push(Point::affine(x, 0));
        } else if let Some(r) = sqrt_mod(rhs, p) {
            pts.push(Point::affine(x, r));
            pts.push(Point::affine(x, p - r));
        }
    }
    pts
}

/// Exponent of the group via brute force; test/oracle helper.
pub(crate) fn exact_structure(c: &CurveModP) -> (u64, u64, u64) {
    let n = brute_order(c);
    let e = exact_exponent(c, n);
    let (d1, d2, _) = split_structure(n, e);
    (n, d1, d2)
}
