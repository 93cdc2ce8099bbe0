//! The per-prime census of realizable d1 invariants: existence criteria,
//! class-number machinery over binary quadratic forms, Schoof's weighted
//! count, cusp counts and the averaged census sums.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modmath::{divisors, phi_plus, psi, PrimeRange};
use crate::scan::{run_blocks, BlockPlan, Merge, ScanError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CensusError {
    #[error("{0} is not a valid negative discriminant")]
    BadDiscriminant(i64),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
}

/// Witness search for d | d1(E) existence over F_p: some integer a with
/// a^2 < 4p, a = 2 mod d and p + 1 - a = 0 mod d^2. Candidates walk the
/// single residue class a = p + 1 mod d^2 through the Hasse range in
/// ascending order; the first hit is returned.
pub fn d1_exists_congruence(p: u64, d: u64) -> Option<i64> {
    debug_assert!(p >= 5 && d >= 1);
    let p = p as i128;
    let d = d as i128;
    let d2 = d * d;
    let four_p = 4 * p;
    // smallest a = (p+1 mod d^2) with a^2 < 4p, scanning upward
    let a0 = (p + 1).rem_euclid(d2);
    // lowest candidate > -2 sqrt(p): shift a0 down by whole d^2 steps
    let bound = (four_p as u128).isqrt() as i128 + 1;
    let k = (a0 + bound) / d2;
    let mut a = a0 - k * d2;
    while a * a >= four_p {
        a += d2;
        if a > bound {
            return None;
        }
    }
    while a * a < four_p {
        if (a - 2).rem_euclid(d) == 0 {
            return Some(a as i64);
        }
        a += d2;
    }
    None
}

/// The modular-curve criterion: d is a d1 value over F_p iff some trace a
/// with a^2 < 4p admits x mod d^2 with x = +-1 mod d (one global sign) and
/// x^2 - ax + p = 0 mod d^2. The odd-part divisibility e^2 | a^2 - 4p is a
/// necessary condition used as a fast filter before the x enumeration; the
/// sign coherence across prime parts makes the filter alone insufficient.
pub fn d1_exists_modular(p: u64, d: u64) -> bool {
    debug_assert!(p >= 5 && d >= 1);
    if (p - 1) % d != 0 {
        return false;
    }
    if d == 1 {
        return true; // x = 0 mod 1 solves everything; a = 0 is in range
    }
    let e = odd_part(d);
    let pi = p as i128;
    let bound = (4 * p).isqrt() as i128 + 1;
    let e2 = (e as i128) * (e as i128);
    for a in -bound..=bound {
        if a * a >= 4 * pi {
            continue;
        }
        if (a * a - 4 * pi).rem_euclid(e2) != 0 {
            continue;
        }
        if quadratic_has_unit_solution(pi, a, d) {
            return true;
        }
    }
    false
}

/// Reference evaluator without the odd-part filter: the raw cor-critere
/// system, enumerated for every trace. Cross-checks the filtered path.
pub fn d1_exists_modular_direct(p: u64, d: u64) -> bool {
    debug_assert!(p >= 5 && d >= 1);
    if (p - 1) % d != 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let pi = p as i128;
    let bound = (4 * p).isqrt() as i128 + 1;
    (-bound..=bound)
        .filter(|a| a * a < 4 * pi)
        .any(|a| quadratic_has_unit_solution(pi, a, d))
}

fn odd_part(d: u64) -> u64 {
    d >> d.trailing_zeros()
}

/// Does x^2 - ax + p = 0 mod d^2 have a solution with x = +-1 mod d?
fn quadratic_has_unit_solution(p: i128, a: i128, d: u64) -> bool {
    let di = d as i128;
    let d2 = di * di;
    let mut x = 1i128;
    while x < d2 {
        for xx in [x, (d2 - x) % d2] {
            if (xx * xx - a * xx + p).rem_euclid(d2) == 0 {
                return true;
            }
        }
        x += di;
    }
    false
}

/// Per-prime record of D1(p) with witnesses and the small/large split at
/// the exact threshold d^4 < 16p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub p: u64,
    /// Divisors of p - 1 up to floor(sqrt(p)) + 1.
    pub divisor_pool: Vec<u64>,
    /// Members of D1(p) with a witness trace each.
    pub members: Vec<(u64, i64)>,
    pub small_count: u64,
    pub large_count: u64,
}

impl CensusRecord {
    pub fn member_values(&self) -> Vec<u64> {
        self.members.iter().map(|&(d, _)| d).collect()
    }
}

/// D1(p) by the congruence criterion, with its structural invariants
/// asserted: contains 1 and 2, closed under divisors, and complete below
/// the 2 p^(1/4) threshold.
pub fn d1_set(p: u64) -> Result<CensusRecord, ScanError> {
    assert!(p >= 5, "census needs p >= 5");
    let cap = p.isqrt() + 1;
    let pool: Vec<u64> = divisors(p - 1).into_iter().filter(|&d| d <= cap).collect();
    let mut members = Vec::new();
    for &d in &pool {
        if let Some(a) = d1_exists_congruence(p, d) {
            members.push((d, a));
        }
    }
    let bad = |what: &str| {
        Err(ScanError::Invariant { p, what: what.to_string() })
    };
    let values = members.iter().map(|&(d, _)| d).collect::<Vec<_>>();
    if !values.contains(&1) || !values.contains(&2) {
        return bad("D1(p) must contain 1 and 2");
    }
    for &d in &values {
        for e in divisors(d) {
            if !values.contains(&e) {
                return bad("D1(p) must be closed under divisors");
            }
        }
    }
    let small16 = |d: u64| {
        let d = d as u128;
        d * d * d * d < 16 * p as u128
    };
    for &d in &pool {
        if small16(d) && !values.contains(&d) {
            return bad("every divisor below 2 p^(1/4) must be realizable");
        }
    }
    let small_count = values.iter().filter(|&&d| small16(d)).count() as u64;
    let large_count = values.len() as u64 - small_count;
    Ok(CensusRecord { p, divisor_pool: pool, members, small_count, large_count })
}

/// Class count of primitive reduced forms (a, b, c) of discriminant D < 0,
/// divided by half the unit count: 1/3 at D = -3, 1/2 at D = -4.
pub fn hurwitz_weight(disc: i64) -> Result<Rational64, CensusError> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(CensusError::BadDiscriminant(disc));
    }
    let abs = disc.unsigned_abs();
    let mut h = 0i64;
    let mut b = if abs % 2 == 0 { 0u64 } else { 1 };
    while b * b <= abs / 3 {
        let num = (b * b + abs) / 4;
        let mut a = b.max(1);
        while a * a <= num {
            if num % a == 0 {
                let c = num / a;
                if gcd3(a, b, c) == 1 {
                    h += if b == 0 || b == a || a == c { 1 } else { 2 };
                }
            }
            a += 1;
        }
        b += 2;
    }
    Ok(match disc {
        -3 => Rational64::new(h, 3),
        -4 => Rational64::new(h, 2),
        _ => Rational64::from(h),
    })
}

fn gcd3(a: u64, b: u64, c: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    gcd(gcd(a, b), c)
}

/// Hurwitz-Kronecker mass of D: the weighted class count summed over all
/// orders containing O(D), i.e. sum over f with f^2 | D and D/f^2 a
/// discriminant of hurwitz_weight(D/f^2). This is what weights isomorphism
/// classes of curves whose endomorphism ring contains O(D).
pub fn hurwitz_mass(disc: i64) -> Result<Rational64, CensusError> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(CensusError::BadDiscriminant(disc));
    }
    let mut total = Rational64::from(0);
    let abs = disc.unsigned_abs();
    let mut f = 1u64;
    while f * f <= abs {
        if abs % (f * f) == 0 {
            let sub = disc / (f * f) as i64;
            if matches!(sub.rem_euclid(4), 0 | 1) {
                total += hurwitz_weight(sub)?;
            }
        }
        f += 1;
    }
    Ok(total)
}

/// The automorphism-weighted count of isomorphism classes E/F_p with
/// d | d1(E), for odd d | p - 1: sum over traces a = p + 1 mod d^2 in the
/// Hasse range of the Hurwitz-Kronecker mass of (a^2 - 4p)/d^2.
pub fn schoof_mass(p: u64, d: u64) -> Result<Rational64, CensusError> {
    if d % 2 == 0 {
        return Err(CensusError::Precondition("d must be odd"));
    }
    if p < 5 || (p - 1) % d != 0 {
        return Err(CensusError::Precondition("need p >= 5 and d | p - 1"));
    }
    let pi = p as i128;
    let d2 = (d as i128) * (d as i128);
    let mut total = Rational64::from(0);
    let bound = (4 * p).isqrt() as i128 + 1;
    let a0 = (pi + 1).rem_euclid(d2);
    let k = (a0 + bound) / d2;
    let mut a = a0 - k * d2;
    while a * a >= 4 * pi {
        a += d2;
        if a > bound {
            return Ok(total);
        }
    }
    while a * a < 4 * pi {
        let disc = (a * a - 4 * pi) / d2;
        total += hurwitz_mass(disc as i64)?;
        a += d2;
    }
    Ok(total)
}

/// Exact sums of |D1(p)|, |D_s(p)|, |D_l(p)| over primes 5 <= p <= X.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusTotals {
    pub primes: u64,
    pub sum_all: u64,
    pub sum_small: u64,
    pub sum_large: u64,
}

impl Merge for CensusTotals {
    fn merge(&mut self, other: Self) {
        self.primes += other.primes;
        self.sum_all += other.sum_all;
        self.sum_small += other.sum_small;
        self.sum_large += other.sum_large;
    }
}

pub fn census_block(lo: u64, hi: u64) -> Result<CensusTotals, ScanError> {
    let mut t = CensusTotals::default();
    let lo = lo.max(5);
    if lo > hi {
        return Ok(t);
    }
    for p in PrimeRange::new(lo, hi).iter() {
        let rec = d1_set(p)?;
        t.primes += 1;
        t.sum_all += rec.members.len() as u64;
        t.sum_small += rec.small_count;
        t.sum_large += rec.large_count;
    }
    Ok(t)
}

pub fn census_averages(x: u64, threads: usize, block_span: u64) -> Result<CensusTotals, ScanError> {
    census_averages_with_progress(x, threads, block_span, 0, None, |_, _| {})
}

pub fn census_averages_with_progress(
    x: u64,
    threads: usize,
    block_span: u64,
    start_block: u64,
    initial: Option<CensusTotals>,
    on_block: impl FnMut(u64, &CensusTotals),
) -> Result<CensusTotals, ScanError> {
    assert!(x >= 5);
    let plan = BlockPlan::new(5, x, block_span);
    run_blocks(
        plan,
        threads,
        start_block,
        initial.unwrap_or_default(),
        |lo, hi| census_block(lo, hi),
        on_block,
    )
}

/// Sum over primes p <= X of #{d | p - 1 : d < (p - 1)^alpha}, exact. The
/// power comparison d^den < n^num is done in integers.
pub fn divisor_density(x: u64, alpha: Rational64) -> u64 {
    assert!(x >= 5);
    assert!(alpha > Rational64::from(0) && alpha <= Rational64::from(2));
    let num = *alpha.numer() as u32;
    let den = *alpha.denom() as u32;
    let mut total = 0u64;
    for p in PrimeRange::new(5, x).iter() {
        let n = p - 1;
        total += divisors(n).into_iter().filter(|&d| pow_less(d, den, n, num)).count() as u64;
    }
    total
}

/// d^b < n^a without overflow.
fn pow_less(d: u64, b: u32, n: u64, a: u32) -> bool {
    use num_bigint::BigUint;
    match (
        (0..b).try_fold(1u128, |acc, _| acc.checked_mul(d as u128)),
        (0..a).try_fold(1u128, |acc, _| acc.checked_mul(n as u128)),
    ) {
        (Some(db), Some(na)) => db < na,
        _ => BigUint::from(d).pow(b) < BigUint::from(n).pow(a),
    }
}

/// Number of F_p-rational cusps of the full level-d modular curve:
/// phi_plus(d) * psi(d).
pub fn cusp_count(d: u64) -> u64 {
    assert!(d >= 1);
    phi_plus(d) * psi(d)
}

/// The exactly computed left side of the heavy-tail bound: total weighted
/// mass of classes with d1 >= d over all p <= X and odd d | p - 1 with
/// d^4 >= 16p.
pub fn large_d1_mass(x: u64) -> Result<Rational64, CensusError> {
    assert!(x >= 5);
    let mut total = Rational64::from(0);
    for p in PrimeRange::new(5, x).iter() {
        for d in divisors(p - 1) {
            if d % 2 == 1 && d > 1 {
                let d128 = d as u128;
                if d128 * d128 * d128 * d128 >= 16 * p as u128 {
                    total += schoof_mass(p, d)?;
                }
            }
        }
    }
    Ok(total)
}

/// The supersingular ceiling: d1 <= 2 over a prime base field.
pub fn supersingular_d1_bound(p: u64) -> Result<u64, CensusError> {
    if p < 5 {
        return Err(CensusError::Precondition("p >= 5 required"));
    }
    Ok(2)
}
