//! Elliptic-twin statistics: the multiplicity M(n) of a group order n, its
//! moments, twin-value counts, the CM multiplicity diagnostic and the CRT
//! construction of a curve of maximal multiplicity at a chosen n.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::ecfp::{self, group_order, local_invariants, per_prime_rng, Curve, CurveModP};
use crate::modmath::{ideal_norm_count, PrimeRange, QuadChar};
use crate::scan::{run_blocks, BlockPlan, Merge, ScanError};

/// Exact integer bounds of the Hasse window of n: the interval of integers
/// p with (p + 1 - n)^2 <= 4p, clamped below at 1. Computed with integer
/// square roots; each boundary is rechecked against the exact inequality.
pub fn hasse_window(n: u64) -> (u64, u64) {
    assert!(n >= 1);
    let member = |p: u64| {
        let t = p as i128 + 1 - n as i128;
        t * t <= 4 * p as i128
    };
    let s = (4 * n).isqrt();
    let mut lo = (n + 1).saturating_sub(s + 2).max(1);
    while !member(lo) {
        lo += 1;
    }
    let mut hi = n + 1 + s + 2;
    while !member(hi) {
        hi -= 1;
    }
    debug_assert!(lo <= hi);
    (lo, hi)
}

/// All primes in the Hasse window of n (including 2 and 3; callers working
/// over char >= 5 filter those out).
pub fn window_primes(n: u64) -> Vec<u64> {
    let (lo, hi) = hasse_window(n);
    PrimeRange::new(lo, hi).iter().collect()
}

/// Window-closed multiplicity table: M(n) is final for every n <= value
/// bound because all primes up to the window top were scanned.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinHistogram {
    /// V: multiplicities are final for n <= V.
    pub value_bound: u64,
    /// floor(V^+): every prime up to here is scanned.
    pub prime_bound: u64,
    /// n -> M(n) for n <= V (zero entries never materialize).
    pub counts: BTreeMap<u64, u64>,
    /// n -> count for V < n <= V^+, truncated at prime_bound; used only for
    /// the J(X) convention (twins are sought among scanned primes).
    pub overflow_counts: BTreeMap<u64, u64>,
    /// (p, n_p) for every good prime 5 <= p <= prime_bound, ascending in p.
    pub prime_values: Vec<(u64, u64)>,
    pub bad_primes: Vec<u64>,
}

impl TwinHistogram {
    pub fn empty(value_bound: u64) -> Self {
        let (_, hi) = hasse_window(value_bound);
        TwinHistogram {
            value_bound,
            prime_bound: hi,
            counts: BTreeMap::new(),
            overflow_counts: BTreeMap::new(),
            prime_values: Vec::new(),
            bad_primes: Vec::new(),
        }
    }

    pub fn multiplicity(&self, n: u64) -> u64 {
        assert!(n <= self.value_bound, "M(n) only final for n <= value bound");
        self.counts.get(&n).copied().unwrap_or(0)
    }

    /// Count including the overflow band, for the truncated twin search.
    fn multiplicity_any(&self, n: u64) -> u64 {
        self.counts
            .get(&n)
            .or_else(|| self.overflow_counts.get(&n))
            .copied()
            .unwrap_or(0)
    }
}

impl Merge for TwinHistogram {
    fn merge(&mut self, other: Self) {
        debug_assert_eq!(self.value_bound, other.value_bound);
        for (n, c) in other.counts {
            *self.counts.entry(n).or_insert(0) += c;
        }
        for (n, c) in other.overflow_counts {
            *self.overflow_counts.entry(n).or_insert(0) += c;
        }
        self.prime_values.extend(other.prime_values);
        self.bad_primes.extend(other.bad_primes);
        self.prime_values.sort_unstable();
        self.bad_primes.sort_unstable();
    }
}

/// Scan one numeric block. The full histogram is the merge over blocks
/// covering [5, prime_bound].
pub fn twin_scan_block(
    curve: &Curve,
    value_bound: u64,
    lo: u64,
    hi: u64,
    seed: u64,
) -> Result<TwinHistogram, ScanError> {
    let mut h = TwinHistogram::empty(value_bound);
    let lo = lo.max(5);
    let hi = hi.min(h.prime_bound);
    if lo > hi {
        return Ok(h);
    }
    for p in PrimeRange::new(lo, hi).iter() {
        let inv = local_invariants(curve, p, seed)?;
        if !inv.is_good() {
            h.bad_primes.push(p);
            continue;
        }
        // Window soundness: p must lie in the Hasse window of n_p.
        let t = p as i128 + 1 - inv.n as i128;
        if t * t > 4 * p as i128 {
            return Err(ScanError::Invariant { p, what: "n_p outside Hasse window".into() });
        }
        h.prime_values.push((p, inv.n));
        if inv.n <= value_bound {
            *h.counts.entry(inv.n).or_insert(0) += 1;
        } else if inv.n <= h.prime_bound {
            *h.overflow_counts.entry(inv.n).or_insert(0) += 1;
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy)]
pub struct TwinScanConfig {
    pub seed: u64,
    pub threads: usize,
    pub block_span: u64,
    /// Also count p = 2 and 3 with the raw projective point count of the
    /// model (n_p = p + 1 - a_p at every prime, the convention of the
    /// classical tabulations).
    pub include_small_primes: bool,
}

impl Default for TwinScanConfig {
    fn default() -> Self {
        TwinScanConfig { seed: 1, threads: 1, block_span: 1 << 21, include_small_primes: false }
    }
}

/// Full window-closed scan: M(n) final for all n <= value_bound.
pub fn twin_scan(
    curve: &Curve,
    value_bound: u64,
    cfg: &TwinScanConfig,
) -> Result<TwinHistogram, ScanError> {
    twin_scan_with_progress(curve, value_bound, cfg, 0, None, |_, _| {})
}

pub fn twin_scan_with_progress(
    curve: &Curve,
    value_bound: u64,
    cfg: &TwinScanConfig,
    start_block: u64,
    initial: Option<TwinHistogram>,
    on_block: impl FnMut(u64, &TwinHistogram),
) -> Result<TwinHistogram, ScanError> {
    assert!(value_bound >= 5);
    let mut init = initial.unwrap_or_else(|| TwinHistogram::empty(value_bound));
    if cfg.include_small_primes && start_block == 0 {
        for p in [2u64, 3] {
            let n = ecfp::small::raw_point_count(curve, p);
            init.prime_values.push((p, n));
            if n <= value_bound {
                *init.counts.entry(n).or_insert(0) += 1;
            } else if n <= init.prime_bound {
                *init.overflow_counts.entry(n).or_insert(0) += 1;
            }
        }
    }
    let plan = BlockPlan::new(5, init.prime_bound, cfg.block_span);
    run_blocks(
        plan,
        cfg.threads,
        start_block,
        init,
        |lo, hi| twin_scan_block(curve, value_bound, lo, hi, cfg.seed),
        on_block,
    )
}

/// Single-n mode: M(n) by scanning only the ~4 sqrt(n) primes of the Hasse
/// window. Returns the multiplicity, the window, and the matching primes.
pub fn twin_multiplicity(
    curve: &Curve,
    n: u64,
    seed: u64,
) -> Result<(u64, (u64, u64), Vec<u64>), ScanError> {
    let (lo, hi) = hasse_window(n);
    let mut matches = Vec::new();
    for p in PrimeRange::new(lo.max(5), hi).iter() {
        let inv = local_invariants(curve, p, seed)?;
        if inv.is_good() && inv.n == n {
            matches.push(p);
        }
    }
    Ok((matches.len() as u64, (lo, hi), matches))
}

/// Moments and twin counts of a completed histogram. T-moments are computed
/// both through the exchange identity and directly from per-prime
/// multiplicities; the two must agree exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinReport {
    pub value_bound: u64,
    /// S_k = sum_{n <= V} M(n)^k, k = 1..=K.
    pub s_moments: Vec<u64>,
    /// T_k = sum_{p : n_p <= V} m(p)^k, k = 0..K.
    pub t_moments: Vec<u64>,
    /// S' = sum of M(n) over twin values (M >= 2).
    pub s_prime: u64,
    /// #{n <= V : M(n) >= 2}.
    pub j_values: u64,
    /// #{p <= V : p has a twin among scanned primes}.
    pub j_primes: u64,
    /// k -> #{n <= V : M(n) = k}, k >= 1.
    pub multiplicity_census: BTreeMap<u64, u64>,
}

pub fn report(h: &TwinHistogram, k_max: u32) -> Result<TwinReport, ScanError> {
    assert!(k_max >= 1);
    let mut s_moments = vec![0u64; k_max as usize];
    let mut census: BTreeMap<u64, u64> = BTreeMap::new();
    let mut s_prime = 0u64;
    let mut j_values = 0u64;
    for (_, &m) in h.counts.iter() {
        *census.entry(m).or_insert(0) += 1;
        let mut pw = 1u64;
        for s in s_moments.iter_mut() {
            pw *= m;
            *s += pw;
        }
        if m >= 2 {
            s_prime += m;
            j_values += 1;
        }
    }
    // T_k from the per-prime side.
    let mut t_moments = vec![0u64; k_max as usize];
    let mut j_primes = 0u64;
    for &(p, n) in h.prime_values.iter() {
        if n <= h.value_bound {
            let m = h.multiplicity(n);
            let mut pw = 1u64;
            for t in t_moments.iter_mut() {
                *t += pw;
                pw *= m;
            }
        }
        if p <= h.value_bound && h.multiplicity_any(n) >= 2 {
            j_primes += 1;
        }
    }
    // Exchange identity: S_k = T_{k-1} exactly, for every k.
    for k in 1..=k_max as usize {
        if s_moments[k - 1] != t_moments[k - 1] {
            return Err(ScanError::Invariant {
                p: h.value_bound,
                what: format!(
                    "moment identity S_{k} = {} != T_{} = {}",
                    s_moments[k - 1],
                    k - 1,
                    t_moments[k - 1]
                ),
            });
        }
    }
    Ok(TwinReport {
        value_bound: h.value_bound,
        s_moments,
        t_moments,
        s_prime,
        j_values,
        j_primes,
        multiplicity_census: census,
    })
}

/// CM multiplicity diagnostic for the curve y^2 = x^3 - x (CM by Z[i]). For
/// each twin value n, reports r(n) and checks M(n) <= 1 + 2 r(n): one
/// supersingular prime at most, plus conjugate/unit pairs of Frobenius
/// solutions to the norm equation over Q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CmDiagRow {
    pub n: u64,
    pub multiplicity: u64,
    pub norm_count: u64,
    pub bound_ok: bool,
}

pub fn cm_multiplicity_diagnostic(h: &TwinHistogram) -> Vec<CmDiagRow> {
    let chi = QuadChar::new(-4);
    h.counts
        .iter()
        .filter(|&(_, &m)| m >= 2)
        .map(|(&n, &m)| {
            let r = ideal_norm_count(chi, n);
            CmDiagRow { n, multiplicity: m, norm_count: r, bound_ok: m <= 1 + 2 * r }
        })
        .collect()
}

/// A curve over Q with n_p = n at every Hasse-window prime p >= 5 of n:
/// per-prime models with the right trace found by seeded search (exhaustive
/// fallback below 2000), then CRT-lifted coefficients with minimal absolute
/// residues. Returns the curve and the number of window primes achieved.
pub fn construct_max_twin_curve(n: u64, seed: u64) -> Result<(Curve, u64), ScanError> {
    assert!((5..=10_000).contains(&n), "desk-scale n only");
    let primes: Vec<u64> = window_primes(n).into_iter().filter(|&p| p >= 5).collect();
    let mut residues_a = Vec::with_capacity(primes.len());
    let mut residues_b = Vec::with_capacity(primes.len());
    for &p in &primes {
        let c = find_curve_with_order(p, n, seed)?;
        residues_a.push(c.a);
        residues_b.push(c.b);
    }
    let a_star = crt_lift(&primes, &residues_a);
    let b_star = crt_lift(&primes, &residues_b);
    let curve = Curve::new(0.into(), 0.into(), 0.into(), a_star, b_star)
        .map_err(|e| ScanError::Aborted(e.to_string()))?;
    // Post-condition replay through the independent local-invariants path.
    let mut achieved = 0u64;
    for &p in &primes {
        let inv = local_invariants(&curve, p, seed)?;
        if !inv.is_good() || inv.n != n {
            return Err(ScanError::Invariant { p, what: "constructed curve misses n_p = n".into() });
        }
        achieved += 1;
    }
    Ok((curve, achieved))
}

/// Some model over F_p with exactly `order` points. The order lies in the
/// Hasse window, so Deuring guarantees existence; failure to find one is an
/// arithmetic bug.
fn find_curve_with_order(p: u64, order: u64, seed: u64) -> Result<CurveModP, ScanError> {
    let mut rng = per_prime_rng(seed, p, ecfp::stream::SEARCH);
    let attempts = if p < 2000 { 40 * p } else { 1_000_000 };
    for _ in 0..attempts {
        let a = rng.gen_range(0..p);
        let b = rng.gen_range(0..p);
        let Some(c) = CurveModP::try_new(p, a, b) else { continue };
        let m = group_order(&c, seed);
        if m == order {
            return Ok(c);
        }
        if 2 * p + 2 - m == order {
            return Ok(ecfp::quadratic_twist(&c));
        }
    }
    if p < 2000 {
        for a in 0..p {
            for b in 0..p {
                let Some(c) = CurveModP::try_new(p, a, b) else { continue };
                if group_order(&c, seed) == order {
                    return Ok(c);
                }
            }
        }
    }
    Err(ScanError::Invariant { p, what: format!("no model with {order} points found") })
}

/// CRT lift to the minimal absolute residue modulo the product.
fn crt_lift(moduli: &[u64], residues: &[u64]) -> BigInt {
    let mut m = BigInt::one();
    let mut x = BigInt::from(0);
    for (&p, &r) in moduli.iter().zip(residues) {
        // solve x' = x mod m, x' = r mod p
        let pb = BigInt::from(p);
        let minv = mod_inverse_big(&m, &pb);
        let diff = (BigInt::from(r) - &x).mod_floor(&pb);
        x += &m * ((diff * minv) % &pb);
        m *= &pb;
        x = x.mod_floor(&m);
    }
    // center into (-m/2, m/2]
    if &x * 2 > m {
        x -= &m;
    }
    x
}

fn mod_inverse_big(a: &BigInt, p: &BigInt) -> BigInt {
    // p prime, a not divisible by p (moduli are distinct primes)
    let (mut r0, mut r1) = (p.clone(), a.mod_floor(p));
    let (mut t0, mut t1) = (BigInt::from(0), BigInt::one());
    while r1 != BigInt::from(0) {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    debug_assert!(r0.is_one());
    t0.mod_floor(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve_a() -> Curve {
        Curve::from_i64([0, 0, 0, -1, 0]).unwrap()
    }

    #[test]
    fn windows_exact() {
        assert_eq!(hasse_window(4), (1, 9));
        assert_eq!(hasse_window(1), (1, 4));
        assert_eq!(hasse_window(100), (81, 121));
        let w: Vec<u64> = window_primes(100);
        assert_eq!(w, vec![83, 89, 97, 101, 103, 107, 109, 113]);
        let w1: Vec<u64> = window_primes(1);
        assert_eq!(w1, vec![2, 3]);
    }

    #[test]
    fn window_width_bounded() {
        for n in (1..1000).chain([10_000, 123_456, 1_000_000]) {
            let (lo, hi) = hasse_window(n);
            assert!(hi - lo <= 4 * n.isqrt() + 5, "n = {n}");
            // containment recheck at both endpoints
            for p in [lo, hi] {
                let t = p as i128 + 1 - n as i128;
                assert!(t * t <= 4 * p as i128);
            }
        }
    }

    #[test]
    fn scan_counts_match_single_n() {
        let cfg = TwinScanConfig { seed: 5, threads: 2, block_span: 1 << 12, ..Default::default() };
        let h = twin_scan(&curve_a(), 500, &cfg).unwrap();
        for n in [8u64, 16, 100, 320, 500] {
            let (m, _, _) = twin_multiplicity(&curve_a(), n, 5).unwrap();
            assert_eq!(h.multiplicity(n), m, "n = {n}");
        }
    }

    #[test]
    fn report_identities_small() {
        let cfg = TwinScanConfig::default();
        let h = twin_scan(&curve_a(), 1000, &cfg).unwrap();
        let rep = report(&h, 3).unwrap();
        // First-moment window bound: |sum M - pi(V)| <= pi(V+) - pi(V-)
        let s1 = rep.s_moments[0];
        let pi_v = crate::modmath::prime_count(1000);
        let (lo, hi) = hasse_window(1000);
        let slack = crate::modmath::prime_count(hi) - crate::modmath::prime_count(lo - 1);
        assert!(s1.abs_diff(pi_v) <= slack);
        // |S' - J| obeys the same boundary-window bound.
        assert!(rep.s_prime.abs_diff(rep.j_primes) <= slack);
        // Census totals agree with j count.
        let twins: u64 = rep
            .multiplicity_census
            .iter()
            .filter(|&(&k, _)| k >= 2)
            .map(|(_, &c)| c)
            .sum();
        assert_eq!(twins, rep.j_values);
    }

    #[test]
    fn trivial_multiplicity_bound() {
        let cfg = TwinScanConfig::default();
        let h = twin_scan(&curve_a(), 300, &cfg).unwrap();
        for (&n, &m) in h.counts.iter() {
            assert!(m <= window_primes(n).len() as u64, "n = {n}");
        }
    }

    #[test]
    fn cm_diagnostic_bound_holds_small() {
        let cfg = TwinScanConfig::default();
        let h = twin_scan(&curve_a(), 2000, &cfg).unwrap();
        for row in cm_multiplicity_diagnostic(&h) {
            assert!(row.bound_ok, "n = {} M = {} r = {}", row.n, row.multiplicity, row.norm_count);
        }
    }

    #[test]
    fn supersingular_twin_contribution() {
        // For A, n with n - 1 prime = 3 mod 4 gains exactly the prime n - 1.
        let cfg = TwinScanConfig::default();
        let h = twin_scan(&curve_a(), 200, &cfg).unwrap();
        for q in [7u64, 11, 19, 23, 31] {
            let n = q + 1;
            let (_, _, matches) = twin_multiplicity(&curve_a(), n, 1).unwrap();
            assert!(matches.contains(&q), "supersingular prime {q} missing from M({n})");
            assert!(h.multiplicity(n) >= 1);
        }
    }

    #[test]
    fn construct_small_twin_curves() {
        let (c8, achieved8) = construct_max_twin_curve(8, 3).unwrap();
        assert_eq!(achieved8, 4); // window primes {5, 7, 11, 13}, all achievable
        let (m, _, _) = twin_multiplicity(&c8, 8, 3).unwrap();
        assert_eq!(m, achieved8);
        let (c100, achieved100) = construct_max_twin_curve(100, 3).unwrap();
        assert_eq!(achieved100, 8);
        let (m100, _, _) = twin_multiplicity(&c100, 100, 3).unwrap();
        assert!(m100 >= 8);
    }

    #[test]
    fn crt_lift_reduces_correctly() {
        let moduli = [5u64, 7, 11, 13];
        let residues = [3u64, 2, 10, 6];
        let x = crt_lift(&moduli, &residues);
        for (&p, &r) in moduli.iter().zip(&residues) {
            assert_eq!(x.mod_floor(&BigInt::from(p)), BigInt::from(r));
        }
        // minimal absolute residue
        use num_traits::Signed;
        let m: u64 = moduli.iter().product();
        let bound = BigInt::from(m / 2 + 1);
        assert!(x.abs() <= bound, "x = {x}");
    }
}
