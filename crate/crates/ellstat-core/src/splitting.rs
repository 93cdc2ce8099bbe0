//! Streaming computation of the elliptic splitting sum S_E(X; d1), per-d
//! split counts pi_E(X; d, 1), Serre-curve Galois orders and outside-prime
//! classification.
//!
//! pi_E(X; d, 1) is computed as #{p <= X : d | d1(p)}; total splitting in
//! Q(E[d]) is equivalent to d | d1(p), so the Galois side never needs to be
//! constructed.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ecfp::{local_invariants, Curve};
use crate::modmath::{divisors, euler_phi, gl2_order, PrimeRange};
use crate::scan::{run_blocks, BlockPlan, Merge, ScanError};

/// |G_d| for a Serre curve with quadratic-character conductor m: the full
/// GL(2, Z/dZ) order, halved exactly when 2m | d.
pub fn serre_galois_order(d: u64, m: u64) -> u128 {
    assert!(d >= 1 && m >= 1);
    let full = gl2_order(d);
    if d % (2 * m) == 0 {
        full / 2
    } else {
        full
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutsideClass {
    Weak,
    Outside,
}

/// Outside if p < |G_{d1}| (needs the Serre conductor m); else weak if
/// p < d1^4. Small primes classify trivially; reports annotate p < 100
/// rather than filtering them.
pub fn classify_outside(p: u64, d1: u64, m: Option<u64>) -> Option<OutsideClass> {
    assert!(d1 >= 1);
    if let Some(m) = m {
        if (p as u128) < serre_galois_order(d1, m) {
            return Some(OutsideClass::Outside);
        }
    }
    let d = d1 as u128;
    if (p as u128) < d * d * d * d {
        return Some(OutsideClass::Weak);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutsidePrime {
    pub p: u64,
    pub d1: u64,
    /// |G_{d1}| when the curve is declared Serre; absent otherwise.
    pub galois_order: Option<u128>,
    pub class: OutsideClass,
}

/// Mergeable aggregate of a splitting scan over primes 5 <= p <= xmax.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitAccumulator {
    pub xmax: u64,
    /// Serre conductor used for outside classification, if any.
    pub serre_m: Option<u64>,
    /// Sum of d1(p) over scanned primes (0 at bad primes).
    pub s_sum: u64,
    /// Good primes scanned (equals per_d[1]).
    pub prime_count: u64,
    /// d -> #{p : d | d1(p)}.
    pub per_d: BTreeMap<u64, u64>,
    pub outside: Vec<OutsidePrime>,
    pub bad_primes: Vec<u64>,
}

impl SplitAccumulator {
    pub fn empty(xmax: u64, serre_m: Option<u64>) -> Self {
        SplitAccumulator {
            xmax,
            serre_m,
            s_sum: 0,
            prime_count: 0,
            per_d: BTreeMap::new(),
            outside: Vec::new(),
            bad_primes: Vec::new(),
        }
    }

    /// pi_E(X; d, 1) = #{p <= X : d | d1(p)}.
    pub fn pi_split(&self, d: u64) -> u64 {
        self.per_d.get(&d).copied().unwrap_or(0)
    }

    /// The convolution identity: sum over d of phi(d) * pi_split(d) equals
    /// the splitting sum exactly. Asserted after every scan.
    pub fn check_sum_identity(&self) -> Result<(), ScanError> {
        let total: u64 = self.per_d.iter().map(|(&d, &cnt)| euler_phi(d) * cnt).sum();
        if total != self.s_sum {
            return Err(ScanError::Invariant {
                p: self.xmax,
                what: format!("splitting-sum identity: sum phi(d) pi(d) = {total} != {}", self.s_sum),
            });
        }
        Ok(())
    }

    fn record_good(&mut self, p: u64, d1: u64, supersingular: bool) -> Result<(), ScanError> {
        if supersingular && d1 > 2 {
            return Err(ScanError::Invariant { p, what: format!("supersingular d1 = {d1} > 2") });
        }
        self.s_sum += d1;
        self.prime_count += 1;
        for d in divisors(d1) {
            *self.per_d.entry(d).or_insert(0) += 1;
        }
        if let Some(class) = classify_outside(p, d1, self.serre_m) {
            self.outside.push(OutsidePrime {
                p,
                d1,
                galois_order: self.serre_m.map(|m| serre_galois_order(d1, m)),
                class,
            });
        }
        Ok(())
    }
}

impl Merge for SplitAccumulator {
    fn merge(&mut self, other: Self) {
        debug_assert_eq!(self.serre_m, other.serre_m);
        self.xmax = self.xmax.max(other.xmax);
        self.s_sum += other.s_sum;
        self.prime_count += other.prime_count;
        for (d, c) in other.per_d {
            *self.per_d.entry(d).or_insert(0) += c;
        }
        self.outside.extend(other.outside);
        self.bad_primes.extend(other.bad_primes);
        self.outside.sort_by_key(|o| o.p);
        self.bad_primes.sort_unstable();
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanConfig {
    pub seed: u64,
    pub serre_m: Option<u64>,
    pub threads: usize,
    pub block_span: u64,
    /// Also fold in p = 2 and 3 (good-reduction d1 there, bad-prime
    /// convention otherwise), the convention of the classical tabulations.
    pub include_small_primes: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            seed: 1,
            serre_m: None,
            threads: 1,
            block_span: 1 << 21,
            include_small_primes: false,
        }
    }
}

/// Scan one numeric block [lo, hi]: all primes inside, clamped to >= 5.
pub fn scan_block(
    curve: &Curve,
    xmax: u64,
    lo: u64,
    hi: u64,
    cfg: &ScanConfig,
) -> Result<SplitAccumulator, ScanError> {
    let mut acc = SplitAccumulator::empty(xmax, cfg.serre_m);
    let lo = lo.max(5);
    if lo > hi {
        return Ok(acc);
    }
    for p in PrimeRange::new(lo, hi).iter() {
        let inv = local_invariants(curve, p, cfg.seed)?;
        if inv.is_good() {
            acc.record_good(p, inv.d1, inv.supersingular)?;
        } else {
            acc.bad_primes.push(p);
        }
    }
    Ok(acc)
}

/// Full scan over 5 <= p <= xmax (primes 2 and 3 are outside the char >= 5
/// range and excluded throughout).
pub fn scan(curve: &Curve, xmax: u64, cfg: &ScanConfig) -> Result<SplitAccumulator, ScanError> {
    scan_with_progress(curve, xmax, cfg, 0, None, |_, _| {})
}

/// Scan with block-level progress callbacks (checkpoint hook). `start_block`
/// and `initial` support resuming.
pub fn scan_with_progress(
    curve: &Curve,
    xmax: u64,
    cfg: &ScanConfig,
    start_block: u64,
    initial: Option<SplitAccumulator>,
    on_block: impl FnMut(u64, &SplitAccumulator),
) -> Result<SplitAccumulator, ScanError> {
    assert!(xmax >= 5);
    let plan = BlockPlan::new(5, xmax, cfg.block_span);
    let mut init = initial.unwrap_or_else(|| SplitAccumulator::empty(xmax, cfg.serre_m));
    if cfg.include_small_primes && start_block == 0 {
        for p in [2u64, 3] {
            match crate::ecfp::small::small_prime_invariants(curve, p) {
                Some((n, d1)) => {
                    let a = (p + 1) as i64 - n as i64;
                    init.record_good(p, d1, a.rem_euclid(p as i64) == 0)?;
                }
                None => init.bad_primes.push(p),
            }
        }
    }
    let acc = run_blocks(
        plan,
        cfg.threads,
        start_block,
        init,
        |lo, hi| scan_block(curve, xmax, lo, hi, cfg),
        on_block,
    )?;
    acc.check_sum_identity()?;
    Ok(acc)
}

/// Primes p = 16k^2 + 1 <= X together with d1 of the CM curve y^2 = x^3 - x,
/// each asserted equal to floor(sqrt(p)) = 4k.
pub fn extremal_d1_primes(xmax: u64, seed: u64) -> Result<Vec<(u64, u64)>, ScanError> {
    let curve = Curve::from_i64([0, 0, 0, -1, 0]).expect("nonsingular");
    let mut out = Vec::new();
    let mut k = 1u64;
    loop {
        let p = 16 * k * k + 1;
        if p > xmax {
            break;
        }
        if crate::modmath::is_prime(p) {
            let inv = local_invariants(&curve, p, seed)?;
            let expect = p.isqrt();
            if inv.d1 != expect {
                return Err(ScanError::Invariant {
                    p,
                    what: format!("d1(A_p) = {} != floor(sqrt(p)) = {expect}", inv.d1),
                });
            }
            debug_assert_eq!(inv.a, 2);
            out.push((p, inv.d1));
        }
        k += 1;
    }
    Ok(out)
}

/// The six j-invariants of class-number-one CM orders; any reduction with
/// 2 d1^2 >= p must have j congruent to one of them mod p.
pub const CM_J_INVARIANTS: [i64; 6] = [0, 1728, -3375, 8000, -32768, 54000];

/// True iff j is congruent mod p to one of the six CM j-invariants. The
/// hypothesis 2 d1^2 >= p is required (integer test, exact); misuse errors.
pub fn cm_j_check(p: u64, d1: u64, j: u64) -> Result<bool, ScanError> {
    if p < 11 || 2 * d1 * d1 < p {
        return Err(ScanError::Aborted(format!(
            "cm_j_check hypothesis 2*d1^2 >= p fails at p={p}, d1={d1}"
        )));
    }
    Ok(CM_J_INVARIANTS.iter().any(|&j0| j0.rem_euclid(p as i64) as u64 == j % p))
}
