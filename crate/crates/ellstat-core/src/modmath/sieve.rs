//! Segmented sieve of Eratosthenes over an inclusive range.

use serde::{Deserialize, Serialize};

/// Default segment span in integers (2^20 odd residues), bounding memory
/// during 10^8-scale scans.
pub const DEFAULT_SEGMENT_SPAN: u64 = 1 << 21;

/// Inclusive range `[lo, hi]`; iteration yields exactly the primes inside,
/// in increasing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl PrimeRange {
    /// Panics if `lo > hi`.
    pub fn new(lo: u64, hi: u64) -> Self {
        assert!(lo <= hi, "empty prime range {lo}..={hi}");
        PrimeRange { lo, hi }
    }

    pub fn iter(self) -> PrimeIter {
        self.iter_with_segment(DEFAULT_SEGMENT_SPAN)
    }

    /// Iterate with an explicit segment span (clamped below at 1024).
    pub fn iter_with_segment(self, span: u64) -> PrimeIter {
        let span = span.max(1024);
        let base = small_primes(self.hi.isqrt());
        PrimeIter {
            range: self,
            base,
            span,
            next_lo: self.lo.max(2),
            buf: Vec::new(),
            pos: 0,
        }
    }
}

/// All primes `<= bound` by a plain odd-only sieve. Intended for base primes
/// (`bound` around `sqrt(hi)`), not for streaming.
pub fn small_primes(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    // composite[i] covers the odd number 2i+1.
    let mut composite = vec![false; n / 2 + 1];
    let mut p = 3usize;
    while p * p <= n {
        if !composite[p / 2] {
            let mut m = p * p;
            while m <= n {
                composite[m / 2] = true;
                m += 2 * p;
            }
        }
        p += 2;
    }
    let mut primes = vec![2u64];
    primes.extend((1..=(n - 1) / 2).filter(|&i| !composite[i]).map(|i| (2 * i + 1) as u64));
    primes
}

pub struct PrimeIter {
    range: PrimeRange,
    base: Vec<u64>,
    span: u64,
    next_lo: u64,
    buf: Vec<u64>,
    pos: usize,
}

impl PrimeIter {
    fn fill_segment(&mut self) -> bool {
        while self.next_lo <= self.range.hi {
            let lo = self.next_lo;
            let hi = self.range.hi.min(lo + self.span - 1);
            self.next_lo = hi + 1;
            self.buf.clear();
            self.pos = 0;
            if lo <= 2 && hi >= 2 {
                self.buf.push(2);
            }
            // Odd candidates in [lo, hi].
            let first_odd = if lo <= 3 { 3 } else { lo | 1 };
            if first_odd > hi {
                if !self.buf.is_empty() {
                    return true;
                }
                continue;
            }
            let count = ((hi - first_odd) / 2 + 1) as usize;
            let mut composite = vec![false; count];
            for &p in self.base.iter().skip(1) {
                if p * p > hi {
                    break;
                }
                let mut start = p * p;
                if start < first_odd {
                    let k = (first_odd - start).div_ceil(2 * p);
                    start += k * 2 * p;
                }
                let mut m = start;
                while m <= hi {
                    composite[((m - first_odd) / 2) as usize] = true;
                    m += 2 * p;
                }
            }
            for (i, &c) in composite.iter().enumerate() {
                if !c {
                    let v = first_odd + 2 * i as u64;
                    if v >= 3 {
                        self.buf.push(v);
                    }
                }
            }
            // 1 is odd and unmarked; drop it explicitly.
            if self.buf.first() == Some(&1) {
                self.buf.remove(0);
            }
            if !self.buf.is_empty() {
                return true;
            }
        }
        false
    }
}

impl Iterator for PrimeIter {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.pos < self.buf.len() {
                let p = self.buf[self.pos];
                self.pos += 1;
                return Some(p);
            }
            if !self.fill_segment() {
                return None;
            }
        }
    }
}

/// Number of primes in `[2, x]`.
pub fn prime_count(x: u64) -> u64 {
    if x < 2 {
        return 0;
    }
    PrimeRange::new(2, x).iter().count() as u64
}
