//! Brute-force census of all F_p-isomorphism classes of short Weierstrass
//! curves, with exact enumeration invariants and automorphism weights.
//! This is the ground-truth oracle the fast paths are validated against.

use num_rational::Rational64;

use super::curve::CurveModP;
use super::structure::exact_structure;
use super::EcfpError;
use crate::modmath::mulmod;

/// Default cap: the census is O(p^3) and meant for oracle validation only.
pub const DEFAULT_ORACLE_LIMIT: u64 = 250;

#[derive(Debug, Clone)]
pub struct CensusEntry {
    /// Canonical representative (lexicographically least (A, B) in the
    /// u-orbit (u^4 A, u^6 B)).
    pub curve: CurveModP,
    pub n: u64,
    pub d1: u64,
    pub d2: u64,
    /// 2 / #Aut(E/F_p); 1 for generic curves, 1/2 and 1/3 at j = 1728, 0.
    pub aut_weight: Rational64,
}

/// One entry per F_p-isomorphism class, every (A, B) with nonzero
/// discriminant classified by the twisting action (A, B) -> (u^4 A, u^6 B).
pub fn brute_force_census(p: u64, limit: u64) -> Result<Vec<CensusEntry>, EcfpError> {
    if p > limit {
        return Err(EcfpError::OracleLimit(p));
    }
    if p < 5 {
        return Err(EcfpError::SmallPrime(p));
    }
    let pu = p as usize;
    // u^4 and u^6 tables for u in 1..p.
    let mut u4 = vec![0u64; pu];
    let mut u6 = vec![0u64; pu];
    for u in 1..p {
        let u2 = mulmod(u, u, p);
        let v4 = mulmod(u2, u2, p);
        u4[u as usize] = v4;
        u6[u as usize] = mulmod(v4, u2, p);
    }
    let mut out = Vec::new();
    for a in 0..p {
        for b in 0..p {
            let Some(c) = CurveModP::try_new(p, a, b) else { continue };
            // Canonical representative of the orbit.
            let mut canon = (a, b);
            for u in 2..p {
                let cand = (mulmod(u4[u as usize], a, p), mulmod(u6[u as usize], b, p));
                if cand < canon {
                    canon = cand;
                }
            }
            if canon != (a, b) {
                continue;
            }
            let (n, d1, d2) = exact_structure(&c);
            debug_assert_eq!(d1 * d1 * d2, n);
            let aut = (1..p)
                .filter(|&u| {
                    mulmod(u4[u as usize], a, p) == a && mulmod(u6[u as usize], b, p) == b
                })
                .count() as i64;
            out.push(CensusEntry {
                curve: c,
                n,
                d1,
                d2,
                aut_weight: Rational64::new(2, aut),
            });
        }
    }
    Ok(out)
}
