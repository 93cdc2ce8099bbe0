//! Integral Weierstrass models over Q and their reductions modulo p.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::EcfpError;
use crate::modmath::{invmod, mulmod, submod};

/// A rational elliptic curve in long Weierstrass form
/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with integer coefficients.
///
/// Coefficients are arbitrary-precision: curves produced by CRT lifting over
/// a Hasse window have coefficients far beyond 64 bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Curve {
    pub a1: BigInt,
    pub a2: BigInt,
    pub a3: BigInt,
    pub a4: BigInt,
    pub a6: BigInt,
}

impl Curve {
    pub fn new(a1: BigInt, a2: BigInt, a3: BigInt, a4: BigInt, a6: BigInt) -> Result<Self, EcfpError> {
        let c = Curve { a1, a2, a3, a4, a6 };
        if c.discriminant().is_zero() {
            return Err(EcfpError::Singular);
        }
        Ok(c)
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self, EcfpError> {
        Curve::new(a[0].into(), a[1].into(), a[2].into(), a[3].into(), a[4].into())
    }

    /// b2, b4, b6, b8.
    pub fn b_invariants(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        let b2 = &self.a1 * &self.a1 + 4 * &self.a2;
        let b4 = 2 * &self.a4 + &self.a1 * &self.a3;
        let b6 = &self.a3 * &self.a3 + 4 * &self.a6;
        let b8 = &self.a1 * &self.a1 * &self.a6 + 4 * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4;
        (b2, b4, b6, b8)
    }

    /// c4, c6.
    pub fn c_invariants(&self) -> (BigInt, BigInt) {
        let (b2, b4, b6, _) = self.b_invariants();
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6 = -(&b2 * &b2 * &b2) + 36 * &b2 * &b4 - 216 * &b6;
        (c4, c6)
    }

    pub fn discriminant(&self) -> BigInt {
        let (b2, b4, b6, b8) = self.b_invariants();
        -(&b2 * &b2) * &b8 - 8 * (&b4 * &b4 * &b4) - 27 * (&b6 * &b6) + 9 * &b2 * &b4 * &b6
    }

    /// The j-invariant as an exact rational, c4^3 / disc.
    pub fn j_rational(&self) -> BigRational {
        let (c4, _) = self.c_invariants();
        BigRational::new(&c4 * &c4 * &c4, self.discriminant())
    }

    /// Reduce modulo a prime p >= 5, completing the square and cube to the
    /// short model y^2 = x^3 + Ax + B. Returns the bad-reduction marker when
    /// the model's discriminant vanishes mod p.
    pub fn reduce_mod_p(&self, p: u64) -> Result<Reduction, EcfpError> {
        CurveReducer::new(self).reduce(p)
    }

    /// Sign-aware decimal rendering for reports.
    pub fn coeffs_string(&self) -> String {
        format!("{},{},{},{},{}", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

fn red(x: &BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let m = x % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    m.to_u64().expect("residue fits u64")
}

/// Precomputed c-invariants of a fixed curve, for reducing the same curve at
/// many primes without re-deriving the BigInt invariants each time.
pub struct CurveReducer {
    c4: BigInt,
    c6: BigInt,
}

impl CurveReducer {
    pub fn new(curve: &Curve) -> Self {
        let (c4, c6) = curve.c_invariants();
        CurveReducer { c4, c6 }
    }

    pub fn reduce(&self, p: u64) -> Result<Reduction, EcfpError> {
        if p < 5 {
            return Err(EcfpError::SmallPrime(p));
        }
        let (c4, c6) = (red(&self.c4, p), red(&self.c6, p));
        // disc = (c4^3 - c6^2) / 1728 vanishes iff c4^3 = c6^2 mod p
        let num = submod(mulmod(mulmod(c4, c4, p), c4, p), mulmod(c6, c6, p), p);
        if num == 0 {
            return Ok(Reduction::Bad);
        }
        let a = mulmod((p - c4) % p, invmod(48 % p, p).expect("48 invertible"), p);
        let b = mulmod((p - c6) % p, invmod(864 % p, p).expect("864 invertible"), p);
        Ok(Reduction::Good(CurveModP { p, a, b }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reduction {
    Good(CurveModP),
    Bad,
}

impl Reduction {
    pub fn good(self) -> Option<CurveModP> {
        match self {
            Reduction::Good(c) => Some(c),
            Reduction::Bad => None,
        }
    }
}

/// A short Weierstrass curve y^2 = x^3 + Ax + B over F_p, p >= 5 prime,
/// with 4A^3 + 27B^2 nonzero mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveModP {
    pub p: u64,
    pub a: u64,
    pub b: u64,
}

impl CurveModP {
    /// Panics if the model is singular or p < 5.
    pub fn new(p: u64, a: u64, b: u64) -> Self {
        assert!(p >= 5);
        let (a, b) = (a % p, b % p);
        let c = CurveModP { p, a, b };
        assert!(!c.is_singular(), "singular model A={a} B={b} mod {p}");
        c
    }

    pub fn try_new(p: u64, a: u64, b: u64) -> Option<Self> {
        let c = CurveModP { p, a: a % p, b: b % p };
        (p >= 5 && !c.is_singular()).then_some(c)
    }

    pub fn is_singular(&self) -> bool {
        let p = self.p;
        let a3 = mulmod(mulmod(self.a, self.a, p), self.a, p);
        let b2 = mulmod(self.b, self.b, p);
        (mulmod(4, a3, p) + mulmod(27, b2, p)) % p == 0
    }

    /// x^3 + Ax + B mod p.
    #[inline]
    pub fn rhs(&self, x: u64) -> u64 {
        let p = self.p;
        let x2 = mulmod(x, x, p);
        (mulmod(x2, x, p) + mulmod(self.a, x, p) + self.b) % p
    }

    /// j = 1728 * 4A^3 / (4A^3 + 27B^2) mod p.
    pub fn j_invariant(&self) -> u64 {
        let p = self.p;
        let a3 = mulmod(mulmod(self.a, self.a, p), self.a, p);
        let four_a3 = mulmod(4, a3, p);
        let den = (four_a3 + mulmod(27, mulmod(self.b, self.b, p), p)) % p;
        mulmod(mulmod(1728 % p, four_a3, p), invmod(den, p).expect("nonsingular"), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn curve_a() -> Curve {
        Curve::from_i64([0, 0, 0, -1, 0]).unwrap()
    }
    pub(crate) fn curve_e() -> Curve {
        Curve::from_i64([0, 0, 0, 6, -2]).unwrap()
    }
    pub(crate) fn curve_f() -> Curve {
        Curve::from_i64([0, 0, 1, -1, 0]).unwrap()
    }

    #[test]
    fn discriminants_of_test_curves() {
        assert_eq!(curve_a().discriminant(), BigInt::from(64));
        assert_eq!(curve_e().discriminant(), BigInt::from(-15552)); // -2^6 * 3^5
        assert_eq!(curve_f().discriminant(), BigInt::from(37));
    }

    #[test]
    fn c_identity() {
        // c4^3 - c6^2 = 1728 * disc
        for c in [curve_a(), curve_e(), curve_f(), Curve::from_i64([1, -2, 3, -4, 5]).unwrap()] {
            let (c4, c6) = c.c_invariants();
            assert_eq!(&c4 * &c4 * &c4 - &c6 * &c6, 1728 * c.discriminant());
        }
    }

    #[test]
    fn j_invariants_rational() {
        assert_eq!(curve_a().j_rational(), BigRational::from(BigInt::from(1728)));
        assert_eq!(curve_e().j_rational(), BigRational::from(BigInt::from(1536)));
        assert_eq!(
            curve_f().j_rational(),
            BigRational::new(BigInt::from(110592), BigInt::from(37))
        );
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(Curve::from_i64([0, 0, 0, 0, 0]), Err(EcfpError::Singular));
        assert_eq!(Curve::from_i64([0, 0, 0, -3, 2]), Err(EcfpError::Singular));
    }

    #[test]
    fn reduction_good_and_bad() {
        // E mod 5: plain coefficient reduction since the model is short.
        let e5 = curve_e().reduce_mod_p(5).unwrap().good().unwrap();
        assert_eq!((e5.a, e5.b), (1, 3));
        // F has discriminant 37.
        assert_eq!(curve_f().reduce_mod_p(37).unwrap(), Reduction::Bad);
        assert!(curve_f().reduce_mod_p(5).unwrap().good().is_some());
        // A has discriminant 64: good at every p >= 5.
        assert!(curve_a().reduce_mod_p(5).unwrap().good().is_some());
        // p < 5 rejected.
        assert_eq!(curve_a().reduce_mod_p(2), Err(EcfpError::SmallPrime(2)));
        assert_eq!(curve_a().reduce_mod_p(3), Err(EcfpError::SmallPrime(3)));
    }

    #[test]
    fn reduction_agrees_with_j() {
        for (c, js) in [(curve_a(), 1728i64), (curve_e(), 1536)] {
            for p in [5u64, 7, 11, 13, 101, 997] {
                let m = c.reduce_mod_p(p).unwrap().good().unwrap();
                assert_eq!(m.j_invariant(), (js.rem_euclid(p as i64)) as u64, "p = {p}");
            }
        }
        // F: j = 110592/37 mod p
        let f = curve_f();
        for p in [5u64, 7, 11, 41] {
            let m = f.reduce_mod_p(p).unwrap().good().unwrap();
            let expect = mulmod(110592 % p, invmod(37 % p, p).unwrap(), p);
            assert_eq!(m.j_invariant(), expect, "p = {p}");
        }
    }

    #[test]
    fn completed_square_curve_matches_naive_point_count() {
        // F mod 5 completes to A=4, B=4 (1/4 = 4 mod 5); count points of the
        // original long form directly and compare.
        let m = curve_f().reduce_mod_p(5).unwrap().good().unwrap();
        assert_eq!((m.a, m.b), (4, 4));
        let mut long_count = 1u64; // infinity
        for x in 0i64..5 {
            for y in 0i64..5 {
                if (y * y + y - (x * x * x - x)).rem_euclid(5) == 0 {
                    long_count += 1;
                }
            }
        }
        let mut short_count = 1u64;
        for x in 0..5u64 {
            for y in 0..5u64 {
                if (mulmod(y, y, 5) + 5 - m.rhs(x)) % 5 == 0 {
                    short_count += 1;
                }
            }
        }
        assert_eq!(long_count, short_count);
        assert_eq!(long_count, 8);
    }
}
