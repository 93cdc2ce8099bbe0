//! Closed-form constants: the Euler-product constant c0, Serre-curve
//! constants c'(E) and c(E), and the Titchmarsh-divisor constant, evaluated
//! with exact rational parts and certified truncation error.
//!
//! High precision is carried by a fixed-point decimal (48 fractional
//! digits) on BigInt, comfortably past the 30 significant digits the
//! internal contract asks for.

use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::modmath::{factorize, PrimeRange};

#[derive(Debug, Error, PartialEq)]
pub enum ConstantsError {
    #[error("tolerance {0} below supported floor {1}")]
    ToleranceTooTight(f64, f64),
    #[error("divergent multiplicative descriptor")]
    Divergent,
}

const SCALE_DIGITS: u32 = 48;
static SCALE: LazyLock<BigInt> = LazyLock::new(|| BigInt::from(10u32).pow(SCALE_DIGITS));

/// Fixed-point decimal: `mantissa / 10^48`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Dec(BigInt);

impl Dec {
    pub fn one() -> Self {
        Dec(SCALE.clone())
    }

    pub fn from_u64(v: u64) -> Self {
        Dec(BigInt::from(v) * &*SCALE)
    }

    pub fn from_ratio(r: &BigRational) -> Self {
        Dec(r.numer() * &*SCALE / r.denom())
    }

    pub fn mul(&self, other: &Dec) -> Dec {
        Dec(&self.0 * &other.0 / &*SCALE)
    }

    pub fn div(&self, other: &Dec) -> Dec {
        Dec(&self.0 * &*SCALE / &other.0)
    }

    pub fn add(&self, other: &Dec) -> Dec {
        Dec(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Dec) -> Dec {
        Dec(&self.0 - &other.0)
    }

    /// Multiply by an exact rational.
    pub fn mul_ratio(&self, r: &BigRational) -> Dec {
        Dec(&self.0 * r.numer() / r.denom())
    }

    pub fn abs_diff(&self, other: &Dec) -> Dec {
        Dec((&self.0 - &other.0).abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN) / 10f64.powi(SCALE_DIGITS as i32)
    }

    /// Decimal string truncated to `digits` fractional digits.
    pub fn to_string_digits(&self, digits: u32) -> String {
        let digits = digits.min(SCALE_DIGITS);
        let neg = self.0.is_negative();
        let abs = self.0.abs();
        let int = &abs / &*SCALE;
        let frac = &abs % &*SCALE;
        let mut fs = format!("{:0width$}", frac, width = SCALE_DIGITS as usize);
        fs.truncate(digits as usize);
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{fs}")
        }
    }
}

/// A truncated Euler product (or the closed form replacing one), with the
/// certified truncation bound and the cutoff used. `cutoff_prime == 0`
/// marks a closed-form evaluation with no prime cutoff.
#[derive(Debug, Clone)]
pub struct EulerProductValue {
    pub value: Dec,
    pub tail_bound: f64,
    pub cutoff_prime: u64,
}

impl EulerProductValue {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Riemann zeta at an integer s >= 2 by Euler-Maclaurin with N = 10^4 and
/// four Bernoulli correction terms; error far below the fixed-point ulp.
pub fn zeta(s: u32) -> Dec {
    assert!(s >= 2);
    const N: u64 = 10_000;
    let mut sum = Dec(BigInt::zero());
    for n in 1..N {
        let mut nk = BigInt::one();
        for _ in 0..s {
            nk *= n;
        }
        sum = sum.add(&Dec(&*SCALE / nk));
    }
    // integral term N^{1-s}/(s-1), plus N^{-s}/2, plus Bernoulli corrections
    let nbig = BigInt::from(N);
    let pow = |e: u32| -> BigInt {
        let mut v = BigInt::one();
        for _ in 0..e {
            v *= &nbig;
        }
        v
    };
    let mut tail = BigRational::new(BigInt::one(), pow(s - 1) * (s - 1));
    tail += BigRational::new(BigInt::one(), pow(s) * 2);
    // B_{2k}/(2k)! for k = 1..4: 1/12, -1/720, 1/30240, -1/1209600
    let coeffs: [(i64, i64); 4] = [(1, 12), (-1, 720), (1, 30240), (-1, 1_209_600)];
    for (k, &(cn, cd)) in coeffs.iter().enumerate() {
        let k = k as u32 + 1;
        let mut poch = BigInt::one();
        for j in 0..(2 * k - 1) {
            poch *= s + j;
        }
        let term = BigRational::new(BigInt::from(cn) * poch, BigInt::from(cd) * pow(s + 2 * k - 1));
        tail += term;
    }
    sum.add(&Dec::from_ratio(&tail))
}

/// Local factor of c0 at p: (1 - p^-2 + p^-5) / ((1 - p^-2)(1 - p^-3)),
/// i.e. (p^5 - p^3 + 1) / ((p^2 - 1)(p^3 - 1)). The zeta(2) zeta(3) factors
/// are folded in so the product converges like p^-3.
fn c0_local_factor(p: u64) -> BigRational {
    let p = BigInt::from(p);
    let p2 = &p * &p;
    let p3 = &p2 * &p;
    let p5 = &p3 * &p2;
    BigRational::new(&p5 - &p3 + 1, (&p2 - 1) * (&p3 - 1))
}

fn product_over_primes(cutoff: u64, factor: impl Fn(u64) -> BigRational) -> Dec {
    let mut acc = Dec::one();
    for p in PrimeRange::new(2, cutoff).iter() {
        acc = acc.mul_ratio(&factor(p));
    }
    acc
}

/// c0 = zeta(2) zeta(3) prod_p (1 - p^-2 + p^-5), the shared Euler product
/// of the Serre-curve constants. Tolerance >= 1e-12.
pub fn c0(tolerance: f64) -> Result<EulerProductValue, ConstantsError> {
    if tolerance < 1e-12 {
        return Err(ConstantsError::ToleranceTooTight(tolerance, 1e-12));
    }
    // |log factor| <= 2 p^-3, so the tail past P is below 1/P^2; cut where
    // 2/P^2 clears the tolerance.
    let cutoff = ((2.0 / tolerance).sqrt().ceil() as u64).max(100);
    Ok(EulerProductValue {
        value: product_over_primes(cutoff, c0_local_factor),
        tail_bound: 2.0 / (cutoff as f64 * cutoff as f64),
        cutoff_prime: cutoff,
    })
}

/// Serre-curve constants for quadratic conductor m:
/// c'(E) = 1 + (2m)^-3 prod_{p | 2m} (1 - p^-2 + p^-5)^-1 exactly, and
/// c(E) = c'(E) * c0.
pub fn serre_constant(
    m: u64,
    tolerance: f64,
) -> Result<(BigRational, EulerProductValue), ConstantsError> {
    assert!(m >= 1);
    let two_m = BigInt::from(2 * m);
    let mut corr = BigRational::new(BigInt::one(), &two_m * &two_m * &two_m);
    for (p, _) in factorize(2 * m) {
        let pb = BigInt::from(p);
        let p3 = &pb * &pb * &pb;
        let p5 = &p3 * &pb * &pb;
        // (1 - p^-2 + p^-5)^-1 = p^5 / (p^5 - p^3 + 1)
        corr *= BigRational::new(p5.clone(), &p5 - &p3 + 1);
    }
    let c_prime = BigRational::one() + corr;
    let base = c0(tolerance)?;
    let c = EulerProductValue {
        value: base.value.mul_ratio(&c_prime),
        tail_bound: base.tail_bound * 2.0,
        cutoff_prime: base.cutoff_prime,
    };
    Ok((c_prime, c))
}

/// The Titchmarsh-divisor constant prod_p (1 + 1/(p(p-1))) via its closed
/// form zeta(2) zeta(3) / zeta(6). Tolerance >= 1e-12 honored trivially.
pub fn linnik_constant(tolerance: f64) -> Result<EulerProductValue, ConstantsError> {
    if tolerance < 1e-12 {
        return Err(ConstantsError::ToleranceTooTight(tolerance, 1e-12));
    }
    let value = zeta(2).mul(&zeta(3)).div(&zeta(6));
    Ok(EulerProductValue { value, tail_bound: 1e-30, cutoff_prime: 0 })
}

/// The same constant by direct truncated product; the slow 1/P convergence
/// caps the honest tolerance at 1e-7.
pub fn linnik_product_form(tolerance: f64) -> Result<EulerProductValue, ConstantsError> {
    if tolerance < 1e-7 {
        return Err(ConstantsError::ToleranceTooTight(tolerance, 1e-7));
    }
    let cutoff = ((2.0 / tolerance).ceil() as u64).max(100);
    let factor = |p: u64| {
        let pb = BigInt::from(p);
        let den = &pb * (&pb - 1);
        BigRational::new(&den + 1, den)
    };
    Ok(EulerProductValue {
        value: product_over_primes(cutoff, factor),
        tail_bound: 2.0 / cutoff as f64,
        cutoff_prime: cutoff,
    })
}

/// A multiplicative function given by its exact per-prime local factors.
pub trait MultiplicativeFn {
    /// g_p = sum_{k >= 0} g(p^k), exactly.
    fn local_factor(&self, p: u64) -> BigRational;
    /// g(n) for the twist level n.
    fn value(&self, n: u64) -> BigRational;
    /// Exponent e >= 2 with |local_factor(p) - 1| <= 2 p^-e for all p, or
    /// None when the defining series diverges.
    fn decay_exponent(&self) -> Option<u32>;
}

/// g(d) = phi(d) / |GL(2, Z/dZ)| = d^-3 prod_{p | d} (1 - p^-2)^-1, the
/// weight behind the splitting constants. Scaling: g(nd) = d^-3 g(n) for
/// d | n^infinity.
pub struct Gl2WeightFn;

impl MultiplicativeFn for Gl2WeightFn {
    fn local_factor(&self, p: u64) -> BigRational {
        c0_local_factor(p)
    }

    fn value(&self, n: u64) -> BigRational {
        let nb = BigInt::from(n);
        let mut v = BigRational::new(BigInt::one(), &nb * &nb * &nb);
        for (p, _) in factorize(n) {
            let p2 = BigInt::from(p) * p;
            v *= BigRational::new(p2.clone(), &p2 - 1);
        }
        v
    }

    fn decay_exponent(&self) -> Option<u32> {
        Some(3)
    }
}

/// Sum of the twisted function f(d) = alpha g(d) for n | d, g(d) otherwise:
/// equals c * prod_p g_p with
/// c = 1 + (alpha - 1) g(n) prod_{p | n} g_p^-1 (1 - p^-kappa)^-1.
pub fn twisted_multiplicative_sum(
    g: &impl MultiplicativeFn,
    n: u64,
    alpha: &BigRational,
    kappa: u32,
    tolerance: f64,
) -> Result<EulerProductValue, ConstantsError> {
    let decay = g.decay_exponent().ok_or(ConstantsError::Divergent)?;
    assert!(decay >= 2);
    if tolerance < 1e-12 {
        return Err(ConstantsError::ToleranceTooTight(tolerance, 1e-12));
    }
    // tail of sum_{p > P} 2 p^-decay is below 2 / P^(decay-1)
    let cutoff = ((2.0 / tolerance).powf(1.0 / (decay as f64 - 1.0)).ceil() as u64).max(100);
    let mut twist = BigRational::one();
    if !alpha.is_one() {
        let mut corr = (alpha - BigRational::one()) * g.value(n);
        for (p, _) in factorize(n) {
            let mut pk = BigInt::one();
            for _ in 0..kappa {
                pk *= p;
            }
            // (1 - p^-kappa)^-1 = pk / (pk - 1)
            corr *= BigRational::new(pk.clone(), &pk - 1);
            corr /= g.local_factor(p);
        }
        twist += corr;
    }
    let product = product_over_primes(cutoff, |p| g.local_factor(p));
    Ok(EulerProductValue {
        value: product.mul_ratio(&twist),
        tail_bound: 2.0 / (cutoff as f64).powi(decay as i32 - 1),
        cutoff_prime: cutoff,
    })
}
