//! The group law on a short Weierstrass curve, affine coordinates.

use rand::Rng;

use super::curve::CurveModP;
use crate::modmath::{addmod, invmod, mulmod, sqrt_mod, submod};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl Point {
    #[inline]
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn affine(x: u64, y: u64) -> Self {
        Point::Affine { x, y }
    }
}

impl CurveModP {
    pub fn is_on_curve(&self, pt: Point) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine { x, y } => mulmod(y, y, self.p) == self.rhs(x),
        }
    }

    pub fn neg(&self, pt: Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine { x, y: if y == 0 { 0 } else { self.p - y } },
        }
    }

    pub fn add(&self, lhs: Point, rhs: Point) -> Point {
        let p = self.p;
        let (x1, y1) = match lhs {
            Point::Infinity => return rhs,
            Point::Affine { x, y } => (x, y),
        };
        let (x2, y2) = match rhs {
            Point::Infinity => return lhs,
            Point::Affine { x, y } => (x, y),
        };
        let lambda = if x1 != x2 {
            let num = submod(y2, y1, p);
            let den = submod(x2, x1, p);
            mulmod(num, invmod(den, p).expect("p prime"), p)
        } else if y1 != y2 || y1 == 0 {
            // vertical line: Q = -P
            return Point::Infinity;
        } else {
            // doubling: (3x^2 + A) / 2y
            let num = addmod(mulmod(3 % p, mulmod(x1, x1, p), p), self.a, p);
            let den = mulmod(2 % p, y1, p);
            mulmod(num, invmod(den, p).expect("p prime"), p)
        };
        let x3 = submod(submod(mulmod(lambda, lambda, p), x1, p), x2, p);
        let y3 = submod(mulmod(lambda, submod(x1, x3, p), p), y1, p);
        Point::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, pt: Point) -> Point {
        self.add(pt, pt)
    }

    /// k * P by double-and-add; scalar_mul(0, P) = infinity.
    pub fn scalar_mul(&self, k: u64, pt: Point) -> Point {
        let mut acc = Point::Infinity;
        let mut base = pt;
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            k >>= 1;
            if k > 0 {
                base = self.double(base);
            }
        }
        acc
    }

    /// A uniformly-ish sampled affine point: seeded x-sampling plus a square
    /// root, with the sign of y chosen by one RNG bit. Deterministic given
    /// the RNG state.
    pub fn random_point(&self, rng: &mut impl Rng) -> Point {
        for _ in 0..100_000 {
            let x = rng.gen_range(0..self.p);
            let rhs = self.rhs(x);
            if rhs == 0 {
                return Point::Affine { x, y: 0 };
            }
            if let Some(r) = sqrt_mod(rhs, self.p) {
                let y = if rng.gen::<bool>() { r } else { self.p - r };
                return Point::Affine { x, y };
            }
        }
        unreachable!("no affine point found; nonsingular curve over F_p (p >= 5) always has one")
    }
}
