//! Multiplicative functions: Euler phi, psi, the GL(2) order, Kronecker
//! symbols, ideal-norm counts and quadratic-field conductors.

use super::factor::{divisors, factorize, gcd};

/// Euler's totient.
pub fn euler_phi(d: u64) -> u64 {
    assert!(d >= 1);
    let mut v = d;
    for (p, _) in factorize(d) {
        v = v / p * (p - 1);
    }
    v
}

/// psi(d) = d * prod_{p | d} (1 + 1/p).
pub fn psi(d: u64) -> u64 {
    assert!(d >= 1);
    let mut v = d;
    for (p, _) in factorize(d) {
        v = v / p * (p + 1);
    }
    v
}

/// |GL(2, Z/dZ)| = d * psi(d) * phi(d)^2, exact. Returned as `u128` since it
/// grows like d^4.
pub fn gl2_order(d: u64) -> u128 {
    assert!(d >= 1);
    let phi = euler_phi(d) as u128;
    d as u128 * psi(d) as u128 * phi * phi
}

/// Number of even Dirichlet characters modulo d: phi(d)/2 for d > 2, else 1.
pub fn phi_plus(d: u64) -> u64 {
    if d > 2 {
        euler_phi(d) / 2
    } else {
        1
    }
}

/// Kronecker symbol (a/n), extending the Jacobi symbol to all integers.
pub fn kronecker(a: i64, n: i64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i64;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    // factor out 2s from n
    if n % 2 == 0 {
        if a % 2 == 0 {
            return 0;
        }
        let mut twos = 0;
        while n % 2 == 0 {
            n /= 2;
            twos += 1;
        }
        if twos % 2 == 1 {
            // (a/2) = (2/a) for the Kronecker symbol: 0, 1, -1 per a mod 8
            match a.rem_euclid(8) {
                1 | 7 => {}
                3 | 5 => result = -result,
                _ => return 0,
            }
        }
    }
    // now n odd positive: Jacobi symbol
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            match n % 8 {
                3 | 5 => result = -result,
                _ => {}
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// The quadratic character of an imaginary quadratic field, carried by its
/// fundamental discriminant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadChar {
    d: i64,
}

impl QuadChar {
    /// `d` must be a negative fundamental discriminant (d = 1 mod 4
    /// squarefree, or d = 4m with m = 2, 3 mod 4 squarefree).
    pub fn new(d: i64) -> Self {
        assert!(d < 0, "imaginary field required");
        let m4 = d.rem_euclid(4);
        assert!(m4 == 0 || m4 == 1, "{d} is not a discriminant");
        assert!(is_fundamental(d), "{d} is not fundamental");
        QuadChar { d }
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    /// chi(n) via the Kronecker symbol (d/n).
    pub fn eval(&self, n: u64) -> i64 {
        kronecker(self.d, n as i64)
    }
}

fn is_fundamental(d: i64) -> bool {
    let squarefree = |m: i64| {
        let f = factorize(m.unsigned_abs());
        f.iter().all(|&(_, e)| e == 1)
    };
    if d.rem_euclid(4) == 1 {
        squarefree(d)
    } else if d % 4 == 0 {
        let m = d / 4;
        let r = m.rem_euclid(4);
        (r == 2 || r == 3) && squarefree(m)
    } else {
        false
    }
}

/// r_K(n): the number of integral ideals of norm n, computed as the
/// divisor-character sum `sum_{d | n} chi(d)`.
pub fn ideal_norm_count(chi: QuadChar, n: u64) -> u64 {
    assert!(n >= 1);
    let s: i64 = divisors(n).iter().map(|&d| chi.eval(d)).sum();
    debug_assert!(s >= 0);
    s as u64
}

/// Absolute discriminant of Q(sqrt(delta)), i.e. the conductor of its
/// quadratic character. Square input (degenerate field) returns 1 by
/// convention; callers treat such a curve as non-Serre.
pub fn quad_field_conductor(delta: i64) -> u64 {
    assert!(delta != 0);
    // squarefree kernel, keeping the sign
    let mut s: i64 = if delta < 0 { -1 } else { 1 };
    for (p, e) in factorize(delta.unsigned_abs()) {
        if e % 2 == 1 {
            s *= p as i64;
        }
    }
    if s == 1 {
        return 1;
    }
    if s.rem_euclid(4) == 1 {
        s.unsigned_abs()
    } else {
        4 * s.unsigned_abs()
    }
}

#[allow(dead_code)]
pub(crate) fn coprime(a: u64, b: u64) -> bool {
    gcd(a, b) == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_psi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(36), 12);
        assert_eq!(psi(6), 12);
        assert_eq!(psi(36), 72);
        assert_eq!(psi(1), 1);
    }

    #[test]
    fn gl2_values() {
        assert_eq!(gl2_order(1), 1);
        assert_eq!(gl2_order(2), 6);
        assert_eq!(gl2_order(4), 96);
        assert_eq!(gl2_order(6), 288);
        assert_eq!(gl2_order(36), 373248);
        assert_eq!(gl2_order(140), 92897280);
    }

    #[test]
    fn gl2_matches_matrix_enumeration() {
        // Count invertible 2x2 matrices mod d directly.
        for d in 2u64..=20 {
            let mut count = 0u128;
            for a in 0..d {
                for b in 0..d {
                    for c in 0..d {
                        for e in 0..d {
                            let det = ((a * e) % d + d - (b * c) % d) % d;
                            if gcd(det, d) == 1 {
                                count += 1;
                            }
                        }
                    }
                }
            }
            assert_eq!(gl2_order(d), count, "d = {d}");
        }
    }

    #[test]
    fn gl2_multiplicative_on_coprime_parts_to_500() {
        for d1 in 2u64..=250 {
            for d2 in 2u64..=500 / d1 {
                if coprime(d1, d2) {
                    assert_eq!(gl2_order(d1 * d2), gl2_order(d1) * gl2_order(d2));
                }
            }
        }
    }

    #[test]
    fn phi_plus_values() {
        assert_eq!(phi_plus(1), 1);
        assert_eq!(phi_plus(2), 1);
        assert_eq!(phi_plus(3), 1);
        assert_eq!(phi_plus(5), 2);
        assert_eq!(phi_plus(12), 2);
    }

    #[test]
    fn kronecker_minus_four() {
        // chi_{-4} is the nontrivial character mod 4.
        for n in 1..200u64 {
            let expect = match n % 4 {
                1 => 1,
                3 => -1,
                _ => 0,
            };
            assert_eq!(kronecker(-4, n as i64), expect, "n = {n}");
        }
    }

    #[test]
    fn ideal_norm_counts_gaussian() {
        let chi = QuadChar::new(-4);
        assert_eq!(ideal_norm_count(chi, 1), 1);
        assert_eq!(ideal_norm_count(chi, 5), 2);
        assert_eq!(ideal_norm_count(chi, 3), 0);
        assert_eq!(ideal_norm_count(chi, 12818000), 32);
    }

    #[test]
    fn ideal_norm_count_is_lattice_count() {
        // r_{Q(i)}(n) = #{(x, y) : x^2 + y^2 = n} / 4.
        let chi = QuadChar::new(-4);
        for n in 1..=2000u64 {
            let mut lattice = 0u64;
            let bound = n.isqrt() as i64;
            for x in -bound..=bound {
                let rest = n as i64 - x * x;
                if rest < 0 {
                    continue;
                }
                let y = (rest as u64).isqrt() as i64;
                if y * y == rest {
                    lattice += if y == 0 { 1 } else { 2 };
                }
            }
            assert_eq!(ideal_norm_count(chi, n), lattice / 4, "n = {n}");
        }
    }

    #[test]
    fn conductors() {
        assert_eq!(quad_field_conductor(-15552), 3); // -2^6 * 3^5
        assert_eq!(quad_field_conductor(37), 37);
        assert_eq!(quad_field_conductor(-4), 4);
        assert_eq!(quad_field_conductor(-3), 3);
        assert_eq!(quad_field_conductor(8), 8);
        assert_eq!(quad_field_conductor(5), 5);
        assert_eq!(quad_field_conductor(36), 1); // perfect square, degenerate
    }
}
