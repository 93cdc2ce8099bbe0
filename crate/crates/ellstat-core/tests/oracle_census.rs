//! Cross-validation of every fast path against the brute-force census:
//! local invariants per isomorphism class, the D1 sets, and the weighted
//! Schoof masses, all as exact values.

use std::collections::BTreeSet;

use num_rational::Rational64;

use ellstat_core::census::{d1_set, schoof_mass};
use ellstat_core::ecfp::{brute_force_census, invariants_mod_p};
use ellstat_core::modmath::{divisors, PrimeRange};

const ORACLE_LIMIT: u64 = 250;

#[test]
fn census_matches_local_invariants_per_class() {
    for p in PrimeRange::new(5, ORACLE_LIMIT).iter() {
        for entry in brute_force_census(p, ORACLE_LIMIT).unwrap() {
            let inv = invariants_mod_p(&entry.curve, 0xC0FFEE).unwrap();
            assert_eq!(
                (inv.n, inv.d1, inv.d2),
                (entry.n, entry.d1, entry.d2),
                "class ({}, {}) mod {p}",
                entry.curve.a,
                entry.curve.b
            );
            assert_eq!(inv.supersingular, inv.a == 0);
        }
    }
}

#[test]
fn census_total_mass_is_2p() {
    for p in PrimeRange::new(5, ORACLE_LIMIT).iter() {
        let mass: Rational64 =
            brute_force_census(p, ORACLE_LIMIT).unwrap().iter().map(|e| e.aut_weight).sum();
        assert_eq!(mass, Rational64::from(2 * p as i64), "p = {p}");
    }
}

#[test]
fn d1_sets_equal_brute_force_closure() {
    for p in PrimeRange::new(5, ORACLE_LIMIT).iter() {
        let realized: BTreeSet<u64> = brute_force_census(p, ORACLE_LIMIT)
            .unwrap()
            .iter()
            .flat_map(|e| divisors(e.d1))
            .collect();
        let computed: BTreeSet<u64> = d1_set(p).unwrap().member_values().into_iter().collect();
        assert_eq!(computed, realized, "p = {p}");
    }
}

#[test]
fn schoof_mass_equals_weighted_census() {
    for p in PrimeRange::new(5, 200).iter() {
        let entries = brute_force_census(p, ORACLE_LIMIT).unwrap();
        for d in divisors(p - 1) {
            if d % 2 == 0 {
                continue;
            }
            let expected: Rational64 = entries
                .iter()
                .filter(|e| e.d1 % d == 0)
                .map(|e| e.aut_weight)
                .sum();
            let got = schoof_mass(p, d).unwrap();
            assert_eq!(got, expected, "p = {p}, d = {d}");
        }
    }
}

#[test]
fn supersingular_census_classes_have_d1_at_most_2() {
    for p in PrimeRange::new(5, ORACLE_LIMIT).iter() {
        for e in brute_force_census(p, ORACLE_LIMIT).unwrap() {
            if e.n == p + 1 {
                assert!(e.d1 <= 2, "supersingular class at p = {p} has d1 = {}", e.d1);
            }
        }
    }
}
