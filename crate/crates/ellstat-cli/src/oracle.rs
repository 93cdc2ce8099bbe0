//! The `oracle` subcommand: brute-force cross-validation of the fast paths.
//! Any mismatch is an invariant violation (exit 3).

use std::collections::BTreeSet;

use num_rational::Rational64;

use ellstat_core::census::{
    d1_exists_congruence, d1_exists_modular, d1_set, schoof_mass,
};
use ellstat_core::ecfp::{brute_force_census, invariants_mod_p};
use ellstat_core::modmath::{divisors, PrimeRange};

use crate::CliError;

const CENSUS_LIMIT: u64 = 250;
const CRITERION_LIMIT: u64 = 3000;

fn invariant(p: u64, what: impl Into<String>) -> CliError {
    CliError::Invariant { p, what: what.into() }
}

/// All suites; `xmax` caps the census range (and, when above 3000, the
/// criterion range).
pub fn run_all(xmax: u64) -> Result<(), CliError> {
    let census_limit = xmax.min(CENSUS_LIMIT);
    let criterion_limit = xmax.max(CRITERION_LIMIT).min(10_000);
    check_invariants_against_census(census_limit)?;
    println!("oracle: local invariants match the census for 5 <= p <= {census_limit}");
    check_d1_sets(census_limit)?;
    println!("oracle: D1 sets match the brute-force closure for 5 <= p <= {census_limit}");
    check_schoof_mass(census_limit.min(200))?;
    println!("oracle: weighted masses match for 5 <= p <= {}", census_limit.min(200));
    check_criterion_equivalence(criterion_limit)?;
    println!("oracle: existence criteria agree for 5 <= p <= {criterion_limit}");
    Ok(())
}

pub fn check_invariants_against_census(limit: u64) -> Result<(), CliError> {
    for p in PrimeRange::new(5, limit).iter() {
        let entries =
            brute_force_census(p, limit).map_err(|e| invariant(p, e.to_string()))?;
        let mut mass = Rational64::from(0);
        for e in &entries {
            let inv = invariants_mod_p(&e.curve, 0xE11A7)
                .map_err(|er| invariant(p, er.to_string()))?;
            if (inv.n, inv.d1, inv.d2) != (e.n, e.d1, e.d2) {
                return Err(invariant(
                    p,
                    format!(
                        "class ({}, {}): census ({}, {}, {}) vs fast path ({}, {}, {})",
                        e.curve.a, e.curve.b, e.n, e.d1, e.d2, inv.n, inv.d1, inv.d2
                    ),
                ));
            }
            mass += e.aut_weight;
        }
        if mass != Rational64::from(2 * p as i64) {
            return Err(invariant(p, format!("census mass {mass} != 2p")));
        }
    }
    Ok(())
}

pub fn check_d1_sets(limit: u64) -> Result<(), CliError> {
    for p in PrimeRange::new(5, limit).iter() {
        let realized: BTreeSet<u64> = brute_force_census(p, limit)
            .map_err(|e| invariant(p, e.to_string()))?
            .iter()
            .flat_map(|e| divisors(e.d1))
            .collect();
        let computed: BTreeSet<u64> =
            d1_set(p)?.member_values().into_iter().collect();
        if computed != realized {
            return Err(invariant(
                p,
                format!("D1(p) mismatch: computed {computed:?}, realized {realized:?}"),
            ));
        }
    }
    Ok(())
}

pub fn check_schoof_mass(limit: u64) -> Result<(), CliError> {
    for p in PrimeRange::new(5, limit).iter() {
        let entries =
            brute_force_census(p, limit).map_err(|e| invariant(p, e.to_string()))?;
        for d in divisors(p - 1).into_iter().filter(|d| d % 2 == 1) {
            let expected: Rational64 =
                entries.iter().filter(|e| e.d1 % d == 0).map(|e| e.aut_weight).sum();
            let got = schoof_mass(p, d).map_err(|e| invariant(p, e.to_string()))?;
            if got != expected {
                return Err(invariant(p, format!("mass(p, {d}) = {got} != {expected}")));
            }
        }
    }
    Ok(())
}

pub fn check_criterion_equivalence(limit: u64) -> Result<(), CliError> {
    for p in PrimeRange::new(5, limit).iter() {
        for d in divisors(p - 1) {
            let congruence = d1_exists_congruence(p, d).is_some();
            let modular = d1_exists_modular(p, d);
            if congruence != modular {
                return Err(invariant(
                    p,
                    format!("criteria disagree at d = {d}: congruence {congruence}, modular {modular}"),
                ));
            }
        }
    }
    Ok(())
}

/// Used by `census --oracle`: the averaged sums must agree with per-prime
/// brute-force recomputation on the shared range.
pub fn check_census_against_brute_force(limit: u64) -> Result<(), CliError> {
    for p in PrimeRange::new(5, limit).iter() {
        let rec = d1_set(p)?;
        let realized: BTreeSet<u64> = brute_force_census(p, limit)
            .map_err(|e| invariant(p, e.to_string()))?
            .iter()
            .flat_map(|e| divisors(e.d1))
            .collect();
        if rec.members.len() != realized.len() {
            return Err(invariant(p, "census cardinality mismatch".to_string()));
        }
    }
    Ok(())
}
