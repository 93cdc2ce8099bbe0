use ellstat_core::census::{d1_set, d1_exists_congruence};
use ellstat_core::modmath::{divisors, PrimeRange};

#[test]
fn probe_census_large_p() {
    // Count |D1(p)| and compare with the direct definition per prime.
    for p in PrimeRange::new(10_000, 10_400).iter() {
        let rec = d1_set(p).unwrap();
        let cap = p.isqrt() + 1;
        // reference: direct membership by the two congruences, brute force over a
        let mut reference = Vec::new();
        for d in divisors(p - 1) {
            if d > cap { continue; }
            let d2 = (d * d) as i64;
            let bound = (4.0 * p as f64).sqrt() as i64 + 2;
            let found = (-bound..=bound).any(|a| {
                (a * a) < 4 * p as i64
                    && (a - 2).rem_euclid(d as i64) == 0
                    && (p as i64 + 1 - a).rem_euclid(d2) == 0
            });
            if found { reference.push(d); }
        }
        assert_eq!(rec.member_values(), reference, "p = {p}");
        // sanity on the small/large split
        let smalls = rec.member_values().iter().filter(|&&d| {
            let d = d as u128; d*d*d*d < 16 * p as u128
        }).count() as u64;
        assert_eq!(rec.small_count, smalls, "split at p = {p}");
    }
    println!("census agrees with direct reference on [10^4, 10^4+400]");
    // measure the totals composition at 2e5
    let t = ellstat_core::census::census_averages(200_000, 1, 1 << 21).unwrap();
    println!("X=2e5: primes={} all={} small={} large={}", t.primes, t.sum_all, t.sum_small, t.sum_large);
}
