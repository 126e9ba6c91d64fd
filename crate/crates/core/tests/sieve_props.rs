use proptest::prelude::*;
use siftlab_core::sieve::lemmas::{lemma_divisor, lemma_shift, lemma_window};
use siftlab_core::sieve::{build_system, sift, PrimeRule, ResidueRule, SiftingSystem, SystemConfig, Window};

fn brute(system: &SiftingSystem, n: u64) -> Vec<u64> {
    let ps: Vec<u64> = (2..system.z().ceil() as u64 + 1)
        .filter(|&p| siftlab_core::arith::is_prime(p) && (p as f64) < system.z() && system.contains_prime(p))
        .collect();
    (1..=n)
        .filter(|&m| ps.iter().all(|&p| !system.residue_rule().residues(p).contains(&(m % p))))
        .collect()
}

fn system_strategy() -> impl Strategy<Value = SiftingSystem> {
    (prop::collection::vec(-12i64..12, 1..3), 2.0f64..40.0, 0usize..3).prop_filter_map("degenerate", |(res, z, rule)| {
        let primes = match rule {
            0 => PrimeRule::All,
            1 => PrimeRule::classes(4, &[3]).unwrap(),
            _ => PrimeRule::classes(6, &[1, 5]).unwrap(),
        };
        SiftingSystem::new(primes, ResidueRule::Fixed(res), z).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sift_matches_brute_force(system in system_strategy(), n in 1u64..3000) {
        let set = sift(&system, n, Window::full(&system)).unwrap();
        prop_assert_eq!(set.members, brute(&system, n));
    }

    #[test]
    fn exact_inequalities_hold(system in system_strategy(), y in 1.0f64..300.0, z0 in 2.0f64..12.0, z1 in 2.0f64..12.0) {
        let d = [1u64, 13, 17, 221].into_iter().find(|&d| d > 1 && (d as f64) < 40.0).unwrap_or(1);
        if let Ok(checks) = lemma_divisor(&system, y, z0.max(18.0), d) {
            for c in checks {
                prop_assert!(c.holds(), "{:?}", c.id);
            }
        }
        prop_assert!(lemma_shift(&system, y, z1).unwrap().holds());
        prop_assert!(lemma_window(&system, y, z0).unwrap().holds());
    }
}

#[test]
fn config_round_trip() {
    let cfg = SystemConfig::from_json(r#"{"primes": {"mod": 4, "classes": [3]}, "residues": {"fixed": [0]}, "z": 10}"#).unwrap();
    let s = build_system(&cfg, None).unwrap();
    assert_eq!(s.sieving_primes(), vec![3, 7]);
}
