use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use siftlab_core::expsum::*;
use siftlab_core::sieve::{sift, SiftedSet, SiftingSystem, Window};

fn interval(n: u64) -> (SiftingSystem, SiftedSet) {
    let s = SiftingSystem::trivial(2.0).unwrap();
    let set = sift(&s, n, Window::full(&s)).unwrap();
    (s, set)
}

fn random_profile(rng: &mut ChaCha8Rng, n: u64) -> CoefficientProfile {
    let (_, set) = interval(n);
    let support: Vec<u64> = set.members.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
    let values = support.iter().map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    CoefficientProfile::new(&set, support, values).unwrap()
}

fn quadruple_sum(p: &CoefficientProfile) -> f64 {
    let n = p.n_max() as usize;
    let mut a = vec![Complex64::new(0.0, 0.0); n + 1];
    for (m, v) in p.iter() {
        a[m as usize] = v;
    }
    // Σ_s |Σ_{n1+n2=s} a_{n1} a_{n2}|²
    (0..=2 * n)
        .map(|s| {
            let c: Complex64 = (0..=n).filter(|&i| s >= i && s - i <= n).map(|i| a[i] * a[s - i]).sum();
            c.norm_sqr()
        })
        .sum()
}

#[test]
fn parseval_on_random_profiles() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let n = rng.gen_range(1..=4096);
        let p = random_profile(&mut rng, n);
        let r = lp_norm(&p, 2.0).unwrap();
        assert!((r.value - p.l2_sq()).abs() <= 1e-9 * p.l2_sq().max(1e-300));
    }
}

#[test]
fn fourth_moment_counts_quadruples() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [1u64, 3, 10, 33, 64] {
        let p = random_profile(&mut rng, n);
        let r = lp_norm(&p, 4.0).unwrap();
        let q = quadruple_sum(&p);
        assert!((r.value - q).abs() <= 1e-8 * q.max(1e-300), "n={n}");
    }
    let (_, set) = interval(3);
    assert!((lp_norm(&CoefficientProfile::indicator(&set), 4.0).unwrap().value - 19.0).abs() < 1e-8);
}

#[test]
fn fast_kernel_agrees_with_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..30 {
        let n = rng.gen_range(1..=5000);
        let p = random_profile(&mut rng, n);
        let pts: Vec<f64> = (0..rng.gen_range(1..200)).map(|_| rng.gen::<f64>()).collect();
        let slow = eval_naive(&p, &pts);
        let fast = eval_fast(&p, &pts, 1e-13);
        let scale = p.l1().max(1e-300);
        for (a, b) in slow.iter().zip(&fast.values) {
            assert!((a - b).norm() <= 1e-8 * scale);
        }
    }
}

#[test]
fn farey_gap_is_exact() {
    for q in 2..=100u64 {
        let f = farey_set(q).unwrap();
        assert_eq!(f.delta_exact(), Some(Ratio::new(1, q * (q - 1))), "Q={q}");
    }
}

fn descents(n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n.max(1)];
    let mut perm: Vec<usize> = (0..n).collect();
    fn rec(k: usize, perm: &mut Vec<usize>, counts: &mut Vec<u64>) {
        if k == perm.len() {
            let d = perm.windows(2).filter(|w| w[0] > w[1]).count();
            counts[d] += 1;
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, counts);
            perm.swap(k, i);
        }
    }
    rec(0, &mut perm, &mut counts);
    counts
}

#[test]
fn eulerian_matches_descent_counts() {
    use num_traits::ToPrimitive;
    for n in 1..=7 {
        let a: Vec<u64> = eulerian(n).iter().map(|c| c.to_u64().unwrap()).collect();
        assert_eq!(a, descents(n), "n={n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn classical_ceiling(seed in any::<u64>(), q in 1u64..40, grid in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=2048);
        let p = random_profile(&mut rng, n);
        let (s, _) = interval(n);
        let ctx = RowContext::new(&s, n, None).unwrap();
        let b = if grid { grid_set(q, rng.gen()).unwrap() } else { farey_set(q).unwrap() };
        let row = large_sieve_row(&p, &b, &ctx).unwrap();
        prop_assert!(row.within_ceiling(), "{} > {:?}", row.lhs, row.ceiling);
    }

    #[test]
    fn well_spaced_gap_invariant(points in prop::collection::vec(0.0f64..1.0, 1..50)) {
        if let Ok(set) = WellSpacedSet::new(points) {
            let pts = set.points();
            for i in 0..pts.len() {
                for j in 0..i {
                    let d = (pts[i] - pts[j]).abs();
                    prop_assert!(d.min(1.0 - d) >= set.delta() - 1e-15);
                }
            }
        }
    }

    #[test]
    fn lemma_y_to_t(y in 2.0f64..1e6, t in 2.72f64..1e6, k in 0usize..3) {
        let kappa = [0.5, 1.0, 2.0][k];
        if let Some(ok) = y_to_t_check(t, kappa, y) {
            prop_assert!(ok);
        }
    }
}
