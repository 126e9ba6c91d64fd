use proptest::prelude::*;
use siftlab_core::arith::{gcd, is_squarefree};
use siftlab_core::envelope::*;
use siftlab_core::sieve::{PrimeRule, ResidueRule, SiftingSystem};

fn system() -> SiftingSystem {
    SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0, -2, 6]), 30.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn character_sum_bound(a in 0u64..100_000, q in 1u64..30_030) {
        prop_assume!(is_squarefree(q));
        let comp = ComplementSystem::new(&system(), 5.0, 30.0).unwrap();
        prop_assume!(gcd(a, q) == 1);
        let v = comp.character_sum(a, q).unwrap();
        prop_assert!(v.norm() <= comp.character_bound(q) + 1e-12);
    }
}

#[test]
fn table_is_hermitian_and_reloads() {
    let s = system();
    for z0 in [2.0, 5.0, 30f64.sqrt()] {
        let m = FourierMajorant::build(&s, MajorantParams::new(z0, 30.0), Variant::default()).unwrap();
        assert!(m.hermitian_defect() < 1e-14);
        let back = FourierMajorant::from_rows(m.params, m.variant, &parse_csv(&m.to_csv()).unwrap());
        assert_eq!(back.rows(), m.rows());
        for b in &m.blocks {
            assert!(b.q <= 900);
        }
    }
}

#[test]
fn other_variants_are_reported() {
    let s = SiftingSystem::new(PrimeRule::All, ResidueRule::Fixed(vec![0]), 12.0).unwrap();
    let reports = variant_harness(&s, MajorantParams::new(2.0, 12.0), 200).unwrap();
    assert_eq!(reports.len(), Variant::all().len());
    assert!(reports[0].passes());
    let (v, _) = select_variant(&s, MajorantParams::new(2.0, 12.0), 200).unwrap();
    assert_eq!(v, Variant::default());
}

#[test]
fn coefficient_scaling_is_finite() {
    let s = system();
    let m = FourierMajorant::build(&s, MajorantParams::new(2.0, 30.0), Variant::default()).unwrap();
    let b = coefficient_bounds(&s, &m).unwrap();
    assert!(b.char_excess <= 1e-12);
    assert!(b.scaled_max.is_finite() && b.c_m.is_finite());
}
