use deftan::repcore::FqContext;
use deftan::weakly::{h0_sigma, h1_sigma_bar, local_homology, SigmaLocal, DEFAULT_WORK_LIMIT};
use deftan::PrimeChar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn homology_does_not_depend_on_choices() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in [3, 5, 7] {
        let pc = PrimeChar::new(p).unwrap();
        for t in [1, 2] {
            let reference = local_homology(pc, t, DEFAULT_WORK_LIMIT).unwrap();
            for _ in 0..3 {
                let field = FqContext::random(pc, t, &mut rng).unwrap();
                let local = SigmaLocal::with_random_shift(field, &mut rng);
                assert!(local.is_representation());
                let ranks = h1_sigma_bar(&local, DEFAULT_WORK_LIMIT).unwrap();
                assert_eq!(ranks.h0(), 1);
                assert_eq!(h0_sigma(&local), 1);
                assert_eq!(ranks.h1(), reference.h1(), "p={p} t={t} modulus {:?}", local.field().modulus());
            }
        }
    }
}

#[test]
fn h1_by_characteristic() {
    for t in [1, 2, 3] {
        let r = local_homology(PrimeChar::new(3).unwrap(), t, DEFAULT_WORK_LIMIT).unwrap();
        assert_eq!(r.h1(), t as usize - 1);
    }
    for p in [5, 7] {
        for t in [1, 2] {
            let r = local_homology(PrimeChar::new(p).unwrap(), t, DEFAULT_WORK_LIMIT).unwrap();
            assert_eq!(r.h1(), t as usize, "p={p} t={t}");
        }
    }
}

#[test]
fn bar_segment_bookkeeping() {
    let r = local_homology(PrimeChar::new(5).unwrap(), 2, DEFAULT_WORK_LIMIT).unwrap();
    assert_eq!(r.dim_c1, 3 * 24);
    assert_eq!(r.dim_c1 - r.rank_d1 - r.rank_d2, r.h1());
}
