use qmut::*;

fn check_class(n: usize) {
    for m in a_n_class(n).unwrap().quivers() {
        let seq = reduce_to_normal_form(m).unwrap_or_else(|e| panic!("{m:?}: {e}"));
        let check = verify_sequence(&seq);
        assert!(check.valid, "{m:?}: {:?}", check.failure);
        let target = normal_form_target(ClassSignature::of(m)).unwrap();
        assert!(is_isomorphic(seq.end(), &target), "{m:?} ended at {:?}", seq.end());
    }
}

#[test]
fn every_member_reduces_up_to_eight() {
    for n in 1..=8 {
        check_class(n);
    }
}

mod random {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// A class member grown from A_1 by random admissible enlargements.
    fn grow(seed: u64, target_n: usize) -> Quiver {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut q = Quiver::empty(1);
        while q.vertex_count() < target_n {
            let v = rng.gen_range(0..q.vertex_count());
            let step = if q.vertex_count() + 2 <= target_n && rng.gen_bool(0.5) {
                let o = if rng.gen() { Orientation::Clockwise } else { Orientation::Counterclockwise };
                Enlargement::Cycle(v, o)
            } else {
                let d = if rng.gen() { Direction::In } else { Direction::Out };
                Enlargement::Pendant(v, d)
            };
            if let Ok(next) = step.apply(&q) {
                if is_in_qn(&next).member {
                    q = next;
                }
            }
        }
        // scramble labels and orientation with class-preserving mutations
        for _ in 0..3 * target_n {
            let v = rng.gen_range(0..target_n);
            q = q.mutate(v).unwrap();
        }
        let mut perm: Vec<usize> = (0..target_n).collect();
        for i in (1..target_n).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        q.permuted(&perm)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn large_members_reduce(seed in any::<u64>(), n in 9usize..=24) {
            let q = grow(seed, n);
            prop_assert!(is_in_qn(&q).member);
            let seq = reduce_to_normal_form(&q).unwrap();
            prop_assert!(verify_sequence(&seq).valid);
            let target = normal_form_target(ClassSignature::of(&q)).unwrap();
            prop_assert!(is_isomorphic(seq.end(), &target));
        }
    }
}
