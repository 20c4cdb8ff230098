mod common;

use common::*;
use proptest::prelude::*;
use tensor_sos::tensor::special::identity;
use tensor_sos::tensor::SymmetricTensor;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_formats_round_trip(a in rational_tensor()) {
        check_round_trip(&a)?;
    }

    #[test]
    fn implication_chain(kind in 0u8..3, m in prop_oneof![Just(2usize), Just(4usize)], n in 2usize..=4, seed in any::<u64>()) {
        check_implications(&implication_instance(kind, m, n, seed))?;
    }

    #[test]
    fn implication_chain_on_arbitrary_tensors(a in small_quartic()) {
        check_implications(&a)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gershgorin_bound_is_below_the_minimum(a in small_quartic(), seed in any::<u64>()) {
        check_gershgorin(&a, seed)?;
    }

    #[test]
    fn oracle_minimizers_are_eigenvectors(a in small_quartic(), seed in any::<u64>()) {
        check_eigen_residual(&a, seed)?;
    }

    #[test]
    fn eigmin_scales_and_shifts(a in small_quartic(), t in 0.1f64..5.0, c in -3.0f64..3.0) {
        check_homogeneity_and_shift(&a, t, c)?;
    }

    #[test]
    fn certificates_reconstruct_nonnegative_forms(a in small_quartic(), shift in 0.0f64..4.0) {
        let id: SymmetricTensor = identity(4, a.dim()).unwrap();
        check_sos_soundness(&a.add(&id.scale(&shift)).unwrap())?;
    }
}
