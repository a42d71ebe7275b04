mod common;

use proptest::prelude::*;
use segre_core::bundles::{chern, BundleExpr};
use segre_core::CurveClass;

use common::{chern_data, divisor};

proptest! {
    #[test]
    fn twisting_a_line_adds_divisors(a in divisor(-4, 4), m in divisor(-4, 4)) {
        let twisted = chern(&BundleExpr::Line(a).twist(m)).unwrap();
        prop_assert_eq!(twisted, chern(&BundleExpr::Line(a.add(&m).unwrap())).unwrap());
    }

    #[test]
    fn dual_is_an_involution(d in chern_data(8)) {
        prop_assert_eq!(d.dual().unwrap().dual().unwrap(), d);
    }

    #[test]
    fn rank_two_bundles_are_self_dual_up_to_twist(d in chern_data(2)) {
        prop_assume!(d.rank == 2);
        prop_assert_eq!(d.dual().unwrap().twist(&d.c1).unwrap(), d);
    }

    #[test]
    fn zero_twist_is_the_identity(d in chern_data(8)) {
        prop_assert_eq!(d.twist(&segre_core::Divisor3::ZERO).unwrap(), d);
    }

    #[test]
    fn split_bundles_have_kunneth_h0(parts in prop::collection::vec(divisor(-2, 3), 1..=4)) {
        let e = BundleExpr::Sum(parts.iter().copied().map(BundleExpr::Line).collect());
        let expected: u64 = parts.iter().map(|a| segre_core::cohomology::h_line(a).unwrap().h(0)).sum();
        prop_assert_eq!(chern(&e).unwrap().h0, Some(expected));
    }

    #[test]
    fn line_bundles_have_no_higher_classes(a in divisor(-9, 9)) {
        let d = chern(&BundleExpr::Line(a)).unwrap();
        prop_assert_eq!((d.rank, d.c2, d.c3), (1, CurveClass::ZERO, 0));
    }
}
