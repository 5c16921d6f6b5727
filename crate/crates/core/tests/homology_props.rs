mod common;

use common::complex;
use proptest::prelude::*;
use twinmorse::homology::{greedy_collapse, reduced_homology, ChainComplex, CollapseOutcome};
use twinmorse::polycomplex::{barycentric_subdivide, PolyComplex};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero(k in complex(7, 5, 4)) {
        prop_assert!(ChainComplex::new(&k).boundary_squares_to_zero());
    }

    #[test]
    fn euler_from_betti(k in complex(8, 6, 4)) {
        prop_assert_eq!(reduced_homology(&k).euler_characteristic(), k.euler_characteristic());
    }

    #[test]
    fn subdivision_keeps_homology(k in complex(5, 3, 3)) {
        let s = barycentric_subdivide(&PolyComplex::product(vec![k.clone()]));
        prop_assert_eq!(reduced_homology(&s.complex), reduced_homology(&k));
    }

    #[test]
    fn collapsible_means_acyclic(k in complex(7, 4, 4)) {
        if greedy_collapse(&k) == CollapseOutcome::CollapsedToPoint {
            prop_assert!(reduced_homology(&k).is_acyclic());
        }
    }
}
