mod common;

use std::cmp::Ordering;

use common::{nonzero_vector, rational, vector};
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use twinmorse::exactgeom::{cmp_sqrt, cmp_sum_sqrt, parse_q, perp_component, qstr, rank, SqrtRational};

proptest! {
    #[test]
    fn cmp_sqrt_follows_squares(a in rational(400, 30), b in rational(400, 30)) {
        let (a, b) = (a.abs(), b.abs());
        let (sa, sb) = (SqrtRational::from_square(a.clone()), SqrtRational::from_square(b.clone()));
        prop_assert_eq!(cmp_sqrt(&sa, &sb), a.cmp(&b));
    }

    // perfect squares make both sides rational, so the comparison has a direct oracle
    #[test]
    fn sum_sqrt_on_perfect_squares(a in rational(30, 12), b in rational(30, 12), c in rational(30, 12)) {
        let (a, b, c) = (a.abs(), b.abs(), c.abs());
        let s = |x: &twinmorse::exactgeom::Q| SqrtRational::from_square(x * x);
        let expect = ((&a + &b) / twinmorse::exactgeom::qi(2)).cmp(&c);
        prop_assert_eq!(cmp_sum_sqrt(&s(&a), &s(&b), &s(&c)), expect);
    }

    #[test]
    fn sum_sqrt_equality_is_rare_but_exact(x in rational(20, 6)) {
        // √(x²) and √(x²) average to √(x²)
        let s = SqrtRational::from_square(&x * &x);
        prop_assert_eq!(cmp_sum_sqrt(&s, &s, &s), Ordering::Equal);
    }

    #[test]
    fn perp_component_is_orthogonal(v in vector(4, 12, 5), span in proptest::collection::vec(nonzero_vector(4, 6, 3), 1..=3)) {
        if let Ok(p) = perp_component(&v, &span) {
            for s in &span {
                prop_assert!(p.dot(s).is_zero());
            }
            let rest = &v - &p;
            let mut with = span.clone();
            with.push(rest);
            prop_assert_eq!(rank(&with), rank(&span));
        } else {
            prop_assert!(rank(&span) < span.len());
        }
    }

    #[test]
    fn rational_strings_round_trip(x in rational(10_000, 999)) {
        prop_assert_eq!(parse_q(&qstr(&x)), Some(x));
    }
}
