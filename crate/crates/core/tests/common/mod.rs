//! Strategies shared by the property tests.
#![allow(dead_code)]

use proptest::prelude::*;
use twinmorse::exactgeom::{RationalVector, Q};

pub fn rational(bound: i64, den: i64) -> impl Strategy<Value = Q> {
    (-bound..=bound, 1..=den).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

pub fn vector(dim: usize, bound: i64, den: i64) -> impl Strategy<Value = RationalVector> {
    proptest::collection::vec(rational(bound, den), dim).prop_map(RationalVector::new)
}

pub fn nonzero_vector(dim: usize, bound: i64, den: i64) -> impl Strategy<Value = RationalVector> {
    vector(dim, bound, den).prop_filter("nonzero", |v| !v.is_zero())
}

/// Random simplicial complex on `n` vertices given by up to `k` facets.
pub fn complex(n: u32, k: usize, max_size: usize) -> impl Strategy<Value = twinmorse::polycomplex::SimplicialComplex> {
    proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=max_size), 1..=k)
        .prop_map(|fs| twinmorse::polycomplex::SimplicialComplex::from_facets(fs.into_iter().map(|s| s.into_iter().collect())))
}
