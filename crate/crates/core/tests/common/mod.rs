#![allow(dead_code)]

use maxmin_eigen::{Dbm, ExtScalar, Threshold, TropicalMatrix};
use proptest::prelude::*;

pub fn m<R: AsRef<[i64]>>(rows: &[R]) -> TropicalMatrix {
    TropicalMatrix::from_ints(rows)
}

pub fn v(xs: &[i64]) -> Vec<ExtScalar> {
    xs.iter().map(|&x| ExtScalar::int(x)).collect()
}

pub fn scalar() -> impl Strategy<Value = ExtScalar> {
    prop_oneof![
        1 => Just(ExtScalar::NegInf),
        1 => Just(ExtScalar::PosInf),
        8 => (-30i64..=30, 1i64..=3).prop_map(|(a, b)| ExtScalar::ratio(a, b)),
    ]
}

pub fn finite_vec(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<ExtScalar>> {
    prop::collection::vec(lo..=hi, n).prop_map(|xs| v(&xs))
}

/// An all-finite integer matrix of size `n`.
pub fn matrix_of(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = TropicalMatrix> {
    prop::collection::vec(lo..=hi, n * n).prop_map(move |xs| {
        let rows: Vec<Vec<i64>> = xs.chunks(n).map(<[i64]>::to_vec).collect();
        TropicalMatrix::from_ints(&rows)
    })
}

/// `(A, t)` with `A` all-finite, `2 <= n <= max_n` and any threshold.
pub fn problem(max_n: usize, lo: i64, hi: i64) -> impl Strategy<Value = (TropicalMatrix, Threshold)> {
    (2..=max_n)
        .prop_flat_map(move |n| (matrix_of(n, lo, hi), 1..=n))
        .prop_map(|(a, p)| {
            let n = a.n();
            (a, Threshold::new(p, n).unwrap())
        })
}

/// A zero-diagonal DBM whose off-diagonal bounds are finite or `-∞`.
pub fn dbm_of(n: usize) -> impl Strategy<Value = Dbm> {
    let entry = prop_oneof![
        1 => Just(ExtScalar::NegInf),
        3 => (-12i64..=6).prop_map(ExtScalar::int),
    ];
    prop::collection::vec(entry, n * n).prop_map(move |mut xs| {
        for i in 0..n {
            xs[i * n + i] = ExtScalar::zero();
        }
        let rows: Vec<Vec<ExtScalar>> = xs.chunks(n).map(<[ExtScalar]>::to_vec).collect();
        Dbm::new(TropicalMatrix::from_rows(rows).unwrap()).unwrap()
    })
}

pub fn dbm(max_n: usize) -> impl Strategy<Value = Dbm> {
    (1..=max_n).prop_flat_map(dbm_of)
}
