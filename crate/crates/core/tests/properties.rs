mod common;

use common::*;
use maxmin_eigen::cycle::{cycle_mean, mean_of, CycleMode};
use maxmin_eigen::eigen::{classical_eigenpair, stabilize};
use maxmin_eigen::oracle::{cross_check, enumerate_cycles, Discrepancy};
use maxmin_eigen::{
    compute_bounds, omega_matvec, saturation_graph, solve, verify_eigenvector, Dbm, ExtScalar,
    SolveConfig, SolveReport, Status, Threshold, TropicalMatrix,
};
use num_rational::BigRational;
use proptest::prelude::*;

fn sparse_matrix(max_n: usize) -> impl Strategy<Value = TropicalMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        let entry = prop_oneof![
            1 => Just(ExtScalar::NegInf),
            3 => (-20i64..=20).prop_map(ExtScalar::int),
        ];
        prop::collection::vec(entry, n * n).prop_map(move |xs| {
            TropicalMatrix::from_rows(xs.chunks(n).map(<[ExtScalar]>::to_vec).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn karp_matches_cycle_enumeration(a in sparse_matrix(6)) {
        let cycles = enumerate_cycles(&a).unwrap();
        let max = cycles.iter().map(|(_, m)| m).max().cloned();
        let min = cycles.iter().map(|(_, m)| m).min().cloned();
        let hi = cycle_mean(&a, CycleMode::Max);
        let lo = cycle_mean(&a, CycleMode::Min);
        prop_assert_eq!(hi.value.as_rational().cloned(), max);
        prop_assert_eq!(lo.value.as_rational().cloned(), min);
        if hi.value.is_finite() {
            prop_assert_eq!(mean_of(&a, &hi.witness), hi.value.as_rational().cloned());
        }
        if lo.value.is_finite() {
            prop_assert_eq!(mean_of(&a, &lo.witness), lo.value.as_rational().cloned());
        }
    }

    #[test]
    fn scalar_json_round_trip(x in scalar()) {
        let text = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<ExtScalar>(&text).unwrap(), x.clone());
        prop_assert_eq!(x.to_string().parse::<ExtScalar>().unwrap(), x);
    }

    #[test]
    fn dbm_json_round_trip(d in dbm(5)) {
        for z in [Some(d.clone()), d.canonicalize()].into_iter().flatten() {
            let text = serde_json::to_string(&z).unwrap();
            prop_assert_eq!(serde_json::from_str::<Dbm>(&text).unwrap(), z);
        }
    }

    #[test]
    fn verification_is_translation_invariant(
        (a, t, x) in problem(5, -10, 10).prop_flat_map(|(a, t)| {
            let n = a.n();
            (Just(a), Just(t), finite_vec(n, -10, 10))
        }),
        c in -10i64..=10,
    ) {
        let y = omega_matvec(&a, &x, t).unwrap();
        let shifted: Vec<_> = x.iter().map(|v| v.trop_mul(&ExtScalar::int(c)).unwrap()).collect();
        // A constant image difference is an eigenvalue by construction.
        let diffs: Vec<_> = y.iter().zip(&x).map(|(p, q)| p.trop_mul(&-q).unwrap()).collect();
        let lambda = diffs[0].clone();
        let is_eigen = diffs.iter().all(|d| *d == lambda);
        prop_assert_eq!(verify_eigenvector(&a, t, &lambda, &x).unwrap(), is_eigen);
        prop_assert_eq!(verify_eigenvector(&a, t, &lambda, &shifted).unwrap(), is_eigen);
    }

    #[test]
    fn classical_cases_verify(a in (1usize..=6).prop_flat_map(|n| matrix_of(n, -20, 20)), top in any::<bool>()) {
        let n = a.n();
        let t = Threshold::new(if top { n } else { 1 }, n).unwrap();
        let (lambda, x) = classical_eigenpair(&a, t).expect("finite matrices have eigenpairs");
        prop_assert!(verify_eigenvector(&a, t, &lambda, &x).unwrap());
    }

    #[test]
    fn bounds_hold_on_sampled_points((a, t) in problem(5, -10, 10), seed in any::<u64>()) {
        let s = stabilize(&a, t, 10_000).unwrap();
        let d = s.fixed_point();
        let b = compute_bounds(&a, d, t).unwrap();
        for x in d.sample(6, seed).unwrap() {
            let y = omega_matvec(&a, &x, t).unwrap();
            for i in 0..a.n() {
                for j in 0..a.n() {
                    let g = y[i].trop_mul(&-&x[j]).unwrap();
                    prop_assert!(b.lower_matrix.get(i, j) <= &g && &g <= b.upper_matrix.get(i, j));
                }
            }
        }
    }
}

fn solved(a: &TropicalMatrix, t: Threshold) -> SolveReport {
    solve(a, t.p(), &SolveConfig::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn certified_entries_are_sound((a, t) in problem(5, 0, 30)) {
        let r = solved(&a, t);
        let (Some(lambda), Some(x)) = (&r.lambda, &r.eigenvector) else {
            return Ok(());
        };
        prop_assert!(verify_eigenvector(&a, t, lambda, x).unwrap());
        prop_assert!(r.stabilized_dbm.contains(x).unwrap(), "eigenvector outside the stabilized zone");
        let sat = saturation_graph(&a, t, x).unwrap();
        prop_assert!(r.active.act_graph.is_subset(&sat), "certified entry not saturated");
        prop_assert!(sat.is_subset(&r.active.pos_graph), "saturated entry ruled out");
        prop_assert!(r.active.act_graph.is_subset(&r.active.pos_graph));
        prop_assert!(&r.bounds.lower <= lambda && lambda <= &r.bounds.upper);
    }

    #[test]
    fn solved_reports_pass_cross_check((a, t) in problem(5, 0, 30)) {
        let r = solved(&a, t);
        let found = cross_check(&r, &a, t, 100_000).unwrap();
        let hard: Vec<_> = found
            .iter()
            .filter(|d| r.status == Status::Solved || !matches!(d, Discrepancy::LambdaMismatch { .. }))
            .collect();
        prop_assert!(hard.is_empty(), "{:?}", hard);
    }

    #[test]
    fn report_json_round_trip((a, t) in problem(4, 0, 20)) {
        let r = solved(&a, t);
        let text = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<SolveReport>(&text).unwrap(), r);
    }
}

#[test]
fn enumeration_counts_complete_digraph_cycles() {
    // Simple cycles of the complete digraph with loops on 4 nodes:
    // 4 loops + 6 two-cycles + 8 three-cycles + 6 four-cycles.
    let a = TropicalMatrix::filled(4, ExtScalar::zero());
    assert_eq!(enumerate_cycles(&a).unwrap().len(), 24);
    assert!(enumerate_cycles(&a)
        .unwrap()
        .iter()
        .all(|(_, m)| *m == BigRational::from_integer(0.into())));
}
