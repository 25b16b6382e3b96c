//! Property tests for the structural invariants: enumeration vs. counting,
//! path round trips, ordering stability, the telescoping identity, and
//! bilinearity.

use proptest::prelude::*;

use mixedpath::action::{
    build_action_matrix, evaluate_action_r, evaluate_action_s, ActionMatrix, HamiltonianModel,
};
use mixedpath::game::{generalized_action, solve_minimax, MixedPathPair, NormMode, Provenance};
use mixedpath::lattice::{count_paths, enumerate_paths, time_reverse, LatticeSpec, PathSetJson};

fn small_spec() -> impl Strategy<Value = LatticeSpec> {
    (
        1usize..=4,
        prop_oneof![Just(1u32), Just(3u32), Just(5u32)],
        -2i64..=2,
        prop_oneof![Just(None), (-3i64..=3).prop_map(Some)],
        0.2f64..2.0,
        0.2f64..2.0,
        0.5f64..3.0,
    )
        .prop_filter_map(
            "feasible spec",
            |(steps, branching, start, end, dt, dq, mass)| {
                LatticeSpec::new(steps, dt, dq, branching, mass, start, end).ok()
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_size_matches_count(spec in small_spec()) {
        let count = count_paths(&spec).unwrap();
        match enumerate_paths(&spec) {
            Ok(set) => prop_assert_eq!(set.len() as u128, count),
            Err(_) => prop_assert_eq!(count, 0),
        }
    }

    #[test]
    fn momentum_paths_integrate_back(spec in small_spec()) {
        if let Ok(set) = enumerate_paths(&spec) {
            for (q, p) in set.qpaths.iter().zip(&set.ppaths) {
                prop_assert_eq!(&p.integrate(spec.endpoint_start), &q.sites);
            }
        }
    }

    #[test]
    fn enumeration_is_sorted_and_stable(spec in small_spec()) {
        if let Ok(set) = enumerate_paths(&spec) {
            let mut sorted = set.qpaths.clone();
            sorted.sort_by(|a, b| a.sites.cmp(&b.sites));
            prop_assert_eq!(&sorted, &set.qpaths);
            let again = enumerate_paths(&spec).unwrap();
            let a = serde_json::to_vec(&PathSetJson::from(&set)).unwrap();
            let b = serde_json::to_vec(&PathSetJson::from(&again)).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn time_reverse_is_involution(spec in small_spec()) {
        if let Ok(set) = enumerate_paths(&spec) {
            let twice = time_reverse(&time_reverse(&set));
            let a: Vec<_> = set.qpaths.iter().map(|q| q.sites.clone()).collect();
            let b: Vec<_> = twice.qpaths.iter().map(|q| q.sites.clone()).collect();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn telescoping_identity_on_matched_pairs(spec in small_spec(), omega in 0.0f64..2.0) {
        let model = HamiltonianModel::harmonic(spec.mass, omega, 1.0).unwrap();
        if let Ok(set) = enumerate_paths(&spec) {
            for (q, p) in set.qpaths.iter().zip(&set.ppaths) {
                let s = evaluate_action_s(p, q, &model, &spec).unwrap();
                let r = evaluate_action_r(p, q, &model, &spec).unwrap();
                let boundary = mixedpath::action::boundary_term(p, q, &spec);
                let scale = s.abs().max(r.abs()).max(1.0);
                prop_assert!(((s - r) - boundary).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn matrix_diagonal_is_matched_actions(spec in small_spec()) {
        let model = HamiltonianModel::free(spec.mass, 1.0).unwrap();
        if let Ok(set) = enumerate_paths(&spec) {
            if set.len() <= 64 {
                let matrix = build_action_matrix(&set, &model).unwrap();
                for (j, (q, p)) in set.qpaths.iter().zip(&set.ppaths).enumerate() {
                    let s = evaluate_action_s(p, q, &model, &spec).unwrap();
                    prop_assert_eq!(matrix.entries[(j, j)], s);
                }
            }
        }
    }

    #[test]
    fn generalized_action_is_bilinear(
        entries in proptest::collection::vec(-3.0f64..3.0, 9),
        alpha in proptest::collection::vec(-1.0f64..1.0, 3),
        alpha2 in proptest::collection::vec(-1.0f64..1.0, 3),
        beta in proptest::collection::vec(-1.0f64..1.0, 3),
        c1 in -2.0f64..2.0,
        c2 in -2.0f64..2.0,
    ) {
        let matrix = ActionMatrix::from_entries(
            ndarray::Array2::from_shape_vec((3, 3), entries).unwrap(),
        );
        let pair = |a: Vec<f64>, b: Vec<f64>| {
            MixedPathPair::new(a, b, NormMode::NormForm, Provenance::Manual)
        };
        let combo: Vec<f64> = alpha
            .iter()
            .zip(&alpha2)
            .map(|(x, y)| c1 * x + c2 * y)
            .collect();
        let lhs = generalized_action(&pair(combo, beta.clone()), &matrix).unwrap();
        let rhs = c1 * generalized_action(&pair(alpha, beta.clone()), &matrix).unwrap()
            + c2 * generalized_action(&pair(alpha2, beta), &matrix).unwrap();
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
    }

    #[test]
    fn minimax_value_within_pure_bounds(
        entries in proptest::collection::vec(-5.0f64..5.0, 16),
    ) {
        let s = ndarray::Array2::from_shape_vec((4, 4), entries).unwrap();
        let solution = solve_minimax(&ActionMatrix::from_entries(s.clone()));
        let maximin = (0..4)
            .map(|i| (0..4).map(|j| s[(i, j)]).fold(f64::INFINITY, f64::min))
            .fold(f64::NEG_INFINITY, f64::max);
        let minimax = (0..4)
            .map(|j| (0..4).map(|i| s[(i, j)]).fold(f64::NEG_INFINITY, f64::max))
            .fold(f64::INFINITY, f64::min);
        prop_assert!(solution.value >= maximin - 1e-9);
        prop_assert!(solution.value <= minimax + 1e-9);
    }
}
