use nbtrace::ensemble::{sample_regular, EnsembleSpec};
use nbtrace::graph::families::{complete_bipartite, petersen};
use nbtrace::walks::{
    adjacency_traces, closed_form_table, derivative_coefficient, enumerate_walks, nonbacktracking_traces,
    pq_recursion, table_from_polynomials, try_polynomials, TraceSeries, DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_POLY_EDGE_LIMIT,
};
use nbtrace::Execution;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn petersen_coefficients_vanish() {
    let s = TraceSeries::new(&petersen(), 14).unwrap();
    for l in 4..=12 {
        let r = derivative_coefficient(&s, l).unwrap();
        assert!(r.vanishes(), "l = {l}: {r:?}");
    }
}

#[test]
fn bipartite_parity() {
    let g = complete_bipartite(4);
    let polys = try_polynomials(&g, 9, DEFAULT_POLY_EDGE_LIMIT).unwrap();
    let table = table_from_polynomials(&polys, 9);
    for t in (1..=9).step_by(2) {
        assert!(table.total(t).is_zero());
    }
    assert!(!table.total(8).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn counts_sum_to_adjacency_traces(seed in any::<u64>()) {
        let g = sample_regular(&EnsembleSpec::new(8, 3, 1, seed).unwrap()).unwrap();
        let t_max = 8;
        let table = enumerate_walks(&g, t_max, DEFAULT_ENUMERATION_BUDGET, Execution::Parallel).unwrap();
        let atr = adjacency_traces(&g, t_max);
        let nb = nonbacktracking_traces(&g, t_max);
        let closed = closed_form_table(&g, t_max);
        for t in 1..=t_max {
            prop_assert_eq!(table.total(t), atr[t].clone());
            prop_assert_eq!(table.get(t, 0), BigInt::from(nb[t]));
            prop_assert_eq!(table.get(t, 1), closed.get(t, 1));
        }
        let polys = try_polynomials(&g, t_max, DEFAULT_POLY_EDGE_LIMIT).unwrap();
        prop_assert!(table_from_polynomials(&polys, t_max).agrees_with(&table));
    }

    #[test]
    fn recursion_on_random_graphs(seed in any::<u64>(), d in 3usize..5) {
        let g = sample_regular(&EnsembleSpec::new(10, d, 1, seed).unwrap()).unwrap();
        let s = TraceSeries::new(&g, 10).unwrap();
        for l in 1..=8 {
            let (lhs, q_sum, expanded) = pq_recursion(&s, l).unwrap();
            prop_assert_eq!(&lhs, &q_sum);
            prop_assert_eq!(&lhs, &expanded);
        }
    }
}
