use nalgebra::DMatrix;
use nbtrace::ensemble::{sample_regular, EnsembleSpec};
use nbtrace::graph::families::{dipole, single_loop};
use nbtrace::operators::{self, incidence_halves};
use nbtrace::{MagneticDecoration, RegularGraph, WeightDecoration};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;

fn graph(half: usize, d: usize, seed: u64) -> RegularGraph {
    sample_regular(&EnsembleSpec::new(2 * half, d, 1, seed).unwrap()).unwrap()
}

#[test]
fn multigraph_operators() {
    let g = single_loop();
    // the loop gives two directed edges, each following itself and the other
    assert_eq!(operators::edge_b::<i64>(&g), DMatrix::from_element(2, 2, 1));
    let g = dipole(3);
    let a = operators::adjacency::<i64>(&g);
    assert_eq!(a[(0, 1)], 3);
    let h = incidence_halves::<i64>(&g);
    assert_eq!(h.minus.transpose() * &h.plus, a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn incidence_factorisations(half in 3usize..10, d in 3usize..5, seed in any::<u64>()) {
        let g = graph(half, d, seed);
        let h = incidence_halves::<i64>(&g);
        let b = operators::edge_b::<i64>(&g);
        let j = operators::edge_j::<i64>(&g);
        let a = operators::adjacency::<i64>(&g);
        prop_assert_eq!(&h.plus * h.minus.transpose(), b.clone());
        prop_assert_eq!(h.minus.transpose() * &h.plus, a);
        prop_assert_eq!(h.plus.transpose() * &h.plus, operators::degree_matrix::<i64>(&g));
        prop_assert_eq!(&j * &h.plus, h.minus.clone());
        prop_assert_eq!(&j * &j, DMatrix::identity(j.nrows(), j.nrows()));
        prop_assert!(b.row_iter().all(|r| r.sum() == d as i64));
    }

    #[test]
    fn magnetic_adjacency_is_hermitian(half in 3usize..10, seed in any::<u64>()) {
        let g = graph(half, 3, seed);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let m = MagneticDecoration::random(&g, &mut rng);
        let am = operators::magnetic_adjacency(&g, &m).unwrap();
        prop_assert!((&am - am.adjoint()).norm() < 1e-13);
        let zero = operators::magnetic_adjacency(&g, &MagneticDecoration::zero(&g)).unwrap();
        prop_assert_eq!(zero, operators::to_complex(&operators::adjacency::<f64>(&g)));
    }

    #[test]
    fn unit_weights_reduce_to_plain(half in 3usize..10, seed in any::<u64>()) {
        let g = graph(half, 3, seed);
        let ones = WeightDecoration::ones(&g);
        let bw = operators::weighted_b(&g, &ones).unwrap();
        prop_assert_eq!(bw, operators::to_complex(&operators::edge_b::<f64>(&g)));
        prop_assert_eq!(operators::weighted_degree(&g, &ones).unwrap(), operators::degree_matrix::<f64>(&g));
    }

    #[test]
    fn weighted_b_factors(half in 3usize..10, seed in any::<u64>()) {
        let g = graph(half, 3, seed);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let w = WeightDecoration::random(&g, &mut rng);
        let bw = operators::weighted_b(&g, &w).unwrap();
        let b = operators::edge_b::<f64>(&g);
        let root = |e: usize| Complex64::new(w.directed(e), 0.0).sqrt();
        for e in 0..b.nrows() {
            for f in 0..b.ncols() {
                let expect = root(e) * root(f) * b[(e, f)];
                prop_assert!((bw[(e, f)] - expect).norm() < 1e-15);
            }
        }
    }
}
