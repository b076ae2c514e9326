//! Vertex-space and edge-space matrices of a graph.
//!
//! Structural builders are generic over the entry type so that the same code
//! produces integer matrices for exact identity checks and floating matrices
//! for spectra.

use std::ops::AddAssign;

use nalgebra::{DMatrix, Scalar};
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::graph::{reverse, Graph, MagneticDecoration, WeightDecoration};

/// Entry types accepted by the structural builders.
pub trait Entry: Scalar + Zero + One + AddAssign {}
impl<T: Scalar + Zero + One + AddAssign> Entry for T {}

/// `A[i][j]` counts directed edges from `i` to `j`; a loop adds 2 on the
/// diagonal.
pub fn adjacency<T: Entry>(g: &Graph) -> DMatrix<T> {
    let n = g.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for e in 0..g.directed_edge_count() {
        a[(g.origin(e), g.terminus(e))] += T::one();
    }
    a
}

pub fn degree_matrix<T: Entry + From<u32>>(g: &Graph) -> DMatrix<T> {
    let n = g.vertex_count();
    let mut m = DMatrix::zeros(n, n);
    for v in 0..n {
        m[(v, v)] = T::from(g.degree(v) as u32);
    }
    m
}

/// `L = D - A`.
pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    degree_matrix::<f64>(g) - adjacency::<f64>(g)
}

/// `B[e][e'] = 1` iff `t(e) = o(e')`.
pub fn edge_b<T: Entry>(g: &Graph) -> DMatrix<T> {
    let n = g.directed_edge_count();
    let mut b = DMatrix::zeros(n, n);
    for e in 0..n {
        for &f in g.successors(e) {
            b[(e, f)] = T::one();
        }
    }
    b
}

/// Reversal permutation: `J[e][e'] = 1` iff `e' = reverse(e)`.
pub fn edge_j<T: Entry>(g: &Graph) -> DMatrix<T> {
    let n = g.directed_edge_count();
    let mut j = DMatrix::zeros(n, n);
    for e in 0..n {
        j[(e, reverse(e))] = T::one();
    }
    j
}

/// `Y(w) = B - wJ`; `Y(1)` is the non-backtracking (Hashimoto) matrix.
pub fn edge_y(g: &Graph, w: f64) -> DMatrix<f64> {
    let mut y = edge_b::<f64>(g);
    for e in 0..g.directed_edge_count() {
        y[(e, reverse(e))] -= w;
    }
    y
}

pub fn edge_y_complex(g: &Graph, w: Complex64) -> DMatrix<Complex64> {
    let mut y = edge_b::<Complex64>(g);
    for e in 0..g.directed_edge_count() {
        y[(e, reverse(e))] -= w;
    }
    y
}

/// `A^M[i][j]` sums `exp(i phase(e))` over directed edges `e` from `i` to `j`.
pub fn magnetic_adjacency(g: &Graph, m: &MagneticDecoration) -> Result<DMatrix<Complex64>> {
    m.check(g)?;
    let n = g.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for e in 0..g.directed_edge_count() {
        a[(g.origin(e), g.terminus(e))] += Complex64::cis(m.directed(e));
    }
    Ok(a)
}

/// `B^M[e][e'] = B[e][e'] exp(i (phase(e) + phase(e')) / 2)`.
pub fn magnetic_b(g: &Graph, m: &MagneticDecoration) -> Result<DMatrix<Complex64>> {
    m.check(g)?;
    let n = g.directed_edge_count();
    let mut b = DMatrix::zeros(n, n);
    for e in 0..n {
        for &f in g.successors(e) {
            b[(e, f)] = Complex64::cis(0.5 * (m.directed(e) + m.directed(f)));
        }
    }
    Ok(b)
}

/// `Y^M = B^M - J`.
pub fn magnetic_y(g: &Graph, m: &MagneticDecoration) -> Result<DMatrix<Complex64>> {
    let mut y = magnetic_b(g, m)?;
    for e in 0..g.directed_edge_count() {
        y[(e, reverse(e))] -= Complex64::one();
    }
    Ok(y)
}

pub fn weighted_adjacency(g: &Graph, w: &WeightDecoration) -> Result<DMatrix<f64>> {
    w.check(g)?;
    let n = g.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for e in 0..g.directed_edge_count() {
        a[(g.origin(e), g.terminus(e))] += w.directed(e);
    }
    Ok(a)
}

/// Diagonal matrix of summed incident weights.
pub fn weighted_degree(g: &Graph, w: &WeightDecoration) -> Result<DMatrix<f64>> {
    w.check(g)?;
    Ok(DMatrix::from_diagonal(&w.vertex_sums(g).into()))
}

/// `B^W[e][e'] = B[e][e'] sqrt(W_e) sqrt(W_e')` with principal roots taken
/// per factor. Taking the root of the product instead flips the sign of
/// entries where both weights are negative and breaks the determinant
/// identity.
pub fn weighted_b(g: &Graph, w: &WeightDecoration) -> Result<DMatrix<Complex64>> {
    w.check(g)?;
    let n = g.directed_edge_count();
    let roots: Vec<Complex64> = (0..n)
        .map(|e| Complex64::new(w.directed(e), 0.0).sqrt())
        .collect();
    let mut b = DMatrix::zeros(n, n);
    for e in 0..n {
        for &f in g.successors(e) {
            b[(e, f)] = roots[e] * roots[f];
        }
    }
    Ok(b)
}

/// The two `2E x V` incidence indicators: `plus[e][i] = [t(e) = i]` and
/// `minus[e][i] = [o(e) = i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct IncidenceHalves<T: Scalar> {
    pub plus: DMatrix<T>,
    pub minus: DMatrix<T>,
}

pub fn incidence_halves<T: Entry>(g: &Graph) -> IncidenceHalves<T> {
    let (rows, cols) = (g.directed_edge_count(), g.vertex_count());
    let mut plus = DMatrix::zeros(rows, cols);
    let mut minus = DMatrix::zeros(rows, cols);
    for e in 0..rows {
        plus[(e, g.terminus(e))] = T::one();
        minus[(e, g.origin(e))] = T::one();
    }
    IncidenceHalves { plus, minus }
}

/// Phase-decorated halves: `plus` rows carry `exp(+i phase(e)/2)`, `minus`
/// rows `exp(-i phase(e)/2)`. The identities then hold with conjugate
/// transposes in place of transposes.
pub fn magnetic_incidence_halves(
    g: &Graph,
    m: &MagneticDecoration,
) -> Result<IncidenceHalves<Complex64>> {
    m.check(g)?;
    let IncidenceHalves { mut plus, mut minus } = incidence_halves::<Complex64>(g);
    for e in 0..g.directed_edge_count() {
        let half = Complex64::cis(0.5 * m.directed(e));
        plus[(e, g.terminus(e))] = half;
        minus[(e, g.origin(e))] = half.conj();
    }
    Ok(IncidenceHalves { plus, minus })
}

/// Convert an integer matrix into floating point.
pub fn to_f64(m: &DMatrix<i64>) -> DMatrix<f64> {
    m.map(|x| x as f64)
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::{complete, dipole, petersen, single_loop};

    #[test]
    fn k4_adjacency() {
        let a = adjacency::<i64>(&complete(4));
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(a[(i, j)], i64::from(i != j));
            }
        }
    }

    #[test]
    fn loop_counts_twice_on_diagonal() {
        assert_eq!(adjacency::<i64>(&single_loop())[(0, 0)], 2);
        assert_eq!(adjacency::<i64>(&dipole(3))[(0, 1)], 3);
    }

    #[test]
    fn b_and_j_structure() {
        for g in [complete(4), petersen()] {
            let b = edge_b::<i64>(&g);
            let j = edge_j::<i64>(&g);
            assert_eq!(b.trace(), 0);
            assert_eq!(&j * &j, DMatrix::identity(j.nrows(), j.nrows()));
            assert_eq!(j.transpose(), j);
            let d = g.degree() as i64;
            assert!(b.row_iter().all(|r| r.sum() == d));
            assert!(b.column_iter().all(|c| c.sum() == d));
        }
    }

    #[test]
    fn y_at_zero_is_b() {
        let g = petersen();
        assert_eq!(edge_y(&g, 0.0), edge_b::<f64>(&g));
    }

    #[test]
    fn zero_flux_and_unit_weights_reduce_to_plain() {
        let g = petersen();
        let m = MagneticDecoration::zero(&g);
        assert_eq!(magnetic_adjacency(&g, &m).unwrap(), to_complex(&adjacency(&g)));
        assert_eq!(magnetic_b(&g, &m).unwrap(), to_complex(&edge_b(&g)));
        let w = WeightDecoration::ones(&g);
        assert_eq!(weighted_adjacency(&g, &w).unwrap(), adjacency::<f64>(&g));
        assert_eq!(weighted_b(&g, &w).unwrap(), to_complex(&edge_b(&g)));
    }

    #[test]
    fn incidence_identities_k4() {
        let g = complete(4);
        let IncidenceHalves { plus, minus } = incidence_halves::<i64>(&g);
        let b = edge_b::<i64>(&g);
        let j = edge_j::<i64>(&g);
        let y = &b - &j;
        let id_e = DMatrix::<i64>::identity(12, 12);
        assert_eq!(&plus * minus.transpose(), b);
        assert_eq!(minus.transpose() * &plus, adjacency::<i64>(&g));
        assert_eq!(plus.transpose() * &plus, DMatrix::identity(4, 4) * 3);
        assert_eq!(&plus * plus.transpose(), &y * &j + id_e);
        assert_eq!(&j * &plus, minus);
    }
}
