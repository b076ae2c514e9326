//! The determinant identity linking `det(I - s(B - wJ))` on edge space to a
//! vertex-space determinant, checked in floating point and in exact rational
//! arithmetic.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{charpoly, det_rational, interpolate, rational, rational_pow, Poly, Rational};
use crate::graph::{reverse, Graph, MagneticDecoration, WeightDecoration};
use crate::operators;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Regular graph, vertex side `(1 + w(d - w)s^2) I - sA`.
    Regular,
    /// Any graph, vertex side `I + ws^2 (D - wI) - sA`.
    General,
    Magnetic,
    /// Loops and parallel edges allowed.
    Multigraph,
    Weighted,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Regular,
        Variant::General,
        Variant::Magnetic,
        Variant::Multigraph,
        Variant::Weighted,
    ];
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "regular" => Variant::Regular,
            "general" => Variant::General,
            "magnetic" => Variant::Magnetic,
            "multigraph" => Variant::Multigraph,
            "weighted" => Variant::Weighted,
            other => return Err(Error::InvalidParameter(format!("unknown variant {other:?}"))),
        })
    }
}

/// Extra data carried by the decorated variants.
#[derive(Clone, Copy, Debug)]
pub enum Decoration<'a> {
    Plain,
    Magnetic(&'a MagneticDecoration),
    Weighted(&'a WeightDecoration),
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub graph_id: String,
    pub variant: Variant,
    /// Evaluation points `(s, w)` as `[re, im]` pairs.
    pub points: Vec<[[f64; 2]; 2]>,
    /// `|lhs - rhs| / max(|lhs|, |rhs|, 1)` per point.
    pub residuals: Vec<f64>,
    pub max_abs_residual: f64,
    /// Set when both sides were evaluated exactly.
    pub exact_match: Option<bool>,
}

fn graph_id(g: &Graph) -> String {
    format!("{:016x}", g.fingerprint())
}

fn require_regular(g: &Graph) -> Result<usize> {
    g.regular_degree().ok_or_else(|| {
        let d = g.degree(0);
        let (vertex, &found) = g
            .degrees()
            .iter()
            .enumerate()
            .find(|(_, &x)| x != d)
            .expect("irregular graph has a differing degree");
        Error::NonRegular {
            vertex,
            found,
            expected: d,
        }
    })
}

fn check_pole(s: Complex64, w: Complex64) -> Result<()> {
    if (Complex64::one() - w * w * s * s).norm() < 1e-12 {
        Err(Error::PolePoint)
    } else {
        Ok(())
    }
}

/// Edge-space matrix of the variant (before `- wJ`).
fn edge_matrix(g: &Graph, deco: Decoration<'_>) -> Result<DMatrix<Complex64>> {
    match deco {
        Decoration::Plain => Ok(operators::to_complex(&operators::edge_b::<f64>(g))),
        Decoration::Magnetic(m) => operators::magnetic_b(g, m),
        Decoration::Weighted(w) => operators::weighted_b(g, w),
    }
}

/// Adjacency-like matrix and the diagonal of `D` for the variant.
fn vertex_data(g: &Graph, deco: Decoration<'_>) -> Result<(DMatrix<Complex64>, Vec<Complex64>)> {
    let plain_degrees = || {
        g.degrees()
            .iter()
            .map(|&x| Complex64::new(x as f64, 0.0))
            .collect()
    };
    match deco {
        Decoration::Plain => Ok((
            operators::to_complex(&operators::adjacency::<f64>(g)),
            plain_degrees(),
        )),
        Decoration::Magnetic(m) => Ok((operators::magnetic_adjacency(g, m)?, plain_degrees())),
        Decoration::Weighted(w) => Ok((
            operators::to_complex(&operators::weighted_adjacency(g, w)?),
            w.vertex_sums(g)
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect(),
        )),
    }
}

/// `det(I - s(B - wJ))` with the decorated `B`.
pub fn edge_side(g: &Graph, deco: Decoration<'_>, s: Complex64, w: Complex64) -> Result<Complex64> {
    let b = edge_matrix(g, deco)?;
    let n = b.nrows();
    let mut m = DMatrix::<Complex64>::identity(n, n) - b * s;
    for e in 0..n {
        m[(e, reverse(e))] += s * w;
    }
    Ok(m.determinant())
}

/// `(1 - w^2 s^2)^(E - V) det(I + ws^2 (D - wI) - sA)`. With `regular_form`
/// the diagonal uses the common degree, as in the regular statement.
pub fn vertex_side(
    g: &Graph,
    deco: Decoration<'_>,
    s: Complex64,
    w: Complex64,
    regular_form: bool,
) -> Result<Complex64> {
    let (a, mut diag) = vertex_data(g, deco)?;
    if regular_form {
        let d = Complex64::new(require_regular(g)? as f64, 0.0);
        diag.iter_mut().for_each(|x| *x = d);
    }
    let n = a.nrows();
    let mut m = -a * s;
    for i in 0..n {
        m[(i, i)] += Complex64::one() + w * s * s * (diag[i] - w);
    }
    let exponent = g.edge_count() as i32 - g.vertex_count() as i32;
    Ok((Complex64::one() - w * w * s * s).powi(exponent) * m.determinant())
}

fn decoration_for(variant: Variant, deco: Decoration<'_>) -> Result<Decoration<'_>> {
    match (variant, deco) {
        (Variant::Magnetic, Decoration::Magnetic(_)) | (Variant::Weighted, Decoration::Weighted(_)) => {
            Ok(deco)
        }
        (Variant::Regular | Variant::General | Variant::Multigraph, _) => Ok(Decoration::Plain),
        (v, _) => Err(Error::InvalidParameter(format!(
            "variant {v:?} needs a matching decoration"
        ))),
    }
}

/// Floating-point check at the given `(s, w)` points.
pub fn check_identity(
    g: &Graph,
    variant: Variant,
    deco: Decoration<'_>,
    points: &[(Complex64, Complex64)],
) -> Result<IdentityReport> {
    let deco = decoration_for(variant, deco)?;
    let regular_form = match variant {
        Variant::Regular | Variant::Magnetic => {
            require_regular(g)?;
            true
        }
        Variant::Multigraph => g.regular_degree().is_some(),
        Variant::General | Variant::Weighted => false,
    };
    let mut residuals = Vec::with_capacity(points.len());
    for &(s, w) in points {
        check_pole(s, w)?;
        let lhs = edge_side(g, deco, s, w)?;
        let rhs = vertex_side(g, deco, s, w, regular_form)?;
        let scale = lhs.norm().max(rhs.norm()).max(1.0);
        residuals.push((lhs - rhs).norm() / scale);
    }
    Ok(IdentityReport {
        graph_id: graph_id(g),
        variant,
        points: points
            .iter()
            .map(|(s, w)| [[s.re, s.im], [w.re, w.im]])
            .collect(),
        max_abs_residual: residuals.iter().copied().fold(0.0, f64::max),
        residuals,
        exact_match: None,
    })
}

fn rational_edge_matrix(g: &Graph, s: &Rational, w: &Rational) -> Vec<Vec<Rational>> {
    let n = g.directed_edge_count();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (e, row) in m.iter_mut().enumerate() {
        row[e] = Rational::one();
        for &f in g.successors(e) {
            row[f] -= s;
        }
        row[reverse(e)] += s * w;
    }
    m
}

fn rational_vertex_det(g: &Graph, s: &Rational, w: &Rational) -> Rational {
    let n = g.vertex_count();
    let a = operators::adjacency::<i64>(g);
    let m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut x = -s * rational(a[(i, j)], 1);
                    if i == j {
                        let d = rational(g.degree(i) as i64, 1);
                        x += Rational::one() + w * s * s * (d - w);
                    }
                    x
                })
                .collect()
        })
        .collect();
    det_rational(&m)
}

/// Both sides at rational `(s, w)`, exactly. The general vertex form is
/// used; for regular graphs it coincides with the regular one.
pub fn exact_sides(g: &Graph, s: &Rational, w: &Rational) -> Result<(Rational, Rational)> {
    let pole = Rational::one() - w * w * s * s;
    if pole.is_zero() {
        return Err(Error::PolePoint);
    }
    let lhs = det_rational(&rational_edge_matrix(g, s, w));
    let exponent = g.edge_count() as i64 - g.vertex_count() as i64;
    let rhs = rational_pow(&pole, exponent) * rational_vertex_det(g, s, w);
    Ok((lhs, rhs))
}

/// Exact check for the undecorated variants.
pub fn check_identity_exact(
    g: &Graph,
    variant: Variant,
    points: &[(Rational, Rational)],
) -> Result<IdentityReport> {
    match variant {
        Variant::Regular => {
            require_regular(g)?;
        }
        Variant::General | Variant::Multigraph => {}
        Variant::Magnetic | Variant::Weighted => {
            return Err(Error::InvalidParameter(
                "decorated variants are checked in floating point only".into(),
            ))
        }
    }
    let mut all_equal = true;
    let mut residuals = Vec::with_capacity(points.len());
    for (s, w) in points {
        let (lhs, rhs) = exact_sides(g, s, w)?;
        all_equal &= lhs == rhs;
        let (l, r) = (
            crate::exact::rational_to_f64(&lhs),
            crate::exact::rational_to_f64(&rhs),
        );
        residuals.push((l - r).abs() / l.abs().max(r.abs()).max(1.0));
    }
    let to_f = crate::exact::rational_to_f64;
    Ok(IdentityReport {
        graph_id: graph_id(g),
        variant,
        points: points
            .iter()
            .map(|(s, w)| [[to_f(s), 0.0], [to_f(w), 0.0]])
            .collect(),
        max_abs_residual: residuals.iter().copied().fold(0.0, f64::max),
        residuals,
        exact_match: Some(all_equal),
    })
}

/// Coefficients (ascending in `s`) of `det(I - sY(w))` for rational `w`,
/// from the characteristic polynomial of `Y(w)`.
pub fn char_poly_edge_exact(g: &Graph, w: &Rational) -> Poly<Rational> {
    let n = g.directed_edge_count();
    let mut y = vec![vec![Rational::zero(); n]; n];
    for (e, row) in y.iter_mut().enumerate() {
        for &f in g.successors(e) {
            row[f] += Rational::one();
        }
        row[reverse(e)] -= w;
    }
    let chi = charpoly(&y);
    // det(I - sY) = s^n chi(1/s): reverse the coefficient list
    Poly::new((0..=n).map(|k| chi.coeff(n - k)).collect())
}

/// Coefficients of the vertex side `(1 - w^2 s^2)^(E - V) det(...)` as a
/// polynomial in `s`, by exact interpolation. Requires `E >= V`.
pub fn char_poly_vertex_exact(g: &Graph, w: &Rational) -> Result<Poly<Rational>> {
    let excess = g.edge_count() as i64 - g.vertex_count() as i64;
    if excess < 0 {
        return Err(Error::InvalidParameter(
            "vertex side is not a polynomial when E < V".into(),
        ));
    }
    let degree = 2 * g.vertex_count();
    let pts: Vec<(Rational, Rational)> = (0..=degree as i64)
        .map(|k| {
            let s = rational(k, 1);
            let det = rational_vertex_det(g, &s, w);
            (s, det)
        })
        .collect();
    let det = interpolate(&pts);
    let pole = Poly::new(vec![Rational::one(), Rational::zero(), -(w * w)]);
    Ok(&pole.pow(excess as usize) * &det)
}

/// Floating `det(I - sY(w))` coefficients from the eigenvalues `lambda` of
/// `Y(w)`: the expansion of `prod (1 - lambda s)`.
pub fn char_poly_edge(g: &Graph, w: f64) -> Result<Vec<Complex64>> {
    let eig = crate::spectral::edge_spectrum(g, w)?;
    let mut coeffs = vec![Complex64::one()];
    for lambda in eig.iter() {
        let mut next = vec![Complex64::zero(); coeffs.len() + 1];
        for (k, c) in coeffs.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c * lambda;
        }
        coeffs = next;
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::{complete, dipole, petersen, single_loop};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn k4_regular_points() {
        let g = complete(4);
        let pts = [(c(0.3, 0.1), c(0.7, -0.2)), (c(-0.4, 0.0), c(1.3, 0.5)), (c(0.0, 0.0), c(2.0, 0.0))];
        let r = check_identity(&g, Variant::Regular, Decoration::Plain, &pts).unwrap();
        assert!(r.max_abs_residual < 1e-12, "{r:?}");
    }

    #[test]
    fn pole_rejected() {
        let g = complete(4);
        let err = check_identity(&g, Variant::Regular, Decoration::Plain, &[(c(0.5, 0.0), c(2.0, 0.0))]);
        assert!(matches!(err, Err(Error::PolePoint)));
    }

    #[test]
    fn k4_edge_polynomial_matches_factored_vertex_side() {
        let g = complete(4);
        let one = rational(1, 1);
        let lhs = char_poly_edge_exact(&g, &one);
        let q = |v: i64| rational(v, 1);
        let p = |c: &[i64]| Poly::new(c.iter().map(|&x| q(x)).collect());
        // (1 - s^2)^2 (1 - 3s + 2s^2)(1 + s + 2s^2)^3
        let expected = &(&p(&[1, 0, -1]).pow(2) * &p(&[1, -3, 2])) * &p(&[1, 1, 2]).pow(3);
        assert_eq!(lhs, expected);
        assert_eq!(char_poly_vertex_exact(&g, &one).unwrap(), expected);
    }

    #[test]
    fn ihara_case_w_zero() {
        let g = petersen();
        let zero = Rational::zero();
        let lhs = char_poly_edge_exact(&g, &zero);
        let rhs = char_poly_vertex_exact(&g, &zero).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.coeff(0), Rational::one());
    }

    #[test]
    fn single_loop_multigraph() {
        let g = single_loop();
        for (s, w) in [(rational(1, 3), rational(2, 5)), (rational(-2, 7), rational(3, 1))] {
            let (lhs, rhs) = exact_sides(&g, &s, &w).unwrap();
            assert_eq!(lhs, rhs);
        }
        let d3 = dipole(3);
        let r = check_identity_exact(&d3, Variant::Multigraph, &[(rational(1, 2), rational(1, 3))]).unwrap();
        assert_eq!(r.exact_match, Some(true));
    }

    #[test]
    fn float_char_poly_matches_exact() {
        let g = complete(4);
        let float = char_poly_edge(&g, 1.0).unwrap();
        let exact = char_poly_edge_exact(&g, &rational(1, 1));
        for (k, c) in float.iter().enumerate() {
            let e = crate::exact::rational_to_f64(&exact.coeff(k));
            assert!((c.re - e).abs() < 1e-9 && c.im.abs() < 1e-9, "k = {k}");
        }
    }
}
