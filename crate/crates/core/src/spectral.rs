//! Spectra of vertex and edge operators, the Kesten-McKay law, empirical
//! densities and the Chebyshev coarse-grained density.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chebyshev::coarse_delta;
use crate::error::{Error, Result};
use crate::graph::{Graph, MagneticDecoration, RegularGraph};
use crate::operators;

/// Tolerance band around `2 sqrt(d - 1)` when classifying eigenvalues as
/// outside the Kesten-McKay support.
pub const RAMANUJAN_BAND: f64 = 1e-12;

/// Sorted (non-increasing) adjacency-type spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    /// Common degree when the matrix came from a regular graph.
    pub degree: Option<usize>,
}

impl SpectralData {
    pub fn new(mut eigenvalues: Vec<f64>, degree: Option<usize>) -> Self {
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Self {
            eigenvalues,
            degree,
        }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Whether the leading eigenvalue equals the degree and is simple.
    pub fn has_simple_trivial(&self, tol: f64) -> bool {
        let Some(d) = self.degree else { return false };
        let d = d as f64;
        match self.eigenvalues.as_slice() {
            [first, second, ..] => (first - d).abs() < tol && (second - d).abs() >= tol,
            [first] => (first - d).abs() < tol,
            [] => false,
        }
    }

    /// Eigenvalues after the leading one.
    pub fn nontrivial(&self) -> &[f64] {
        self.eigenvalues.get(1..).unwrap_or(&[])
    }

    /// `arccos(mu_k / (2 sqrt(w(d - w))))` continued to complex values
    /// outside `[-1, 1]`.
    pub fn phases(&self, w: f64) -> Result<Vec<Complex64>> {
        let d = self.degree.ok_or_else(|| {
            Error::InvalidParameter("phases need the degree of a regular graph".into())
        })? as f64;
        let s = (w * (d - w)).sqrt();
        Ok(self
            .eigenvalues
            .iter()
            .map(|&mu| continued_arccos(mu / (2.0 * s)))
            .collect())
    }
}

/// `arccos x` on `[-1, 1]`; `-i log(x + sqrt(x^2 - 1))` beyond.
pub fn continued_arccos(x: f64) -> Complex64 {
    if x.abs() <= 1.0 {
        Complex64::new(x.acos(), 0.0)
    } else {
        let z = Complex64::new(x, 0.0);
        -Complex64::i() * (z + (z * z - 1.0).sqrt()).ln()
    }
}

fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..=i {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a real symmetric matrix, non-increasing.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let scale = m.amax().max(1.0);
    let dev = (m - m.transpose()).amax();
    if dev > 1e-12 * scale {
        return Err(Error::NotHermitian(dev));
    }
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Eigenvalues of a complex Hermitian matrix, non-increasing.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let dev = hermitian_deviation(m);
    if dev > 1e-12 * scale {
        return Err(Error::NotHermitian(dev));
    }
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

/// Eigenvalues of a general real matrix. The real Schur iteration is capped;
/// the convergence threshold is loosened step by step on highly degenerate
/// inputs such as edge operators of small symmetric graphs.
pub fn general_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    for eps in [4.0 * f64::EPSILON, 1e-14, 1e-13, 1e-12] {
        if let Some(schur) = Schur::try_new(m.clone(), eps, 20_000) {
            return Ok(schur.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::NoConvergence)
}

pub fn adjacency_spectrum(g: &RegularGraph) -> SpectralData {
    let a = operators::adjacency::<f64>(g);
    let ev = symmetric_eigenvalues(&a).expect("adjacency matrices are symmetric");
    SpectralData::new(ev, Some(g.degree()))
}

pub fn magnetic_spectrum(g: &RegularGraph, m: &MagneticDecoration) -> Result<SpectralData> {
    let a = operators::magnetic_adjacency(g, m)?;
    Ok(SpectralData::new(hermitian_eigenvalues(&a)?, Some(g.degree())))
}

/// Directly computed eigenvalues of `Y(w)`.
pub fn edge_spectrum(g: &Graph, w: f64) -> Result<Vec<Complex64>> {
    general_eigenvalues(&operators::edge_y(g, w))
}

/// The `2E` eigenvalues of `Y(w)` predicted from the adjacency spectrum of a
/// `d`-regular graph: `+w` and `-w` each `E - V` times, and for every
/// adjacency eigenvalue `mu` the two roots of `x^2 - mu x + w(d - w)`. The
/// leading eigenvalue `d` yields the trivial pair `{d - w, w}`.
pub fn edge_spectrum_from_vertex(
    spec: &SpectralData,
    w: f64,
    edge_count: usize,
    vertex_count: usize,
) -> Result<Vec<Complex64>> {
    let d = spec.degree.ok_or_else(|| {
        Error::InvalidParameter("edge spectrum mapping needs a regular graph".into())
    })? as f64;
    if edge_count < vertex_count {
        return Err(Error::InvalidParameter("E < V".into()));
    }
    let excess = edge_count - vertex_count;
    let product = Complex64::new(w * (d - w), 0.0);
    let mut out = Vec::with_capacity(2 * edge_count);
    out.extend(std::iter::repeat_n(Complex64::new(w, 0.0), excess));
    out.extend(std::iter::repeat_n(Complex64::new(-w, 0.0), excess));
    for &mu in &spec.eigenvalues {
        let disc = (Complex64::new(mu * mu, 0.0) - 4.0 * product).sqrt();
        out.push(0.5 * (mu + disc));
        out.push(0.5 * (mu - disc));
    }
    Ok(out)
}

/// Largest distance in a greedy nearest-neighbour pairing of two multisets;
/// infinite when the sizes differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (j, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("sizes match");
        used[j] = true;
        worst = worst.max(dist);
    }
    worst
}

/// Compare two multisets cluster by cluster. Values of `expected` closer than
/// `merge` form one cluster; every value of `observed` joins its nearest
/// cluster. Returns `None` if any cluster receives the wrong count, otherwise
/// the largest gap between cluster means. Means of a cluster are well
/// conditioned even where the individual values belong to a Jordan block.
pub fn cluster_distance(observed: &[Complex64], expected: &[Complex64], merge: f64) -> Option<f64> {
    if observed.len() != expected.len() {
        return None;
    }
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for &x in expected {
        match clusters.iter_mut().find(|(c, n)| (c / *n as f64 - x).norm() < merge) {
            Some((sum, n)) => {
                *sum += x;
                *n += 1;
            }
            None => clusters.push((x, 1)),
        }
    }
    let centres: Vec<Complex64> = clusters.iter().map(|(s, n)| s / *n as f64).collect();
    let mut assigned = vec![(Complex64::new(0.0, 0.0), 0usize); centres.len()];
    for &y in observed {
        let (j, _) = centres
            .iter()
            .enumerate()
            .map(|(j, c)| (j, (c - y).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        assigned[j].0 += y;
        assigned[j].1 += 1;
    }
    let mut worst = 0.0f64;
    for ((sum, n), (c, expected_n)) in assigned.iter().zip(centres.iter().zip(clusters.iter().map(|c| c.1))) {
        if *n != expected_n {
            return None;
        }
        worst = worst.max((sum / *n as f64 - c).norm());
    }
    Some(worst)
}

/// Edge of the Kesten-McKay support, `2 sqrt(d - 1)`.
pub fn ramanujan_bound(d: usize) -> f64 {
    2.0 * (d as f64 - 1.0).sqrt()
}

/// Kesten-McKay density `(d / 2pi) sqrt(4(d-1) - mu^2) / (d^2 - mu^2)`,
/// zero outside the support.
pub fn kesten_mckay(mu: f64, d: usize) -> f64 {
    let d = d as f64;
    let inside = 4.0 * (d - 1.0) - mu * mu;
    if inside <= 0.0 {
        return 0.0;
    }
    d / (2.0 * PI) * inside.sqrt() / (d * d - mu * mu)
}

/// Cumulative Kesten-McKay distribution in closed form.
pub fn kesten_mckay_cdf(mu: f64, d: usize) -> f64 {
    let r = ramanujan_bound(d);
    if mu <= -r {
        return 0.0;
    }
    if mu >= r {
        return 1.0;
    }
    let df = d as f64;
    let theta = (mu / r).asin();
    0.5 + (df * theta - (df - 2.0) * ((df - 2.0) / df * theta.tan()).atan()) / (2.0 * PI)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CurveSource {
    Empirical { bin_width: f64 },
    KestenMckay { degree: usize },
    Coarse { t_max: usize, excluded: usize },
    TraceFormula { w: f64, part: String },
    Unitary { phase: String },
}

/// A density sampled on a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityCurve {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub source: CurveSource,
    /// Normalising constant used, or the measured integral where no
    /// constant applies.
    pub normalization: f64,
}

/// Kesten-McKay density on `points` grid points spanning the support.
pub fn kesten_mckay_curve(d: usize, points: usize) -> DensityCurve {
    let r = ramanujan_bound(d);
    let grid = uniform_grid(-r, r, points);
    let values = grid.iter().map(|&mu| kesten_mckay(mu, d)).collect();
    DensityCurve {
        grid,
        values,
        source: CurveSource::KestenMckay { degree: d },
        normalization: 1.0,
    }
}

pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        n => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Histogram on `[lo, hi)` with bins of width `bin_width` (the last bin may
/// be narrower), normalised to integrate to the fraction of values inside.
/// Grid points are bin centres.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn new(values: &[f64], lo: f64, hi: f64, bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0) || !(hi > lo) {
            return Err(Error::InvalidParameter("empty histogram range".into()));
        }
        let bins = ((hi - lo) / bin_width - 1e-9).ceil().max(1.0) as usize;
        let edges: Vec<f64> = (0..=bins)
            .map(|i| (lo + i as f64 * bin_width).min(hi))
            .collect();
        let mut counts = vec![0u64; bins];
        for &v in values {
            if v >= lo && v < hi {
                let i = (((v - lo) / bin_width) as usize).min(bins - 1);
                counts[i] += 1;
            }
        }
        Ok(Self {
            edges,
            counts,
            total: values.len() as u64,
        })
    }

    pub fn densities(&self) -> Vec<f64> {
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, e)| c as f64 / (self.total as f64 * (e[1] - e[0])))
            .collect()
    }

    pub fn curve(&self) -> DensityCurve {
        DensityCurve {
            grid: self.edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect(),
            values: self.densities(),
            source: CurveSource::Empirical {
                bin_width: self.edges[1] - self.edges[0],
            },
            normalization: self.total as f64,
        }
    }

    /// `sum_bins |h_b - mean of rho over bin| * width`, with the bin means of
    /// the reference taken exactly from its distribution function, plus the
    /// reference mass outside the histogram range.
    pub fn l1_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let inside: f64 = self
            .counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, e)| {
                let observed = c as f64 / self.total as f64;
                let expected = cdf(e[1]) - cdf(e[0]);
                (observed - expected).abs()
            })
            .sum();
        let lo = self.edges[0];
        let hi = *self.edges.last().expect("at least one edge");
        inside + cdf(lo) + (1.0 - cdf(hi))
    }
}

/// Nontrivial eigenvalues strictly outside the Kesten-McKay support.
pub fn non_ramanujan(spec: &SpectralData) -> Result<Vec<f64>> {
    let d = spec
        .degree
        .ok_or_else(|| Error::InvalidParameter("needs a regular graph".into()))?;
    let r = ramanujan_bound(d);
    Ok(spec
        .nontrivial()
        .iter()
        .copied()
        .filter(|mu| mu.abs() > r + RAMANUJAN_BAND)
        .collect())
}

/// Suggested upper limit on the kernel order, `V^(alpha/2)/a * log V^(1 - alpha/2)`.
/// It is asymptotic guidance only.
pub fn t_max_guidance(vertex_count: usize, a: f64, alpha: f64) -> f64 {
    let v = vertex_count as f64;
    v.powf(alpha / 2.0) / a * (1.0 - alpha / 2.0) * v.ln()
}

/// Coarse-grained density of a regular graph's spectrum on `grid` (points
/// strictly inside the Kesten-McKay support). Eigenvalues outside the support
/// are dropped and reported; the remaining nontrivial ones are smeared with
/// the truncated Chebyshev kernel and normalised to unit mass.
pub fn coarse_density(spec: &SpectralData, t_max: usize, grid: &[f64]) -> Result<(DensityCurve, Vec<f64>)> {
    let excluded = non_ramanujan(spec)?;
    let d = spec.degree.expect("checked by non_ramanujan");
    let r = ramanujan_bound(d);
    let kept: Vec<f64> = spec
        .nontrivial()
        .iter()
        .map(|mu| mu / r)
        .filter(|x| x.abs() <= 1.0 + RAMANUJAN_BAND / r)
        .map(|x| x.clamp(-1.0, 1.0))
        .collect();
    if kept.is_empty() {
        return Err(Error::AllEigenvaluesExcluded);
    }
    let norm = kept.len() as f64;
    let values = grid
        .iter()
        .map(|&mu| {
            let x = mu / r;
            let total: f64 = kept
                .iter()
                .map(|&xk| coarse_delta(x, xk, t_max))
                .sum::<Result<f64>>()?;
            Ok(total / (norm * r))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok((
        DensityCurve {
            grid: grid.to_vec(),
            values,
            source: CurveSource::Coarse {
                t_max,
                excluded: excluded.len(),
            },
            normalization: norm,
        },
        excluded,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::{complete, complete_bipartite, petersen};

    #[test]
    fn known_spectra() {
        let k4 = adjacency_spectrum(&complete(4));
        let expect = [3.0, -1.0, -1.0, -1.0];
        assert!(k4.eigenvalues.iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-12));
        assert!(k4.has_simple_trivial(1e-9));
        let k33 = adjacency_spectrum(&complete_bipartite(3));
        assert!((k33.eigenvalues.last().unwrap() + 3.0).abs() < 1e-12);
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(symmetric_eigenvalues(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn k4_edge_mapping() {
        let g = complete(4);
        let spec = adjacency_spectrum(&g);
        let predicted = edge_spectrum_from_vertex(&spec, 1.0, 6, 4).unwrap();
        let direct = edge_spectrum(&g, 1.0).unwrap();
        assert!(multiset_distance(&predicted, &direct) < 1e-8);
    }

    #[test]
    fn km_reference_values() {
        assert!((kesten_mckay(0.0, 3) - 2f64.sqrt() / (3.0 * PI)).abs() < 1e-15);
        assert_eq!(kesten_mckay(ramanujan_bound(3), 3), 0.0);
        assert!((kesten_mckay_cdf(0.0, 4) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn petersen_is_ramanujan() {
        let spec = adjacency_spectrum(&petersen());
        assert!(non_ramanujan(&spec).unwrap().is_empty());
    }

    #[test]
    fn threshold_band() {
        let r = ramanujan_bound(3);
        let spec = SpectralData::new(vec![3.0, r * 1.01, r, 0.0], Some(3));
        assert_eq!(non_ramanujan(&spec).unwrap(), vec![r * 1.01]);
    }

    #[test]
    fn histogram_bins() {
        let h = Histogram::new(&[0.05, 0.15, 0.15, 2.0], 0.0, 0.3, 0.1).unwrap();
        assert_eq!(h.counts, vec![1, 2, 0]);
        assert_eq!(h.total, 4);
    }
}
