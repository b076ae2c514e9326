//! The `w`-family trace formula: normalised traces `y_t(w)` of `Y(w)`, the
//! closed-form smooth and correction densities, and finite truncations of
//! the oscillatory series.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::chebyshev::{chebyshev_series, chebyshev_t};
use crate::error::{Error, Result};
use crate::graph::{reverse, Graph, GraphMode, MagneticDecoration, RegularGraph};
use crate::spectral::{self, CurveSource, DensityCurve, SpectralData};

/// Normalised traces for one graph and one `w`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceCoefficients {
    pub w: f64,
    pub magnetic: bool,
    /// `y_t` for `t = 0..=t_max`.
    pub y: Vec<f64>,
    /// `tr Y(w)^t` (or `tr (Y^M)^t`) for `t = 0..=t_max`.
    pub raw_traces: Vec<f64>,
}

impl TraceCoefficients {
    pub fn t_max(&self) -> usize {
        self.y.len() - 1
    }
}

fn check_w(d: f64, w: f64) -> Result<()> {
    if w > 0.0 && w < d {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("w = {w} must lie in (0, {d})")))
    }
}

/// `tr M^t` for `t = 0..=t_max`, where `M` is given row by row through its
/// sparse entries and `rank_one` optionally subtracts `c * P` with `P` the
/// projector onto the constant vector.
fn power_traces<T, F>(n: usize, t_max: usize, row: F, rank_one: Option<T>) -> Vec<T>
where
    T: nalgebra::ComplexField + Copy,
    F: Fn(usize) -> Vec<(usize, T)>,
{
    let rows: Vec<Vec<(usize, T)>> = (0..n).map(row).collect();
    let mut power = DMatrix::<T>::identity(n, n);
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(power.trace());
    let inv_n = T::from_real(nalgebra::convert(1.0 / n as f64));
    for _ in 1..=t_max {
        let mut next = DMatrix::<T>::zeros(n, n);
        for i in 0..n {
            for (k, entries) in rows.iter().enumerate() {
                let p = power[(i, k)];
                if p.is_zero() {
                    continue;
                }
                for &(j, v) in entries {
                    next[(i, j)] += p * v;
                }
            }
        }
        if let Some(c) = rank_one {
            // next -= c/n * (power 1) 1^T
            for i in 0..n {
                let row_sum = power.row(i).iter().fold(T::zero(), |a, &b| a + b);
                let shift = c * inv_n * row_sum;
                for j in 0..n {
                    next[(i, j)] -= shift;
                }
            }
        }
        power = next;
        out.push(power.trace());
    }
    out
}

fn y_rows(g: &Graph, w: f64) -> impl Fn(usize) -> Vec<(usize, f64)> + '_ {
    move |e| {
        let mut entries: Vec<(usize, f64)> = g.successors(e).iter().map(|&f| (f, 1.0)).collect();
        entries.push((reverse(e), -w));
        entries
    }
}

/// `tr Y(w)^t` by matrix powers.
pub fn edge_traces(g: &Graph, w: f64, t_max: usize) -> Vec<f64> {
    power_traces(g.directed_edge_count(), t_max, y_rows(g, w), None)
}

/// `tr Y(w)^t - (d - w)^t` by powers of the matrix with its trivial
/// eigenvalue deflated. The constant vector is a left and right eigenvector
/// of `Y(w)` with eigenvalue `d - w`, so subtracting `(d - w) P` removes
/// exactly that contribution without the cancellation of a late subtraction.
pub fn deflated_edge_traces(g: &RegularGraph, w: f64, t_max: usize) -> Vec<f64> {
    let c = g.degree() as f64 - w;
    let mut traces = power_traces(g.directed_edge_count(), t_max, y_rows(g, w), Some(c));
    // (Y - cP)^0 is still the identity
    traces[0] -= 1.0;
    traces
}

/// `tr (Y^M)^t` with `Y^M = B^M - J`.
pub fn magnetic_edge_traces(g: &Graph, m: &MagneticDecoration, t_max: usize) -> Result<Vec<Complex64>> {
    m.check(g)?;
    let row = |e: usize| {
        let mut entries: Vec<(usize, Complex64)> = g
            .successors(e)
            .iter()
            .map(|&f| (f, Complex64::cis(0.5 * (m.directed(e) + m.directed(f)))))
            .collect();
        entries.push((reverse(e), Complex64::new(-1.0, 0.0)));
        entries
    };
    Ok(power_traces(g.directed_edge_count(), t_max, row, None))
}

/// `y_t(w) = (tr Y^t(w) - (d - w)^t) / (V (w(d - w))^(t/2))` from matrix
/// powers.
pub fn compute_y(g: &RegularGraph, w: f64, t_max: usize) -> Result<TraceCoefficients> {
    if g.is_bipartite() {
        return Err(Error::BipartiteInput);
    }
    let d = g.degree() as f64;
    check_w(d, w)?;
    let v = g.vertex_count() as f64;
    let s = (w * (d - w)).sqrt();
    let deflated = deflated_edge_traces(g, w, t_max);
    let y = deflated
        .iter()
        .enumerate()
        .map(|(t, x)| x / (v * s.powi(t as i32)))
        .collect();
    let raw_traces = deflated
        .iter()
        .enumerate()
        .map(|(t, x)| x + (d - w).powi(t as i32))
        .collect();
    Ok(TraceCoefficients {
        w,
        magnetic: false,
        y,
        raw_traces,
    })
}

/// Magnetic `y_t = tr (Y^M)^t / (V (d - 1)^(t/2))` (at `w = 1`).
pub fn compute_y_magnetic(
    g: &RegularGraph,
    m: &MagneticDecoration,
    t_max: usize,
) -> Result<TraceCoefficients> {
    let d = g.degree() as f64;
    let v = g.vertex_count() as f64;
    let traces = magnetic_edge_traces(g, m, t_max)?;
    let y = traces
        .iter()
        .enumerate()
        .map(|(t, x)| x.re / (v * (d - 1.0).powf(t as f64 / 2.0)))
        .collect();
    Ok(TraceCoefficients {
        w: 1.0,
        magnetic: true,
        y,
        raw_traces: traces.iter().map(|x| x.re).collect(),
    })
}

/// Eigenvalue side: `(1/V) r^t + ((d-2)/2) r^t (1 + (-1)^t)
/// + (2/V) sum_{k>=1} T_t(mu_k / (2 sqrt(w(d-w))))` with
/// `r = sqrt(w/(d-w))`.
pub fn y_from_spectrum(spec: &SpectralData, w: f64, vertex_count: usize, t_max: usize) -> Result<Vec<f64>> {
    let d = spec
        .degree
        .ok_or_else(|| Error::InvalidParameter("needs a regular graph".into()))? as f64;
    check_w(d, w)?;
    let v = vertex_count as f64;
    let s = (w * (d - w)).sqrt();
    let r = (w / (d - w)).sqrt();
    let mut sums = vec![0.0; t_max + 1];
    for &mu in spec.nontrivial() {
        for (t, x) in chebyshev_series(t_max, mu / (2.0 * s)).into_iter().enumerate() {
            sums[t] += x;
        }
    }
    Ok((0..=t_max)
        .map(|t| {
            let rt = r.powi(t as i32);
            let parity = if t % 2 == 0 { 2.0 } else { 0.0 };
            rt / v + (d - 2.0) / 2.0 * rt * parity + 2.0 / v * sums[t]
        })
        .collect())
}

/// Magnetic eigenvalue side: `((d-2)/2) (1 + (-1)^t) (d-1)^(-t/2)
/// + (2/V) sum_k T_t(mu_k / (2 sqrt(d-1)))`, summed over every magnetic
/// eigenvalue since none is trivial.
pub fn magnetic_y_from_spectrum(spec: &SpectralData, vertex_count: usize, t_max: usize) -> Result<Vec<f64>> {
    let d = spec
        .degree
        .ok_or_else(|| Error::InvalidParameter("needs a regular graph".into()))? as f64;
    let v = vertex_count as f64;
    let s = (d - 1.0).sqrt();
    let mut sums = vec![0.0; t_max + 1];
    for &mu in &spec.eigenvalues {
        for (t, x) in chebyshev_series(t_max, mu / (2.0 * s)).into_iter().enumerate() {
            sums[t] += x;
        }
    }
    Ok((0..=t_max)
        .map(|t| {
            let parity = if t % 2 == 0 { 2.0 } else { 0.0 };
            (d - 2.0) / 2.0 * parity * s.powi(-(t as i32)) + 2.0 / v * sums[t]
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityResiduals {
    pub w: f64,
    /// `|matrix side - eigenvalue side| / max(1, |matrix side|)` per `t`.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
}

/// Compare both evaluations of `y_t(w)` for `t <= t_max`.
pub fn verify_ywt_identity(g: &RegularGraph, w: f64, t_max: usize) -> Result<IdentityResiduals> {
    let matrix = compute_y(g, w, t_max)?;
    let spec = spectral::adjacency_spectrum(g);
    let eig = y_from_spectrum(&spec, w, g.vertex_count(), t_max)?;
    let residuals: Vec<f64> = matrix
        .y
        .iter()
        .zip(&eig)
        .map(|(a, b)| (a - b).abs() / a.abs().max(1.0))
        .collect();
    Ok(IdentityResiduals {
        w,
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        residuals,
    })
}

fn band_check(mu: f64, d: f64, w: f64) -> Result<f64> {
    let band = 4.0 * w * (d - w) - mu * mu;
    if band <= 0.0 {
        return Err(Error::OutOfSupport {
            mu,
            bound: 2.0 * (w * (d - w)).sqrt(),
        });
    }
    if (d * d - mu * mu).abs() < 1e-14 {
        return Err(Error::PoleAtD);
    }
    Ok(band.sqrt())
}

/// Smooth part of the density for general `w`; reduces to Kesten-McKay at
/// `w = 1`.
pub fn rho_smooth(mu: f64, d: usize, w: f64) -> Result<f64> {
    let d = d as f64;
    let root = band_check(mu, d, w)?;
    let dw = d - w;
    let bracket = 1.0 - (d - 2.0 * w) * (d - 2.0) / (d * d - mu * mu)
        + (w - 1.0).powi(2) * (mu * mu - 2.0 * w * dw) / (w * w * dw * dw);
    Ok(d / (2.0 * PI) / root * bracket)
}

/// Order-`1/V` correction (to be divided by `V`).
pub fn rho_corr(mu: f64, d: usize, w: f64) -> Result<f64> {
    let d = d as f64;
    let root = band_check(mu, d, w)?;
    let bracket = 1.0 + mu / w + (mu * mu - 2.0 * w * (d - w)) / (w * w) + (d - 2.0 * w) / (d - mu);
    Ok(-bracket / (2.0 * PI * root))
}

/// The correction written out directly at `w = 1`.
pub fn rho_corr_w1(mu: f64, d: usize) -> Result<f64> {
    let df = d as f64;
    let root = band_check(mu, df, 1.0)?;
    let bracket = 1.0 + mu + mu * mu - 2.0 * (df - 1.0) + (df - 2.0) / (df - mu);
    Ok(-bracket / (2.0 * PI * root))
}

/// `y_1` and `y_2` of a simple regular graph; these are already contained in
/// the smooth and correction terms.
pub fn simple_graph_low_orders(d: usize, w: f64, vertex_count: usize) -> [f64; 3] {
    let (d, v) = (d as f64, vertex_count as f64);
    [
        d - 1.0 / v,
        -((d - w) / w).sqrt() / v,
        d * (1.0 - w).powi(2) / (w * (d - w)) - (d - w) / (w * v),
    ]
}

/// Truncated oscillatory term `(1/pi) sum_{t=t_from}^{t_max} y_t T_t(x) /
/// sqrt(4w(d-w) - mu^2)`, with `x = mu / (2 sqrt(w(d-w)))`.
pub fn rho_osc(mu: f64, d: usize, w: f64, y: &[f64], t_from: usize) -> Result<f64> {
    let df = d as f64;
    let root = band_check(mu, df, w)?;
    let x = mu / (2.0 * (w * (df - w)).sqrt());
    let sum: f64 = (t_from..y.len()).map(|t| y[t] * chebyshev_t(t, x)).sum();
    Ok(sum / (PI * root))
}

/// Grid samples of the three parts and of the coarse-grained spectral
/// density they are compared against.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceFormulaDecomposition {
    pub w: f64,
    pub t_max: usize,
    pub support: f64,
    pub smooth: DensityCurve,
    pub osc: DensityCurve,
    /// `rho_corr / V`.
    pub corr: DensityCurve,
    /// `(1/V) sum_{k>=1} coarse delta(mu - mu_k)` with the kernel at the same
    /// order; eigenvalues outside the band are left out.
    pub coarse: DensityCurve,
}

impl TraceFormulaDecomposition {
    pub fn total(&self) -> Vec<f64> {
        self.smooth
            .values
            .iter()
            .zip(&self.osc.values)
            .zip(&self.corr.values)
            .map(|((a, b), c)| a + b + c)
            .collect()
    }
}

fn curve(grid: &[f64], values: Vec<f64>, w: f64, part: &str) -> DensityCurve {
    DensityCurve {
        grid: grid.to_vec(),
        values,
        source: CurveSource::TraceFormula {
            w,
            part: part.to_string(),
        },
        normalization: 1.0,
    }
}

/// Evaluate the decomposition on `grid`. For multigraphs the oscillatory sum
/// starts at `t = 1`, using the excess of `y_1`, `y_2` over their simple-graph
/// values (which the closed-form parts already contain).
pub fn reconstruct_density(
    g: &RegularGraph,
    w: f64,
    t_max: usize,
    grid: &[f64],
) -> Result<TraceFormulaDecomposition> {
    let d = g.degree();
    let df = d as f64;
    let v = g.vertex_count();
    let support = 2.0 * (w * (df - w)).sqrt();
    let coeffs = compute_y(g, w, t_max)?;
    let mut y = coeffs.y.clone();
    let t_from = match g.mode() {
        GraphMode::Simple => 3,
        GraphMode::Multigraph => {
            let low = simple_graph_low_orders(d, w, v);
            for t in 0..3.min(y.len()) {
                y[t] -= low[t];
            }
            1
        }
    };
    let mut smooth = Vec::with_capacity(grid.len());
    let mut osc = Vec::with_capacity(grid.len());
    let mut corr = Vec::with_capacity(grid.len());
    for &mu in grid {
        smooth.push(rho_smooth(mu, d, w)?);
        osc.push(rho_osc(mu, d, w, &y, t_from)?);
        corr.push(rho_corr(mu, d, w)? / v as f64);
    }

    let spec = spectral::adjacency_spectrum(g);
    let kept: Vec<f64> = spec
        .nontrivial()
        .iter()
        .map(|mu| mu / support)
        .filter(|x| x.abs() <= 1.0)
        .collect();
    let coarse = grid
        .iter()
        .map(|&mu| {
            let x = mu / support;
            kept.iter()
                .map(|&xk| crate::chebyshev::coarse_delta(x, xk, t_max))
                .sum::<Result<f64>>()
                .map(|s| s / (v as f64 * support))
        })
        .collect::<Result<Vec<f64>>>()?;

    Ok(TraceFormulaDecomposition {
        w,
        t_max,
        support,
        smooth: curve(grid, smooth, w, "smooth"),
        osc: curve(grid, osc, w, "osc"),
        corr: curve(grid, corr, w, "corr"),
        coarse: DensityCurve {
            grid: grid.to_vec(),
            values: coarse,
            source: CurveSource::Coarse {
                t_max,
                excluded: spec.nontrivial().len() - kept.len(),
            },
            normalization: v as f64,
        },
    })
}

/// Root-mean-square difference between two equally sampled curves.
pub fn rms_distance(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len()).max(1) as f64;
    (a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / n).sqrt()
}

/// `tr M^t` for a dense matrix, `t = 0..=t_max`.
pub fn dense_traces(m: &DMatrix<Complex64>, t_max: usize) -> Vec<Complex64> {
    let n = m.nrows();
    let mut power = DMatrix::<Complex64>::identity(n, n);
    let mut out = vec![power.trace()];
    for _ in 0..t_max {
        power = &power * m;
        out.push(power.trace());
    }
    out
}
