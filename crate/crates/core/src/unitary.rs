//! The unitary edge operators `U(mu, phi) = alpha B - beta J`, their secular
//! function and the phase function that makes the smooth density Kesten-McKay.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{reverse, Graph, RegularGraph};
use crate::operators;
use crate::spectral::{kesten_mckay, kesten_mckay_cdf, ramanujan_bound, CurveSource, DensityCurve};
use crate::walks::{to_f64, WalkCountTable};

const PHASE_TOL: f64 = 1e-12;

/// `Some(k)` if `phi` is within tolerance of `k pi`.
fn multiple_of_pi(phi: f64) -> Option<i64> {
    let k = (phi / PI).round();
    ((phi - k * PI).abs() < PHASE_TOL).then_some(k as i64)
}

/// A validated point `(mu, phi)` of the operator family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UnitaryParams {
    pub degree: usize,
    pub mu: f64,
    pub phi: f64,
}

impl UnitaryParams {
    pub fn new(degree: usize, mu: f64, phi: f64) -> Result<Self> {
        let d = degree as f64;
        if !(mu > -d && mu < d) {
            return Err(Error::InvalidParameter(format!("mu = {mu} outside (-{d}, {d})")));
        }
        if multiple_of_pi(phi).is_some() {
            return Err(Error::DegeneratePhase(phi));
        }
        Ok(Self { degree, mu, phi })
    }

    pub fn alpha(&self) -> Complex64 {
        alpha(self.degree, Complex64::new(self.mu, 0.0), self.phi)
    }

    pub fn beta(&self) -> Complex64 {
        Complex64::cis(self.phi)
    }

    /// `(| |beta|^2 - 1 |, | |alpha|^2 d - 2 Re(alpha conj(beta)) |)`.
    pub fn unitarity_residuals(&self) -> (f64, f64) {
        let (a, b) = (self.alpha(), self.beta());
        let d = self.degree as f64;
        (
            (b.norm_sqr() - 1.0).abs(),
            (a.norm_sqr() * d - 2.0 * (a * b.conj()).re).abs(),
        )
    }

    /// `| alpha mu - (1 + d alpha beta - beta^2) |`.
    pub fn spectral_relation_residual(&self) -> f64 {
        let (a, b) = (self.alpha(), self.beta());
        let d = self.degree as f64;
        (a * self.mu - (1.0 + d * a * b - b * b)).norm()
    }
}

fn alpha(degree: usize, mu: Complex64, phi: f64) -> Complex64 {
    let beta = Complex64::cis(phi);
    (1.0 - beta * beta) / (mu - degree as f64 * beta)
}

fn assemble(g: &Graph, alpha: Complex64, beta: Complex64) -> DMatrix<Complex64> {
    let n = g.directed_edge_count();
    let mut u = DMatrix::zeros(n, n);
    for e in 0..n {
        for &f in g.successors(e) {
            u[(e, f)] += alpha;
        }
        u[(e, reverse(e))] -= beta;
    }
    u
}

/// `U(mu, phi)` for real `mu` in `(-d, d)`.
pub fn build_u(g: &RegularGraph, mu: f64, phi: f64) -> Result<DMatrix<Complex64>> {
    let p = UnitaryParams::new(g.degree(), mu, phi)?;
    Ok(assemble(g, p.alpha(), p.beta()))
}

/// `U(mu, phi)` at a complex spectral parameter; no longer unitary off the
/// real axis.
pub fn build_u_complex(g: &RegularGraph, mu: Complex64, phi: f64) -> Result<DMatrix<Complex64>> {
    if multiple_of_pi(phi).is_some() {
        return Err(Error::DegeneratePhase(phi));
    }
    let denom = mu - g.degree() as f64 * Complex64::cis(phi);
    if denom.norm() < 1e-14 {
        return Err(Error::Pole);
    }
    Ok(assemble(g, alpha(g.degree(), mu, phi), Complex64::cis(phi)))
}

/// `U` extended to `phi = k pi` by its limit `-(-1)^k J`.
pub fn patched_unitary(g: &RegularGraph, mu: f64, phi: f64) -> Result<DMatrix<Complex64>> {
    match multiple_of_pi(phi) {
        Some(k) => {
            let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
            Ok(operators::edge_j::<f64>(g).map(|x| Complex64::new(sign * x, 0.0)))
        }
        None => build_u(g, mu, phi),
    }
}

/// `max |U^dagger U - I|`.
pub fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - target).norm());
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SecularCheck {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub relative_residual: f64,
}

/// `det(I - U) = (1 - e^{2i phi})^E (mu - d e^{i phi})^{-V} det(mu I - A)`.
pub fn secular_identity(g: &RegularGraph, mu: f64, phi: f64) -> Result<SecularCheck> {
    let u = build_u(g, mu, phi)?;
    let n = u.nrows();
    let lhs = (DMatrix::<Complex64>::identity(n, n) - u).determinant();
    let a = operators::adjacency::<f64>(g);
    let v = g.vertex_count();
    let za = (DMatrix::<f64>::identity(v, v) * mu - a).determinant();
    let beta = Complex64::cis(phi);
    let rhs = (1.0 - beta * beta).powu(g.edge_count() as u32)
        * (mu - g.degree() as f64 * beta).powi(-(v as i32))
        * za;
    Ok(SecularCheck {
        lhs: [lhs.re, lhs.im],
        rhs: [rhs.re, rhs.im],
        relative_residual: (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1.0),
    })
}

/// `tr U^t` for `t = 0..=t_max` by matrix powers.
pub fn trace_powers(u: &DMatrix<Complex64>, t_max: usize) -> Vec<Complex64> {
    crate::trace_formula::dense_traces(u, t_max)
}

/// Closed form of `tr U(mu, phi)^t` as a sum over back-scatter counts.
///
/// The prefactor is `alpha^t` and each back-scatter contributes
/// `1 - beta/alpha`, written in polar form with a full-quadrant angle.
pub fn tr_u_closed_form(degree: usize, mu: f64, phi: f64, t: usize, table: &WalkCountTable) -> Complex64 {
    let d = degree as f64;
    let (s, c) = phi.sin_cos();
    let (s2, c2) = (2.0 * phi).sin_cos();
    let dist2 = mu * mu + d * d - 2.0 * mu * d * c;
    let prefactor = (2.0 * s.abs()).powi(t as i32) / dist2.powf(t as f64 / 2.0)
        * Complex64::cis(t as f64 * (phi + ((d * c - mu) / (d * s)).atan()));
    let amplitude = (2.0 + d * (d - 2.0) + mu * mu - 2.0 * mu * d * c + 2.0 * (d - 1.0) * c2).sqrt() / (2.0 * s);
    let num = d * s2 - s2 - mu * s;
    let den = 1.0 - c2 - mu * c + d * c2;
    let angle = PI / 2.0 - phi + num.atan2(den);
    let sum: Complex64 = (0..=t.min(table.g_max()))
        .map(|g| to_f64(&table.get(t, g)) * amplitude.powi(g as i32) * Complex64::cis(g as f64 * angle))
        .sum();
    prefactor * sum
}

/// Closed form at `phi = -pi/2`; each back-scatter carries a phase
/// `pi - arctan(mu / (d - 2))`.
pub fn tr_u_closed_form_quarter(degree: usize, mu: f64, t: usize, table: &WalkCountTable) -> Complex64 {
    let d = degree as f64;
    let prefactor = 2f64.powi(t as i32) / (d * d + mu * mu).powf(t as f64 / 2.0)
        * Complex64::cis(t as f64 * ((mu / d).atan() - PI / 2.0));
    let amplitude = ((d - 2.0).powi(2) + mu * mu).sqrt() / 2.0;
    let angle = PI - (mu / (d - 2.0)).atan();
    let sum: Complex64 = (0..=t.min(table.g_max()))
        .map(|g| to_f64(&table.get(t, g)) * amplitude.powi(g as i32) * Complex64::cis(g as f64 * angle))
        .sum();
    prefactor * sum
}

/// Smooth density at constant phase.
pub fn smooth_density_const_phi(mu: f64, degree: usize, phi: f64) -> f64 {
    smooth_density_phase(mu, degree, phi, 0.0)
}

/// Smooth density for a phase `phi(mu)` with slope `dphi`.
pub fn smooth_density_phase(mu: f64, degree: usize, phi: f64, dphi: f64) -> f64 {
    -phase_density(mu, degree, phi, dphi)
}

/// `(d/2pi) (2 sin phi - phi' (mu^2 + d(d-2) - 2(d-1) mu cos phi)) / |mu - d e^{i phi}|^2`,
/// the `mu`-derivative of the counting-equation left side.
pub fn phase_density(mu: f64, degree: usize, phi: f64, dphi: f64) -> f64 {
    let d = degree as f64;
    let (s, c) = phi.sin_cos();
    let dist2 = mu * mu + d * d - 2.0 * mu * d * c;
    d / (2.0 * PI) * (2.0 * s - dphi * (mu * mu + d * (d - 2.0) - 2.0 * (d - 1.0) * mu * c)) / dist2
}

/// Left side of the counting-function equation for offset `r = 2k/V`.
/// The sign choice follows the sign of `mu sin phi`.
pub fn counting_lhs(mu: f64, degree: usize, phi: f64, offset: f64) -> f64 {
    let d = degree as f64;
    let c = phi.cos();
    let dist = (mu * mu + d * d - 2.0 * mu * d * c).sqrt();
    let arc = ((mu * c - d) / dist).clamp(-1.0, 1.0).acos() / PI;
    let base = offset + d / 2.0 * (0.5 - phi / PI) + phi / PI;
    if mu * phi.sin() > 0.0 {
        base - arc + 2.0
    } else {
        base + arc
    }
}

/// First-order large-degree solution, used as the initial guess.
pub fn large_degree_phase(mu: f64, degree: usize, offset: f64) -> f64 {
    let d = degree as f64;
    let c_k = PI / 2.0 + 2.0 * PI / (d - 2.0) * (1.0 + offset);
    let band = (4.0 * (d - 1.0) - mu * mu).max(0.0);
    c_k - mu * band.sqrt() / (2.0 * (d - 1.0).powi(2))
        - 2.0 / (d - 1.0) * (mu / (2.0 * (d - 1.0).sqrt())).clamp(-1.0, 1.0).asin()
}

/// A solved branch of the Kesten-McKay phase function.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseFunction {
    pub degree: usize,
    pub branch: i64,
    pub vertex_count: usize,
    pub grid: Vec<f64>,
    pub phi: Vec<f64>,
    /// Counting-equation residual at each grid point.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    /// Largest `|phi_{i+1} - phi_i|` along the sweep.
    pub max_step: f64,
    /// Grid indices where the solution crosses a multiple of `pi`.
    pub pi_crossings: Vec<usize>,
}

impl PhaseFunction {
    pub fn offset(&self) -> f64 {
        2.0 * self.branch as f64 / self.vertex_count as f64
    }

    /// Central-difference slope on interior points, one-sided at the ends.
    pub fn slopes(&self) -> Vec<f64> {
        let n = self.grid.len();
        (0..n)
            .map(|i| {
                let (a, b) = (i.saturating_sub(1), (i + 1).min(n - 1));
                (self.phi[b] - self.phi[a]) / (self.grid[b] - self.grid[a])
            })
            .collect()
    }

    /// `|phase_density(phi, phi') - rho_KM|` on grid points with
    /// `|mu| <= interior * 2 sqrt(d-1)`; `NaN` elsewhere.
    pub fn ode_residuals(&self, interior: f64) -> Vec<f64> {
        let edge = interior * ramanujan_bound(self.degree);
        let slopes = self.slopes();
        let n = self.grid.len();
        (0..n)
            .map(|i| {
                let mu = self.grid[i];
                if i == 0 || i + 1 == n || mu.abs() > edge {
                    f64::NAN
                } else {
                    (phase_density(mu, self.degree, self.phi[i], slopes[i]) - kesten_mckay(mu, self.degree)).abs()
                }
            })
            .collect()
    }

    /// `true` if `phi` is non-increasing (or non-decreasing) along the grid.
    pub fn monotone(&self) -> bool {
        let steps: Vec<f64> = self.phi.windows(2).map(|w| w[1] - w[0]).collect();
        steps.iter().all(|&s| s <= 0.0) || steps.iter().all(|&s| s >= 0.0)
    }

    pub fn range(&self) -> (f64, f64) {
        self.phi
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| (lo.min(p), hi.max(p)))
    }

    /// Linear interpolation of the phase.
    pub fn at(&self, mu: f64) -> f64 {
        let i = self.grid.partition_point(|&x| x < mu).clamp(1, self.grid.len() - 1);
        let (x0, x1) = (self.grid[i - 1], self.grid[i]);
        let t = (mu - x0) / (x1 - x0);
        self.phi[i - 1] * (1.0 - t) + self.phi[i] * t
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Root of `f` nearest to `center`, scanning outward in steps of `step` up to
/// `window` on each side.
fn nearest_root<F: Fn(f64) -> f64>(f: &F, center: f64, step: f64, window: f64) -> Option<f64> {
    let f0 = f(center);
    if f0 == 0.0 {
        return Some(center);
    }
    let mut best: Option<f64> = None;
    let (mut left, mut right) = ((center, f0), (center, f0));
    let mut reach = 0.0;
    while reach < window {
        reach += step;
        let r = (center + reach, f(center + reach));
        if (r.1 < 0.0) != (right.1 < 0.0) {
            best = Some(bisect(f, right.0, r.0));
        }
        right = r;
        let l = (center - reach, f(center - reach));
        if (l.1 < 0.0) != (left.1 < 0.0) {
            let root = bisect(f, l.0, left.0);
            best = Some(match best {
                Some(b) if (b - center).abs() <= (root - center).abs() => b,
                _ => root,
            });
        }
        left = l;
        if best.is_some() {
            return best;
        }
    }
    None
}

/// Solve the counting-function equation for branch `k` on `grid` (which must
/// lie strictly inside `|mu| < 2 sqrt(d-1)` and be increasing).
pub fn solve_phi_km(degree: usize, branch: i64, vertex_count: usize, grid: &[f64]) -> Result<PhaseFunction> {
    if degree < 3 {
        return Err(Error::InvalidParameter("phase function needs d >= 3".into()));
    }
    if vertex_count == 0 || grid.is_empty() {
        return Err(Error::InvalidParameter("empty grid or zero vertex count".into()));
    }
    let bound = ramanujan_bound(degree);
    if grid.iter().any(|mu| mu.abs() >= bound) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter(format!(
            "grid must be increasing and inside (-{bound}, {bound})"
        )));
    }
    let offset = 2.0 * branch as f64 / vertex_count as f64;
    let jump_bound = PI / 2.0;
    let mut phi = Vec::with_capacity(grid.len());
    let mut residuals = Vec::with_capacity(grid.len());
    let mut prev = large_degree_phase(grid[0], degree, offset);
    for (i, &mu) in grid.iter().enumerate() {
        let target = kesten_mckay_cdf(mu, degree);
        let f = |p: f64| counting_lhs(mu, degree, p, offset) - target;
        let root = nearest_root(&f, prev, 1e-3, 2.0 * PI).ok_or(Error::NoRootInBranch { mu })?;
        if i > 0 && (root - prev).abs() > jump_bound {
            return Err(Error::BranchJump {
                mu,
                jump: root - prev,
            });
        }
        residuals.push(f(root).abs());
        phi.push(root);
        prev = root;
    }
    let max_step = phi.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max);
    let pi_crossings = phi
        .windows(2)
        .enumerate()
        .filter(|(_, w)| (w[0] / PI).floor() != (w[1] / PI).floor())
        .map(|(i, _)| i)
        .collect();
    Ok(PhaseFunction {
        degree,
        branch,
        vertex_count,
        grid: grid.to_vec(),
        max_residual: residuals.iter().copied().fold(0.0, f64::max),
        phi,
        residuals,
        max_step,
        pi_crossings,
    })
}

/// Phase prescription for the secular density.
#[derive(Clone, Debug)]
pub enum PhaseSpec<'a> {
    Constant(f64),
    /// Uses `-phi_KM(mu)`, the branch whose smooth density is `+rho_KM`
    /// under the secular-function sign convention.
    KestenMcKay(&'a PhaseFunction),
}

impl PhaseSpec<'_> {
    fn at(&self, mu: f64) -> f64 {
        match self {
            PhaseSpec::Constant(p) => *p,
            PhaseSpec::KestenMcKay(f) => -f.at(mu),
        }
    }

    pub fn label(&self) -> String {
        match self {
            PhaseSpec::Constant(p) => format!("{p}"),
            PhaseSpec::KestenMcKay(f) => format!("-phi_km(k={}, V={})", f.branch, f.vertex_count),
        }
    }
}

/// Components of the regularised secular density on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SecularDensity {
    pub smooth: DensityCurve,
    pub fluctuating: DensityCurve,
    pub eps: f64,
    pub t_max: usize,
}

impl SecularDensity {
    pub fn total(&self) -> Vec<f64> {
        self.smooth
            .values
            .iter()
            .zip(&self.fluctuating.values)
            .map(|(a, b)| a + b)
            .collect()
    }
}

fn log_series(g: &RegularGraph, mu: Complex64, phi: f64, t_max: usize) -> Result<Complex64> {
    let u = build_u_complex(g, mu, phi)?;
    Ok(trace_powers(&u, t_max)
        .iter()
        .enumerate()
        .skip(1)
        .map(|(t, x)| x / t as f64)
        .sum())
}

/// Smooth term analytically, fluctuating term as
/// `(1/(V pi)) Im d/dmu sum_{t<=t_max} tr U(mu + i eps)^t / t` with a central
/// difference in `mu`.
pub fn density_from_secular(
    g: &RegularGraph,
    grid: &[f64],
    phase: &PhaseSpec<'_>,
    eps: f64,
    t_max: usize,
) -> Result<SecularDensity> {
    if eps <= 0.0 {
        return Err(Error::InvalidParameter("eps must be positive".into()));
    }
    let d = g.degree();
    let v = g.vertex_count() as f64;
    let h = 1e-5;
    let mut smooth = Vec::with_capacity(grid.len());
    let mut fluct = Vec::with_capacity(grid.len());
    for &mu in grid {
        let (p_lo, p, p_hi) = (phase.at(mu - h), phase.at(mu), phase.at(mu + h));
        if multiple_of_pi(p).is_some() {
            return Err(Error::DegeneratePhase(p));
        }
        smooth.push(smooth_density_phase(mu, d, p, (p_hi - p_lo) / (2.0 * h)));
        let hi = log_series(g, Complex64::new(mu + h, eps), p_hi, t_max)?;
        let lo = log_series(g, Complex64::new(mu - h, eps), p_lo, t_max)?;
        fluct.push(((hi - lo) / (2.0 * h)).im / (v * PI));
    }
    let source = CurveSource::Unitary { phase: phase.label() };
    let make = |values| DensityCurve {
        grid: grid.to_vec(),
        values,
        source: source.clone(),
        normalization: 1.0,
    };
    Ok(SecularDensity {
        smooth: make(smooth),
        fluctuating: make(fluct),
        eps,
        t_max,
    })
}
