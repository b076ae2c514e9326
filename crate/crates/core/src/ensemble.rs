//! Random regular graphs from the configuration model, their decorations, and
//! ensemble averages of vector-valued observables.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{GraphMode, MagneticDecoration, RegularGraph, WeightDecoration};
use crate::par::{pairwise_sum, Execution};
use crate::spectral;
use crate::walks;

pub const DEFAULT_MAX_ATTEMPTS: usize = 1_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecorationKind {
    #[default]
    None,
    Magnetic,
    Weighted,
}

impl std::str::FromStr for DecorationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Self::None),
            "magnetic" => Ok(Self::Magnetic),
            "weighted" => Ok(Self::Weighted),
            other => Err(Error::InvalidSpec(format!("unknown decoration {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleSpec {
    pub vertex_count: usize,
    pub degree: usize,
    pub sample_count: usize,
    pub seed: u64,
    pub decoration: DecorationKind,
    pub reject_bipartite: bool,
    pub reject_disconnected: bool,
    /// Magnetic decorations are all zero.
    pub zero_flux: bool,
    /// Weight decorations are all one.
    pub unit_weights: bool,
    /// Pairing attempts allowed per sample.
    pub max_attempts: usize,
}

impl EnsembleSpec {
    pub fn new(vertex_count: usize, degree: usize, sample_count: usize, seed: u64) -> Result<Self> {
        let spec = Self {
            vertex_count,
            degree,
            sample_count,
            seed,
            decoration: DecorationKind::None,
            reject_bipartite: true,
            reject_disconnected: true,
            zero_flux: false,
            unit_weights: false,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_decoration(mut self, decoration: DecorationKind) -> Self {
        self.decoration = decoration;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (v, d) = (self.vertex_count, self.degree);
        if v * d % 2 != 0 {
            return Err(Error::InvalidSpec(format!("V d = {} is odd", v * d)));
        }
        if v <= d {
            return Err(Error::InvalidSpec(format!("need V > d, got V = {v}, d = {d}")));
        }
        if d < 3 {
            return Err(Error::InvalidSpec(format!("simple ensembles need d >= 3, got {d}")));
        }
        if self.sample_count == 0 {
            return Err(Error::InvalidSpec("sample count must be positive".into()));
        }
        if self.max_attempts == 0 {
            return Err(Error::InvalidSpec("attempt budget must be positive".into()));
        }
        Ok(())
    }

    /// The random stream of sample `index`.
    pub fn rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64);
        rng
    }
}

/// A sampled graph with its decoration, if any.
#[derive(Clone, Debug)]
pub struct Sample {
    pub index: usize,
    pub graph: RegularGraph,
    pub magnetic: Option<MagneticDecoration>,
    pub weights: Option<WeightDecoration>,
    /// Pairings tried before this one was accepted.
    pub attempts: usize,
}

fn pair_stubs(v: usize, d: usize, rng: &mut ChaCha8Rng) -> Option<Vec<(usize, usize)>> {
    let mut stubs: Vec<usize> = (0..v).flat_map(|i| std::iter::repeat_n(i, d)).collect();
    stubs.shuffle(rng);
    let mut seen = HashSet::with_capacity(stubs.len() / 2);
    let mut edges = Vec::with_capacity(stubs.len() / 2);
    for pair in stubs.chunks_exact(2) {
        let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
        if a == b || !seen.insert((a, b)) {
            return None;
        }
        edges.push((a, b));
    }
    Some(edges)
}

fn sample_graph(spec: &EnsembleSpec, rng: &mut ChaCha8Rng) -> Result<(RegularGraph, usize)> {
    let (v, d) = (spec.vertex_count, spec.degree);
    for attempt in 1..=spec.max_attempts {
        let Some(edges) = pair_stubs(v, d, rng) else {
            continue;
        };
        let g = RegularGraph::new(v, d, edges, GraphMode::Simple)?;
        if (spec.reject_bipartite && g.is_bipartite()) || (spec.reject_disconnected && !g.is_connected()) {
            continue;
        }
        return Ok((g, attempt));
    }
    Err(Error::RejectionBudgetExceeded {
        attempts: spec.max_attempts,
    })
}

/// One pairing of the configuration model with loops and parallel edges
/// kept: a `d`-regular multigraph (a loop adds 2 to its vertex's degree).
pub fn sample_multigraph(vertex_count: usize, degree: usize, rng: &mut ChaCha8Rng) -> Result<RegularGraph> {
    if vertex_count * degree % 2 != 0 {
        return Err(Error::OddProduct { vertex_count, degree });
    }
    let mut stubs: Vec<usize> = (0..vertex_count).flat_map(|i| std::iter::repeat_n(i, degree)).collect();
    stubs.shuffle(rng);
    let edges = stubs.chunks_exact(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
    RegularGraph::new(vertex_count, degree, edges, GraphMode::Multigraph)
}

/// Sample `index` of the ensemble, decorated per the spec.
pub fn sample(spec: &EnsembleSpec, index: usize) -> Result<Sample> {
    spec.validate()?;
    let mut rng = spec.rng(index);
    let (graph, attempts) = sample_graph(spec, &mut rng)?;
    let (magnetic, weights) = match spec.decoration {
        DecorationKind::None => (None, None),
        DecorationKind::Magnetic => (Some(decorate_magnetic(&graph, &mut rng, spec.zero_flux)), None),
        DecorationKind::Weighted => (None, Some(decorate_weighted(&graph, &mut rng, spec.unit_weights))),
    };
    Ok(Sample {
        index,
        graph,
        magnetic,
        weights,
        attempts,
    })
}

/// First sample of the ensemble.
pub fn sample_regular(spec: &EnsembleSpec) -> Result<RegularGraph> {
    sample(spec, 0).map(|s| s.graph)
}

pub fn decorate_magnetic(g: &RegularGraph, rng: &mut ChaCha8Rng, zero_flux: bool) -> MagneticDecoration {
    if zero_flux {
        MagneticDecoration::zero(g)
    } else {
        MagneticDecoration::random(g, rng)
    }
}

pub fn decorate_weighted(g: &RegularGraph, rng: &mut ChaCha8Rng, unit_weights: bool) -> WeightDecoration {
    if unit_weights {
        WeightDecoration::ones(g)
    } else {
        WeightDecoration::random(g, rng)
    }
}

/// `f` applied to every sample, in sample order.
pub fn ensemble_map<T, F>(spec: &EnsembleSpec, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Sample) -> Result<T> + Sync + Send,
{
    spec.validate()?;
    exec.try_map(spec.sample_count, |i| f(&sample(spec, i)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EnsembleAverage {
    pub samples: usize,
    pub mean: Vec<f64>,
    /// Sample standard deviation over `sqrt(n)`; zero for a single sample.
    pub stderr: Vec<f64>,
}

impl EnsembleAverage {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let width = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::InvalidParameter("observable lengths differ between samples".into()));
        }
        let mut mean = Vec::with_capacity(width);
        let mut stderr = Vec::with_capacity(width);
        for j in 0..width {
            let column: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            let m = pairwise_sum(&column) / n as f64;
            let dev: Vec<f64> = column.iter().map(|x| (x - m).powi(2)).collect();
            let var = if n > 1 { pairwise_sum(&dev) / (n - 1) as f64 } else { 0.0 };
            mean.push(m);
            stderr.push((var / n as f64).sqrt());
        }
        Ok(Self {
            samples: n,
            mean,
            stderr,
        })
    }

    /// `|mean - target| <= k stderr` for every component.
    pub fn within(&self, targets: &[f64], k: f64) -> Vec<bool> {
        self.mean
            .iter()
            .zip(&self.stderr)
            .zip(targets)
            .map(|((m, s), t)| (m - t).abs() <= k * s)
            .collect()
    }
}

pub fn ensemble_average<F>(spec: &EnsembleSpec, exec: Execution, observable: F) -> Result<EnsembleAverage>
where
    F: Fn(&Sample) -> Result<Vec<f64>> + Sync + Send,
{
    EnsembleAverage::from_rows(&ensemble_map(spec, exec, observable)?)
}

/// `tr Y^t` for `t` in `ts`, exact integer counts converted to `f64`.
pub fn trace_y(ts: &[usize]) -> impl Fn(&Sample) -> Result<Vec<f64>> + Sync + Send + '_ {
    move |s| {
        let t_max = ts.iter().copied().max().unwrap_or(0);
        let traces = walks::nonbacktracking_traces(&s.graph, t_max);
        Ok(ts.iter().map(|&t| traces[t] as f64).collect())
    }
}

/// Histogram densities of the nontrivial adjacency eigenvalues.
pub fn spectrum_density(lo: f64, hi: f64, bin_width: f64) -> impl Fn(&Sample) -> Result<Vec<f64>> + Sync + Send {
    move |s| {
        let spec = spectral::adjacency_spectrum(&s.graph);
        Ok(spectral::Histogram::new(spec.nontrivial(), lo, hi, bin_width)?.densities())
    }
}

/// Largest `|mu|` of the magnetic adjacency matrix; needs a magnetic
/// decoration.
pub fn magnetic_top(s: &Sample) -> Result<Vec<f64>> {
    let m = s
        .magnetic
        .as_ref()
        .ok_or_else(|| Error::InvalidSpec("observable needs a magnetic decoration".into()))?;
    let spec = spectral::magnetic_spectrum(&s.graph, m)?;
    Ok(vec![spec.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()))])
}
