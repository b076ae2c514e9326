use rand::Rng;

use super::Graph;
use crate::error::{Error, Result};

/// One real phase per undirected edge. Directed edge `2k` carries `+phase[k]`
/// and `2k + 1` carries `-phase[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MagneticDecoration {
    fingerprint: u64,
    phases: Vec<f64>,
}

impl MagneticDecoration {
    pub fn new(g: &Graph, phases: Vec<f64>) -> Result<Self> {
        if phases.len() != g.edge_count() {
            return Err(Error::DecorationMismatch);
        }
        Ok(Self {
            fingerprint: g.fingerprint(),
            phases,
        })
    }

    pub fn zero(g: &Graph) -> Self {
        Self::new(g, vec![0.0; g.edge_count()]).expect("length matches")
    }

    /// Phases drawn independently and uniformly from `[0, 2pi)`.
    pub fn random<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Self {
        let phases = (0..g.edge_count())
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        Self::new(g, phases).expect("length matches")
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Phase of a directed edge.
    #[inline]
    pub fn directed(&self, e: usize) -> f64 {
        let p = self.phases[e >> 1];
        if e & 1 == 0 {
            p
        } else {
            -p
        }
    }

    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.fingerprint == g.fingerprint() {
            Ok(())
        } else {
            Err(Error::DecorationMismatch)
        }
    }
}

/// One real weight in `[-1, 1]` per undirected edge, shared by both directions.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightDecoration {
    fingerprint: u64,
    weights: Vec<f64>,
}

impl WeightDecoration {
    pub fn new(g: &Graph, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != g.edge_count() {
            return Err(Error::DecorationMismatch);
        }
        if let Some(&w) = weights.iter().find(|w| !(w.abs() <= 1.0)) {
            return Err(Error::WeightOutOfRange(w));
        }
        Ok(Self {
            fingerprint: g.fingerprint(),
            weights,
        })
    }

    pub fn ones(g: &Graph) -> Self {
        Self::new(g, vec![1.0; g.edge_count()]).expect("unit weights are valid")
    }

    /// Weights drawn independently and uniformly from `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Self {
        let weights = (0..g.edge_count())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        Self::new(g, weights).expect("weights in range")
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn directed(&self, e: usize) -> f64 {
        self.weights[e >> 1]
    }

    /// Per-vertex sums of the weights of incoming directed edges.
    pub fn vertex_sums(&self, g: &Graph) -> Vec<f64> {
        let mut sums = vec![0.0; g.vertex_count()];
        for e in 0..g.directed_edge_count() {
            sums[g.terminus(e)] += self.directed(e);
        }
        sums
    }

    pub fn check(&self, g: &Graph) -> Result<()> {
        if self.fingerprint == g.fingerprint() {
            Ok(())
        } else {
            Err(Error::DecorationMismatch)
        }
    }
}
