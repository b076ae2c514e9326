//! Exact counting of periodic walks by number of back-scatters.
//!
//! `tr Y(w)^t` is a polynomial in `u = 1 - w` whose coefficient of `u^g` is
//! the number `N(t; g)` of `t`-periodic walks with exactly `g` back-scatters,
//! the closing step included. Three routes to these numbers are provided:
//! depth-first enumeration, powers of a polynomial matrix, and (for `g = 1`)
//! a closed form in terms of non-backtracking traces.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{rational, rational_pow, Poly, Rational};
use crate::graph::{reverse, Graph, RegularGraph};
use crate::par::Execution;

/// Default cap on depth-first enumeration steps.
pub const DEFAULT_ENUMERATION_BUDGET: u128 = 200_000_000;

/// Default cap on `2E` for polynomial-matrix powers.
pub const DEFAULT_POLY_EDGE_LIMIT: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Enumeration,
    Polynomial,
    ClosedForm,
}

/// `N(t; g)` for `1 <= t <= t_max` and `0 <= g <= g_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkCountTable {
    t_max: usize,
    g_max: usize,
    // counts[t][g]; row 0 is unused
    counts: Vec<Vec<BigInt>>,
    provenance: Provenance,
}

impl WalkCountTable {
    fn zeros(t_max: usize, g_max: usize, provenance: Provenance) -> Self {
        Self {
            t_max,
            g_max,
            counts: vec![vec![BigInt::zero(); g_max + 1]; t_max + 1],
            provenance,
        }
    }

    pub fn t_max(&self) -> usize {
        self.t_max
    }

    pub fn g_max(&self) -> usize {
        self.g_max
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `N(t; g)`, zero outside the stored range.
    pub fn get(&self, t: usize, g: usize) -> BigInt {
        if t == 0 || t > self.t_max || g > self.g_max {
            return BigInt::zero();
        }
        self.counts[t][g].clone()
    }

    /// All `t`-periodic walks, `sum_g N(t; g)`.
    pub fn total(&self, t: usize) -> BigInt {
        (0..=self.g_max).map(|g| self.get(t, g)).sum()
    }

    /// Same table restricted to `g <= g_max`.
    pub fn truncate_g(&self, g_max: usize) -> Self {
        let g_max = g_max.min(self.g_max);
        Self {
            t_max: self.t_max,
            g_max,
            counts: self.counts.iter().map(|r| r[..=g_max].to_vec()).collect(),
            provenance: self.provenance,
        }
    }

    /// Nested map `t -> g -> count` for serialization; zero counts omitted.
    pub fn to_map(&self) -> BTreeMap<usize, BTreeMap<usize, String>> {
        (1..=self.t_max)
            .map(|t| {
                let row = (0..=self.g_max)
                    .filter(|&g| !self.counts[t][g].is_zero())
                    .map(|g| (g, self.counts[t][g].to_string()))
                    .collect();
                (t, row)
            })
            .collect()
    }

    /// Whether two tables agree on the common `(t, g)` range.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let (t_max, g_max) = (self.t_max.min(other.t_max), self.g_max.min(other.g_max));
        (1..=t_max).all(|t| (0..=g_max).all(|g| self.get(t, g) == other.get(t, g)))
    }
}

/// Number of enumeration steps needed for walks up to length `t_max`: one per
/// directed-edge sequence visited.
pub fn enumeration_cost(g: &Graph, t_max: usize) -> u128 {
    let max_out = g.degrees().iter().copied().max().unwrap_or(0) as u128;
    let starts = g.directed_edge_count() as u128;
    let mut level = starts;
    let mut total = 0u128;
    for _ in 0..t_max {
        total = total.saturating_add(level);
        level = level.saturating_mul(max_out);
    }
    total
}

/// Brute-force depth-first enumeration of closed directed-edge sequences.
pub fn enumerate_walks(
    g: &Graph,
    t_max: usize,
    budget: u128,
    exec: Execution,
) -> Result<WalkCountTable> {
    let steps = enumeration_cost(g, t_max);
    if steps > budget {
        return Err(Error::BudgetExceeded { steps, budget });
    }
    let per_start = exec.map(g.directed_edge_count(), |start| {
        let mut acc = vec![vec![0u64; t_max + 1]; t_max + 1];
        let mut path = Vec::with_capacity(t_max);
        path.push(start);
        extend_walk(g, t_max, &mut path, 0, &mut acc);
        acc
    });
    let mut table = WalkCountTable::zeros(t_max, t_max, Provenance::Enumeration);
    for acc in per_start {
        for (t, row) in acc.iter().enumerate() {
            for (gi, &n) in row.iter().enumerate() {
                if n > 0 {
                    table.counts[t][gi] += n;
                }
            }
        }
    }
    Ok(table)
}

fn extend_walk(
    g: &Graph,
    t_max: usize,
    path: &mut Vec<usize>,
    scatters: usize,
    acc: &mut [Vec<u64>],
) {
    let first = path[0];
    let last = *path.last().expect("path is never empty");
    let len = path.len();
    if g.terminus(last) == g.origin(first) {
        let closing = usize::from(first == reverse(last));
        acc[len][scatters + closing] += 1;
    }
    if len == t_max {
        return;
    }
    for &next in g.successors(last) {
        path.push(next);
        extend_walk(g, t_max, path, scatters + usize::from(next == reverse(last)), acc);
        path.pop();
    }
}

/// Square matrix over directed edges whose entries are integer polynomials in
/// `u = 1 - w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePolynomialMatrix {
    size: usize,
    entries: Vec<Poly<BigInt>>,
}

impl EdgePolynomialMatrix {
    /// `Y(w) = (B - J) + uJ`: transmissions get 1, back-scatters get `u`.
    pub fn hashimoto(g: &Graph) -> Self {
        let n = g.directed_edge_count();
        let mut m = Self {
            size: n,
            entries: vec![Poly::zero(); n * n],
        };
        let u = Poly::new(vec![BigInt::zero(), BigInt::one()]);
        for e in 0..n {
            for &f in g.successors(e) {
                let entry = if f == reverse(e) {
                    &m.entries[e * n + f] + &u
                } else {
                    &m.entries[e * n + f] + &Poly::constant(BigInt::one())
                };
                m.entries[e * n + f] = entry;
            }
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &Poly<BigInt> {
        &self.entries[row * self.size + col]
    }

    pub fn trace(&self) -> Poly<BigInt> {
        (0..self.size).fold(Poly::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// Product, skipping zero entries of the right factor row by row.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.size;
        let rhs_rows: Vec<Vec<usize>> = (0..n)
            .map(|k| (0..n).filter(|&j| !rhs.get(k, j).is_zero()).collect())
            .collect();
        let mut entries = vec![Poly::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &j in &rhs_rows[k] {
                    entries[i * n + j] = &entries[i * n + j] + &(a * rhs.get(k, j));
                }
            }
        }
        Self { size: n, entries }
    }
}

/// `tr Y(w)^t` as exact polynomials in `u = 1 - w`, `t = 1..=t_max`
/// (index 0 holds `tr I = 2E`).
pub fn try_polynomials(g: &Graph, t_max: usize, edge_limit: usize) -> Result<Vec<Poly<BigInt>>> {
    let n = g.directed_edge_count();
    if n > edge_limit {
        return Err(Error::BudgetExceeded {
            steps: n as u128,
            budget: edge_limit as u128,
        });
    }
    let y = EdgePolynomialMatrix::hashimoto(g);
    let mut out = vec![Poly::constant(BigInt::from(n))];
    let mut power = y.clone();
    for t in 1..=t_max {
        out.push(power.trace());
        if t < t_max {
            power = power.mul(&y);
        }
    }
    Ok(out)
}

/// Walk-count table read off the polynomial traces.
pub fn table_from_polynomials(polys: &[Poly<BigInt>], g_max: usize) -> WalkCountTable {
    let t_max = polys.len().saturating_sub(1);
    let mut table = WalkCountTable::zeros(t_max, g_max, Provenance::Polynomial);
    for t in 1..=t_max {
        for gi in 0..=g_max {
            table.counts[t][gi] = polys[t].coeff(gi);
        }
    }
    table
}

/// `tr Y(1)^t` for `t = 0..=t_max` by propagating integer walk counts along
/// the non-backtracking successor lists.
pub fn nonbacktracking_traces(g: &Graph, t_max: usize) -> Vec<u128> {
    let n = g.directed_edge_count();
    let mut traces = vec![0u128; t_max + 1];
    traces[0] = n as u128;
    let mut current = vec![0u128; n];
    let mut next = vec![0u128; n];
    for start in 0..n {
        current.iter_mut().for_each(|x| *x = 0);
        current[start] = 1;
        for t in 1..=t_max {
            next.iter_mut().for_each(|x| *x = 0);
            for e in 0..n {
                let c = current[e];
                if c == 0 {
                    continue;
                }
                for &f in g.successors(e) {
                    if f != reverse(e) {
                        next[f] += c;
                    }
                }
            }
            std::mem::swap(&mut current, &mut next);
            traces[t] += current[start];
        }
    }
    traces
}

/// `tr A^t` for `t = 0..=t_max` in exact integer arithmetic.
pub fn adjacency_traces(g: &Graph, t_max: usize) -> Vec<BigInt> {
    let n = g.vertex_count();
    let a = crate::operators::adjacency::<i64>(g);
    let a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(a[(i, j)])).collect())
        .collect();
    let mut power: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    let mut out = Vec::with_capacity(t_max + 1);
    for t in 0..=t_max {
        out.push((0..n).map(|i| power[i][i].clone()).sum());
        if t < t_max {
            power = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).map(|k| &power[i][k] * &a[k][j]).sum())
                        .collect()
                })
                .collect();
        }
    }
    out
}

/// Non-backtracking traces `tr Y^t(1)` and slopes `(tr Y^t)'(1)` of one graph,
/// indexed by `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSeries {
    pub degree: usize,
    pub vertex_count: usize,
    pub values: Vec<BigInt>,
    pub slopes: Vec<BigInt>,
}

impl TraceSeries {
    /// Derivatives in `w` are minus derivatives in `u`.
    pub fn from_polynomials(g: &RegularGraph, polys: &[Poly<BigInt>]) -> Self {
        Self {
            degree: g.degree(),
            vertex_count: g.vertex_count(),
            values: polys.iter().map(|p| p.coeff(0)).collect(),
            slopes: polys.iter().map(|p| -p.coeff(1)).collect(),
        }
    }

    pub fn new(g: &RegularGraph, t_max: usize) -> Result<Self> {
        let polys = try_polynomials(g, t_max, DEFAULT_POLY_EDGE_LIMIT)?;
        Ok(Self::from_polynomials(g, &polys))
    }

    pub fn t_max(&self) -> usize {
        self.values.len() - 1
    }

    /// `tr Y^t(1)`, with negative `t` read as zero.
    fn value(&self, t: i64) -> Rational {
        if t < 0 {
            return Rational::zero();
        }
        Rational::from(self.values[t as usize].clone())
    }

    fn slope(&self, t: i64) -> Rational {
        if t < 0 {
            return Rational::zero();
        }
        Rational::from(self.slopes[t as usize].clone())
    }

    fn int(&self, x: i64) -> Rational {
        rational(x, 1)
    }

    fn d(&self) -> Rational {
        self.int(self.degree as i64)
    }

    fn dm1(&self) -> Rational {
        self.int(self.degree as i64 - 1)
    }
}

/// `N(l; 1)` from the closed form in terms of `tr Y^m(1)`, `m < l`:
/// a non-backtracking cycle of length `m` (same parity as `l`) with a tail
/// walked out and back.
pub fn n_t1_closed_form(nb_traces: &[BigInt], degree: usize, l: usize) -> BigInt {
    let d = degree as i64;
    let base = BigInt::from(d - 1);
    let pow = |e: usize| -> BigInt { num_traits::pow(base.clone(), e) };
    let terms: BigInt = if l % 2 == 0 {
        (1..(l / 2).max(1))
            .map(|k| &nb_traces[2 * k] * pow((l - 2 * k - 2) / 2))
            .sum()
    } else {
        (1..(l / 2).max(1))
            .map(|k| &nb_traces[2 * k + 1] * pow((l - 2 * k - 3) / 2))
            .sum()
    };
    BigInt::from(l as i64 * (d - 2)) * terms
}

/// Closed-form `N(t; 1)` table entries for `t = 1..=t_max` (only `g = 1`
/// populated).
pub fn closed_form_table(g: &RegularGraph, t_max: usize) -> WalkCountTable {
    let nb: Vec<BigInt> = nonbacktracking_traces(g, t_max)
        .into_iter()
        .map(BigInt::from)
        .collect();
    let mut table = WalkCountTable::zeros(t_max, 1, Provenance::ClosedForm);
    for t in 1..=t_max {
        table.counts[t][0] = nb[t].clone();
        table.counts[t][1] = n_t1_closed_form(&nb, g.degree(), t);
    }
    table
}

/// Exact evaluation of one coefficient of the `w`-derivative of the
/// oscillatory density.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientReport {
    pub l: usize,
    /// `V (d-1)^((l+2)/2) a_l` from the finite-size `y_t` definitions.
    pub raw_scaled: Rational,
    /// `2 (d-1)^(l/2) a_l` with the trivial-eigenvalue terms dropped.
    pub leading_scaled: Rational,
    /// `a_l` in floating point, finite-size definitions.
    pub raw: f64,
}

impl CoefficientReport {
    pub fn vanishes(&self) -> bool {
        self.raw_scaled.is_zero() && self.leading_scaled.is_zero()
    }
}

/// Coefficient `a_l` (`l >= 2`) from exact traces up to `l + 2`.
pub fn derivative_coefficient(series: &TraceSeries, l: usize) -> Result<CoefficientReport> {
    if l < 2 || l + 2 > series.t_max() {
        return Err(Error::InvalidParameter(format!(
            "coefficient index {l} needs traces up to {} (have {})",
            l + 2,
            series.t_max()
        )));
    }
    let d = series.d();
    let dm1 = series.dm1();
    let two = series.int(2);
    let four = series.int(4);
    let li = l as i64;

    // y_t(1) and y'_t(1) times V (d-1)^(t/2)
    let y = |t: i64| series.value(t) - rational_pow(&dm1, t);
    let yp = |t: i64| {
        let drift = series.int(t) * rational_pow(&dm1, t - 1);
        let stretch = y(t) * series.int(t) * (&d - &two) / (&two * &dm1);
        series.slope(t) + drift - stretch
    };
    let sq = &dm1 * &dm1;
    let raw_scaled = (&d - &two)
        * (series.int(li - 2) / &four * y(li - 2) * &sq
            - series.int(li + 2) / &four * y(li + 2)
            - y(li) * &dm1)
        + &dm1 * (yp(li) * &dm1 - yp(li - 2) * &sq / &two - yp(li + 2) / &two);

    let leading_scaled = (&d - &two) * series.int(li - 2) * series.value(li - 2) * &dm1
        - (&d - &two) * series.int(li + 2) * series.value(li)
        - series.slope(li - 2) * &sq
        + &two * series.slope(li) * &dm1
        - series.slope(li + 2);

    let v = series.vertex_count as f64;
    let scale = v * (series.degree as f64 - 1.0).powf((l as f64 + 2.0) / 2.0);
    let raw = crate::exact::rational_to_f64(&raw_scaled) / scale;
    Ok(CoefficientReport {
        l,
        raw_scaled,
        leading_scaled,
        raw,
    })
}

/// Both sides of the `p_{l+2} - p_l` recursion, multiplied by `sqrt(d-1)`
/// when `l` is odd so every term is rational. The second element of the
/// returned triple is the sum over `q`, the third the expanded form.
pub fn pq_recursion(series: &TraceSeries, l: usize) -> Result<(Rational, Rational, Rational)> {
    if l + 2 > series.t_max() || l == 0 {
        return Err(Error::InvalidParameter(format!(
            "recursion at l = {l} needs traces up to {}",
            l + 2
        )));
    }
    let dm1 = series.dm1();
    let d2 = series.d() - series.int(2);
    let odd = i64::from(l % 2 == 1);
    // x / (d-1)^(twice/2), times sqrt(d-1) for odd l
    let over = |x: Rational, twice: i64| x / rational_pow(&dm1, (twice - odd) / 2);
    let p = |m: i64| over(series.slope(m), m - 2);
    let q = |m: i64| {
        over(&d2 * series.int(m - 2) * series.value(m - 2), m - 2)
            - over(&d2 * series.int(m + 2) * series.value(m), m)
    };
    let li = l as i64;
    let lhs = p(li + 2) - p(li);
    let (q_sum, expanded) = if l % 2 == 0 {
        let q_sum = (1..=li / 2).map(|k| q(2 * k)).sum();
        let inner: Rational = (1..=li / 2).map(|k| over(series.value(2 * k), 2 * k)).sum();
        let tail = series.int(li) / series.int(2) * over(series.value(li), li);
        (q_sum, series.int(-2) * &d2 * (inner + tail))
    } else {
        let q_sum = (0..=li / 2).map(|k| q(2 * k + 1)).sum();
        let inner: Rational = (1..=li / 2)
            .map(|k| over(series.value(2 * k + 1), 2 * k + 1))
            .sum();
        let tail = series.int(li) / series.int(2) * over(series.value(li), li);
        (q_sum, series.int(-2) * &d2 * (inner + tail))
    };
    Ok((lhs, q_sum, expanded))
}

/// Floating view of a big integer, for cross-checks against matrix powers.
pub fn to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
