//! Acceptance suite: one line per criterion, `PASS` or `FAIL` followed by
//! the measured quantities. Runs without the libtest harness so the lines
//! are always shown.
//!
//! The process exits non-zero if a criterion fails for a reason other than
//! the documented finite-size effect in criterion 6, whose line still reads
//! `FAIL`.

use std::f64::consts::PI;
use std::time::Instant;

use nbtrace::bartholdi::{check_identity, check_identity_exact, Decoration, Variant};
use nbtrace::ensemble::{self, magnetic_top, sample_multigraph, trace_y, DecorationKind, EnsembleSpec};
use nbtrace::exact::{rational, Rational};
use nbtrace::graph::families::{complete, petersen};
use nbtrace::spectral::{
    adjacency_spectrum, cluster_distance, edge_spectrum, edge_spectrum_from_vertex, kesten_mckay, kesten_mckay_cdf,
    multiset_distance, ramanujan_bound, uniform_grid, Histogram,
};
use nbtrace::trace_formula::{rho_corr, rho_corr_w1, rho_smooth, verify_ywt_identity};
use nbtrace::unitary::{
    build_u, secular_identity, smooth_density_phase, solve_phi_km, tr_u_closed_form, tr_u_closed_form_quarter,
    trace_powers, unitarity_deviation,
};
use nbtrace::walks::{
    closed_form_table, enumerate_walks, table_from_polynomials, try_polynomials, DEFAULT_ENUMERATION_BUDGET,
    DEFAULT_POLY_EDGE_LIMIT,
};
use nbtrace::{Execution, MagneticDecoration, RegularGraph, WeightDecoration};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Outcome of one criterion.
struct Outcome {
    pass: bool,
    /// A failure that is analysed and expected; does not fail the run.
    expected_failure: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Self {
            pass,
            expected_failure: false,
            detail,
        }
    }
}

fn random_simple(rng: &mut ChaCha8Rng, max_v: usize, degrees: &[usize]) -> RegularGraph {
    let d = degrees[rng.random_range(0..degrees.len())];
    let v = loop {
        let v = rng.random_range(d + 1..=max_v);
        if v * d % 2 == 0 {
            break v;
        }
    };
    let mut spec = EnsembleSpec::new(v, d, 1, rng.random()).expect("valid spec");
    spec.reject_bipartite = false;
    spec.reject_disconnected = false;
    ensemble::sample_regular(&spec).expect("sampler")
}

fn random_rational(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    rational(rng.random_range(-range..=range), rng.random_range(1..=7))
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = [0.0f64; 3];
    let (mut exact_graphs, mut exact_ok) = (0, true);
    for _ in 0..100 {
        let g = random_simple(&mut rng, 20, &[3, 4, 5]);
        let points: Vec<(Complex64, Complex64)> = (0..20)
            .map(|_| {
                let s = Complex64::new(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6));
                let w = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
                (s, w)
            })
            .collect();
        let mag = MagneticDecoration::random(&g, &mut rng);
        let wts = WeightDecoration::random(&g, &mut rng);
        let runs = [
            (Variant::Regular, Decoration::Plain),
            (Variant::Magnetic, Decoration::Magnetic(&mag)),
            (Variant::Weighted, Decoration::Weighted(&wts)),
        ];
        for (slot, (variant, deco)) in runs.into_iter().enumerate() {
            let report = check_identity(&g, variant, deco, &points).expect("identity check");
            worst[slot] = worst[slot].max(report.max_abs_residual);
        }
        if g.directed_edge_count() <= 60 {
            exact_graphs += 1;
            let exact_points = |rng: &mut ChaCha8Rng| -> Vec<(Rational, Rational)> {
                (0..20)
                    .map(|_| loop {
                        let (s, w) = (random_rational(rng, 4), random_rational(rng, 9));
                        if &w * &w * &s * &s != rational(1, 1) {
                            break (s, w);
                        }
                    })
                    .collect()
            };
            let regular = check_identity_exact(&g, Variant::Regular, &exact_points(&mut rng)).expect("exact");
            let multi = sample_multigraph(g.vertex_count(), g.degree(), &mut rng).expect("multigraph");
            let multi = check_identity_exact(&multi, Variant::Multigraph, &exact_points(&mut rng)).expect("exact");
            exact_ok &= regular.exact_match == Some(true) && multi.exact_match == Some(true);
        }
    }
    Outcome::new(
        worst.iter().all(|&r| r < 1e-9) && exact_ok,
        format!(
            "max relative residual regular {:.1e}, magnetic {:.1e}, weighted {:.1e} (tol 1e-9); exact equality on {exact_graphs} graphs (regular + multigraph): {exact_ok}",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn test_graphs() -> Vec<RegularGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut graphs = vec![complete(4), petersen()];
    while graphs.len() < 22 {
        let d = [3, 4][graphs.len() % 2];
        let mut v;
        loop {
            v = rng.random_range(8..=16);
            if v * d % 2 == 0 {
                break;
            }
        }
        let spec = EnsembleSpec::new(v, d, 1, rng.random()).expect("valid spec");
        graphs.push(ensemble::sample_regular(&spec).expect("sampler"));
    }
    graphs
}

fn criterion_2(graphs: &[RegularGraph]) -> Outcome {
    let (mut worst, mut pointwise, mut counts_ok) = (0.0f64, 0.0f64, true);
    for g in graphs {
        let spec = adjacency_spectrum(g);
        for w in [0.5, 1.0, 1.3] {
            let direct = edge_spectrum(g, w).expect("edge spectrum");
            let predicted = edge_spectrum_from_vertex(&spec, w, g.edge_count(), g.vertex_count()).expect("mapping");
            pointwise = pointwise.max(multiset_distance(&direct, &predicted));
            match cluster_distance(&direct, &predicted, 1e-6) {
                Some(gap) => worst = worst.max(gap),
                None => counts_ok = false,
            }
        }
    }
    Outcome::new(
        counts_ok && worst < 1e-8,
        format!(
            "{} graphs x 3 values of w: multiplicities match {counts_ok}, max cluster-mean mismatch {worst:.1e} (tol 1e-8); pointwise {pointwise:.1e} (Jordan blocks where mu = 2 sqrt(w(d-w)))",
            graphs.len()
        ),
    )
}

fn criterion_3(graphs: &[RegularGraph]) -> Outcome {
    let mut worst = 0.0f64;
    for g in graphs {
        for w in [0.5, 1.0, 1.3] {
            worst = worst.max(verify_ywt_identity(g, w, 20).expect("identity").max_residual);
        }
    }
    Outcome::new(worst < 1e-8, format!("t <= 20: max residual {worst:.1e} (tol 1e-8)"))
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, g) in [("K4", complete(4)), ("Petersen", petersen())] {
        let polys = try_polynomials(&g, 10, DEFAULT_POLY_EDGE_LIMIT).expect("polynomials");
        let from_poly = table_from_polynomials(&polys, 10);
        let enumerated = enumerate_walks(&g, 10, DEFAULT_ENUMERATION_BUDGET, Execution::Parallel).expect("enumeration");
        let closed = closed_form_table(&g, 10);
        let small = from_poly.truncate_g(8);
        let agree_8 = (1..=8).all(|t| (0..=8).all(|k| small.get(t, k) == enumerated.get(t, k)));
        let agree_1 = (1..=10).all(|l| closed.get(l, 1) == from_poly.get(l, 1) && closed.get(l, 1) == enumerated.get(l, 1));
        ok &= agree_8 && agree_1;
        notes.push(format!("{name}: table t,g <= 8 {agree_8}, N(l;1) l <= 10 {agree_1}"));
        if name == "K4" {
            let n51 = closed.get(5, 1);
            ok &= n51 == 120.into();
            notes.push(format!("N(5;1) = {n51}"));
        }
    }
    Outcome::new(ok, notes.join("; "))
}

fn km_l1(vertex_count: usize, samples: usize) -> f64 {
    let spec = EnsembleSpec::new(vertex_count, 3, samples, 5).expect("valid spec");
    let spectra = ensemble::ensemble_map(&spec, Execution::Parallel, |s| {
        Ok(adjacency_spectrum(&s.graph).nontrivial().to_vec())
    })
    .expect("ensemble");
    let pooled: Vec<f64> = spectra.into_iter().flatten().collect();
    let hist = Histogram::new(&pooled, -3.0, 3.0, 0.1).expect("histogram");
    hist.l1_distance(|mu| kesten_mckay_cdf(mu, 3))
}

fn criterion_5() -> Outcome {
    let l1_500 = km_l1(500, 200);
    let l1_1000 = km_l1(1000, 200);
    Outcome::new(
        l1_500 < 0.03 && l1_1000 < l1_500,
        format!("L1 at V=500: {l1_500:.4} (tol 0.03); at V=1000: {l1_1000:.4} (must decrease)"),
    )
}

fn criterion_6() -> Outcome {
    let spec = EnsembleSpec::new(200, 3, 500, 6).expect("valid spec");
    let ts = [3, 4, 5, 6];
    let avg = ensemble::ensemble_average(&spec, Execution::Parallel, trace_y(&ts)).expect("ensemble");
    let targets = [8.0, 16.0, 32.0, 64.0];
    let within = avg.within(&targets, 3.0);
    // cycles of every length m dividing t contribute (d-1)^m
    let with_divisors: Vec<f64> = ts
        .iter()
        .map(|&t| (3..=t).filter(|m| t % m == 0).map(|m| 2f64.powi(m as i32)).sum())
        .collect();
    let within_divisors = avg.within(&with_divisors, 3.0);
    let parts: Vec<String> = ts
        .iter()
        .enumerate()
        .map(|(i, t)| {
            format!(
                "t={t}: {:.2} +- {:.2} vs {} ({:.1} SE)",
                avg.mean[i],
                avg.stderr[i],
                targets[i],
                (avg.mean[i] - targets[i]).abs() / avg.stderr[i]
            )
        })
        .collect();
    let pass = within.iter().all(|&b| b);
    // The t=6 mean also counts doubly traversed triangles; if that accounts
    // for the whole gap, the failure is the known one.
    let known = !pass && within[..3].iter().all(|&b| b) && !within[3] && within_divisors.iter().all(|&b| b);
    Outcome {
        pass,
        expected_failure: known,
        detail: format!(
            "{}{}",
            parts.join("; "),
            if known {
                format!("; t=6 matches 64 + 8 = {} within 3 SE (repeated triangles)", with_divisors[3])
            } else {
                String::new()
            }
        ),
    }
}

fn criterion_7() -> Outcome {
    let spec = EnsembleSpec::new(500, 3, 100, 7)
        .expect("valid spec")
        .with_decoration(DecorationKind::Magnetic);
    let avg = ensemble::ensemble_average(&spec, Execution::Parallel, magnetic_top).expect("ensemble");
    let target = ramanujan_bound(3);
    let rel = (avg.mean[0] - target).abs() / target;
    Outcome::new(
        rel < 0.05,
        format!("<|mu0|> = {:.4} +- {:.4}, 2 sqrt(2) = {target:.4}, relative gap {rel:.4} (tol 0.05)", avg.mean[0], avg.stderr[0]),
    )
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pool = vec![complete(4), petersen()];
    for _ in 0..6 {
        pool.push(random_simple(&mut rng, 16, &[3, 4]));
    }
    let (mut unit, mut secular) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let g = &pool[rng.random_range(0..pool.len())];
        let d = g.degree() as f64;
        let mu = rng.random_range(-d..d);
        let phi = loop {
            let p: f64 = rng.random_range(-PI..PI);
            if (p / PI - (p / PI).round()).abs() > 1e-6 {
                break p;
            }
        };
        unit = unit.max(unitarity_deviation(&build_u(g, mu, phi).expect("valid point")));
        secular = secular.max(secular_identity(g, mu, phi).expect("valid point").relative_residual);
    }
    let k4 = complete(4);
    let table = enumerate_walks(&k4, 6, DEFAULT_ENUMERATION_BUDGET, Execution::Sequential).expect("walks");
    let (mut const_phi, mut quarter) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let mu = rng.random_range(-3.0..3.0);
        let phi = rng.random_range(0.05..PI - 0.05) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let direct = trace_powers(&build_u(&k4, mu, phi).expect("valid"), 6);
        let direct_q = trace_powers(&build_u(&k4, mu, -PI / 2.0).expect("valid"), 6);
        for t in 1..=6 {
            let scale = direct[t].norm().max(1.0);
            const_phi = const_phi.max((tr_u_closed_form(3, mu, phi, t, &table) - direct[t]).norm() / scale);
            let scale = direct_q[t].norm().max(1.0);
            quarter = quarter.max((tr_u_closed_form_quarter(3, mu, t, &table) - direct_q[t]).norm() / scale);
        }
    }
    Outcome::new(
        unit < 1e-12 && secular < 1e-9 && const_phi < 1e-8 && quarter < 1e-8,
        format!(
            "500 points: max |U*U - I| {unit:.1e} (tol 1e-12), secular residual {secular:.1e} (tol 1e-9); K4 t <= 6 closed forms: constant phase {const_phi:.1e}, phi=-pi/2 {quarter:.1e} (tol 1e-8)"
        ),
    )
}

fn criterion_9() -> Outcome {
    let d = 4;
    let bound = ramanujan_bound(d);
    let grid = uniform_grid(-0.999 * bound, 0.999 * bound, 2001);
    let pf = solve_phi_km(d, -100, 100, &grid).expect("phase function");
    let ode = pf.ode_residuals(0.9);
    let ode_max = ode.iter().filter(|x| !x.is_nan()).fold(0.0f64, |a, &b| a.max(b));
    let slopes = pf.slopes();
    let smooth_gap = grid
        .iter()
        .enumerate()
        .filter(|(_, mu)| mu.abs() <= 0.9 * bound)
        .map(|(i, &mu)| (smooth_density_phase(mu, d, -pf.phi[i], -slopes[i]) - kesten_mckay(mu, d)).abs())
        .fold(0.0f64, f64::max);
    let (lo, hi) = pf.range();
    let shape = pf.monotone() && lo >= -PI - 1e-9 && hi <= 1e-9;
    Outcome::new(
        pf.max_residual < 1e-8 && ode_max < 1e-4 && smooth_gap < 1e-3 && shape,
        format!(
            "d=4, 2k/V=-2: counting residual {:.1e} (tol 1e-8), ODE residual {ode_max:.1e} (tol 1e-4), smooth vs KM {smooth_gap:.1e} (tol 1e-3); range [{lo:.3}, {hi:.3}], monotone {}",
            pf.max_residual,
            pf.monotone()
        ),
    )
}

fn criterion_10() -> Outcome {
    let (mut smooth, mut corr) = (0.0f64, 0.0f64);
    for d in [3, 4, 5] {
        let r = ramanujan_bound(d);
        for i in 1..=1000 {
            let mu = -r + 2.0 * r * i as f64 / 1001.0;
            let km = kesten_mckay(mu, d);
            smooth = smooth.max((rho_smooth(mu, d, 1.0).expect("inside") - km).abs() / km.max(1.0));
            let c = rho_corr_w1(mu, d).expect("inside");
            corr = corr.max((rho_corr(mu, d, 1.0).expect("inside") - c).abs() / c.abs().max(1.0));
        }
    }
    Outcome::new(
        smooth < 1e-12 && corr < 1e-12,
        format!("d in 3..=5, 1000 points: smooth vs KM {smooth:.1e}, corr vs printed w=1 form {corr:.1e} (tol 1e-12)"),
    )
}

fn main() {
    let graphs = test_graphs();
    let criteria: Vec<(usize, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(|| criterion_2(&graphs))),
        (3, Box::new(|| criterion_3(&graphs))),
        (4, Box::new(criterion_4)),
        (5, Box::new(criterion_5)),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut unexpected = 0;
    for (n, run) in &criteria {
        if !only.is_empty() && !only.contains(n) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let status = match (outcome.pass, outcome.expected_failure) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!(
            "criterion {n:>2}: {status}  {}  [{:.1}s]",
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        if !outcome.pass && !outcome.expected_failure {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria failed");
        std::process::exit(1);
    }
}
