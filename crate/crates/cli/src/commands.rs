use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use nbtrace::bartholdi::{self, Decoration, IdentityReport, Variant};
use nbtrace::ensemble::{self, DecorationKind, EnsembleSpec};
use nbtrace::exact::rational;
use nbtrace::graph::io;
use nbtrace::spectral::{self, kesten_mckay, kesten_mckay_cdf, ramanujan_bound};
use nbtrace::unitary::{self, PhaseFunction, PhaseSpec};
use nbtrace::walks::{self, WalkCountTable, DEFAULT_ENUMERATION_BUDGET, DEFAULT_POLY_EDGE_LIMIT};
use nbtrace::{operators, trace_formula, Execution, GraphMode, MagneticDecoration, RegularGraph, WeightDecoration};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::cli::*;
use crate::error::{usage, CliError};
use crate::output::{Cell, Output, Table};

type Res = Result<(), CliError>;

pub const EXEC: Execution = Execution::Parallel;
const MU: &str = "mu [eigenvalue]";

/// `n` midpoints of equal cells covering `(lo, hi)`; never touches the ends.
pub fn open_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / n as f64;
    (0..n).map(|i| lo + (i as f64 + 0.5) * h).collect()
}

fn positive(name: &str, n: usize) -> Result<usize, CliError> {
    if n == 0 {
        Err(usage(format!("--{name} must be positive")))
    } else {
        Ok(n)
    }
}

fn load(path: &Path) -> Result<RegularGraph, CliError> {
    io::load(path).map_err(|source| CliError::Graph {
        path: path.display().to_string(),
        source,
    })
}

/// Parses `start:stop:step` into an inclusive grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<f64> = s
        .split(':')
        .map(str::parse)
        .collect::<Result<_, _>>()
        .map_err(|_| usage(format!("bad grid {s:?}, expected start:stop:step")))?;
    let [start, stop, step] = parts[..] else {
        return Err(usage(format!("bad grid {s:?}, expected start:stop:step")));
    };
    if !(step > 0.0) || !(stop >= start) {
        return Err(usage(format!("grid {s:?} needs step > 0 and stop >= start")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| start + i as f64 * step).collect())
}

pub fn ensemble(args: &EnsembleArgs, global: &Global, out: &mut Output) -> Res {
    let mut spec = EnsembleSpec::new(args.vertices, args.d, args.samples, global.seed)
        .map_err(|e| usage(e.to_string()))?;
    spec.reject_bipartite = !args.allow_bipartite;
    spec.reject_disconnected = !args.allow_disconnected;
    if args.observable == Observable::Mu0Magnetic {
        spec = spec.with_decoration(DecorationKind::Magnetic);
    }
    if args.observable == Observable::TrY && args.t.iter().any(|&t| t == 0) {
        return Err(usage("--t values must be positive"));
    }
    if !(args.bin > 0.0) {
        return Err(usage("--bin must be positive"));
    }
    let d = args.d as f64;
    let name = out.file_name(args.out.as_deref(), "ensemble");
    match args.observable {
        Observable::TrY => {
            let avg = ensemble::ensemble_average(&spec, EXEC, ensemble::trace_y(&args.t))?;
            let mut table = Table::new(["t [steps]", "mean_trY [count]", "stderr [count]", "poisson_mean [count]"]);
            for (i, &t) in args.t.iter().enumerate() {
                table.push(vec![t.into(), avg.mean[i].into(), avg.stderr[i].into(), (d - 1.0).powi(t as i32).into()]);
            }
            out.table(&name, &table)?;
        }
        Observable::Spectrum => {
            let (lo, hi) = (-d, d);
            let avg = ensemble::ensemble_average(&spec, EXEC, ensemble::spectrum_density(lo, hi, args.bin))?;
            let edges = spectral::Histogram::new(&[], lo, hi, args.bin)?.edges;
            let mut table = Table::new([MU, "density [1/eigenvalue]", "stderr [1/eigenvalue]", "kesten_mckay [1/eigenvalue]"]);
            let mut l1 = 0.0;
            for (i, cell) in edges.windows(2).enumerate() {
                let width = cell[1] - cell[0];
                let km_mass = kesten_mckay_cdf(cell[1], args.d) - kesten_mckay_cdf(cell[0], args.d);
                l1 += (avg.mean[i] * width - km_mass).abs();
                let mid = 0.5 * (cell[0] + cell[1]);
                table.push(vec![mid.into(), avg.mean[i].into(), avg.stderr[i].into(), kesten_mckay(mid, args.d).into()]);
            }
            out.table(&name, &table)?;
            out.note("l1_to_kesten_mckay", l1)?;
        }
        Observable::Mu0Magnetic => {
            let avg = ensemble::ensemble_average(&spec, EXEC, ensemble::magnetic_top)?;
            let mut table = Table::new(["mean_abs_mu0 [eigenvalue]", "stderr [eigenvalue]", "ramanujan_bound [eigenvalue]"]);
            table.push(vec![avg.mean[0].into(), avg.stderr[0].into(), ramanujan_bound(args.d).into()]);
            out.table(&name, &table)?;
        }
    }
    if let Some(dir) = &args.save_graphs {
        for i in 0..spec.sample_count {
            let s = ensemble::sample(&spec, i)?;
            let file = dir.join(format!("graph_{i:05}.txt"));
            out.text(&file.to_string_lossy(), &io::to_text(&s.graph))?;
        }
    }
    Ok(())
}

fn push_entries(table: &mut Table, m: &nalgebra::DMatrix<f64>) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            if m[(i, j)] != 0.0 {
                table.push(vec![i.into(), j.into(), m[(i, j)].into()]);
            }
        }
    }
}

pub fn matrix(args: &MatrixArgs, global: &Global, out: &mut Output) -> Res {
    let format = args.dump.unwrap_or(global.format);
    let uparams = match args.kind {
        MatrixKind::U => Some(
            args.mu
                .zip(args.phi)
                .ok_or_else(|| usage("--kind U needs --mu and --phi"))?,
        ),
        _ => None,
    };
    let g = load(&args.graph)?;
    let stem = format!("matrix_{:?}", args.kind);
    let name = args
        .out
        .clone()
        .unwrap_or_else(|| format!("{stem}.{}", format.extension()));
    let mut table = match args.kind {
        MatrixKind::U => Table::new(["row [index]", "col [index]", "re [1]", "im [1]"]),
        _ => Table::new(["row [index]", "col [index]", "value [1]"]),
    };
    match args.kind {
        MatrixKind::A => push_entries(&mut table, &operators::adjacency::<f64>(&g)),
        MatrixKind::B => push_entries(&mut table, &operators::edge_b::<f64>(&g)),
        MatrixKind::J => push_entries(&mut table, &operators::edge_j::<f64>(&g)),
        MatrixKind::Y => push_entries(&mut table, &operators::edge_y(&g, args.w)),
        MatrixKind::U => {
            let (mu, phi) = uparams.expect("checked above");
            let u = unitary::build_u(&g, mu, phi).map_err(|e| usage(e.to_string()))?;
            for i in 0..u.nrows() {
                for j in 0..u.ncols() {
                    let z = u[(i, j)];
                    if z != Complex64::new(0.0, 0.0) {
                        table.push(vec![i.into(), j.into(), z.re.into(), z.im.into()]);
                    }
                }
            }
        }
    }
    out.table_as(&name, &table, format)?;
    if args.kind != MatrixKind::A {
        // directed edge 2k runs along stored edge k, 2k+1 against it
        let mut edges = Table::new(["edge [index]", "origin [vertex]", "terminus [vertex]"]);
        for e in 0..g.directed_edge_count() {
            edges.push(vec![e.into(), g.origin(e).into(), g.terminus(e).into()]);
        }
        out.table_as(&format!("{stem}_edges.{}", format.extension()), &edges, format)?;
    }
    Ok(())
}

pub fn spectrum(args: &GraphOut, out: &mut Output) -> Res {
    let g = load(&args.graph)?;
    let spec = spectral::adjacency_spectrum(&g);
    let mut table = Table::new(["index [1]", MU]);
    for (i, &mu) in spec.eigenvalues.iter().enumerate() {
        table.push(vec![i.into(), mu.into()]);
    }
    let name = out.file_name(args.out.as_deref(), "spectrum");
    out.table(&name, &table)?;
    out.note("trivial_simple", spec.has_simple_trivial(1e-9))?;
    out.note("beyond_ramanujan", spectral::non_ramanujan(&spec)?)?;
    Ok(())
}

fn check_degree(d: usize) -> Res {
    if d < 3 {
        return Err(usage(format!("degree {d} < 3")));
    }
    Ok(())
}

pub fn km_curve(args: &KmCurveArgs, out: &mut Output) -> Res {
    check_degree(args.d)?;
    positive("grid", args.grid)?;
    let curve = spectral::kesten_mckay_curve(args.d, args.grid);
    let mut table = Table::new([MU, "kesten_mckay [1/eigenvalue]"]);
    for (x, y) in curve.grid.iter().zip(&curve.values) {
        table.push(vec![(*x).into(), (*y).into()]);
    }
    let name = out.file_name(args.out.as_deref(), "km_curve");
    out.table(&name, &table)
}

pub fn coarse(args: &CoarseArgs, out: &mut Output) -> Res {
    positive("grid", args.grid)?;
    if args.tmax == Some(0) || !(args.a > 0.0) {
        return Err(usage("--tmax and --a must be positive"));
    }
    let g = load(&args.graph)?;
    let t_max = args.tmax.unwrap_or_else(|| {
        (spectral::t_max_guidance(g.vertex_count(), args.a, 2.0 / 3.0).floor() as usize).max(1)
    });
    let r = ramanujan_bound(g.degree());
    let grid = open_grid(-r, r, args.grid);
    let (curve, excluded) = spectral::coarse_density(&spectral::adjacency_spectrum(&g), t_max, &grid)?;
    let mut table = Table::new([MU, "coarse_density [1/eigenvalue]"]);
    for (x, y) in curve.grid.iter().zip(&curve.values) {
        table.push(vec![(*x).into(), (*y).into()]);
    }
    let name = out.file_name(args.out.as_deref(), "coarse");
    out.table(&name, &table)?;
    out.note("t_max", t_max)?;
    out.note("excluded_eigenvalues", excluded)
}

pub fn trace_formula(args: &TraceFormulaArgs, out: &mut Output) -> Res {
    positive("grid", args.grid)?;
    positive("tmax", args.tmax)?;
    let g = load(&args.graph)?;
    let d = g.degree() as f64;
    if !(args.w > 0.0 && args.w < d) {
        return Err(usage(format!("--w must lie in (0, {d})")));
    }
    let band = 2.0 * (args.w * (d - args.w)).sqrt();
    let grid = open_grid(-band, band, args.grid);
    let dec = trace_formula::reconstruct_density(&g, args.w, args.tmax, &grid)?;
    let mut table = Table::new([
        MU,
        "smooth [1/eigenvalue]",
        "osc [1/eigenvalue]",
        "corr [1/eigenvalue]",
        "empirical_coarse [1/eigenvalue]",
    ]);
    for i in 0..grid.len() {
        table.push(vec![
            grid[i].into(),
            dec.smooth.values[i].into(),
            dec.osc.values[i].into(),
            dec.corr.values[i].into(),
            dec.coarse.values[i].into(),
        ]);
    }
    let name = out.file_name(args.out.as_deref(), "decomposition");
    out.table(&name, &table)?;
    out.note("rms_total_vs_coarse", trace_formula::rms_distance(&dec.total(), &dec.coarse.values))
}

pub fn walk_counts(args: &WalkCountsArgs, out: &mut Output) -> Res {
    positive("tmax", args.tmax)?;
    let g = load(&args.graph)?;
    let table: WalkCountTable = match args.method {
        WalkMethod::Enum => walks::enumerate_walks(&g, args.tmax, DEFAULT_ENUMERATION_BUDGET, EXEC)?,
        WalkMethod::Poly => {
            let polys = walks::try_polynomials(&g, args.tmax, DEFAULT_POLY_EDGE_LIMIT)?;
            walks::table_from_polynomials(&polys, args.tmax)
        }
        WalkMethod::Closed => walks::closed_form_table(&g, args.tmax),
    };
    let name = out.file_name(args.out.as_deref(), "walk_counts");
    match out.format() {
        Format::Json => out.json(
            &name,
            &json!({ "schema": crate::output::SCHEMA, "method": args.method, "counts": table.to_map() }),
        ),
        Format::Csv => {
            let mut csv = Table::new(["t [steps]", "g [back-scatterings]", "count [walks]"]);
            for (t, row) in table.to_map() {
                for (gi, n) in row {
                    csv.push(vec![t.into(), gi.into(), Cell::Text(n)]);
                }
            }
            out.table(&name, &csv)
        }
    }
}

#[derive(Serialize)]
struct GraphReport {
    file: String,
    #[serde(flatten)]
    report: IdentityReport,
}

fn random_point(rng: &mut ChaCha8Rng) -> (Complex64, Complex64) {
    loop {
        let s = Complex64::new(rng.random_range(-0.6..0.6), rng.random_range(-0.6..0.6));
        let w = Complex64::new(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5));
        if (1.0 - w * w * s * s).norm() > 1e-6 {
            return (s, w);
        }
    }
}

fn applicable(g: &RegularGraph) -> Vec<Variant> {
    match g.mode() {
        GraphMode::Simple => Variant::ALL.to_vec(),
        GraphMode::Multigraph => vec![Variant::Multigraph, Variant::General],
    }
}

pub fn verify_bartholdi(args: &BartholdiArgs, global: &Global, out: &mut Output) -> Res {
    let requested: Option<Variant> = match args.variant.as_str() {
        "all" => None,
        v => Some(v.parse().map_err(|e: nbtrace::Error| usage(e.to_string()))?),
    };
    positive("points", args.points)?;
    let mut files: Vec<_> = fs::read_dir(&args.graphs)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    files.retain(|p| p.is_file());
    files.sort();
    if files.is_empty() {
        return Err(usage(format!("no graph files in {}", args.graphs.display())));
    }
    let mut reports = Vec::new();
    for (index, path) in files.iter().enumerate() {
        let g = load(path)?;
        let mut rng = ChaCha8Rng::seed_from_u64(global.seed);
        rng.set_stream(index as u64);
        let points: Vec<_> = (0..args.points).map(|_| random_point(&mut rng)).collect();
        let magnetic = MagneticDecoration::random(&g, &mut rng);
        let weights = WeightDecoration::random(&g, &mut rng);
        let variants = requested.map_or_else(|| applicable(&g), |v| vec![v]);
        let file = path.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned());
        for variant in variants {
            let deco = match variant {
                Variant::Magnetic => Decoration::Magnetic(&magnetic),
                Variant::Weighted => Decoration::Weighted(&weights),
                _ => Decoration::Plain,
            };
            let report = bartholdi::check_identity(&g, variant, deco, &points)?;
            reports.push(GraphReport { file: file.clone(), report });
            let exact = matches!(variant, Variant::Regular | Variant::General | Variant::Multigraph);
            if exact && g.directed_edge_count() <= 60 {
                let pts: Vec<_> = (0..3)
                    .map(|i| (rational(2 * i + 1, 7), rational(-3 + 4 * i, 5)))
                    .collect();
                let report = bartholdi::check_identity_exact(&g, variant, &pts)?;
                reports.push(GraphReport { file: file.clone(), report });
            }
        }
    }
    let failed = reports
        .iter()
        .filter(|r| r.report.exact_match == Some(false) || !(r.report.max_abs_residual < args.tol))
        .count();
    let worst = reports.iter().map(|r| r.report.max_abs_residual).fold(0.0, f64::max);
    let name = args.report.clone().unwrap_or_else(|| "report.json".into());
    out.json(
        &name,
        &json!({
            "schema": crate::output::SCHEMA,
            "tolerance": args.tol,
            "checks": reports.len(),
            "failed": failed,
            "max_residual": worst,
            "reports": reports,
        }),
    )?;
    out.note("failed", failed)?;
    out.note("max_residual", worst)?;
    if failed > 0 {
        return Err(CliError::Verification { failed, total: reports.len() });
    }
    Ok(())
}

fn km_branch(d: usize, branch: i64, v: usize, grid: &[f64]) -> Result<PhaseFunction, CliError> {
    Ok(unitary::solve_phi_km(d, branch, v, grid)?)
}

pub fn unitary(args: &UnitaryArgs, out: &mut Output) -> Res {
    let grid = parse_grid(&args.mu_grid)?;
    if !(args.eps > 0.0) {
        return Err(usage("--eps must be positive"));
    }
    positive("tmax", args.tmax)?;
    let g = load(&args.graph)?;
    let d = g.degree() as f64;
    if grid.iter().any(|mu| mu.abs() >= d) {
        return Err(usage(format!("--mu-grid must lie inside (-{d}, {d})")));
    }
    let solved;
    let phase = match (args.phi, args.km_branch) {
        (Some(phi), None) => {
            if (phi / PI - (phi / PI).round()).abs() < 1e-12 {
                return Err(usage(format!("--phi {phi} is a multiple of pi")));
            }
            PhaseSpec::Constant(phi)
        }
        (None, Some(k)) => {
            let r = ramanujan_bound(g.degree());
            if grid.iter().any(|mu| mu.abs() >= r) {
                return Err(usage(format!("--km-branch needs --mu-grid inside (-{r}, {r})")));
            }
            solved = km_branch(g.degree(), k, g.vertex_count(), &grid)?;
            PhaseSpec::KestenMcKay(&solved)
        }
        _ => return Err(usage("give exactly one of --phi and --km-branch")),
    };
    let dens = unitary::density_from_secular(&g, &grid, &phase, args.eps, args.tmax)?;
    let total = dens.total();
    let mut table = Table::new([MU, "smooth [1/eigenvalue]", "fluctuating [1/eigenvalue]", "total [1/eigenvalue]"]);
    for i in 0..grid.len() {
        table.push(vec![
            grid[i].into(),
            dens.smooth.values[i].into(),
            dens.fluctuating.values[i].into(),
            total[i].into(),
        ]);
    }
    let name = out.file_name(args.out.as_deref(), "density");
    out.table(&name, &table)?;
    out.note("phase", phase.label())
}

/// Integer branch from either `k` or `2k/V`.
pub fn branch_index(branch: Option<i64>, ratio: Option<f64>, v: usize) -> Result<i64, CliError> {
    match (branch, ratio) {
        (Some(k), None) => Ok(k),
        (None, Some(r)) => {
            let k = r * v as f64 / 2.0;
            if (k - k.round()).abs() > 1e-9 {
                return Err(usage(format!("--ratio {r} with --V {v} gives non-integer branch {k}")));
            }
            Ok(k.round() as i64)
        }
        _ => Err(usage("give exactly one of --branch and --ratio")),
    }
}

pub fn phase_table(d: usize, k: i64, v: usize, points: usize, out: &mut Output, name: &str) -> Res {
    check_degree(d)?;
    positive("V", v)?;
    positive("grid", points)?;
    let r = ramanujan_bound(d);
    let grid = open_grid(-r, r, points);
    let f = km_branch(d, k, v, &grid)?;
    let mut table = Table::new([MU, "phi [rad]", "counting_residual [1]", "large_degree_guess [rad]"]);
    for i in 0..grid.len() {
        let guess = unitary::large_degree_phase(grid[i], d, f.offset());
        table.push(vec![grid[i].into(), f.phi[i].into(), f.residuals[i].into(), guess.into()]);
    }
    out.table(name, &table)?;
    out.note("branch", k)?;
    out.note("max_residual", f.max_residual)?;
    out.note("monotone", f.monotone())?;
    out.note("range", f.range())?;
    out.note("pi_crossings", &f.pi_crossings)
}

pub fn phi_km(args: &PhiKmArgs, out: &mut Output) -> Res {
    let k = branch_index(args.branch, args.ratio, args.vertices)?;
    let name = out.file_name(args.out.as_deref(), "phi");
    phase_table(args.d, k, args.vertices, args.grid, out, &name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_inclusive() {
        let g = parse_grid("-2.9:2.9:0.01").unwrap();
        assert_eq!(g.len(), 581);
        assert!((g[580] - 2.9).abs() < 1e-12);
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1").is_err());
    }

    #[test]
    fn open_grid_avoids_ends() {
        let g = open_grid(-1.0, 1.0, 4);
        assert_eq!(g, vec![-0.75, -0.25, 0.25, 0.75]);
    }

    #[test]
    fn branch_from_ratio() {
        assert_eq!(branch_index(None, Some(-2.0), 100).unwrap(), -100);
        assert_eq!(branch_index(Some(3), None, 100).unwrap(), 3);
        assert!(branch_index(None, Some(0.01), 100).is_err());
    }
}
