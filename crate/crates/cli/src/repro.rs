use nbtrace::ensemble::{self, EnsembleSpec};
use nbtrace::spectral::{self, kesten_mckay, kesten_mckay_cdf, ramanujan_bound, Histogram};
use nbtrace::trace_formula::rho_smooth;

use crate::cli::{Figure, Global};
use crate::commands::{branch_index, open_grid, phase_table};
use crate::error::{usage, CliError};
use crate::output::{Cell, Output, Table};

const FIG1_W: [f64; 4] = [1.0, 1.2, 1.5, 1.7];

const LOADER: &str = r#"import csv
import json
import sys

import matplotlib.pyplot as plt


def load(path):
    """Columns keyed by header, from either a CSV or a JSON table."""
    if path.endswith(".json"):
        with open(path) as f:
            table = json.load(f)
        header, rows = table["columns"], table["rows"]
    else:
        with open(path) as f:
            reader = csv.reader(f)
            header = next(reader)
            rows = list(reader)
    cols = {h: [] for h in header}
    for row in rows:
        for h, x in zip(header, row):
            cols[h].append(float(x) if x not in ("", None) else float("nan"))
    return cols

"#;

fn script(body: &str) -> String {
    format!("{LOADER}{body}")
}

pub fn run(figure: &Figure, global: &Global, out: &mut Output) -> Result<(), CliError> {
    let ext = out.format().extension();
    match *figure {
        Figure::Fig1 { d, grid } => {
            if d < 3 || grid == 0 {
                return Err(usage("fig1 needs --d >= 3 and a positive --grid"));
            }
            let df = d as f64;
            if FIG1_W.iter().any(|&w| w >= df) {
                return Err(usage(format!("every w in {FIG1_W:?} must be below d = {d}")));
            }
            let reach = FIG1_W.iter().map(|w| 2.0 * (w * (df - w)).sqrt()).fold(0.0, f64::max);
            let mut columns = vec!["mu [eigenvalue]".to_owned()];
            columns.extend(FIG1_W.iter().map(|w| format!("rho_smooth_w{w} [1/eigenvalue]")));
            let mut table = Table::new(columns);
            for mu in open_grid(-reach, reach, grid) {
                let mut row: Vec<Cell> = vec![mu.into()];
                // blank outside the band of each w
                row.extend(FIG1_W.iter().map(|&w| {
                    rho_smooth(mu, d, w).map_or(Cell::Text(String::new()), Cell::Num)
                }));
                table.push(row);
            }
            let name = format!("fig1.{ext}");
            out.table(&name, &table)?;
            out.text(
                "plot_fig1.py",
                &script(&format!(
                    r#"cols = load(sys.argv[1] if len(sys.argv) > 1 else "{name}")
mu = cols["mu [eigenvalue]"]
for key, style in zip(list(cols)[1:], ["-", "--", ":", "-."]):
    plt.plot(mu, cols[key], style, color="k", label=key.split()[0])
plt.xlabel("mu")
plt.legend()
plt.savefig("fig1.png")
"#
                )),
            )
        }
        Figure::Km {
            vertices,
            d,
            samples,
            bin,
        } => {
            let spec = EnsembleSpec::new(vertices, d, samples, global.seed).map_err(|e| usage(e.to_string()))?;
            if !(bin > 0.0) {
                return Err(usage("--bin must be positive"));
            }
            let r = ramanujan_bound(d);
            let reach = (r / bin).ceil() * bin + bin;
            let values: Vec<f64> = ensemble::ensemble_map(&spec, crate::commands::EXEC, |s| {
                Ok(spectral::adjacency_spectrum(&s.graph).nontrivial().to_vec())
            })?
            .concat();
            let hist = Histogram::new(&values, -reach, reach, bin)?;
            let l1 = hist.l1_distance(|x| kesten_mckay_cdf(x, d));
            let mut table = Table::new(["mu [eigenvalue]", "density [1/eigenvalue]"]);
            for (edge, dens) in hist.edges.windows(2).zip(hist.densities()) {
                table.push(vec![(0.5 * (edge[0] + edge[1])).into(), dens.into()]);
            }
            out.table(&format!("km_histogram.{ext}"), &table)?;
            let mut curve = Table::new(["mu [eigenvalue]", "kesten_mckay [1/eigenvalue]"]);
            for mu in spectral::uniform_grid(-r, r, 1000) {
                curve.push(vec![mu.into(), kesten_mckay(mu, d).into()]);
            }
            out.table(&format!("km_curve.{ext}"), &curve)?;
            out.json("km_summary.json", &serde_json::json!({ "schema": crate::output::SCHEMA, "l1": l1 }))?;
            out.note("l1", l1)?;
            out.text(
                "plot_km.py",
                &script(&format!(
                    r#"hist = load("km_histogram.{ext}")
curve = load("km_curve.{ext}")
mu = hist["mu [eigenvalue]"]
plt.bar(mu, hist["density [1/eigenvalue]"], width=mu[1] - mu[0], color="0.8")
plt.plot(curve["mu [eigenvalue]"], curve["kesten_mckay [1/eigenvalue]"], color="k")
plt.xlabel("mu")
plt.savefig("km.png")
"#
                )),
            )
        }
        Figure::Fig3 {
            d,
            vertices,
            ratio,
            grid,
        } => {
            let k = branch_index(None, Some(ratio), vertices)?;
            let name = format!("fig3.{ext}");
            phase_table(d, k, vertices, grid, out, &name)?;
            out.text(
                "plot_fig3.py",
                &script(&format!(
                    r#"cols = load(sys.argv[1] if len(sys.argv) > 1 else "{name}")
plt.plot(cols["mu [eigenvalue]"], cols["phi [rad]"], color="k")
plt.xlabel("mu")
plt.ylabel("phi")
plt.savefig("fig3.png")
"#
                )),
            )
        }
    }
}
