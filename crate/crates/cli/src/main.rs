mod cli;
mod commands;
mod error;
mod output;
mod repro;

use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;

use cli::{Cli, Command};
use error::CliError;
use output::Output;

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Ensemble(_) => "ensemble",
        Command::Matrix(_) => "matrix",
        Command::Spectrum(_) => "spectrum",
        Command::KmCurve(_) => "km-curve",
        Command::Coarse(_) => "coarse",
        Command::TraceFormula(_) => "trace-formula",
        Command::WalkCounts(_) => "walk-counts",
        Command::VerifyBartholdi(_) => "verify-bartholdi",
        Command::Unitary(_) => "unitary",
        Command::PhiKm(_) => "phi-km",
        Command::Repro(_) => "repro",
    }
}

fn configure_threads(threads: usize) -> Result<(), CliError> {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), CliError> {
    configure_threads(cli.global.threads)?;
    let start = Instant::now();
    let mut out = Output::new(&cli.global.out_dir, cli.global.format)?;
    let g = &cli.global;
    match &cli.command {
        Command::Ensemble(a) => commands::ensemble(a, g, &mut out),
        Command::Matrix(a) => commands::matrix(a, g, &mut out),
        Command::Spectrum(a) => commands::spectrum(a, &mut out),
        Command::KmCurve(a) => commands::km_curve(a, &mut out),
        Command::Coarse(a) => commands::coarse(a, &mut out),
        Command::TraceFormula(a) => commands::trace_formula(a, &mut out),
        Command::WalkCounts(a) => commands::walk_counts(a, &mut out),
        Command::VerifyBartholdi(a) => commands::verify_bartholdi(a, g, &mut out),
        Command::Unitary(a) => commands::unitary(a, &mut out),
        Command::PhiKm(a) => commands::phi_km(a, &mut out),
        Command::Repro(a) => repro::run(&a.figure, g, &mut out),
    }?;
    let config = serde_json::to_value(cli)?;
    out.finish(command_name(&cli.command), &config, start.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let err = CliError::Usage(e.render().to_string().trim().to_owned());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.to_json());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
