use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use mixed_dg::analysis::{manufactured, ConvergenceReport, ErrorColumn};
use mixed_dg::output::{emit_csv, emit_plots};
use mixed_dg::study::{run_study, StudyConfig, DEFAULT_MESH_SIZES};
use mixed_dg::{Error, Result};

/// Refinement studies of the mixed DG discretisation of the clamped
/// biharmonic problem on the unit square.
#[derive(Debug, Parser)]
#[command(name = "mixed-dg", version)]
struct Cli {
    /// Polynomial degrees (comma separated, each in 1..=3).
    #[arg(long, value_delimiter = ',', required = true)]
    degree: Vec<usize>,

    /// Exponents `i` of the penalty `σ₀ |e|^-i p²` (comma separated).
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    penalty_exponent: Vec<i32>,

    #[arg(long, default_value_t = 1.0)]
    sigma0: f64,

    /// Weight of the jump terms in the energy norm.
    #[arg(long, default_value_t = 1.0)]
    sigma1: f64,

    /// Subdivisions per side of the unit square, strictly increasing.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_MESH_SIZES)]
    mesh_sizes: Vec<usize>,

    /// Directory receiving the CSV tables and plots.
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Also write SVG plots.
    #[arg(long)]
    plots: bool,

    /// Relative residual required of every solve.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

fn fmt_rate(rate: Option<f64>) -> String {
    rate.map(|r| format!("{r:>10.6}")).unwrap_or_else(|| format!("{:>10}", "-"))
}

fn print_table(report: &ConvergenceReport) {
    println!(
        "p = {}, i = {}, sigma0 = {}, sigma1 = {}",
        report.degree, report.exponent, report.sigma0, report.sigma1
    );
    println!(
        "{:>4} {:>9} {:>13} {:>13} {:>10} {:>10} {:>13} {:>10} {:>13} {:>13} {:>9}",
        "n", "h", "|u-uh|", "|||u-uh|||", "rate", "rate", "|v-vh|", "rate", "J^1/2", "max uh", "residual"
    );
    let l2 = report.rates(ErrorColumn::L2U);
    let energy = report.rates(ErrorColumn::EnergyU);
    let v = report.rates(ErrorColumn::L2V);
    for (k, level) in report.levels.iter().enumerate() {
        println!(
            "{:>4} {:>9.6} {:>13.6e} {:>13.6e} {} {} {:>13.6e} {} {:>13.6e} {:>13.8} {:>9.1e}",
            level.n,
            level.h,
            level.l2_u,
            level.energy_u,
            fmt_rate(l2[k]),
            fmt_rate(energy[k]),
            level.l2_v,
            fmt_rate(v[k]),
            level.j_semi,
            level.max_uh,
            level.residual,
        );
    }
    for failure in &report.failures {
        println!("{:>4} failed: {}", failure.n, failure.message);
    }
    println!();
}

fn run(cli: &Cli) -> Result<bool> {
    let mut configs = Vec::new();
    for &degree in &cli.degree {
        for &exponent in &cli.penalty_exponent {
            let cfg = StudyConfig {
                sigma0: cli.sigma0,
                sigma1: cli.sigma1,
                tol: cli.tol,
                ..StudyConfig::new(degree, exponent, cli.mesh_sizes.clone())
            };
            cfg.validate()?;
            configs.push(cfg);
        }
    }
    fs::create_dir_all(&cli.out).map_err(|source| Error::Io {
        path: cli.out.clone(),
        source,
    })?;

    let mut reports = Vec::with_capacity(configs.len());
    for cfg in &configs {
        let report = run_study(cfg)?;
        print_table(&report);
        if !report.levels.is_empty() {
            emit_csv(&report, &cli.out.join(format!("p{}_i{}.csv", cfg.degree, cfg.exponent)))?;
        }
        reports.push(report);
    }

    if cli.plots {
        let plottable: Vec<ConvergenceReport> = reports.iter().filter(|r| r.levels.len() >= 2).cloned().collect();
        if plottable.len() < reports.len() {
            eprintln!("skipping plots of studies with fewer than two solved levels");
        }
        if !plottable.is_empty() {
            for path in emit_plots(&plottable, manufactured().max_value(), &cli.out)? {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(reports.iter().all(ConvergenceReport::is_complete))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("some levels failed");
            ExitCode::FAILURE
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
