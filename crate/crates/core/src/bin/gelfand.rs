use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gelfand::continuation::compute_point;
use gelfand::diagnostics::{critical_ladder, CriticalReport};
use gelfand::nonlinearity::discover_t0;
use gelfand::report::{self, CertificateRecord, CriticalRecord, PointRecord};
use gelfand::{
    check_superlinearity, derive_lower_bound, sweep, verify_critical_family, Error, RunConfig,
    SpectrumOptions,
};

#[derive(Parser)]
#[command(version, about = "Radial Gelfand problem: solution curves, Morse indices, diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the curve over the configured center values and write artifacts.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check the explicit critical-growth family for each mu.
    VerifyCritical {
        #[arg(long)]
        n: usize,
        /// Comma-separated mu values.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        mu: Vec<f64>,
        #[arg(long, default_value_t = 2048)]
        grid_points: usize,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Certify the growth condition for the configured nonlinearity.
    CheckNonlinearity {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Morse index of the single solution with center value a.
    Morse {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        a: f64,
    },
    /// Integral-identity diagnostics of the solution with center value a.
    Diagnose {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        a: f64,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Worker threads for the sweep.
    #[arg(long)]
    jobs: Option<usize>,
    /// Overrides [output].dir.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    rk_tol: Option<f64>,
    #[arg(long)]
    grid_points: Option<usize>,
    #[arg(long)]
    max_ell_override: Option<usize>,
}

impl RunArgs {
    fn load(&self) -> gelfand::Result<RunConfig> {
        let mut cfg = RunConfig::load(&self.config)?;
        if let Some(tol) = self.rk_tol {
            cfg.solver.rk_tol = tol;
        }
        if let Some(points) = self.grid_points {
            cfg.solver.grid_points = points;
        }
        if self.max_ell_override.is_some() {
            cfg.spectrum.max_ell_override = self.max_ell_override;
        }
        if let Some(dir) = &self.out_dir {
            cfg.output.dir = dir.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

const EXIT_FAILED_CHECK: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_ABORTED: u8 = 3;

fn invalid(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_INVALID)
}

fn emit(out_dir: Option<&Path>, name: &str, json: &str) -> gelfand::Result<()> {
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            report::write_file(&dir.join(name), json)
        }
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn cmd_sweep(run: &RunArgs) -> ExitCode {
    let cfg = match run.load() {
        Ok(c) => c,
        Err(e) => return invalid(e),
    };
    let (f, grid) = match (cfg.build_nonlinearity(), cfg.a_grid()) {
        (Ok(f), Ok(g)) => (f, g),
        (Err(e), _) | (_, Err(e)) => return invalid(e),
    };
    let curve = match sweep(&f, cfg.dimension, &grid, &cfg.sweep_options(run.jobs)) {
        Ok(c) => c,
        Err(e @ (Error::SweepAborted { .. } | Error::IndexNotMonotone { .. })) => {
            eprintln!("sweep aborted: {e}");
            return ExitCode::from(EXIT_ABORTED);
        }
        Err(e) => return invalid(e),
    };
    match report::write_sweep_artifacts(&curve, &cfg.output.dir) {
        Ok(files) => {
            print!("{}", report::summary_text(&curve));
            for file in files {
                println!("wrote {}", file.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error writing artifacts: {e}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_verify_critical(n: usize, mus: &[f64], grid_points: usize, out_dir: Option<&Path>) -> ExitCode {
    if !(3..=9).contains(&n) {
        return invalid(format!("the critical family needs 3 <= n <= 9, got {n}"));
    }
    if mus.is_empty() {
        return invalid("empty mu list");
    }
    let spectrum = SpectrumOptions::default();
    let reports: Vec<CriticalReport> =
        match mus.iter().map(|&mu| verify_critical_family(n, mu, grid_points, &spectrum)).collect() {
            Ok(r) => r,
            Err(e) => return invalid(e),
        };
    let ladder = match critical_ladder(n, mus) {
        Ok(l) => l,
        Err(e) => return invalid(e),
    };
    for r in &reports {
        eprintln!(
            "n = {n}, mu = {}: |u(1)| = {:.1e}, residual = {:.2e}, index = {}{}",
            r.mu,
            r.boundary_value.abs(),
            r.residual,
            r.morse_index,
            r.first_failure().map_or(String::new(), |c| format!("  FAILED: {c}"))
        );
    }
    let first_failure = reports
        .iter()
        .find_map(|r| r.first_failure().map(|c| format!("mu = {}: {c}", r.mu)))
        .or_else(|| {
            (!ladder.strictly_increasing).then(|| "sup norm not increasing as mu decreases".into())
        });
    let record = CriticalRecord {
        n,
        passed: first_failure.is_none(),
        first_failure: first_failure.clone(),
        reports: &reports,
        ladder: &ladder,
    };
    if let Err(e) = report::to_json(&record).and_then(|j| emit(out_dir, "critical.json", &j)) {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    match first_failure {
        None => ExitCode::SUCCESS,
        Some(check) => {
            eprintln!("first failing check: {check}");
            ExitCode::from(EXIT_FAILED_CHECK)
        }
    }
}

fn cmd_check_nonlinearity(run: &RunArgs) -> ExitCode {
    let cfg = match run.load() {
        Ok(c) => c,
        Err(e) => return invalid(e),
    };
    let f = match cfg.build_nonlinearity() {
        Ok(f) => f,
        Err(e) => return invalid(e),
    };
    let g = &cfg.growth;
    let cert = match g.t0 {
        Some(t0) => check_superlinearity(&f, cfg.dimension, g.epsilon, t0, g.t_max, g.samples),
        None => discover_t0(&f, cfg.dimension, g.epsilon, g.t_lo, g.t_max, g.samples),
    };
    let cert = match cert {
        Ok(c) => c,
        Err(e) => return invalid(e),
    };
    let bound = if cert.holds {
        match derive_lower_bound(&cert, &f, g.t_max) {
            Ok(b) => Some(b),
            Err(e) => {
                eprintln!("lower bound check failed: {e}");
                return ExitCode::from(EXIT_FAILED_CHECK);
            }
        }
    } else {
        None
    };
    eprintln!(
        "{f}, n = {}: holds = {}, eps = {}, t0 = {}, c1 = {:e}, worst margin = {:e}",
        cfg.dimension, cert.holds, cert.epsilon, cert.t0, cert.c1, cert.worst_margin
    );
    let record = CertificateRecord::new(&f, &cert, bound.as_ref());
    match report::to_json(&record).and_then(|j| emit(run.out_dir.as_deref(), "certificate.json", &j)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_point(run: &RunArgs, a: f64, name: &str) -> ExitCode {
    let cfg = match run.load() {
        Ok(c) => c,
        Err(e) => return invalid(e),
    };
    let f = match cfg.build_nonlinearity() {
        Ok(f) => f,
        Err(e) => return invalid(e),
    };
    let point = match compute_point(&f, cfg.dimension, a, &cfg.sweep_options(None)) {
        Ok(p) => p,
        Err(e @ Error::InvalidArgument(_)) => return invalid(e),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAILED_CHECK);
        }
    };
    let record = PointRecord::from(&point);
    match report::to_json(&record).and_then(|j| emit(run.out_dir.as_deref(), name, &j)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Sweep { run } => cmd_sweep(run),
        Command::VerifyCritical {
            n,
            mu,
            grid_points,
            out_dir,
        } => cmd_verify_critical(*n, mu, *grid_points, out_dir.as_deref()),
        Command::CheckNonlinearity { run } => cmd_check_nonlinearity(run),
        Command::Morse { run, a } => cmd_point(run, *a, "morse.json"),
        Command::Diagnose { run, a } => cmd_point(run, *a, "diagnose.json"),
    }
}
