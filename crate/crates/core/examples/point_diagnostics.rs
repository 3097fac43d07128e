//! Integral identities and scaling diagnostics of single solutions, and how
//! the identity residuals shrink as the grid is refined.
//!
//!     cargo run --release --example point_diagnostics -- [n] [a]

use gelfand::diagnostics::DiagnosticsOptions;
use gelfand::{diagnose, solve_point, Nonlinearity, SolverOptions};

fn main() -> gelfand::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(3, |s| s.parse().expect("n"));
    let a: f64 = args.next().map_or(4.0, |s| s.parse().expect("a"));
    let f = Nonlinearity::exponential();

    for points in [64, 128, 256, 512, 2048] {
        let opts = SolverOptions {
            grid_points: points,
            residual_tol: 1.0,
            ..SolverOptions::default()
        };
        let mut p = solve_point(&f, n, a, &opts)?;
        let d = diagnose(&mut p, &f, &DiagnosticsOptions::default())?;
        println!(
            "{points:>5} points: pohozaev {:.2e}, energy {:.2e} (relative)",
            d.relative_pohozaev(),
            d.relative_energy()
        );
    }

    let mut p = solve_point(&f, n, a, &SolverOptions::default())?;
    let d = diagnose(&mut p, &f, &DiagnosticsOptions::default())?;
    println!("lambda = {:.10}", p.lambda);
    for (rho, m) in &d.grad_mass {
        println!("  grad mass on B_{rho}: {m:.6e}");
    }
    println!("  decay fit: {:?}", d.decay_exponent_fit);
    for (r, m) in &d.fprime_mass_ratio {
        println!("  f' mass ratio at r = {r}: {m:.6}");
    }
    for (r, m) in &d.fmass_l1_ratio {
        println!("  f mass / L1 at r = {r}: {m:?}");
    }
    Ok(())
}
