//! Planar Liouville check: for n = 2 and f = e^u the radial solutions are
//! known in closed form, u = ln((1+μ)²/(1+μr²)²) with λ = 8μ/(1+μ)².
//!
//!     cargo run --release --example liouville

use gelfand::{morse_index, solve_point, Nonlinearity, SolverOptions, SpectrumOptions};

fn main() -> gelfand::Result<()> {
    let f = Nonlinearity::exponential();
    let opts = SolverOptions::default();
    println!("{:>8} {:>10} {:>18} {:>10} {:>10} {:>6}", "mu", "a", "lambda", "rel.err", "u(0.5)", "index");
    for mu in [0.05, 0.25, 0.5, 1.0, 2.0, 4.0, 16.0, 100.0] {
        let a = 2.0 * f64::ln(1.0 + mu);
        let exact = 8.0 * mu / (1.0 + mu).powi(2);
        let mut p = solve_point(&f, 2, a, &opts)?;
        let m = morse_index(&mut p, &f, &SpectrumOptions::default())?;
        let u_half = p.profile.eval(0.5).0;
        let u_half_exact = 2.0 * ((1.0 + mu) / (1.0 + 0.25 * mu)).ln();
        println!(
            "{mu:>8} {a:>10.6} {:>18.15} {:>10.1e} {:>10.1e} {:>6}",
            p.lambda,
            (p.lambda - exact).abs() / exact,
            (u_half - u_half_exact).abs(),
            m.total
        );
    }
    println!("the branch folds at mu = 1 (a = 2 ln 2, lambda = 2); index 1 beyond it");
    Ok(())
}
