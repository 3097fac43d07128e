//! Morse index of one point on the Gelfand curve, broken down by spherical
//! harmonic mode.
//!
//!     cargo run --release --example morse_spectrum -- [n] [a]

use gelfand::{morse_index, solve_point, Nonlinearity, SolverOptions, SpectrumOptions};

fn main() -> gelfand::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(3, |s| s.parse().expect("n"));
    let a: f64 = args.next().map_or(12.0, |s| s.parse().expect("a"));

    let f = Nonlinearity::exponential();
    let mut p = solve_point(&f, n, a, &SolverOptions::default())?;
    let m = morse_index(&mut p, &f, &SpectrumOptions::default())?;
    println!(
        "n = {n}, a = {a}: lambda = {:.10}, index {} (interval {:?}), potential peak {:.3}, modes 0..={}",
        p.lambda,
        m.total,
        m.interval(),
        m.potential_peak,
        m.ell_max_used
    );
    for mode in &m.per_mode {
        let eigs: Vec<String> = mode.lowest_eigs.iter().map(|e| format!("{e:.4}")).collect();
        println!(
            "  ell = {:<2} multiplicity {:<3} negative {:<2} degenerate {:<2} lowest [{}]",
            mode.ell,
            mode.multiplicity,
            mode.neg_count,
            mode.degenerate,
            eigs.join(", ")
        );
    }
    Ok(())
}
