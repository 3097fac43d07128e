//! The explicit critical-exponent family on the unit ball: boundary value,
//! PDE residual and Morse index per member, plus the blow-up ladder as μ → 0.
//!
//!     cargo run --release --example critical_family -- [n]

use gelfand::diagnostics::{critical_ladder, CriticalFamily};
use gelfand::radial::residual;
use gelfand::{morse_index, verify_critical_family, SpectrumOptions};

fn main() -> gelfand::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(3, |s| s.parse().expect("n"));
    let spectrum = SpectrumOptions::default();
    for mu in [0.7, 0.5, 0.3, 0.1] {
        let r = verify_critical_family(n, mu, 2048, &spectrum)?;
        println!(
            "n = {n}, mu = {mu}: alpha = {:.6}, sup = {:.6}, u(1) = {:.1e}, residual = {:.1e}, index = {} ({})",
            r.alpha,
            r.sup_norm,
            r.boundary_value,
            r.residual,
            r.morse_index,
            if r.passed() { "ok" } else { "FAILED" }
        );
    }

    // The Jacobi field of the family vanishes at r = μ, so the member with
    // μ = 1 has a kernel on the unit ball: watch the lowest eigenvalue shrink.
    for points in [512, 1024, 2048] {
        let fam = CriticalFamily::new(n, 1.0)?;
        let f = fam.nonlinearity();
        let mut p = fam.solution(points);
        p.residual = Some(residual(&p, &f));
        let m = morse_index(&mut p, &f, &spectrum)?;
        let lowest = m.per_mode[0].lowest_eigs.first().copied().unwrap_or(f64::NAN);
        println!("mu = 1, {points} points: index {}, lowest eigenvalue {lowest:.3e}", m.total);
    }

    let ladder = critical_ladder(n, &[1.0, 0.5, 0.25, 0.125, 0.0625])?;
    for (mu, s) in &ladder.norms {
        println!("  mu = {mu:<7} sup norm {s:.6}");
    }
    println!("strictly increasing: {}", ladder.strictly_increasing);
    Ok(())
}
