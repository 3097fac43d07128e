//! Samples the superlinear growth condition t f(t) ≥ (2n/(n−2) + ε) F(t)
//! for a few nonlinearities, with t0 found by scanning, and checks the
//! implied power lower bound on f.
//!
//!     cargo run --release --example growth_certificate -- [n]

use gelfand::nonlinearity::discover_t0;
use gelfand::{derive_lower_bound, Nonlinearity};

fn main() -> gelfand::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(3, |s| s.parse().expect("n"));
    let mut candidates = vec![("e^t".to_string(), Nonlinearity::exponential())];
    for p in [3.0, 5.0, 6.0, 7.0, 9.0] {
        candidates.push((format!("(1+t)^{p}"), Nonlinearity::shifted_power(1.0, p)?));
    }
    for (name, f) in &candidates {
        for eps in [0.5, 1.0, 2.0] {
            let cert = discover_t0(f, n, eps, 1e-2, 1e3, 2000)?;
            let verdict = if cert.holds {
                let bound = derive_lower_bound(&cert, f, 1e3)?;
                format!(
                    "holds from t0 = {:.3}; f(t) >= {:.3e} t^{:.3}, worst log margin {:.2e}",
                    cert.t0, cert.c1, bound.exponent, bound.worst_log_margin
                )
            } else {
                format!("fails (worst margin {:.3} at t = {:.3e})", cert.worst_margin, cert.worst_t)
            };
            println!("{name:<10} eps = {eps}: {verdict}");
        }
    }
    Ok(())
}
