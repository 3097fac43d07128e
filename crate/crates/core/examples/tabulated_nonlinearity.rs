//! A nonlinearity given only as samples: tabulate e^t, sweep with the table
//! and compare against the built-in exponential.
//!
//!     cargo run --release --example tabulated_nonlinearity

use gelfand::continuation::linear_grid;
use gelfand::nonlinearity::TabulatedNonlinearity;
use gelfand::{sweep, Nonlinearity, SweepOptions};

fn main() -> gelfand::Result<()> {
    let t: Vec<f64> = (0..=400).map(|i| i as f64 * 0.05).collect();
    let values = t.iter().map(|x| x.exp()).collect();
    let slopes = t.iter().map(|x| x.exp()).collect();
    let table = Nonlinearity::table(TabulatedNonlinearity::new(t, values, Some(slopes))?);
    let exact = Nonlinearity::exponential();

    let grid = linear_grid(0.0, 12.0, 121);
    let opts = SweepOptions::default();
    let (tab, exp) = (sweep(&table, 3, &grid, &opts)?, sweep(&exact, 3, &grid, &opts)?);
    let worst = tab
        .points
        .iter()
        .zip(&exp.points)
        .map(|(p, q)| (p.lambda - q.lambda).abs() / q.lambda.max(f64::MIN_POSITIVE))
        .fold(0.0f64, f64::max);
    println!("max relative lambda difference, table vs exact: {worst:.2e}");
    for (x, y) in tab.turning_points.iter().zip(&exp.turning_points) {
        println!("turning point: table ({:.6}, {:.8}), exact ({:.6}, {:.8})", x.a, x.lambda, y.a, y.lambda);
    }
    println!("index at a = 12: table {:?}, exact {:?}", tab.points.last().and_then(|p| p.morse_index()), exp.points.last().and_then(|p| p.morse_index()));
    Ok(())
}
