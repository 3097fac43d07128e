//! Sweeps the radial Gelfand curve for f(u) = e^u and prints turning points,
//! index jumps and plateaus.
//!
//!     cargo run --release --example gelfand_curve -- [n] [a_max] [count]

use gelfand::continuation::{bounded_index_region, linear_grid};
use gelfand::{sweep, Nonlinearity, SweepOptions};

fn main() -> gelfand::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(3, |s| s.parse().expect("n"));
    let a_max: f64 = args.next().map_or(30.0, |s| s.parse().expect("a_max"));
    let count: usize = args.next().map_or(601, |s| s.parse().expect("count"));

    let f = Nonlinearity::exponential();
    let start = std::time::Instant::now();
    let curve = sweep(&f, n, &linear_grid(0.0, a_max, count), &SweepOptions::default())?;
    println!(
        "n = {n}: {} points in {:.2?}, {} gaps, max index {:?}",
        curve.points.len(),
        start.elapsed(),
        curve.gaps.len(),
        curve.max_index()
    );
    for t in &curve.turning_points {
        println!(
            "  {:?} at a* = {:.8}, lambda* = {:.10} (bracket {:.1e}, {} shoots)",
            t.kind, t.a, t.lambda, t.bracket_width, t.shoots
        );
    }
    for j in &curve.index_jumps {
        println!(
            "  index {} -> {} on [{:.3}, {:.3}] in mode {:?}, turning point {:?}",
            j.from, j.to, j.a_lo, j.a_hi, j.mode, j.turning_point
        );
    }
    for p in &curve.plateaus {
        println!(
            "  plateau [{:.2}, {:.2}], slope sign certified: {}",
            p.a_lo, p.a_hi, p.slope_sign_certified
        );
    }
    for k in 0..3 {
        println!("  sup {{a : index <= {k}}} = {:?}", bounded_index_region(&curve, k));
    }
    let worst = curve
        .points
        .iter()
        .filter_map(|p| p.diagnostics.as_ref())
        .map(|d| d.relative_pohozaev().max(d.relative_energy()))
        .fold(0.0f64, f64::max);
    println!("  worst relative identity residual {worst:.2e}");
    Ok(())
}
