//! The solution curve `a ↦ (λ(a), v_a)` swept over center values, with
//! turning points of `λ(a)` and jumps of the Morse index.
//!
//! Shooting makes `a = ‖v‖_∞` a global parameter of the radial branch, so
//! folds in `λ` show up as local extrema of `λ(a)` and need no corrector.
//! Symmetry-breaking bifurcations leave the radial ansatz and are not
//! followed; kernels in modes `ℓ ≥ 1` are only reported.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{diagnose, DiagnosticsOptions};
use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::radial::{shoot, solve_point, SolutionPoint, SolverOptions};
use crate::spectrum::{morse_index, SpectrumOptions};

/// Extra shoots allowed per turning-point candidate.
pub const REFINEMENT_BUDGET: usize = 8;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepOptions {
    pub solver: SolverOptions,
    pub spectrum: SpectrumOptions,
    pub diagnostics: DiagnosticsOptions,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepGap {
    pub a: f64,
    pub error: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Extremum {
    Maximum,
    Minimum,
}

#[derive(Debug, Clone, Serialize)]
pub struct TurningPoint {
    pub a: f64,
    pub lambda: f64,
    pub kind: Extremum,
    /// Width of the final bracket around `a`.
    pub bracket_width: f64,
    pub shoots: usize,
    /// `false` when found only through the variational slope inside a
    /// plateau, where differences of `λ` are below the noise floor.
    pub resolved: bool,
}

/// Three or more consecutive cells whose `|Δλ|` is below the noise floor.
#[derive(Debug, Clone, Serialize)]
pub struct Plateau {
    pub a_lo: f64,
    pub a_hi: f64,
    /// The variational slope `dλ/da` keeps one sign across the run.
    pub slope_sign_certified: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexJump {
    pub a_lo: f64,
    pub a_hi: f64,
    pub from: usize,
    pub to: usize,
    /// First mode whose weighted count changed.
    pub mode: Option<usize>,
    /// Index into the curve's turning points lying within one cell.
    pub turning_point: Option<usize>,
}

impl IndexJump {
    pub fn is_matched(&self) -> bool {
        self.turning_point.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct BifurcationCurve {
    pub n: usize,
    pub nonlinearity: Nonlinearity,
    pub solver: SolverOptions,
    /// Converged points ordered by strictly increasing `a`.
    pub points: Vec<SolutionPoint>,
    pub gaps: Vec<SweepGap>,
    pub turning_points: Vec<TurningPoint>,
    pub plateaus: Vec<Plateau>,
    pub index_jumps: Vec<IndexJump>,
    /// Center values whose modes `ℓ ≥ 1` carry a near-zero eigenvalue.
    pub possible_bifurcations: Vec<f64>,
}

impl BifurcationCurve {
    /// A bare curve, for event detection on externally built points.
    pub fn new(
        n: usize,
        nonlinearity: Nonlinearity,
        solver: SolverOptions,
        points: Vec<SolutionPoint>,
    ) -> Self {
        Self {
            n,
            nonlinearity,
            solver,
            points,
            gaps: Vec::new(),
            turning_points: Vec::new(),
            plateaus: Vec::new(),
            index_jumps: Vec::new(),
            possible_bifurcations: Vec::new(),
        }
    }

    pub fn a_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.a).collect()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.lambda).collect()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.points.iter().filter_map(|p| p.morse_index()).max()
    }

    /// First place where the index decreases between non-degenerate points.
    pub fn index_decrease(&self) -> Option<(f64, f64, usize, usize)> {
        let indexed: Vec<(f64, usize)> = self
            .points
            .iter()
            .filter_map(|p| {
                p.morse
                    .as_ref()
                    .filter(|m| !m.is_degenerate())
                    .map(|m| (p.a, m.total))
            })
            .collect();
        indexed
            .windows(2)
            .find(|w| w[1].1 < w[0].1)
            .map(|w| (w[0].0, w[1].0, w[0].1, w[1].1))
    }
}

fn validate_grid(a_grid: &[f64]) -> Result<()> {
    if a_grid.is_empty() {
        return Err(Error::InvalidArgument("empty a grid".into()));
    }
    if !(a_grid[0] >= 0.0) || a_grid.iter().any(|a| !a.is_finite()) {
        return Err(Error::InvalidArgument(
            "a grid must be finite and start at a >= 0".into(),
        ));
    }
    if a_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("a grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Full pipeline at one center value: shoot, rescale, index, diagnostics.
pub fn compute_point(
    f: &Nonlinearity,
    n: usize,
    a: f64,
    opts: &SweepOptions,
) -> Result<SolutionPoint> {
    let mut point = solve_point(f, n, a, &opts.solver)?;
    morse_index(&mut point, f, &opts.spectrum)?;
    diagnose(&mut point, f, &opts.diagnostics)?;
    Ok(point)
}

/// Computes every grid point (in parallel), records failures as gaps, and
/// detects turning points and index jumps. More than 10% failures abort.
///
/// For the exponential nonlinearity the index must be nondecreasing in `a`;
/// a decrease aborts with [`Error::IndexNotMonotone`].
pub fn sweep(
    f: &Nonlinearity,
    n: usize,
    a_grid: &[f64],
    opts: &SweepOptions,
) -> Result<BifurcationCurve> {
    validate_grid(a_grid)?;
    if n < 2 {
        return Err(Error::Dimension {
            n,
            reason: "radial shooting needs n >= 2",
        });
    }
    let run = || -> Vec<Result<SolutionPoint>> {
        a_grid
            .par_iter()
            .map(|&a| compute_point(f, n, a, opts))
            .collect()
    };
    let results = match opts.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    let mut points = Vec::with_capacity(a_grid.len());
    let mut gaps = Vec::new();
    for (&a, res) in a_grid.iter().zip(results) {
        match res {
            Ok(p) => points.push(p),
            Err(e) => gaps.push(SweepGap {
                a,
                error: e.to_string(),
            }),
        }
    }
    if gaps.len() * 10 > a_grid.len() {
        return Err(Error::SweepAborted {
            failed: gaps.len(),
            total: a_grid.len(),
        });
    }

    let mut curve = BifurcationCurve::new(n, f.clone(), opts.solver, points);
    curve.gaps = gaps;
    let (turning_points, plateaus) = detect_turning_points(&curve);
    curve.turning_points = turning_points;
    curve.plateaus = plateaus;
    curve.index_jumps = detect_index_jumps(&curve);
    curve.possible_bifurcations = curve
        .points
        .iter()
        .filter(|p| {
            p.morse
                .as_ref()
                .is_some_and(|m| m.per_mode.iter().any(|s| s.ell >= 1 && s.degenerate > 0))
        })
        .map(|p| p.a)
        .collect();

    if f.is_exponential() {
        if let Some((a_lo, a_hi, from, to)) = curve.index_decrease() {
            return Err(Error::IndexNotMonotone {
                a_lo,
                a_hi,
                from,
                to,
            });
        }
    }
    Ok(curve)
}

/// Sign with zero kept apart, unlike `f64::signum`.
fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn noise_floor(solver: &SolverOptions, lambda: f64) -> f64 {
    1e3 * solver.rk_tol.max(solver.zero_tol) * lambda.abs().max(1.0)
}

/// Sign changes of the discrete slope `Δλ/Δa`, refined by successive
/// three-point parabolic fits with re-shooting at each fitted vertex.
///
/// Cells with `|Δλ|` under the noise floor are plateau cells. Runs of three
/// or more are reported as plateaus; inside them only a sign change of the
/// variational slope `dλ/da` yields a (flagged unresolved) turning point.
pub fn detect_turning_points(curve: &BifurcationCurve) -> (Vec<TurningPoint>, Vec<Plateau>) {
    let pts = &curve.points;
    let m = pts.len();
    if m < 3 {
        return (Vec::new(), Vec::new());
    }
    let cells: Vec<(f64, bool)> = pts
        .windows(2)
        .map(|w| {
            let dl = w[1].lambda - w[0].lambda;
            let flat = dl.abs() <= noise_floor(&curve.solver, w[0].lambda.max(w[1].lambda));
            (dl / (w[1].a - w[0].a), flat)
        })
        .collect();

    let slope_sign = |i: usize| pts[i].dlambda_da.map(sign);
    let mut plateaus = Vec::new();
    let mut start = None;
    for (k, &(_, flat)) in cells.iter().chain([(0.0, false)].iter()).enumerate() {
        match (flat && k < cells.len(), start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                if k - s >= 3 {
                    let signs: Vec<_> = (s..=k).map(slope_sign).collect();
                    let certified = signs[0].is_some_and(|s| s != 0) && signs.iter().all(|s| *s == signs[0]);
                    plateaus.push(Plateau {
                        a_lo: pts[s].a,
                        a_hi: pts[k].a,
                        slope_sign_certified: certified,
                    });
                }
                start = None;
            }
            _ => {}
        }
    }

    let mut turning = Vec::new();
    for i in 1..m - 1 {
        let (left, lflat) = cells[i - 1];
        let (right, rflat) = cells[i];
        if !lflat && !rflat {
            if sign(left) != sign(right) {
                let kind = if left > 0.0 {
                    Extremum::Maximum
                } else {
                    Extremum::Minimum
                };
                turning.push(refine_turning_point(curve, i, kind));
            }
        } else if rflat {
            // variational slope across the flat cell [i, i+1]
            if let (Some(l), Some(r)) = (pts[i].dlambda_da, pts[i + 1].dlambda_da) {
                if sign(l) != sign(r) && l != 0.0 {
                    turning.push(TurningPoint {
                        a: 0.5 * (pts[i].a + pts[i + 1].a),
                        lambda: 0.5 * (pts[i].lambda + pts[i + 1].lambda),
                        kind: if l > 0.0 {
                            Extremum::Maximum
                        } else {
                            Extremum::Minimum
                        },
                        bracket_width: pts[i + 1].a - pts[i].a,
                        shoots: 0,
                        resolved: false,
                    });
                }
            }
        }
    }
    (turning, plateaus)
}

fn lambda_at(curve: &BifurcationCurve, a: f64) -> Option<f64> {
    shoot(&curve.nonlinearity, curve.n, a, &curve.solver)
        .ok()
        .map(|s| s.radius * s.radius)
}

fn parabola_vertex(p: [(f64, f64); 3]) -> Option<f64> {
    let [(x0, y0), (x1, y1), (x2, y2)] = p;
    let d1 = (x1 - x0) * (y1 - y2);
    let d2 = (x1 - x2) * (y1 - y0);
    let denom = d1 - d2;
    if denom == 0.0 || !denom.is_finite() {
        return None;
    }
    Some(x1 - 0.5 * ((x1 - x0) * d1 - (x1 - x2) * d2) / denom)
}

fn refine_turning_point(curve: &BifurcationCurve, i: usize, kind: Extremum) -> TurningPoint {
    let pts = &curve.points;
    let better = |y: f64, than: f64| match kind {
        Extremum::Maximum => y > than,
        Extremum::Minimum => y < than,
    };
    let mut lo = (pts[i - 1].a, pts[i - 1].lambda);
    let mut mid = (pts[i].a, pts[i].lambda);
    let mut hi = (pts[i + 1].a, pts[i + 1].lambda);
    let mut shoots = 0;
    let tol = 1e-10 * mid.0.abs().max(1.0);
    while shoots < REFINEMENT_BUDGET && hi.0 - lo.0 > tol {
        let mut x = match parabola_vertex([lo, mid, hi]) {
            Some(v) if v > lo.0 && v < hi.0 => v,
            _ => f64::NAN,
        };
        // fall back to bisecting the larger half
        if !x.is_finite() || (x - mid.0).abs() < 0.25 * tol {
            x = if mid.0 - lo.0 > hi.0 - mid.0 {
                0.5 * (lo.0 + mid.0)
            } else {
                0.5 * (mid.0 + hi.0)
            };
            if (x - mid.0).abs() < 0.25 * tol {
                break;
            }
        }
        let Some(y) = lambda_at(curve, x) else {
            break;
        };
        shoots += 1;
        if better(y, mid.1) {
            if x < mid.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            mid = (x, y);
        } else if x < mid.0 {
            lo = (x, y);
        } else {
            hi = (x, y);
        }
    }
    TurningPoint {
        a: mid.0,
        lambda: mid.1,
        kind,
        bracket_width: hi.0 - lo.0,
        shoots,
        resolved: true,
    }
}

/// Cells where the Morse index changes, skipping degenerate points.
pub fn detect_index_jumps(curve: &BifurcationCurve) -> Vec<IndexJump> {
    let indexed: Vec<&SolutionPoint> = curve
        .points
        .iter()
        .filter(|p| p.morse.as_ref().is_some_and(|m| !m.is_degenerate()))
        .collect();
    let mut jumps = Vec::new();
    for w in indexed.windows(2) {
        let (p, q) = (w[0], w[1]);
        let (mp, mq) = (p.morse.as_ref().unwrap(), q.morse.as_ref().unwrap());
        if mp.total == mq.total {
            continue;
        }
        let weighted = |m: &crate::spectrum::MorseIndexResult, ell: usize| {
            m.mode(ell).map_or(0, |s| s.neg_count * s.multiplicity)
        };
        let top = mp.ell_max_used.max(mq.ell_max_used);
        let mode = (0..=top).find(|&ell| weighted(mp, ell) != weighted(mq, ell));
        let cell = q.a - p.a;
        let turning_point = curve
            .turning_points
            .iter()
            .enumerate()
            .filter(|(_, t)| t.a >= p.a - cell && t.a <= q.a + cell)
            .min_by(|x, y| {
                let mid = 0.5 * (p.a + q.a);
                (x.1.a - mid).abs().total_cmp(&(y.1.a - mid).abs())
            })
            .map(|(k, _)| k);
        jumps.push(IndexJump {
            a_lo: p.a,
            a_hi: q.a,
            from: mp.total,
            to: mq.total,
            mode,
            turning_point,
        });
    }
    jumps
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", content = "a", rename_all = "snake_case")]
pub enum BoundedRegion {
    /// Largest swept `a` with index `≤ k`, strictly inside the swept range.
    Interior(f64),
    /// The supremum sits at the end of the grid; extend the sweep.
    RangeExhausted(f64),
    /// No point has index `≤ k`.
    Empty,
}

impl BoundedRegion {
    pub fn value(self) -> Option<f64> {
        match self {
            BoundedRegion::Interior(a) | BoundedRegion::RangeExhausted(a) => Some(a),
            BoundedRegion::Empty => None,
        }
    }
}

/// `max { a : ind(v_a) ≤ k }` over the swept points. Degenerate points
/// count with the upper end of their index interval.
pub fn bounded_index_region(curve: &BifurcationCurve, k: usize) -> BoundedRegion {
    let best = curve
        .points
        .iter()
        .filter(|p| p.morse.as_ref().is_some_and(|m| m.interval().1 <= k))
        .map(|p| p.a)
        .fold(None, |acc: Option<f64>, a| Some(acc.map_or(a, |b| b.max(a))));
    match (best, curve.points.last()) {
        (Some(a), Some(last)) if a == last.a => BoundedRegion::RangeExhausted(a),
        (Some(a), _) => BoundedRegion::Interior(a),
        (None, _) => BoundedRegion::Empty,
    }
}

/// `count` equally spaced values on `[min, max]`.
pub fn linear_grid(min: f64, max: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![min],
        _ => (0..count)
            .map(|i| {
                if i + 1 == count {
                    max
                } else {
                    min + (max - min) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::SolutionPoint;

    fn synthetic(values: &[(f64, f64)]) -> BifurcationCurve {
        let points = values
            .iter()
            .map(|&(a, lambda)| {
                let mut p = SolutionPoint::zero(2, 16);
                p.a = a;
                p.lambda = lambda;
                p
            })
            .collect();
        BifurcationCurve::new(
            2,
            Nonlinearity::exponential(),
            SolverOptions::default(),
            points,
        )
    }

    #[test]
    fn monotone_curve_has_no_turning_points() {
        let pts: Vec<(f64, f64)> = (0..50).map(|i| (i as f64, i as f64)).collect();
        let (tp, plateaus) = detect_turning_points(&synthetic(&pts));
        assert!(tp.is_empty());
        assert!(plateaus.is_empty());
    }

    #[test]
    fn single_point_curve_has_no_events() {
        let curve = synthetic(&[(0.0, 0.0)]);
        assert!(detect_turning_points(&curve).0.is_empty());
        assert!(detect_index_jumps(&curve).is_empty());
    }

    #[test]
    fn flat_run_is_a_plateau() {
        let mut pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, i as f64)).collect();
        pts.extend((5..10).map(|i| (i as f64, 4.0)));
        let (tp, plateaus) = detect_turning_points(&synthetic(&pts));
        assert!(tp.is_empty());
        assert_eq!(plateaus.len(), 1);
        assert!(!plateaus[0].slope_sign_certified);
    }

    #[test]
    fn zero_grid_is_the_trivial_point() {
        let f = Nonlinearity::exponential();
        let curve = sweep(&f, 3, &[0.0], &SweepOptions::default()).unwrap();
        assert_eq!(curve.points.len(), 1);
        assert_eq!(curve.points[0].lambda, 0.0);
        assert_eq!(curve.points[0].morse_index(), Some(0));
        assert!(curve.turning_points.is_empty() && curve.index_jumps.is_empty());
    }

    #[test]
    fn rejects_unsorted_grids() {
        let f = Nonlinearity::exponential();
        let opts = SweepOptions::default();
        assert!(sweep(&f, 3, &[0.0, 1.0, 0.5], &opts).is_err());
        assert!(sweep(&f, 3, &[-1.0, 1.0], &opts).is_err());
        assert!(sweep(&f, 3, &[], &opts).is_err());
    }

    #[test]
    fn too_many_failures_abort() {
        let f = Nonlinearity::exponential();
        let opts = SweepOptions {
            solver: SolverOptions {
                r_max: 0.2,
                ..SolverOptions::default()
            },
            ..SweepOptions::default()
        };
        let grid = linear_grid(0.0, 2.0, 20);
        assert!(matches!(
            sweep(&f, 3, &grid, &opts),
            Err(Error::SweepAborted { .. })
        ));
    }

    #[test]
    fn vertex_of_exact_parabola() {
        let v = parabola_vertex([(0.0, 1.0), (1.0, 2.0), (3.0, -2.0)]).unwrap();
        // y = 1 + 2x − x²
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn linear_grid_endpoints() {
        let g = linear_grid(0.0, 30.0, 601);
        assert_eq!(g.len(), 601);
        assert_eq!(g[600], 30.0);
        assert!((g[1] - 0.05).abs() < 1e-15);
    }
}
