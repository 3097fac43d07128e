//! Artifacts: curve CSV, JSON records, gnuplot data and a text summary.
//!
//! Floats are written with Rust's shortest round-trip formatting (`{:?}`,
//! scientific outside `[1e-5, 1e16)`), so equal inputs give byte-identical
//! files.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::continuation::{
    bounded_index_region, BifurcationCurve, BoundedRegion, IndexJump, Plateau, SweepGap,
    TurningPoint,
};
use crate::diagnostics::{CriticalReport, DiagnosticsRecord, LadderReport};
use crate::error::Result;
use crate::nonlinearity::{GrowthCertificate, LowerBoundReport, Nonlinearity, Regularity};
use crate::radial::SolutionPoint;
use crate::spectrum::MorseIndexResult;

pub const CSV_HEADER: &str =
    "a,lambda,morse_index,pohozaev_residual,energy_residual,grad_mass_0.25,decay_fit";

fn opt<T: std::fmt::Debug>(v: Option<T>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

pub fn curve_csv(curve: &BifurcationCurve) -> String {
    let mut out = String::with_capacity(80 * (curve.points.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for p in &curve.points {
        let d = p.diagnostics.as_ref();
        let _ = writeln!(
            out,
            "{:?},{:?},{},{},{},{},{}",
            p.a,
            p.lambda,
            opt(p.morse_index()),
            opt(d.map(|d| d.pohozaev_residual)),
            opt(d.map(|d| d.energy_residual)),
            opt(d.and_then(|d| d.grad_mass_at(0.25))),
            opt(d.and_then(|d| d.decay_exponent_fit.slope())),
        );
    }
    out
}

/// Two-column gnuplot data: `a λ` and `a index`.
pub fn gnuplot_data(curve: &BifurcationCurve) -> (String, String) {
    let mut lambda = String::from("# a lambda\n");
    let mut index = String::from("# a morse_index\n");
    for p in &curve.points {
        let _ = writeln!(lambda, "{:?} {:?}", p.a, p.lambda);
        if let Some(k) = p.morse_index() {
            let _ = writeln!(index, "{:?} {}", p.a, k);
        }
    }
    (lambda, index)
}

#[derive(Debug, Clone, Serialize)]
pub struct PointRecord<'a> {
    pub n: usize,
    pub a: f64,
    pub lambda: f64,
    pub dlambda_da: Option<f64>,
    pub residual: Option<f64>,
    pub boundary_value: f64,
    pub grid_points: usize,
    pub morse: Option<&'a MorseIndexResult>,
    pub diagnostics: Option<&'a DiagnosticsRecord>,
}

impl<'a> From<&'a SolutionPoint> for PointRecord<'a> {
    fn from(p: &'a SolutionPoint) -> Self {
        Self {
            n: p.n,
            a: p.a,
            lambda: p.lambda,
            dlambda_da: p.dlambda_da,
            residual: p.residual,
            boundary_value: p.boundary_value(),
            grid_points: p.profile.len(),
            morse: p.morse.as_ref(),
            diagnostics: p.diagnostics.as_ref(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct JumpRecord<'a> {
    #[serde(flatten)]
    pub jump: &'a IndexJump,
    pub matched: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurveSummary<'a> {
    pub n: usize,
    pub nonlinearity: String,
    pub points: usize,
    pub a_min: Option<f64>,
    pub a_max: Option<f64>,
    pub max_index: Option<usize>,
    pub gaps: &'a [SweepGap],
    pub turning_points: &'a [TurningPoint],
    pub plateaus: &'a [Plateau],
    pub index_jumps: Vec<JumpRecord<'a>>,
    pub possible_bifurcations: &'a [f64],
    /// `max { a : index ≤ k }` for `k = 0, 1, 2`.
    pub bounded_index_regions: Vec<(usize, BoundedRegion)>,
}

impl<'a> CurveSummary<'a> {
    pub fn new(curve: &'a BifurcationCurve) -> Self {
        Self {
            n: curve.n,
            nonlinearity: curve.nonlinearity.to_string(),
            points: curve.points.len(),
            a_min: curve.points.first().map(|p| p.a),
            a_max: curve.points.last().map(|p| p.a),
            max_index: curve.max_index(),
            gaps: &curve.gaps,
            turning_points: &curve.turning_points,
            plateaus: &curve.plateaus,
            index_jumps: curve
                .index_jumps
                .iter()
                .map(|jump| JumpRecord {
                    jump,
                    matched: jump.is_matched(),
                })
                .collect(),
            possible_bifurcations: &curve.possible_bifurcations,
            bounded_index_regions: (0..3).map(|k| (k, bounded_index_region(curve, k))).collect(),
        }
    }
}

pub fn summary_text(curve: &BifurcationCurve) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "n = {}, f = {}", curve.n, curve.nonlinearity);
    let _ = writeln!(
        s,
        "{} points, {} gaps, max index {}",
        curve.points.len(),
        curve.gaps.len(),
        opt(curve.max_index())
    );
    for t in &curve.turning_points {
        let _ = writeln!(
            s,
            "turning point ({:?}) a* = {:.9}, lambda* = {:.9}{}",
            t.kind,
            t.a,
            t.lambda,
            if t.resolved { "" } else { " [unresolved]" }
        );
    }
    for j in &curve.index_jumps {
        let _ = writeln!(
            s,
            "index {} -> {} on [{}, {}], mode {}, {}",
            j.from,
            j.to,
            j.a_lo,
            j.a_hi,
            opt(j.mode),
            if j.is_matched() {
                "at a turning point"
            } else {
                "unmatched"
            }
        );
    }
    for p in &curve.plateaus {
        let _ = writeln!(
            s,
            "plateau on [{}, {}], slope sign {}",
            p.a_lo,
            p.a_hi,
            if p.slope_sign_certified {
                "certified"
            } else {
                "uncertain"
            }
        );
    }
    for g in &curve.gaps {
        let _ = writeln!(s, "gap at a = {}: {}", g.a, g.error);
    }
    s
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateRecord<'a> {
    pub nonlinearity: String,
    pub regularity: Regularity,
    pub certificate: &'a GrowthCertificate,
    pub lower_bound: Option<&'a LowerBoundReport>,
}

impl<'a> CertificateRecord<'a> {
    pub fn new(
        f: &Nonlinearity,
        certificate: &'a GrowthCertificate,
        lower_bound: Option<&'a LowerBoundReport>,
    ) -> Self {
        Self {
            nonlinearity: f.to_string(),
            regularity: f.regularity(),
            certificate,
            lower_bound,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalRecord<'a> {
    pub n: usize,
    pub passed: bool,
    pub first_failure: Option<String>,
    pub reports: &'a [CriticalReport],
    pub ladder: &'a LadderReport,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(contents.as_bytes())?;
    Ok(())
}

/// Writes `curve.csv`, `events.json`, `points.json`, `lambda_vs_a.dat`,
/// `index_vs_a.dat` and `summary.txt` into `dir`.
pub fn write_sweep_artifacts(curve: &BifurcationCurve, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let (lambda, index) = gnuplot_data(curve);
    let points: Vec<PointRecord> = curve.points.iter().map(PointRecord::from).collect();
    let files = [
        ("curve.csv", curve_csv(curve)),
        ("events.json", to_json(&CurveSummary::new(curve))?),
        ("points.json", to_json(&points)?),
        ("lambda_vs_a.dat", lambda),
        ("index_vs_a.dat", index),
        ("summary.txt", summary_text(curve)),
    ];
    let mut written = Vec::new();
    for (name, contents) in files {
        let path = dir.join(name);
        write_file(&path, &contents)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::SolverOptions;

    #[test]
    fn csv_header_and_rows() {
        let mut p = SolutionPoint::zero(3, 16);
        p.a = 0.5;
        p.lambda = 1.25;
        let curve = BifurcationCurve::new(
            3,
            Nonlinearity::exponential(),
            SolverOptions::default(),
            vec![p],
        );
        let csv = curve_csv(&curve);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("0.5,1.25,,,,,"));
        assert_eq!(lines.next(), None);
    }
}
