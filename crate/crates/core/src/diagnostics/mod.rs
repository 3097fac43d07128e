//! Integral identities and scaling diagnostics on computed solutions.
//!
//! Ball integrals use the radial weight: `∫_{B_ρ} g = ω ∫₀^ρ g(r) r^{n−1} dr`
//! with `ω = |S^{n−1}|`, evaluated by composite Gauss quadrature on the
//! profile grid with the cubic Hermite interpolant of `(v, v')` inside cells.
//! Unknown constants from the analysis are never synthesized: the checks
//! here are about identities holding, and about positivity, boundedness and
//! scaling shape.

mod critical;

pub use critical::{
    critical_ladder, verify_critical_family, CriticalFamily, CriticalReport, LadderReport,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::quadrature::{radial_cell_rule, sphere_area};
use crate::radial::{RadialProfile, SolutionPoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsOptions {
    /// Radii for `∫_{B_ρ} |∇v|²` and the decay fit, within `(0, 1/4]`.
    pub decay_radii: Vec<f64>,
    /// Radii for `∫_{B_r} λ f'(v) / r^{n−2}`, within `(0, 1/2]`.
    pub fprime_radii: Vec<f64>,
    /// Radii for the `f`-mass against `L¹` ratio, within `(0, 1]`.
    pub fmass_radii: Vec<f64>,
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        Self {
            decay_radii: vec![0.05, 0.1, 0.15, 0.25],
            fprime_radii: vec![0.4, 0.2, 0.1, 0.05],
            fmass_radii: vec![1.0, 0.5, 0.25],
        }
    }
}

/// Least-squares slope of `ln ∫_{B_ρ}|∇v|²` against `ln ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "slope", rename_all = "snake_case")]
pub enum DecayFit {
    Slope(f64),
    /// The gradient mass vanishes identically.
    DegenerateZero,
}

impl DecayFit {
    pub fn slope(self) -> Option<f64> {
        match self {
            DecayFit::Slope(s) => Some(s),
            DecayFit::DegenerateZero => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRecord {
    pub pohozaev_residual: f64,
    /// Largest constituent term of the Pohozaev identity.
    pub pohozaev_scale: f64,
    pub energy_residual: f64,
    pub energy_scale: f64,
    /// `(ρ, ∫_{B_ρ} |∇v|²)`
    pub grad_mass: Vec<(f64, f64)>,
    pub decay_exponent_fit: DecayFit,
    /// `(r, ∫_{B_r} λ f'(v) / r^{n−2})`
    pub fprime_mass_ratio: Vec<(f64, f64)>,
    /// `(r, (∫_{B_{r/2}} λ f(v)) r² / ∫_{B_r} v)`, `None` when `∫_{B_r} v` vanishes.
    pub fmass_l1_ratio: Vec<(f64, Option<f64>)>,
}

impl DiagnosticsRecord {
    pub fn relative_pohozaev(&self) -> f64 {
        relative(self.pohozaev_residual, self.pohozaev_scale)
    }

    pub fn relative_energy(&self) -> f64 {
        relative(self.energy_residual, self.energy_scale)
    }

    pub fn grad_mass_at(&self, rho: f64) -> Option<f64> {
        self.grad_mass
            .iter()
            .find(|(r, _)| (r - rho).abs() < 1e-12)
            .map(|&(_, m)| m)
    }

    pub fn is_finite(&self) -> bool {
        let slope_ok = self.decay_exponent_fit.slope().is_none_or(f64::is_finite);
        self.pohozaev_residual.is_finite()
            && self.energy_residual.is_finite()
            && slope_ok
            && self.grad_mass.iter().all(|(_, m)| m.is_finite())
            && self.fprime_mass_ratio.iter().all(|(_, m)| m.is_finite())
            && self
                .fmass_l1_ratio
                .iter()
                .all(|(_, m)| m.is_none_or(f64::is_finite))
    }
}

fn relative(residual: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        residual.abs()
    } else {
        residual.abs() / scale
    }
}

/// `∫_{B_ρ} g(r, v, v')`.
pub fn ball_integral(
    profile: &RadialProfile,
    rho: f64,
    mut g: impl FnMut(f64, f64, f64) -> f64,
) -> f64 {
    let rule = radial_cell_rule(profile.n);
    let ni = profile.n as i32;
    let sum: f64 = profile
        .gauss_points(&rule, rho)
        .map(|(k, r, w)| {
            let (v, dv) = profile.eval_in_cell(k, r);
            w * r.powi(ni - 1) * g(r, v, dv)
        })
        .sum();
    sphere_area(profile.n) * sum
}

/// `∫_{B_ρ} |∇v|²`.
pub fn grad_mass(point: &SolutionPoint, rho: f64) -> f64 {
    ball_integral(&point.profile, rho, |_, _, dv| dv * dv)
}

/// The two sides of the Pohozaev identity on the unit ball,
/// `P = nλ∫F(v) − (n−2)/2 ∫|∇v|² − (ω/2) v'(1)²`, with its term scale.
pub fn pohozaev_terms(point: &SolutionPoint, f: &Nonlinearity) -> (f64, f64) {
    let n = point.n as f64;
    let p = &point.profile;
    let potential = n * point.lambda * ball_integral(p, 1.0, |_, v, _| f.antiderivative(v));
    let kinetic = 0.5 * (n - 2.0) * grad_mass(point, 1.0);
    let du1 = *p.du.last().unwrap();
    let boundary = 0.5 * sphere_area(point.n) * du1 * du1;
    let scale = potential.abs().max(kinetic.abs()).max(boundary.abs());
    (potential - kinetic - boundary, scale)
}

pub fn pohozaev_residual(point: &SolutionPoint, f: &Nonlinearity) -> f64 {
    pohozaev_terms(point, f).0
}

/// `λ∫ f(v) v − ∫|∇v|²` and its term scale.
pub fn energy_terms(point: &SolutionPoint, f: &Nonlinearity) -> (f64, f64) {
    let work = point.lambda * ball_integral(&point.profile, 1.0, |_, v, _| f.f(v) * v);
    let dirichlet = grad_mass(point, 1.0);
    (work - dirichlet, work.abs().max(dirichlet.abs()))
}

pub fn energy_residual(point: &SolutionPoint, f: &Nonlinearity) -> f64 {
    energy_terms(point, f).0
}

pub fn fit_decay_exponent(point: &SolutionPoint, radii: &[f64]) -> Result<DecayFit> {
    if radii.len() < 4 {
        return Err(Error::InvalidArgument(format!(
            "decay fit needs at least 4 radii, got {}",
            radii.len()
        )));
    }
    if let Some(bad) = radii.iter().find(|&&r| !(r > 0.0 && r <= 0.25)) {
        return Err(Error::InvalidArgument(format!("decay radius {bad} outside (0, 1/4]")));
    }
    let masses: Vec<f64> = radii.iter().map(|&r| grad_mass(point, r)).collect();
    if masses.iter().all(|&m| m == 0.0) {
        return Ok(DecayFit::DegenerateZero);
    }
    let xs: Vec<f64> = radii.iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = masses.iter().map(|m| m.ln()).collect();
    Ok(DecayFit::Slope(least_squares_slope(&xs, &ys)))
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - xbar) * (x - xbar)).sum();
    sxy / sxx
}

/// `(r, ∫_{B_r} λ f'(v) / r^{n−2})` for each radius.
pub fn fprime_mass_scaling(
    point: &SolutionPoint,
    f: &Nonlinearity,
    radii: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if let Some(bad) = radii.iter().find(|&&r| !(r > 0.0 && r <= 0.5)) {
        return Err(Error::InvalidArgument(format!("radius {bad} outside (0, 1/2]")));
    }
    let n = point.n as i32;
    Ok(radii
        .iter()
        .map(|&r| {
            let mass = if point.lambda == 0.0 {
                0.0
            } else {
                point.lambda * ball_integral(&point.profile, r, |_, v, _| f.fprime(v))
            };
            (r, mass / r.powi(n - 2))
        })
        .collect())
}

/// `(∫_{B_{r/2}} λ f(v)) r² / ∫_{B_r} v`, or `None` when `∫_{B_r} v < 1e-14`.
pub fn fmass_vs_l1(point: &SolutionPoint, f: &Nonlinearity, r: f64) -> Result<Option<f64>> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(Error::InvalidArgument(format!("radius {r} outside (0, 1]")));
    }
    let l1 = ball_integral(&point.profile, r, |_, v, _| v);
    if l1 < 1e-14 {
        return Ok(None);
    }
    let fmass = point.lambda * ball_integral(&point.profile, 0.5 * r, |_, v, _| f.f(v));
    Ok(Some(fmass * r * r / l1))
}

/// Evaluates every diagnostic and stores the record on the point.
pub fn diagnose(
    point: &mut SolutionPoint,
    f: &Nonlinearity,
    opts: &DiagnosticsOptions,
) -> Result<DiagnosticsRecord> {
    let (pohozaev_residual, pohozaev_scale) = pohozaev_terms(point, f);
    let (energy_residual, energy_scale) = energy_terms(point, f);
    let grad = opts
        .decay_radii
        .iter()
        .map(|&r| (r, grad_mass(point, r)))
        .collect();
    let record = DiagnosticsRecord {
        pohozaev_residual,
        pohozaev_scale,
        energy_residual,
        energy_scale,
        grad_mass: grad,
        decay_exponent_fit: fit_decay_exponent(point, &opts.decay_radii)?,
        fprime_mass_ratio: fprime_mass_scaling(point, f, &opts.fprime_radii)?,
        fmass_l1_ratio: opts
            .fmass_radii
            .iter()
            .map(|&r| fmass_vs_l1(point, f, r).map(|v| (r, v)))
            .collect::<Result<_>>()?,
    };
    point.diagnostics = Some(record.clone());
    Ok(record)
}
