//! The explicit critical-growth family on the unit ball.
//!
//! With `p = (n+2)/(n−2)` the bubble `U(r) = (μ√(n(n−2)) / (μ² + r²))^{(n−2)/2}`
//! solves `−ΔU = U^p`. Shifting by `α_μ = U(1)` gives `u = U − α_μ`, a
//! solution of `−Δu = (α_μ + u)^p` that vanishes on the unit sphere. Its sup
//! norm `U(0) − α_μ` grows without bound as `μ → 0`.

use serde::Serialize;

use super::DiagnosticsOptions;
use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::radial::{canonical_grid, core_scale, residual, RadialProfile, SolutionPoint};
use crate::spectrum::{morse_index, SpectrumOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalFamily {
    pub n: usize,
    pub mu: f64,
}

impl CriticalFamily {
    pub fn new(n: usize, mu: f64) -> Result<Self> {
        if !(3..=9).contains(&n) {
            return Err(Error::Dimension {
                n,
                reason: "the critical family is checked for 3 <= n <= 9",
            });
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidArgument(format!("mu must be > 0, got {mu}")));
        }
        Ok(Self { n, mu })
    }

    fn half_dim(&self) -> f64 {
        (self.n as f64 - 2.0) / 2.0
    }

    fn scale(&self) -> f64 {
        let nf = self.n as f64;
        self.mu * (nf * (nf - 2.0)).sqrt()
    }

    pub fn exponent(&self) -> f64 {
        let nf = self.n as f64;
        (nf + 2.0) / (nf - 2.0)
    }

    /// The bubble `U(r)` and `U'(r)`.
    pub fn bubble(&self, r: f64) -> (f64, f64) {
        let d = self.mu * self.mu + r * r;
        let u = (self.scale() / d).powf(self.half_dim());
        (u, -2.0 * self.half_dim() * r / d * u)
    }

    /// `α_μ = (μ√(n(n−2)) / (1 + μ²))^{(n−2)/2}`.
    pub fn alpha(&self) -> f64 {
        (self.scale() / (1.0 + self.mu * self.mu)).powf(self.half_dim())
    }

    /// `‖u‖_∞ = (μ√(n(n−2)))^{(n−2)/2} / μ^{n−2} − α_μ`.
    pub fn sup_norm(&self) -> f64 {
        self.scale().powf(self.half_dim()) / self.mu.powi(self.n as i32 - 2) - self.alpha()
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        Nonlinearity::shifted_power(self.alpha(), self.exponent())
            .expect("alpha > 0 and p > 1 by construction")
    }

    /// The closed form sampled on the canonical grid, as a `λ = 1` point.
    pub fn solution(&self, grid_points: usize) -> SolutionPoint {
        let f = self.nonlinearity();
        let a = self.sup_norm();
        let core = core_scale(&f, self.n, a);
        let grid = canonical_grid(grid_points, core);
        let alpha = self.alpha();
        let (u, du): (Vec<f64>, Vec<f64>) = grid
            .iter()
            .map(|&r| {
                let (b, db) = self.bubble(r);
                ((b - alpha).max(0.0), db)
            })
            .unzip();
        SolutionPoint {
            n: self.n,
            lambda: 1.0,
            a,
            profile: RadialProfile {
                n: self.n,
                grid,
                u,
                du,
                a,
                core_scale: core,
            },
            dlambda_da: None,
            residual: None,
            morse: None,
            diagnostics: None,
        }
    }
}

/// Thresholds for [`verify_critical_family`].
#[derive(Debug, Clone, Copy)]
pub struct CriticalTolerances {
    pub residual: f64,
    pub boundary: f64,
}

impl Default for CriticalTolerances {
    fn default() -> Self {
        Self {
            residual: 1e-7,
            boundary: 1e-10,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalReport {
    pub n: usize,
    pub mu: f64,
    pub alpha: f64,
    pub sup_norm: f64,
    pub boundary_value: f64,
    pub residual: f64,
    pub morse_index: usize,
    pub morse_degenerate: usize,
    pub pohozaev_relative: f64,
    pub boundary_ok: bool,
    pub residual_ok: bool,
    pub index_ok: bool,
}

impl CriticalReport {
    pub fn passed(&self) -> bool {
        self.boundary_ok && self.residual_ok && self.index_ok
    }

    /// Name of the first failing check.
    pub fn first_failure(&self) -> Option<&'static str> {
        if !self.boundary_ok {
            Some("boundary value")
        } else if !self.residual_ok {
            Some("PDE residual")
        } else if !self.index_ok {
            Some("Morse index")
        } else {
            None
        }
    }
}

/// Builds the family member, checks the boundary value, the PDE residual
/// against `f(u) = (α_μ + u)^p`, and that the Morse index is exactly one.
pub fn verify_critical_family(
    n: usize,
    mu: f64,
    grid_points: usize,
    spectrum: &SpectrumOptions,
) -> Result<CriticalReport> {
    let family = CriticalFamily::new(n, mu)?;
    let tol = CriticalTolerances::default();
    let f = family.nonlinearity();
    let mut point = family.solution(grid_points);
    let res = residual(&point, &f);
    point.residual = Some(res);
    let spectrum = SpectrumOptions {
        residual_tol: spectrum.residual_tol.max(tol.residual),
        ..*spectrum
    };
    let morse = morse_index(&mut point, &f, &spectrum)?;
    let mut diag_point = point.clone();
    let record = super::diagnose(&mut diag_point, &f, &DiagnosticsOptions::default())?;
    let boundary_value = point.boundary_value();
    Ok(CriticalReport {
        n,
        mu,
        alpha: family.alpha(),
        sup_norm: family.sup_norm(),
        boundary_value,
        residual: res,
        morse_index: morse.total,
        morse_degenerate: morse.degenerate,
        pohozaev_relative: record.relative_pohozaev(),
        boundary_ok: boundary_value.abs() <= tol.boundary,
        residual_ok: res <= tol.residual,
        index_ok: morse.total == 1 && morse.degenerate == 0,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LadderReport {
    pub n: usize,
    /// `(μ, ‖u‖_∞)` ordered by decreasing `μ`.
    pub norms: Vec<(f64, f64)>,
    pub strictly_increasing: bool,
}

/// Sup norms along a ladder of `μ` values, sorted by decreasing `μ`.
pub fn critical_ladder(n: usize, mus: &[f64]) -> Result<LadderReport> {
    if mus.is_empty() {
        return Err(Error::InvalidArgument("empty mu ladder".into()));
    }
    let mut sorted = mus.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let norms = sorted
        .iter()
        .map(|&mu| CriticalFamily::new(n, mu).map(|fam| (mu, fam.sup_norm())))
        .collect::<Result<Vec<_>>>()?;
    let strictly_increasing = norms.windows(2).all(|w| w[1].1 > w[0].1);
    Ok(LadderReport {
        n,
        norms,
        strictly_increasing,
    })
}
