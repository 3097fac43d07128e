//! Radial shooting for `u'' + (n−1)u'/r + f(u) = 0`, `u(0) = a`, `u'(0) = 0`,
//! and the rescaling of its first zero onto the unit ball.
//!
//! If `R` is the first zero, `v(s) = u(R s)` solves `−Δv = R² f(v)` on the
//! unit ball with `v = 0` on the boundary, so each center value `a` yields
//! exactly one point `(λ, v) = (R², v)` of the solution curve.
//!
//! The variational equation for `z = ∂u/∂a` is carried along. It gives the
//! slope `dλ/da = −2R z(R) / u'(R)` to full relative precision even where
//! the increments of `λ` fall below the resolution of `f64`.

use serde::{Deserialize, Serialize};

use crate::diagnostics::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::interp::{hermite, locate};
use crate::nonlinearity::Nonlinearity;
use crate::ode::{DormandPrince, OdeSystem, Tolerance};
use crate::quadrature::{radial_cell_rule, GaussLegendre};
use crate::spectrum::MorseIndexResult;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Relative tolerance of the Runge–Kutta pair.
    pub rk_tol: f64,
    /// Points of the canonical unit-ball grid, endpoints included.
    pub grid_points: usize,
    /// Give up looking for the first zero beyond this radius.
    pub r_max: f64,
    /// Zero location tolerance relative to `a`.
    pub zero_tol: f64,
    /// Normalized PDE residual above which a point counts as unconverged.
    pub residual_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            rk_tol: 1e-12,
            grid_points: 2048,
            r_max: 1e3,
            zero_tol: 1e-12,
            residual_tol: 1e-6,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rk_tol", self.rk_tol),
            ("r_max", self.r_max),
            ("zero_tol", self.zero_tol),
            ("residual_tol", self.residual_tol),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be > 0, got {v}")));
            }
        }
        if self.grid_points < 8 {
            return Err(Error::InvalidArgument(format!(
                "grid_points must be >= 8, got {}",
                self.grid_points
            )));
        }
        Ok(())
    }
}

/// A discretized radial profile: values and derivatives on a grid starting
/// at `r = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub n: usize,
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub du: Vec<f64>,
    pub a: f64,
    /// Length scale of the core around the origin, in the profile's own
    /// radial coordinate. Drives the grid clustering.
    pub core_scale: f64,
}

impl RadialProfile {
    pub fn radius(&self) -> f64 {
        *self.grid.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Cubic Hermite interpolation inside cell `k`.
    #[inline]
    pub fn eval_in_cell(&self, k: usize, r: f64) -> (f64, f64) {
        hermite(
            self.grid[k],
            self.grid[k + 1],
            self.u[k],
            self.u[k + 1],
            self.du[k],
            self.du[k + 1],
            r,
        )
    }

    pub fn eval(&self, r: f64) -> (f64, f64) {
        self.eval_in_cell(locate(&self.grid, r), r)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.u.windows(2).all(|w| w[1] < w[0]) && self.du[1..].iter().all(|&d| d < 0.0)
    }

    /// Gauss points `(cell, r, weight)` of a composite rule over `[0, rho]`.
    pub fn gauss_points<'a>(
        &'a self,
        rule: &'a GaussLegendre,
        rho: f64,
    ) -> impl Iterator<Item = (usize, f64, f64)> + 'a {
        self.grid
            .windows(2)
            .enumerate()
            .take_while(move |(_, w)| w[0] < rho)
            .flat_map(move |(k, w)| {
                let hi = w[1].min(rho);
                rule.on(w[0], hi).map(move |(r, wt)| (k, r, wt))
            })
    }
}

/// Chebyshev points on `[0, 1]` pushed through `r = c sinh(σ L) / sinh(L)`
/// style stretching with `L = asinh(1/c)`, so the spacing near the origin is
/// proportional to the core scale `c` and logarithmic beyond it. For `c ≳ 1`
/// this is the plain Chebyshev grid.
pub fn canonical_grid(points: usize, core_scale: f64) -> Vec<f64> {
    assert!(points >= 2);
    let c = core_scale.clamp(1e-250, 1e3);
    let stretch = (1.0 / c).asinh();
    let m = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|i| {
            let sigma = 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / m).cos());
            c * (sigma * stretch).sinh()
        })
        .collect();
    grid[0] = 0.0;
    grid[points - 1] = 1.0;
    grid
}

/// Core scale of the `λ = 1` shot from center value `a`: where the Taylor
/// start has dropped by `min(a, 1)/4`.
pub fn core_scale(f: &Nonlinearity, n: usize, a: f64) -> f64 {
    0.5 * (2.0 * n as f64 * a.min(1.0) / f.f(a)).sqrt()
}

struct RadialSystem<'f> {
    f: &'f Nonlinearity,
    bend: f64,
}

impl OdeSystem<4> for RadialSystem<'_> {
    #[inline]
    fn rhs(&self, r: f64, y: &[f64; 4]) -> [f64; 4] {
        [
            y[1],
            -self.f.f(y[0]) - self.bend * y[1] / r,
            y[3],
            -self.f.fprime(y[0]) * y[2] - self.bend * y[3] / r,
        ]
    }
}

/// Second-order series at the origin for `(u, u', z, z')`.
fn taylor_start(f: &Nonlinearity, n: usize, a: f64, r: f64) -> [f64; 4] {
    let nf = n as f64;
    let (fa, fpa) = (f.f(a), f.fprime(a));
    [
        a - fa * r * r / (2.0 * nf),
        -fa * r / nf,
        1.0 - fpa * r * r / (2.0 * nf),
        -fpa * r / nf,
    ]
}

/// Result of shooting from `u(0) = a`.
#[derive(Debug, Clone)]
pub struct Shot {
    /// First zero `R` of `u`.
    pub radius: f64,
    /// Profile on `[0, R]`, on the canonical grid scaled by `R`.
    pub profile: RadialProfile,
    /// `dλ/da` with `λ = R²`.
    pub dlambda_da: f64,
    pub steps: usize,
}

fn validate_shot(f: &Nonlinearity, n: usize, a: f64, opts: &SolverOptions) -> Result<()> {
    if n < 2 {
        return Err(Error::Dimension {
            n,
            reason: "radial shooting needs n >= 2",
        });
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument(format!("center value a must be > 0, got {a}")));
    }
    opts.validate()?;
    for t in [0.0, 0.5 * a, a] {
        let v = f.f(t);
        if !v.is_finite() {
            return Err(Error::NonFinite { what: "f", t });
        }
        if !(v > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "f must be positive on [0, a], f({t}) = {v}"
            )));
        }
    }
    Ok(())
}

/// Shoots from `u(0) = a`, `u'(0) = 0` and locates the first zero.
///
/// The first pass brackets the zero with the adaptive pair and bisects the
/// step's Hermite interpolant. The second pass integrates exactly onto the
/// scaled canonical grid and polishes `R` by Newton steps on `u(R)`.
pub fn shoot(f: &Nonlinearity, n: usize, a: f64, opts: &SolverOptions) -> Result<Shot> {
    validate_shot(f, n, a, opts)?;
    let system = RadialSystem {
        f,
        bend: n as f64 - 1.0,
    };
    let fa = f.f(a);
    let h0 = 1e-4 * (a / fa).sqrt().min(1.0);
    let tol = Tolerance {
        rtol: opts.rk_tol,
        atol: [opts.rk_tol * a * 1e-2, 1e-300, 1e-300, 1e-300],
    };

    let mut dp = DormandPrince::new(&system, h0, taylor_start(f, n, a, h0), h0, tol);
    let mut steps = 0;
    let span = loop {
        let span = dp.step(opts.r_max)?;
        steps += 1;
        if !span.y1.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite {
                what: "radial state",
                t: span.t1,
            });
        }
        if span.y1[0] <= 0.0 {
            break span;
        }
        if dp.t >= opts.r_max {
            return Err(Error::NoZeroCrossing {
                r_max: opts.r_max,
                u_final: span.y1[0],
            });
        }
    };
    let (mut lo, mut hi) = (span.t0, span.t1);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let u = span.interpolate(0, mid);
        if u.abs() <= opts.zero_tol * a || hi - lo <= 4.0 * f64::EPSILON * hi {
            lo = mid;
            hi = mid;
            break;
        }
        if u > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut radius = 0.5 * (lo + hi);

    let scale_unit = core_scale(f, n, a);
    let mut last_u = f64::NAN;
    for _ in 0..8 {
        let unit_grid = canonical_grid(opts.grid_points, scale_unit / radius);
        let (profile, end, used) = integrate_on_grid(&system, f, n, a, radius, &unit_grid, h0, tol)?;
        steps += used;
        last_u = end[0];
        if end[0].abs() <= opts.zero_tol * a {
            let dlambda_da = -2.0 * radius * end[2] / end[1];
            let profile = RadialProfile {
                core_scale: scale_unit,
                ..profile
            };
            return Ok(Shot {
                radius,
                profile,
                dlambda_da,
                steps,
            });
        }
        radius -= end[0] / end[1];
    }
    Err(Error::Unconverged {
        residual: last_u.abs() / a,
        tolerance: opts.zero_tol,
    })
}

#[allow(clippy::too_many_arguments)]
fn integrate_on_grid(
    system: &RadialSystem<'_>,
    f: &Nonlinearity,
    n: usize,
    a: f64,
    radius: f64,
    unit_grid: &[f64],
    h0: f64,
    tol: Tolerance<4>,
) -> Result<(RadialProfile, [f64; 4], usize)> {
    let m = unit_grid.len();
    let mut grid = Vec::with_capacity(m);
    let mut u = Vec::with_capacity(m);
    let mut du = Vec::with_capacity(m);
    let mut dp = DormandPrince::new(system, h0, taylor_start(f, n, a, h0), h0, tol);
    for (i, &s) in unit_grid.iter().enumerate() {
        let r = if i + 1 == m { radius } else { radius * s };
        let state = if r <= h0 {
            taylor_start(f, n, a, r)
        } else {
            dp.advance_to(r)?;
            dp.y
        };
        grid.push(r);
        u.push(state[0]);
        du.push(state[1]);
    }
    u[0] = a;
    du[0] = 0.0;
    let end = dp.y;
    let steps = dp.accepted;
    Ok((
        RadialProfile {
            n,
            grid,
            u,
            du,
            a,
            core_scale: f64::NAN,
        },
        end,
        steps,
    ))
}

/// A solution of `−Δv = λ f(v)` on the unit ball, `v = 0` on the boundary.
#[derive(Debug, Clone)]
pub struct SolutionPoint {
    pub n: usize,
    pub lambda: f64,
    /// `v(0) = ‖v‖_∞`.
    pub a: f64,
    pub profile: RadialProfile,
    pub dlambda_da: Option<f64>,
    pub residual: Option<f64>,
    pub morse: Option<MorseIndexResult>,
    pub diagnostics: Option<DiagnosticsRecord>,
}

impl SolutionPoint {
    /// The trivial solution `(λ, v) = (0, 0)`.
    pub fn zero(n: usize, grid_points: usize) -> Self {
        let grid = canonical_grid(grid_points, 1e3);
        let m = grid.len();
        Self {
            n,
            lambda: 0.0,
            a: 0.0,
            profile: RadialProfile {
                n,
                grid,
                u: vec![0.0; m],
                du: vec![0.0; m],
                a: 0.0,
                core_scale: 1e3,
            },
            dlambda_da: None,
            residual: Some(0.0),
            morse: None,
            diagnostics: None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.a == 0.0
    }

    pub fn morse_index(&self) -> Option<usize> {
        self.morse.as_ref().map(|m| m.total)
    }

    /// Boundary value `v(1)`.
    pub fn boundary_value(&self) -> f64 {
        *self.profile.u.last().unwrap()
    }

    pub fn ensure_converged(&self, tolerance: f64) -> Result<()> {
        match self.residual {
            Some(r) if r <= tolerance => Ok(()),
            Some(r) => Err(Error::Unconverged {
                residual: r,
                tolerance,
            }),
            None => Err(Error::Unconverged {
                residual: f64::NAN,
                tolerance,
            }),
        }
    }
}

/// Maps a profile on `[0, R]` to the unit ball: `v(s) = u(R s)`,
/// `v'(s) = R u'(R s)`, `λ = R²`, resampled onto the canonical grid.
pub fn rescale_to_unit_ball(profile: &RadialProfile, radius: f64) -> Result<SolutionPoint> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be > 0, got {radius}")));
    }
    if profile.a == 0.0 {
        return Ok(SolutionPoint::zero(profile.n, profile.len()));
    }
    let end = profile.radius();
    if (end - radius).abs() > 1e-12 * radius {
        return Err(Error::InvalidArgument(format!(
            "profile ends at {end}, not at the zero R = {radius}"
        )));
    }
    let boundary = *profile.u.last().unwrap();
    if boundary.abs() > 1e-9 * profile.a.max(1.0) {
        return Err(Error::InvalidArgument(format!(
            "profile does not vanish at R: u(R) = {boundary:e}"
        )));
    }
    let core = profile.core_scale / radius;
    let grid = canonical_grid(profile.len(), core);
    let mut u = Vec::with_capacity(grid.len());
    let mut du = Vec::with_capacity(grid.len());
    for (i, &s) in grid.iter().enumerate() {
        let r = if i + 1 == grid.len() { end } else { s * radius };
        let (val, der) = if i + 1 == grid.len() {
            (boundary, *profile.du.last().unwrap())
        } else {
            let k = locate(&profile.grid, r);
            // exact at shared nodes
            if profile.grid[k] == r {
                (profile.u[k], profile.du[k])
            } else {
                profile.eval_in_cell(k, r)
            }
        };
        u.push(val);
        du.push(radius * der);
    }
    let lambda = radius * radius;
    Ok(SolutionPoint {
        n: profile.n,
        lambda,
        a: profile.a,
        profile: RadialProfile {
            n: profile.n,
            grid,
            u,
            du,
            a: profile.a,
            core_scale: core,
        },
        dlambda_da: None,
        residual: None,
        morse: None,
        diagnostics: None,
    })
}

/// Maximum over grid cells of the flux-balance residual
/// `| [r^{n−1} v']_{cell} + λ ∫_{cell} r^{n−1} f(v) dr | / ∫_{cell} r^{n−1} dr`,
/// i.e. the cell average of `v'' + (n−1)v'/r + λ f(v)`, divided by
/// `λ max f(v)`. Inside a cell `v` is the cubic Hermite interpolant of the
/// grid data, so the value measures both solver and grid error.
pub fn residual(point: &SolutionPoint, f: &Nonlinearity) -> f64 {
    let p = &point.profile;
    let n = p.n as i32;
    let rule = radial_cell_rule(p.n);
    let mut worst: f64 = 0.0;
    for k in 0..p.len() - 1 {
        let (r0, r1) = (p.grid[k], p.grid[k + 1]);
        let flux = r1.powi(n - 1) * p.du[k + 1] - r0.powi(n - 1) * p.du[k];
        let source: f64 = rule
            .on(r0, r1)
            .map(|(r, w)| w * r.powi(n - 1) * f.f(p.eval_in_cell(k, r).0))
            .sum();
        let volume = (r1.powi(n) - r0.powi(n)) / n as f64;
        worst = worst.max(((flux + point.lambda * source) / volume).abs());
    }
    if point.lambda == 0.0 {
        return worst;
    }
    let fmax = p.u.iter().map(|&v| f.f(v)).fold(0.0, f64::max);
    worst / (point.lambda * fmax)
}

/// Shoots, rescales and records the residual. `a = 0` gives the trivial point.
pub fn solve_point(
    f: &Nonlinearity,
    n: usize,
    a: f64,
    opts: &SolverOptions,
) -> Result<SolutionPoint> {
    if a == 0.0 {
        if n < 2 {
            return Err(Error::Dimension {
                n,
                reason: "radial shooting needs n >= 2",
            });
        }
        return Ok(SolutionPoint::zero(n, opts.grid_points));
    }
    let shot = shoot(f, n, a, opts)?;
    let mut point = rescale_to_unit_ball(&shot.profile, shot.radius)?;
    point.dlambda_da = Some(shot.dlambda_da);
    point.residual = Some(residual(&point, f));
    Ok(point)
}
