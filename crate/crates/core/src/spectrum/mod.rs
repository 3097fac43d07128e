//! Morse index of radial solutions.
//!
//! The quadratic form `∫ |∇ξ|² − λ f'(v) ξ²` separates over spherical
//! harmonics. Mode `ℓ` leaves the radial form
//!
//! ```text
//! ∫₀¹ ( w'² + ℓ(ℓ+n−2) w²/r² − W(r) w² ) r^{n−1} dr,   W = λ f'(v),
//! ```
//!
//! which is discretized with piecewise linear elements into a tridiagonal
//! pencil `(A, B)`. The number of negative eigenvalues is the negative
//! inertia of `A − σB` at `σ` slightly below zero, so no eigensolve is needed
//! for the count itself.

mod ldlt;

pub use ldlt::{Inertia, SymTridiagonal};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nonlinearity::Nonlinearity;
use crate::quadrature::radial_cell_rule;
use crate::radial::SolutionPoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpectrumOptions {
    /// Hard cap on the modes scanned, below the centrifugal cutoff if set.
    pub max_ell_override: Option<usize>,
    /// How many of the lowest eigenvalues to report per mode.
    pub lowest: usize,
    /// Eigenvalues with `|μ| < degeneracy_tol · (1 + ℓ(ℓ+n−2))` are flagged
    /// rather than counted.
    pub degeneracy_tol: f64,
    pub residual_tol: f64,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self {
            max_ell_override: None,
            lowest: 3,
            degeneracy_tol: 1e-8,
            residual_tol: 1e-6,
        }
    }
}

/// Dimension of the spherical harmonics of degree `ℓ` in `R^n`:
/// `C(n+ℓ−1, ℓ) − C(n+ℓ−3, ℓ−2)`.
pub fn harmonic_multiplicity(n: usize, ell: usize) -> usize {
    assert!(n >= 2, "spherical harmonics need n >= 2");
    let lead = binomial(n + ell - 1, ell);
    let tail = if ell >= 2 {
        binomial(n + ell - 3, ell - 2)
    } else {
        0
    };
    lead - tail
}

fn binomial(m: usize, k: usize) -> usize {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    (0..k).fold(1usize, |acc, i| acc * (m - i) / (i + 1))
}

/// Centrifugal coefficient `ℓ(ℓ + n − 2)`.
pub fn centrifugal(n: usize, ell: usize) -> f64 {
    (ell * (ell + n - 2)) as f64
}

/// Tridiagonal stiffness/mass pencil of one mode. Unknowns are the grid
/// nodes except `r = 1` (Dirichlet), and except `r = 0` for `ℓ ≥ 1`.
#[derive(Debug, Clone)]
pub struct ModePencil {
    pub n: usize,
    pub ell: usize,
    pub stiffness: SymTridiagonal,
    pub mass: SymTridiagonal,
    /// `max r² W(r)` over the quadrature points.
    pub potential_peak: f64,
    /// `max W(r)` over the quadrature points.
    pub potential_max: f64,
}

impl ModePencil {
    /// Assembles the pencil on `grid` (from 0 to 1) for the potential `W`.
    /// The potential is called with the cell index and the radius.
    pub fn assemble(
        grid: &[f64],
        n: usize,
        ell: usize,
        mut potential: impl FnMut(usize, f64) -> f64,
    ) -> Self {
        let nodes = grid.len();
        assert!(nodes >= 3, "need at least two cells");
        let ni = n as i32;
        let c = centrifugal(n, ell);
        let rule = radial_cell_rule(n);
        let mut a_diag = vec![0.0; nodes];
        let mut a_off = vec![0.0; nodes - 1];
        let mut b_diag = vec![0.0; nodes];
        let mut b_off = vec![0.0; nodes - 1];
        let (mut peak, mut wmax) = (0.0f64, 0.0f64);
        for k in 0..nodes - 1 {
            let (r0, r1) = (grid[k], grid[k + 1]);
            let h = r1 - r0;
            let stiff = (r1.powi(ni) - r0.powi(ni)) / (n as f64 * h * h);
            let (mut m00, mut m01, mut m11) = (0.0, 0.0, 0.0);
            let (mut p00, mut p01, mut p11) = (0.0, 0.0, 0.0);
            for (r, w) in rule.on(r0, r1) {
                let weight = w * r.powi(ni - 1);
                let (left, right) = ((r1 - r) / h, (r - r0) / h);
                let wr = potential(k, r);
                peak = peak.max(r * r * wr);
                wmax = wmax.max(wr);
                let q = c / (r * r) - wr;
                m00 += weight * left * left;
                m01 += weight * left * right;
                m11 += weight * right * right;
                p00 += weight * q * left * left;
                p01 += weight * q * left * right;
                p11 += weight * q * right * right;
            }
            a_diag[k] += stiff + p00;
            a_diag[k + 1] += stiff + p11;
            a_off[k] += -stiff + p01;
            b_diag[k] += m00;
            b_diag[k + 1] += m11;
            b_off[k] += m01;
        }
        // drop r = 1, and r = 0 for ℓ ≥ 1
        let first = usize::from(ell >= 1);
        let last = nodes - 1;
        let stiffness = SymTridiagonal::new(
            a_diag[first..last].to_vec(),
            a_off[first..last - 1].to_vec(),
        );
        let mass = SymTridiagonal::new(
            b_diag[first..last].to_vec(),
            b_off[first..last - 1].to_vec(),
        );
        Self {
            n,
            ell,
            stiffness,
            mass,
            potential_peak: peak,
            potential_max: wmax,
        }
    }

    pub fn dim(&self) -> usize {
        self.stiffness.dim()
    }

    /// `A − σ B`.
    pub fn shifted(&self, sigma: f64) -> SymTridiagonal {
        let a = &self.stiffness;
        let b = &self.mass;
        SymTridiagonal::new(
            a.diag.iter().zip(&b.diag).map(|(x, y)| x - sigma * y).collect(),
            a.off.iter().zip(&b.off).map(|(x, y)| x - sigma * y).collect(),
        )
    }

    /// Number of eigenvalues strictly below `sigma` (zero pivots excluded).
    pub fn count_below(&self, sigma: f64) -> usize {
        self.shifted(sigma).inertia().negative
    }

    /// The `k` smallest eigenvalues by bisection on inertia counts.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let k = k.min(self.dim());
        let lower = -self.potential_max - 1.0;
        let mut upper = 1.0f64;
        while self.count_below(upper) < k {
            upper *= 4.0;
        }
        (0..k)
            .map(|j| {
                let (mut lo, mut hi) = (lower, upper);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if self.count_below(mid) > j {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                    if hi - lo <= 1e-13 * hi.abs().max(lo.abs()).max(1e-300) {
                        break;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSpectrum {
    pub ell: usize,
    pub neg_count: usize,
    /// Eigenvalues within the degeneracy band around zero.
    pub degenerate: usize,
    pub lowest_eigs: Vec<f64>,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorseIndexResult {
    pub total: usize,
    /// Multiplicity-weighted count of degenerate eigenvalues; the index lies
    /// in `[total, total + degenerate]`.
    pub degenerate: usize,
    pub per_mode: Vec<ModeSpectrum>,
    pub ell_max_used: usize,
    /// `max r² λ f'(v)`; modes with `ℓ(ℓ+n−2)` at or above it are positive.
    pub potential_peak: f64,
    /// The scan stopped at `max_ell_override` before the cutoff.
    pub truncated: bool,
}

impl MorseIndexResult {
    pub fn interval(&self) -> (usize, usize) {
        (self.total, self.total + self.degenerate)
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate > 0
    }

    pub fn mode(&self, ell: usize) -> Option<&ModeSpectrum> {
        self.per_mode.iter().find(|m| m.ell == ell)
    }
}

/// `W(r) = λ f'(v(r))` from the interpolated profile.
fn point_pencil(point: &SolutionPoint, f: &Nonlinearity, ell: usize) -> ModePencil {
    let p = &point.profile;
    let lambda = point.lambda;
    ModePencil::assemble(&p.grid, point.n, ell, |k, r| {
        if lambda == 0.0 {
            0.0
        } else {
            lambda * f.fprime(p.eval_in_cell(k, r).0)
        }
    })
}

/// Counts one pencil's eigenvalues below the degeneracy band.
pub fn pencil_spectrum(pencil: &ModePencil, opts: &SpectrumOptions) -> ModeSpectrum {
    let band = opts.degeneracy_tol * (1.0 + centrifugal(pencil.n, pencil.ell));
    let neg_count = pencil.count_below(-band);
    let degenerate = pencil.count_below(band) - neg_count;
    ModeSpectrum {
        ell: pencil.ell,
        neg_count,
        degenerate,
        lowest_eigs: pencil.lowest_eigenvalues(opts.lowest),
        multiplicity: harmonic_multiplicity(pencil.n, pencil.ell),
    }
}

pub fn mode_negative_count(
    point: &SolutionPoint,
    f: &Nonlinearity,
    ell: usize,
    opts: &SpectrumOptions,
) -> Result<ModeSpectrum> {
    point.ensure_converged(opts.residual_tol)?;
    Ok(pencil_spectrum(&point_pencil(point, f, ell), opts))
}

/// Scans `ℓ = 0, 1, …` up to the first mode whose centrifugal coefficient
/// dominates `r² λ f'(v)`, accumulating `multiplicity × negative count`.
/// The result is also stored on the point.
pub fn morse_index(
    point: &mut SolutionPoint,
    f: &Nonlinearity,
    opts: &SpectrumOptions,
) -> Result<MorseIndexResult> {
    point.ensure_converged(opts.residual_tol)?;
    if point.n < 2 {
        return Err(Error::Dimension {
            n: point.n,
            reason: "spherical harmonics need n >= 2",
        });
    }
    let mut per_mode = Vec::new();
    let mut total = 0;
    let mut degenerate = 0;
    let mut peak = 0.0f64;
    let mut ell = 0;
    let mut truncated = false;
    loop {
        let pencil = point_pencil(point, f, ell);
        peak = peak.max(pencil.potential_peak);
        let spectrum = pencil_spectrum(&pencil, opts);
        total += spectrum.multiplicity * spectrum.neg_count;
        degenerate += spectrum.multiplicity * spectrum.degenerate;
        per_mode.push(spectrum);
        if centrifugal(point.n, ell) >= peak {
            break;
        }
        if opts.max_ell_override.is_some_and(|cap| ell >= cap) {
            truncated = true;
            break;
        }
        ell += 1;
    }
    let result = MorseIndexResult {
        total,
        degenerate,
        per_mode,
        ell_max_used: ell,
        potential_peak: peak,
        truncated,
    };
    point.morse = Some(result.clone());
    Ok(result)
}
