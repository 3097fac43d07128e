//! Sampled certification of the quantified superlinearity condition
//! `t f(t) ≥ (2n/(n−2) + ε) F(t)` for `t ≥ t0`, and of the power lower bound
//! it implies.

use serde::Serialize;

use super::Nonlinearity;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct GrowthCertificate {
    pub n: usize,
    pub epsilon: f64,
    pub t0: f64,
    pub c1: f64,
    pub verified_up_to: f64,
    pub holds: bool,
    /// Smallest sampled `t` where the inequality fails.
    pub first_failure: Option<f64>,
    /// Minimum over samples of `t f(t)/F(t) − (2n/(n−2) + ε)`.
    pub worst_margin: f64,
    pub worst_t: f64,
    pub samples: usize,
    /// `t0` came from [`discover_t0`] rather than from the caller.
    pub t0_discovered: bool,
}

impl GrowthCertificate {
    /// Exponent `(n+2)/(n−2) + ε` of the implied lower bound.
    pub fn exponent(&self) -> f64 {
        critical_exponent(self.n) + self.epsilon
    }
}

fn critical_exponent(n: usize) -> f64 {
    (n as f64 + 2.0) / (n as f64 - 2.0)
}

fn threshold(n: usize, epsilon: f64) -> f64 {
    2.0 * n as f64 / (n as f64 - 2.0) + epsilon
}

fn log_grid(lo: f64, hi: f64, samples: usize) -> impl Iterator<Item = f64> {
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..samples).map(move |i| {
        if i + 1 == samples {
            hi
        } else {
            (llo + (lhi - llo) * i as f64 / (samples - 1) as f64).exp()
        }
    })
}

fn margin(f: &Nonlinearity, kappa: f64, t: f64) -> Result<f64> {
    let r = f.growth_ratio(t);
    if !r.is_finite() {
        return Err(Error::NonFinite {
            what: "t f(t) / F(t)",
            t,
        });
    }
    Ok(r - kappa)
}

fn validate(n: usize, epsilon: f64, t0: f64, t_max: f64, samples: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::Dimension {
            n,
            reason: "the factor 2n/(n-2) needs n >= 3",
        });
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!("epsilon must be > 0, got {epsilon}")));
    }
    if !(t0 > 0.0 && t0 < t_max && t_max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < t0 < t_max, got t0 = {t0}, t_max = {t_max}"
        )));
    }
    if samples < 100 {
        return Err(Error::InvalidArgument(format!("need >= 100 samples, got {samples}")));
    }
    Ok(())
}

/// Scans a log-uniform grid on `[t0, t_max]`, then refines around the
/// smallest margin by golden-section search over the neighbouring cells.
pub fn check_superlinearity(
    f: &Nonlinearity,
    n: usize,
    epsilon: f64,
    t0: f64,
    t_max: f64,
    samples: usize,
) -> Result<GrowthCertificate> {
    validate(n, epsilon, t0, t_max, samples)?;
    let kappa = threshold(n, epsilon);
    let grid: Vec<f64> = log_grid(t0, t_max, samples).collect();
    let mut first_failure = None;
    let (mut worst_margin, mut worst_i) = (f64::INFINITY, 0);
    for (i, &t) in grid.iter().enumerate() {
        let m = margin(f, kappa, t)?;
        if m < 0.0 && first_failure.is_none() {
            first_failure = Some(t);
        }
        if m < worst_margin {
            worst_margin = m;
            worst_i = i;
        }
    }
    let mut worst_t = grid[worst_i];

    let lo = grid[worst_i.saturating_sub(1)];
    let hi = grid[(worst_i + 1).min(grid.len() - 1)];
    if hi > lo {
        let (t, m) = golden_min(|t| margin(f, kappa, t), lo, hi, 60)?;
        if m < worst_margin {
            worst_margin = m;
            worst_t = t;
        }
        if m < 0.0 && first_failure.is_none_or(|ff| t < ff) {
            first_failure = Some(t);
        }
    }

    Ok(GrowthCertificate {
        n,
        epsilon,
        t0,
        c1: f.f(0.0) * t0.powf(-critical_exponent(n) - epsilon),
        verified_up_to: t_max,
        holds: first_failure.is_none(),
        first_failure,
        worst_margin,
        worst_t,
        samples,
        t0_discovered: false,
    })
}

fn golden_min(
    mut g: impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
    iters: usize,
) -> Result<(f64, f64)> {
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut g1 = g(x1)?;
    let mut g2 = g(x2)?;
    for _ in 0..iters {
        if g1 <= g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - phi * (b - a);
            g1 = g(x1)?;
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + phi * (b - a);
            g2 = g(x2)?;
        }
    }
    Ok(if g1 <= g2 { (x1, g1) } else { (x2, g2) })
}

/// Smallest sampled `t0` on a log grid over `[t_lo, t_max]` such that the
/// condition holds at every later sample. The returned certificate is the
/// full check at that `t0` and is flagged as discovered.
pub fn discover_t0(
    f: &Nonlinearity,
    n: usize,
    epsilon: f64,
    t_lo: f64,
    t_max: f64,
    samples: usize,
) -> Result<GrowthCertificate> {
    validate(n, epsilon, t_lo, t_max, samples)?;
    let kappa = threshold(n, epsilon);
    let grid: Vec<f64> = log_grid(t_lo, t_max, samples).collect();
    let mut last_fail = None;
    for (i, &t) in grid.iter().enumerate() {
        if margin(f, kappa, t)? < 0.0 {
            last_fail = Some(i);
        }
    }
    let t0 = match last_fail {
        None => t_lo,
        // fails at the very end: nothing to certify, report at the last sample
        Some(i) if i + 1 >= grid.len() => {
            let mut cert = check_superlinearity(f, n, epsilon, grid[grid.len() - 2], t_max, samples)?;
            cert.t0_discovered = true;
            return Ok(cert);
        }
        Some(i) => grid[i + 1],
    };
    let mut cert = check_superlinearity(f, n, epsilon, t0, t_max, samples)?;
    cert.t0_discovered = true;
    Ok(cert)
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundReport {
    pub c1: f64,
    pub exponent: f64,
    /// Minimum over samples of `ln f(t) − ln(c1 t^exponent)`; `+inf` at `t = 0`.
    pub worst_log_margin: f64,
    pub worst_t: f64,
    pub samples: usize,
}

/// Checks `f(t) ≥ c1 t^{(n+2)/(n−2)+ε}` on `[0, t_max]` in log form.
pub fn derive_lower_bound(
    cert: &GrowthCertificate,
    f: &Nonlinearity,
    t_max: f64,
) -> Result<LowerBoundReport> {
    if !cert.holds {
        return Err(Error::CertificateNotHolding);
    }
    if !(t_max > 0.0) {
        return Err(Error::InvalidArgument(format!("t_max must be > 0, got {t_max}")));
    }
    let q = cert.exponent();
    let ln_c1 = cert.c1.ln();
    let samples = 2 * cert.samples.max(1000);
    // t = 0 only checks f(0) ≥ 0
    if f.f(0.0) < 0.0 {
        return Err(Error::LowerBoundViolated {
            t: 0.0,
            margin: f.f(0.0),
        });
    }
    let lo = (t_max * 1e-8).min(cert.t0 * 1e-3);
    let linear = (1..=samples).map(|i| t_max * i as f64 / samples as f64);
    let mut worst = (f64::INFINITY, 0.0);
    for t in log_grid(lo, t_max, samples).chain(linear).chain([cert.t0]) {
        if t > t_max {
            continue;
        }
        let lf = f.ln_f(t);
        if lf.is_nan() {
            return Err(Error::NonFinite { what: "ln f", t });
        }
        let m = lf - (ln_c1 + q * t.ln());
        if m < worst.0 {
            worst = (m, t);
        }
        if m < -1e-12 * lf.abs().max(1.0) {
            return Err(Error::LowerBoundViolated { t, margin: m });
        }
    }
    Ok(LowerBoundReport {
        c1: cert.c1,
        exponent: q,
        worst_log_margin: worst.0,
        worst_t: worst.1,
        samples,
    })
}
