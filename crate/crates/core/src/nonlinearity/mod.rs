//! Nonlinearities `f` together with `f'` and the antiderivative `F(t) = ∫₀ᵗ f`.
//!
//! Built-ins are evaluated in closed form. Tabulated nonlinearities are
//! interpolated by monotone cubics, see [`table`].

mod growth;
pub mod table;

pub use growth::{
    check_superlinearity, derive_lower_bound, discover_t0, GrowthCertificate, LowerBoundReport,
};
pub use table::TabulatedNonlinearity;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub enum NonlinearityKind {
    /// `f(t) = e^t`
    Exponential,
    /// `f(t) = (alpha + t)_+^p`
    ShiftedPower { alpha: f64, p: f64 },
    Table(Arc<TabulatedNonlinearity>),
}

/// Declared regularity of a nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Regularity {
    /// Smooth (C^∞) on `t ≥ 0`; tabulated data is only C¹.
    pub smooth: bool,
    pub nondecreasing: bool,
    pub positive_at_zero: bool,
}

#[derive(Debug, Clone)]
pub struct Nonlinearity {
    kind: NonlinearityKind,
    regularity: Regularity,
}

impl Nonlinearity {
    pub fn exponential() -> Self {
        Self {
            kind: NonlinearityKind::Exponential,
            regularity: Regularity {
                smooth: true,
                nondecreasing: true,
                positive_at_zero: true,
            },
        }
    }

    pub fn shifted_power(alpha: f64, p: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "shifted power needs alpha > 0, got {alpha}"
            )));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "shifted power needs p > 1, got {p}"
            )));
        }
        Ok(Self {
            kind: NonlinearityKind::ShiftedPower { alpha, p },
            regularity: Regularity {
                smooth: true,
                nondecreasing: true,
                positive_at_zero: true,
            },
        })
    }

    pub fn table(table: TabulatedNonlinearity) -> Self {
        let regularity = Regularity {
            smooth: false,
            nondecreasing: table.is_nondecreasing(),
            positive_at_zero: table.f(0.0) > 0.0,
        };
        Self {
            kind: NonlinearityKind::Table(Arc::new(table)),
            regularity,
        }
    }

    pub fn kind(&self) -> &NonlinearityKind {
        &self.kind
    }

    pub fn regularity(&self) -> Regularity {
        self.regularity
    }

    pub fn is_exponential(&self) -> bool {
        matches!(self.kind, NonlinearityKind::Exponential)
    }

    pub fn f(&self, t: f64) -> f64 {
        match &self.kind {
            NonlinearityKind::Exponential => t.exp(),
            NonlinearityKind::ShiftedPower { alpha, p } => (alpha + t).max(0.0).powf(*p),
            NonlinearityKind::Table(tab) => tab.f(t),
        }
    }

    pub fn fprime(&self, t: f64) -> f64 {
        match &self.kind {
            NonlinearityKind::Exponential => t.exp(),
            NonlinearityKind::ShiftedPower { alpha, p } => {
                let s = (alpha + t).max(0.0);
                p * s.powf(p - 1.0)
            }
            NonlinearityKind::Table(tab) => tab.fprime(t),
        }
    }

    /// `F(t) = ∫₀ᵗ f(s) ds`.
    pub fn antiderivative(&self, t: f64) -> f64 {
        match &self.kind {
            NonlinearityKind::Exponential => t.exp_m1(),
            NonlinearityKind::ShiftedPower { alpha, p } => {
                let q = p + 1.0;
                let s = (alpha + t).max(0.0);
                if t >= 0.0 {
                    // α^q ((1 + t/α)^q − 1) without cancellation for small t
                    alpha.powf(q) * (q * (t / alpha).ln_1p()).exp_m1() / q
                } else {
                    (s.powf(q) - alpha.powf(q)) / q
                }
            }
            NonlinearityKind::Table(tab) => tab.antiderivative(t),
        }
    }

    /// `t f(t) / F(t)` for `t > 0`, evaluated without overflow for the built-ins.
    pub fn growth_ratio(&self, t: f64) -> f64 {
        match &self.kind {
            NonlinearityKind::Exponential => t / -(-t).exp_m1(),
            NonlinearityKind::ShiftedPower { alpha, p } => {
                let q = p + 1.0;
                let s = alpha + t;
                // (α/s)^q = exp(-q ln(1 + t/α))
                let tail = -(-q * (t / alpha).ln_1p()).exp_m1();
                q * t / (s * tail)
            }
            NonlinearityKind::Table(tab) => t * tab.f(t) / tab.antiderivative(t),
        }
    }

    /// `ln f(t)`.
    pub fn ln_f(&self, t: f64) -> f64 {
        match &self.kind {
            NonlinearityKind::Exponential => t,
            NonlinearityKind::ShiftedPower { alpha, p } => p * (alpha + t).max(0.0).ln(),
            NonlinearityKind::Table(tab) => tab.f(t).ln(),
        }
    }

    /// Checks the sampled structural invariants on `[0, t_max]`: `f ≥ 0`,
    /// `f' ≥ 0`, `F(0) = 0`, and `F' = f` by centered differences.
    pub fn check_invariants(&self, t_max: f64, samples: usize) -> Result<()> {
        if self.antiderivative(0.0) != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "F(0) = {} is not zero",
                self.antiderivative(0.0)
            )));
        }
        for i in 0..samples {
            let t = t_max * i as f64 / (samples - 1).max(1) as f64;
            let (f, fp) = (self.f(t), self.fprime(t));
            if !f.is_finite() {
                return Err(Error::NonFinite { what: "f", t });
            }
            if !fp.is_finite() {
                return Err(Error::NonFinite { what: "f'", t });
            }
            if f < 0.0 || fp < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "f or f' negative at t = {t}: f = {f}, f' = {fp}"
                )));
            }
            if t > 0.0 {
                let h = 1e-5 * t.max(1e-2);
                let lo = (t - h).max(0.0);
                let fd = (self.antiderivative(t + h) - self.antiderivative(lo)) / (t + h - lo);
                let reference = 0.5 * (self.f(t + h) + self.f(lo)).max(f);
                if (fd - f).abs() > 1e-6 * reference.max(f64::MIN_POSITIVE) {
                    return Err(Error::InvalidArgument(format!(
                        "F' = {fd} does not match f = {f} at t = {t}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Nonlinearity {
    fn fmt(&self, fmtr: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            NonlinearityKind::Exponential => write!(fmtr, "exp(t)"),
            NonlinearityKind::ShiftedPower { alpha, p } => write!(fmtr, "({alpha} + t)^{p}"),
            NonlinearityKind::Table(tab) => write!(fmtr, "table[{} knots]", tab.len()),
        }
    }
}
