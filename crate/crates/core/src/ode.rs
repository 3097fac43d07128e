//! Dormand–Prince 5(4) embedded Runge–Kutta pair with step-size control.
//!
//! The integrator is a stepper: the caller decides where to stop. Steps never
//! overshoot the requested target, so output on a prescribed grid is exact
//! to the local tolerance rather than interpolated.

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Right-hand side `y' = g(t, y)`.
pub trait OdeSystem<const N: usize> {
    fn rhs(&self, t: f64, y: &[f64; N]) -> [f64; N];
}

#[derive(Debug, Clone, Copy)]
pub struct Tolerance<const N: usize> {
    pub rtol: f64,
    pub atol: [f64; N],
}

/// Adaptive DP5(4) stepper. `dy` is the derivative at the current point
/// (first-same-as-last).
#[derive(Debug, Clone)]
pub struct DormandPrince<'s, S, const N: usize> {
    system: &'s S,
    tol: Tolerance<N>,
    pub t: f64,
    pub y: [f64; N],
    pub dy: [f64; N],
    h: f64,
    pub accepted: usize,
    pub rejected: usize,
}

/// One accepted step: the state at both ends, for dense output.
#[derive(Debug, Clone, Copy)]
pub struct StepSpan<const N: usize> {
    pub t0: f64,
    pub y0: [f64; N],
    pub dy0: [f64; N],
    pub t1: f64,
    pub y1: [f64; N],
    pub dy1: [f64; N],
}

impl<const N: usize> StepSpan<N> {
    /// Cubic Hermite interpolant of component `i`.
    pub fn interpolate(&self, i: usize, t: f64) -> f64 {
        crate::interp::hermite(
            self.t0, self.t1, self.y0[i], self.y1[i], self.dy0[i], self.dy1[i], t,
        )
        .0
    }
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
    }
    out
}

impl<'s, S: OdeSystem<N>, const N: usize> DormandPrince<'s, S, N> {
    pub fn new(system: &'s S, t: f64, y: [f64; N], h: f64, tol: Tolerance<N>) -> Self {
        let dy = system.rhs(t, &y);
        Self {
            system,
            tol,
            t,
            y,
            dy,
            h,
            accepted: 0,
            rejected: 0,
        }
    }

    /// Takes one accepted step of at most `t_stop - t`.
    pub fn step(&mut self, t_stop: f64) -> Result<StepSpan<N>> {
        let remaining = t_stop - self.t;
        debug_assert!(remaining > 0.0);
        loop {
            let h = self.h.min(remaining);
            let clipped = h == remaining;
            if !clipped && h <= 1e-14 * self.t.abs().max(1e-300) {
                return Err(Error::StepSizeUnderflow { r: self.t, h });
            }
            let (t, y, k1) = (self.t, &self.y, &self.dy);
            let g = |dt: f64, s: &[f64; N]| self.system.rhs(t + dt, s);
            let k2 = g(C2 * h, &axpy(y, h, &[(A21, k1)]));
            let k3 = g(C3 * h, &axpy(y, h, &[(A31, k1), (A32, &k2)]));
            let k4 = g(C4 * h, &axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]));
            let k5 = g(
                C5 * h,
                &axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = g(
                h,
                &axpy(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = axpy(
                y,
                h,
                &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
            );
            let t_new = if clipped { t_stop } else { t + h };
            let k7 = self.system.rhs(t_new, &y_new);

            let mut err: f64 = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sc = self.tol.atol[i] + self.tol.rtol * y[i].abs().max(y_new[i].abs());
                err = err.max((e / sc).abs());
            }
            if !err.is_finite() {
                self.rejected += 1;
                self.h = 0.25 * h;
                continue;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                let span = StepSpan {
                    t0: t,
                    y0: *y,
                    dy0: *k1,
                    t1: t_new,
                    y1: y_new,
                    dy1: k7,
                };
                self.t = t_new;
                self.y = y_new;
                self.dy = k7;
                self.accepted += 1;
                // a clipped step says nothing about the natural step size
                if !clipped || factor < 1.0 {
                    self.h = h * factor;
                }
                return Ok(span);
            }
            self.rejected += 1;
            self.h = h * factor.min(1.0);
        }
    }

    /// Steps until `t == target` exactly.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        while self.t < target {
            self.step(target)?;
        }
        Ok(())
    }
}
