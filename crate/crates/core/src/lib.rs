//! Radial solutions of the Gelfand problem `−Δu = λ f(u)` on the unit ball
//! with `u = 0` on the boundary.
//!
//! The solution curve is traced by shooting from the center value
//! `a = u(0)`. Each point carries its Morse index from a mode-by-mode
//! inertia count, and integral-identity diagnostics. The explicit
//! critical-growth family and a growth-condition certificate for `f` are
//! included.

// `!(x <= tol)` is used on purpose so that NaN fails checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod continuation;
pub mod diagnostics;
pub mod error;
pub mod interp;
pub mod nonlinearity;
pub mod ode;
pub mod quadrature;
pub mod radial;
pub mod report;
pub mod spectrum;

pub use config::RunConfig;
pub use continuation::{
    bounded_index_region, detect_index_jumps, detect_turning_points, sweep, BifurcationCurve,
    BoundedRegion, SweepOptions,
};
pub use diagnostics::{diagnose, verify_critical_family, CriticalFamily, DiagnosticsRecord};
pub use error::{Error, Result};
pub use nonlinearity::{check_superlinearity, derive_lower_bound, GrowthCertificate, Nonlinearity};
pub use radial::{shoot, solve_point, SolutionPoint, SolverOptions};
pub use spectrum::{morse_index, MorseIndexResult, SpectrumOptions};
