//! User-tabulated nonlinearities.
//!
//! `f` is the monotone cubic interpolant of the samples. `f'` comes from a
//! monotone cubic through supplied derivative samples when the table has a
//! third column, and otherwise from the analytic derivative of the `f`
//! interpolant. `F` is accumulated knot by knot with adaptive Simpson and
//! cached.

use std::path::Path;

use crate::error::{Error, Result};
use crate::interp::{hermite, locate, monotone_slopes};
use crate::quadrature::adaptive_simpson;

#[derive(Debug, Clone)]
pub struct TabulatedNonlinearity {
    t: Vec<f64>,
    f: Vec<f64>,
    slopes: Vec<f64>,
    /// Derivative samples and their interpolation slopes, when supplied.
    derivative: Option<(Vec<f64>, Vec<f64>)>,
    /// `F` at the knots.
    cumulative: Vec<f64>,
}

impl TabulatedNonlinearity {
    pub fn new(t: Vec<f64>, f: Vec<f64>, fprime: Option<Vec<f64>>) -> Result<Self> {
        if t.len() < 2 || t.len() != f.len() {
            return Err(Error::Table(format!(
                "need at least two (t, f) rows of equal length, got {} and {}",
                t.len(),
                f.len()
            )));
        }
        if t[0] != 0.0 {
            return Err(Error::Table(format!("first knot must be t = 0, got {}", t[0])));
        }
        if t.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Table("knots must be strictly increasing".into()));
        }
        if t.iter().chain(&f).any(|v| !v.is_finite()) {
            return Err(Error::Table("non-finite entry".into()));
        }
        if f.iter().any(|&v| v < 0.0) {
            return Err(Error::Table("f must be nonnegative".into()));
        }
        let slopes = monotone_slopes(&t, &f);
        let derivative = match fprime {
            Some(dp) => {
                if dp.len() != t.len() || dp.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::Table(
                        "derivative column must be finite, nonnegative and complete".into(),
                    ));
                }
                let s = monotone_slopes(&t, &dp);
                Some((dp, s))
            }
            None => None,
        };
        let mut table = Self {
            t,
            f,
            slopes,
            derivative,
            cumulative: Vec::new(),
        };
        let mut cumulative = Vec::with_capacity(table.t.len());
        let mut acc = 0.0;
        cumulative.push(0.0);
        for k in 0..table.t.len() - 1 {
            let (a, b) = (table.t[k], table.t[k + 1]);
            let scale = table.f[k].max(table.f[k + 1]).max(1e-300) * (b - a);
            acc += adaptive_simpson(&|s| table.f_in_cell(k, s), a, b, 1e-14 * scale);
            cumulative.push(acc);
        }
        table.cumulative = cumulative;
        Ok(table)
    }

    /// Reads a CSV with columns `t, f(t)` and optionally `f'(t)`. A leading
    /// non-numeric header row is skipped.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let (mut t, mut f, mut dp) = (Vec::new(), Vec::new(), Vec::new());
        let mut columns = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let parsed: std::result::Result<Vec<f64>, _> =
                fields.iter().map(|s| s.parse::<f64>()).collect();
            let Ok(values) = parsed else {
                if t.is_empty() && columns.is_none() {
                    continue;
                }
                return Err(Error::Table(format!(
                    "{}:{}: cannot parse row {line:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            if !(2..=3).contains(&values.len()) || columns.is_some_and(|c| c != values.len()) {
                return Err(Error::Table(format!(
                    "{}:{}: expected 2 or 3 consistent columns",
                    path.display(),
                    lineno + 1
                )));
            }
            columns = Some(values.len());
            t.push(values[0]);
            f.push(values[1]);
            if values.len() == 3 {
                dp.push(values[2]);
            }
        }
        let derivative = (columns == Some(3)).then_some(dp);
        Self::new(t, f, derivative)
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn t_max(&self) -> f64 {
        *self.t.last().unwrap()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.f.windows(2).all(|w| w[1] >= w[0])
    }

    fn f_in_cell(&self, k: usize, s: f64) -> f64 {
        let t = &self.t;
        hermite(
            t[k],
            t[k + 1],
            self.f[k],
            self.f[k + 1],
            self.slopes[k],
            self.slopes[k + 1],
            s,
        )
        .0
    }

    /// Constant extension below 0, NaN above the last knot.
    pub fn f(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return self.f[0];
        }
        if s > self.t_max() {
            return f64::NAN;
        }
        self.f_in_cell(locate(&self.t, s), s)
    }

    pub fn fprime(&self, s: f64) -> f64 {
        if s < 0.0 {
            return 0.0;
        }
        if s > self.t_max() {
            return f64::NAN;
        }
        let k = locate(&self.t, s);
        let t = &self.t;
        match &self.derivative {
            Some((dp, dslopes)) => {
                hermite(t[k], t[k + 1], dp[k], dp[k + 1], dslopes[k], dslopes[k + 1], s).0
            }
            None => {
                hermite(
                    t[k],
                    t[k + 1],
                    self.f[k],
                    self.f[k + 1],
                    self.slopes[k],
                    self.slopes[k + 1],
                    s,
                )
                .1
            }
        }
    }

    pub fn antiderivative(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return self.f[0] * s;
        }
        if s > self.t_max() {
            return f64::NAN;
        }
        let k = locate(&self.t, s);
        let a = self.t[k];
        let scale = self.f[k].max(self.f[k + 1]).max(1e-300) * (s - a).max(1e-300);
        self.cumulative[k] + adaptive_simpson(&|x| self.f_in_cell(k, x), a, s, 1e-14 * scale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::io::Write;

    fn exp_table(with_derivative: bool) -> TabulatedNonlinearity {
        let t: Vec<f64> = (0..=400).map(|i| i as f64 * 0.025).collect();
        let f: Vec<f64> = t.iter().map(|x| x.exp()).collect();
        let d = with_derivative.then(|| f.clone());
        TabulatedNonlinearity::new(t, f, d).unwrap()
    }

    #[test]
    fn interpolates_exponential() {
        let tab = exp_table(true);
        for s in [0.0, 0.013, 1.7, 5.5, 9.99] {
            assert_relative_eq!(tab.f(s), s.exp(), max_relative = 1e-6);
            assert_relative_eq!(tab.fprime(s), s.exp(), max_relative = 1e-6);
            assert_relative_eq!(tab.antiderivative(s), s.exp_m1(), max_relative = 1e-6);
        }
        assert!(tab.f(10.5).is_nan());
    }

    #[test]
    fn derivative_without_column_uses_interpolant() {
        let tab = exp_table(false);
        assert_relative_eq!(tab.fprime(3.0), 3f64.exp(), max_relative = 1e-4);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(TabulatedNonlinearity::new(vec![0.0], vec![1.0], None).is_err());
        assert!(TabulatedNonlinearity::new(vec![0.5, 1.0], vec![1.0, 2.0], None).is_err());
        assert!(TabulatedNonlinearity::new(vec![0.0, 0.0], vec![1.0, 2.0], None).is_err());
        assert!(TabulatedNonlinearity::new(vec![0.0, 1.0], vec![1.0, -2.0], None).is_err());
    }

    #[test]
    fn reads_csv_with_header() {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        writeln!(file, "t,f").unwrap();
        for i in 0..=20 {
            let t = i as f64 * 0.5;
            writeln!(file, "{t},{}", 1.0 + t * t).unwrap();
        }
        let tab = TabulatedNonlinearity::from_csv(file.path()).unwrap();
        assert_eq!(tab.len(), 21);
        assert_relative_eq!(tab.antiderivative(10.0), 10.0 + 1000.0 / 3.0, max_relative = 1e-3);
    }
}
