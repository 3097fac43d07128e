//! Inertia of symmetric tridiagonal matrices by `L D Lᵀ` factorization with
//! Bunch's 1×1 / 2×2 diagonal pivoting.

/// Symmetric tridiagonal matrix: `diag[i]`, and `off[i]` coupling `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Inertia {
    pub negative: usize,
    pub zero: usize,
    pub positive: usize,
}

impl Inertia {
    fn push_sign(&mut self, v: f64) {
        if v < 0.0 {
            self.negative += 1;
        } else if v > 0.0 {
            self.positive += 1;
        } else {
            self.zero += 1;
        }
    }
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(diag.is_empty() && off.is_empty() || off.len() + 1 == diag.len());
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.off)
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Sylvester inertia `(negative, zero, positive)`.
    ///
    /// A 1×1 pivot `d_k` is taken when `|d_k| σ ≥ α e_k²` with
    /// `α = (√5 − 1)/2` and `σ = max |t_ij|`, otherwise the leading 2×2 block
    /// is eliminated. Each 2×2 block with negative determinant contributes one
    /// eigenvalue of each sign.
    pub fn inertia(&self) -> Inertia {
        let m = self.dim();
        let mut inertia = Inertia::default();
        if m == 0 {
            return inertia;
        }
        let alpha = 0.5 * (5f64.sqrt() - 1.0);
        let sigma = self.max_abs();
        let mut d = self.diag[0];
        let mut k = 0;
        while k < m {
            if k + 1 == m {
                inertia.push_sign(d);
                break;
            }
            let e = self.off[k];
            if d.abs() * sigma >= alpha * e * e {
                inertia.push_sign(d);
                d = if d != 0.0 {
                    self.diag[k + 1] - e * e / d
                } else {
                    // then e = 0 as well, nothing to eliminate
                    self.diag[k + 1]
                };
                k += 1;
            } else {
                let d1 = self.diag[k + 1];
                let det = d * d1 - e * e;
                if det < 0.0 {
                    inertia.negative += 1;
                    inertia.positive += 1;
                } else if det > 0.0 {
                    inertia.push_sign(d1);
                    inertia.push_sign(d1);
                } else {
                    inertia.zero += 1;
                    inertia.push_sign(d + d1);
                }
                if k + 2 < m {
                    let e1 = self.off[k + 1];
                    d = if det != 0.0 {
                        self.diag[k + 2] - e1 * e1 * d / det
                    } else {
                        self.diag[k + 2]
                    };
                }
                k += 2;
            }
        }
        inertia
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let t = SymTridiagonal::new(vec![1.0, -2.0, 0.0, 3.0], vec![0.0; 3]);
        assert_eq!(
            t.inertia(),
            Inertia {
                negative: 1,
                zero: 1,
                positive: 2
            }
        );
    }

    #[test]
    fn zero_leading_pivot_forces_two_by_two() {
        // [[0, 1], [1, 0]] has eigenvalues ±1
        let t = SymTridiagonal::new(vec![0.0, 0.0], vec![1.0]);
        assert_eq!(
            t.inertia(),
            Inertia {
                negative: 1,
                zero: 0,
                positive: 1
            }
        );
    }

    #[test]
    fn discrete_laplacian_shifted() {
        // eigenvalues 2 − 2 cos(kπ/(m+1)), k = 1..m
        let m = 50;
        let t = |shift: f64| {
            SymTridiagonal::new(vec![2.0 - shift; m], vec![-1.0; m - 1]).inertia()
        };
        let eig = |k: usize| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / (m as f64 + 1.0)).cos();
        for k in [1usize, 7, 25, 50] {
            let between = if k < m { 0.5 * (eig(k) + eig(k + 1)) } else { 5.0 };
            assert_eq!(t(between).negative, k);
        }
    }
}
