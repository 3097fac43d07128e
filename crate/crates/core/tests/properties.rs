use gelfand::nonlinearity::{check_superlinearity, derive_lower_bound, TabulatedNonlinearity};
use gelfand::radial::canonical_grid;
use gelfand::spectrum::{mode_negative_count, pencil_spectrum, ModePencil};
use gelfand::{morse_index, solve_point, Nonlinearity, SolverOptions, SpectrumOptions};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Linear interpolation of node values.
fn interpolated<'a>(grid: &'a [f64], values: &'a [f64]) -> impl Fn(usize, f64) -> f64 + 'a {
    move |k: usize, r: f64| {
        let t = (r - grid[k]) / (grid[k + 1] - grid[k]);
        values[k] * (1.0 - t) + values[k + 1] * t
    }
}

fn dense(t: &gelfand::spectrum::SymTridiagonal) -> DMatrix<f64> {
    let m = t.dim();
    DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            t.diag[i]
        } else if i + 1 == j {
            t.off[i]
        } else if j + 1 == i {
            t.off[j]
        } else {
            0.0
        }
    })
}

/// Negative eigenvalues of `L⁻¹ A L⁻ᵀ` with `B = L Lᵀ`.
fn dense_negative_count(p: &ModePencil) -> usize {
    let a = dense(&p.stiffness);
    let l = dense(&p.mass).cholesky().expect("mass is SPD").l();
    let linv = l.try_inverse().unwrap();
    let c = &linv * a * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    c.symmetric_eigen().eigenvalues.iter().filter(|&&x| x < 0.0).count()
}

fn grid_strategy() -> impl Strategy<Value = Vec<f64>> {
    (20usize..=200, prop::option::of(1e-3f64..2.0)).prop_map(|(m, core)| match core {
        Some(c) => canonical_grid(m, c),
        None => (0..m).map(|i| i as f64 / (m - 1) as f64).collect(),
    })
}

fn potential_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    grid_strategy().prop_flat_map(|grid| {
        let m = grid.len();
        (Just(grid), prop::collection::vec(0.0f64..100.0, m))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inertia_matches_dense_eigensolve((grid, w) in potential_strategy(), n in 2usize..=6, ell in 0usize..=3) {
        let p = ModePencil::assemble(&grid, n, ell, interpolated(&grid, &w));
        prop_assert_eq!(p.count_below(0.0), dense_negative_count(&p));
    }

    #[test]
    fn raising_the_potential_never_lowers_counts((grid, w) in potential_strategy(), shift in 0.0f64..60.0, n in 2usize..=5) {
        let raised: Vec<f64> = w.iter().map(|x| x + shift).collect();
        let opts = SpectrumOptions::default();
        for ell in 0..=3 {
            let lo = pencil_spectrum(&ModePencil::assemble(&grid, n, ell, interpolated(&grid, &w)), &opts);
            let hi = pencil_spectrum(&ModePencil::assemble(&grid, n, ell, interpolated(&grid, &raised)), &opts);
            prop_assert!(lo.neg_count <= hi.neg_count, "ell {}: {} > {}", ell, lo.neg_count, hi.neg_count);
        }
    }

    #[test]
    fn counts_do_not_increase_with_the_mode((grid, w) in potential_strategy(), n in 2usize..=6) {
        let counts: Vec<usize> = (0..=5)
            .map(|ell| ModePencil::assemble(&grid, n, ell, interpolated(&grid, &w)).count_below(0.0))
            .collect();
        prop_assert!(counts.windows(2).all(|c| c[1] <= c[0]), "{:?}", counts);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mode_past_the_cutoff_is_positive(n in 2usize..=9, a in 0.2f64..12.0) {
        let f = Nonlinearity::exponential();
        let opts = SolverOptions { grid_points: 512, ..SolverOptions::default() };
        let spectrum = SpectrumOptions::default();
        let mut point = solve_point(&f, n, a, &opts).unwrap();
        let m = morse_index(&mut point, &f, &spectrum).unwrap();
        prop_assert!(!m.truncated);
        let beyond = mode_negative_count(&point, &f, m.ell_max_used + 1, &spectrum).unwrap();
        prop_assert_eq!(beyond.neg_count, 0);
        let counts: Vec<usize> = m.per_mode.iter().map(|s| s.neg_count).collect();
        prop_assert!(counts.windows(2).all(|c| c[1] <= c[0]));
    }

    #[test]
    fn grid_doubling_keeps_the_index(n in 3usize..=9, a in 0.2f64..12.0) {
        let f = Nonlinearity::exponential();
        let spectrum = SpectrumOptions::default();
        let index = |points| {
            let opts = SolverOptions { grid_points: points, ..SolverOptions::default() };
            let mut point = solve_point(&f, n, a, &opts).unwrap();
            morse_index(&mut point, &f, &spectrum).unwrap()
        };
        let (coarse, fine) = (index(1024), index(2048));
        // a point within discretization error of a fold may carry a near-zero eigenvalue
        let near_zero = coarse.per_mode[0].lowest_eigs.iter().any(|e| e.abs() < 1e-3);
        prop_assume!(!near_zero);
        prop_assert_eq!(coarse.total, fine.total);
    }

    #[test]
    fn certificate_is_monotone_in_epsilon(alpha in 0.2f64..3.0, p in 1.5f64..12.0, e1 in 0.05f64..3.0, de in 0.0f64..3.0) {
        let f = Nonlinearity::shifted_power(alpha, p).unwrap();
        let weak = check_superlinearity(&f, 3, e1, 5.0, 1e3, 400).unwrap();
        let strong = check_superlinearity(&f, 3, e1 + de, 5.0, 1e3, 400).unwrap();
        prop_assert!(!strong.holds || weak.holds);
        prop_assert!(weak.worst_margin >= strong.worst_margin);
    }

    #[test]
    fn passing_certificates_imply_the_lower_bound(alpha in 0.2f64..3.0, p in 6.0f64..12.0, eps in 0.1f64..1.0) {
        let f = Nonlinearity::shifted_power(alpha, p).unwrap();
        let cert = check_superlinearity(&f, 3, eps, 20.0, 1e3, 400).unwrap();
        if cert.holds {
            let bound = derive_lower_bound(&cert, &f, 1e3).unwrap();
            prop_assert!(bound.worst_log_margin >= -1e-12);
        }
    }

    #[test]
    fn antiderivative_of_nondecreasing_table_is_convex(increments in prop::collection::vec(0.0f64..5.0, 4..30)) {
        let t: Vec<f64> = (0..increments.len()).map(|i| i as f64 * 0.5).collect();
        let mut acc = 1.0;
        let f: Vec<f64> = increments.iter().map(|d| { let v = acc; acc += d; v }).collect();
        let table = Nonlinearity::table(TabulatedNonlinearity::new(t.clone(), f, None).unwrap());
        let top = *t.last().unwrap();
        for i in 0..50 {
            let x = top * i as f64 / 50.0;
            let y = top * (i as f64 + 1.0) / 50.0;
            let mid = table.antiderivative(0.5 * (x + y));
            let chord = 0.5 * (table.antiderivative(x) + table.antiderivative(y));
            prop_assert!(mid <= chord + 1e-9 * chord.abs().max(1.0));
        }
    }
}

#[test]
fn builtin_antiderivatives_are_convex() {
    for f in [
        Nonlinearity::exponential(),
        Nonlinearity::shifted_power(1.0, 5.0).unwrap(),
        Nonlinearity::shifted_power(0.3, 1.5).unwrap(),
    ] {
        for i in 0..200 {
            let (x, y) = (i as f64 * 0.1, i as f64 * 0.1 + 0.3);
            let mid = f.antiderivative(0.5 * (x + y));
            assert!(mid <= 0.5 * (f.antiderivative(x) + f.antiderivative(y)), "{f} at {x}");
        }
    }
}
