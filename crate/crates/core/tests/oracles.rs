//! Module results against closed forms and independent solvers.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fiberband_core::fiber::{solve_potential, Grid, QuadraticPotential, SolverOptions, TridiagonalOperator};
use fiberband_core::scattering::{volterra_coefficients, HalfLineProblem, ScatteringOptions};
use fiberband_core::semiclassical::{counting_check_potential, oscillator_levels};
use fiberband_core::spectral::{ess_threshold, sigma_lambda, spectrum_slice, SliceOptions};
use fiberband_core::{ExtendedReal, FieldProfile};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn free_operator_matches_discrete_sine_spectrum() {
    let n = 60;
    let grid = Grid::new(-1.0, 2.0, n).unwrap();
    let h = 0.7;
    let op = TridiagonalOperator::from_potential(grid, h, |_| Ok(0.0)).unwrap();
    let k = h * h / (grid.spacing() * grid.spacing());
    let exact: Vec<f64> = (1..=n)
        .map(|j| {
            4.0 * k
                * (j as f64 * std::f64::consts::PI / (2.0 * (n + 1) as f64))
                    .sin()
                    .powi(2)
        })
        .collect();
    let got = op.eigenvalues_below(f64::MAX / 4.0, n, Some(1e-13 * 4.0 * k));
    assert_eq!(got.len(), n);
    for (g, e) in got.iter().zip(&exact) {
        assert!(close(*g, *e, 1e-10 * 4.0 * k), "{g} vs {e}");
    }
}

#[test]
fn random_tridiagonal_matches_dense_eigensolver() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let n = rng.random_range(5..80);
        let grid = Grid::new(0.0, 1.0, n).unwrap();
        let vals: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let op = TridiagonalOperator::from_potential(grid, 0.05, |x| {
            Ok(vals[((x * (n - 1) as f64).round() as usize).min(n - 1)])
        })
        .unwrap();
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = op.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = op.offdiag[i];
                m[(i + 1, i)] = op.offdiag[i];
            }
        }
        let mut dense: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        dense.sort_by(f64::total_cmp);
        let cut = 0.5 * (dense[n / 2] + dense[n / 2 + 1]);
        let got = op.eigenvalues_below(cut, n, Some(1e-13));
        assert_eq!(got.len(), n / 2 + 1);
        assert_eq!(op.count_below(cut), n / 2 + 1);
        for (g, d) in got.iter().zip(&dense) {
            assert!(close(*g, *d, 1e-9), "{g} vs {d}");
        }
        for &lam in &got {
            let pair = op.eigenvector(lam).unwrap();
            let dx = grid.spacing();
            let norm: f64 = pair.psi.iter().map(|p| p * p * dx).sum();
            assert!(close(norm, 1.0, 1e-12));
            assert!(op.residual(lam, &pair.psi) <= 1e-8 * op.norm());
        }
    }
}

#[test]
fn harmonic_oscillator_levels() {
    let opts = SolverOptions::default();
    for (v, h) in [(1.0, 1.0), (2.0, 0.1), (0.5, 0.03)] {
        let q = QuadraticPotential { v };
        let e = 7.5 * h * v;
        let s = solve_potential(&q, h, e, e, 10, &opts).unwrap();
        let exact = oscillator_levels(v, h, 3);
        assert_eq!(s.eigenvalues.len(), 4);
        for (got, want) in s.eigenvalues.iter().zip(&exact) {
            assert!(close(*got, *want, 1e-6 * want), "v={v} h={h}: {got} vs {want}");
        }
    }
}

#[test]
fn constant_field_levels_scale_with_b_and_h() {
    for (b0, h) in [(2.5, 1.0), (0.4, 0.1)] {
        let p = FieldProfile::constant(b0);
        let opts = SliceOptions {
            h,
            ..Default::default()
        };
        let s = spectrum_slice(&p, 0.37, 4, &opts).unwrap();
        for (n, lam) in s.eigenvalues.iter().enumerate() {
            let want = h * b0 * (2 * n + 1) as f64;
            assert!(close(*lam, want, 1e-6 * want), "{lam} vs {want}");
        }
    }
}

#[test]
fn gauge_shift_translates_bands() {
    let g = FieldProfile::gaussian();
    let a0 = 0.8;
    let shifted = g.clone().with_gauge(g.gauge() + a0);
    let opts = SliceOptions {
        h: 0.2,
        ..Default::default()
    };
    for xi in [0.2, 0.5, 0.65] {
        let s0 = spectrum_slice(&g, xi, 3, &opts).unwrap();
        let s1 = spectrum_slice(&shifted, xi + a0, 3, &opts).unwrap();
        assert_eq!(s0.eigenvalues.len(), s1.eigenvalues.len());
        for ((l0, l1), e) in s0.eigenvalues.iter().zip(&s1.eigenvalues).zip(&s0.errors) {
            assert!(close(*l0, *l1, 4.0 * e + 1e-10), "{l0} vs {l1}");
        }
    }
}

#[test]
fn step_like_field_approaches_landau_levels_of_each_side() {
    let p = FieldProfile::step_like(0.5, 2.0, 1.0).unwrap();
    let opts = SliceOptions::default();
    // deep on either side the fiber sees a constant field
    let left = spectrum_slice(&p, -40.0, 2, &opts).unwrap();
    let right = spectrum_slice(&p, 40.0, 2, &opts).unwrap();
    assert!(close(left.eigenvalues[0], 0.5, 1e-6));
    assert!(close(left.eigenvalues[1], 1.5, 1e-6));
    assert!(close(right.eigenvalues[0], 2.0, 1e-6));
    assert!(close(right.eigenvalues[1], 6.0, 1e-6));
}

#[test]
fn tabulated_gaussian_reproduces_analytic_bands() {
    let g = FieldProfile::gaussian();
    let xs: Vec<f64> = (0..=4000).map(|i| -10.0 + i as f64 * 0.005).collect();
    let bs: Vec<f64> = xs.iter().map(|&x| g.eval_b(x).unwrap()).collect();
    let t = FieldProfile::tabulated(xs, bs).unwrap().with_gauge(g.gauge());
    let opts = SliceOptions {
        h: 0.1,
        ..Default::default()
    };
    for xi in [0.3, 0.5] {
        let a = spectrum_slice(&g, xi, 2, &opts).unwrap();
        let b = spectrum_slice(&t, xi, 2, &opts).unwrap();
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!(close(*x, *y, 1e-4 * x), "{x} vs {y}");
        }
    }
}

#[test]
fn gaussian_threshold_is_squared_distance_to_flux_limits() {
    let g = FieldProfile::gaussian();
    for xi in [-1.5_f64, -0.2, 0.1, 0.5, 0.9, 1.3, 4.0] {
        let want = xi.abs().min((xi - 1.0_f64).abs()).powi(2);
        match ess_threshold(&g, xi) {
            ExtendedReal::Finite(t) => assert!(close(t, want, 1e-12), "{t} vs {want}"),
            other => panic!("unexpected threshold {other:?}"),
        }
    }
    let s = sigma_lambda(&g, 0.04).unwrap();
    let bounds: Vec<(f64, f64)> = s
        .components
        .iter()
        .map(|c| (c.lo.to_f64(), c.hi.to_f64()))
        .collect();
    assert_eq!(bounds.len(), 3);
    assert!(bounds[0].0 == f64::NEG_INFINITY && close(bounds[0].1, -0.2, 1e-12));
    assert!(close(bounds[1].0, 0.2, 1e-12) && close(bounds[1].1, 0.8, 1e-12));
    assert!(close(bounds[2].0, 1.2, 1e-12) && bounds[2].1 == f64::INFINITY);
}

#[test]
fn quadratic_counting_matches_level_formula() {
    let q = QuadraticPotential { v: 1.5 };
    let h = 0.01;
    let eta = 0.2;
    let c = counting_check_potential(&q, h, eta, 1.5, &SolverOptions::default()).unwrap();
    // levels h·v·(2n − 1) below η
    let want = ((eta / (h * 1.5) + 1.0) / 2.0).floor() as usize;
    assert_eq!(c.n_computed, want);
    assert!(close(c.bound, eta / (4.0 * 1.5 * h) - 1.0, 1e-12));
}

/// Square barrier or well `w = W` on `[0, L]`, solved in closed form.
fn square_coefficients(wv: f64, l: f64, omega: f64, psi0: C, dpsi0: C) -> (C, C) {
    let q = C::from(wv - omega * omega).sqrt();
    let (psi, dpsi) = if q.norm() == 0.0 {
        (psi0 + dpsi0 * l, dpsi0)
    } else {
        let (ch, sh) = ((q * l).cosh(), (q * l).sinh());
        (psi0 * ch + dpsi0 / q * sh, psi0 * q * sh + dpsi0 * ch)
    };
    let io = C::new(0.0, omega);
    let a = 0.5 * (psi + dpsi / io) * C::from_polar(1.0, -omega * l);
    let b = 0.5 * (psi - dpsi / io) * C::from_polar(1.0, omega * l);
    (a, b)
}

#[test]
fn square_well_and_barrier_coefficients() {
    let opts = ScatteringOptions::default();
    for (wv, l, omega) in [
        (0.5, 1.5, 1.2),
        (3.0, 1.0, 1.0),
        (-2.0, 2.0, 0.7),
        (1.0, 1.0, 1.0),
    ] {
        let w = move |x: f64| if (0.0..l).contains(&x) { wv } else { 0.0 };
        let (psi0, dpsi0) = (C::new(1.0, 0.2), C::new(-0.4, 0.5));
        let p = HalfLineProblem::new(omega, w, 0.0, psi0, dpsi0).unwrap();
        let c = volterra_coefficients(&p, l + 1.0, &opts).unwrap();
        let (a, b) = square_coefficients(wv, l, omega, psi0, dpsi0);
        let scale = a.norm().max(b.norm());
        assert!((c.a - a).norm() <= 1e-7 * scale, "W={wv}: {} vs {a}", c.a);
        assert!((c.b - b).norm() <= 1e-7 * scale, "W={wv}: {} vs {b}", c.b);
        assert_eq!(c.gronwall_violations, 0);
    }
}
