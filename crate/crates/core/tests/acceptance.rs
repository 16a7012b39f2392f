//! Acceptance criteria, one test per criterion. Each test prints a single
//! `criterion N: PASS|FAIL` line before asserting.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fiberband_core::fiber::{solve_potential, FiberPotential, QuadraticPotential, SolverOptions};
use fiberband_core::field::CoreModel;
use fiberband_core::scattering::{
    embedded_exclusion, solution_at, volterra_coefficients, wronskian, HalfLineProblem, ScatteringOptions,
};
use fiberband_core::semiclassical::{
    agmon_decay_check, agmon_identity_residual, agmon_refinement, asymptotic_fit, compare_harmonic,
    counting_check, decay_rate, profile_decay_rate, rescaled_band_value, AgmonWeight, RescaledFiber,
};
use fiberband_core::spectral::{
    band_derivative, exclusion_analysis, flatness_test, spectrum_slice, sweep_bands, Exclusion,
    FlatnessOptions, SliceOptions, Verdict,
};
use fiberband_core::FieldProfile;

fn verdict(n: usize, what: &str, pass: bool, detail: String, elapsed: Duration, limit: Duration) {
    let ok = pass && elapsed < limit;
    println!(
        "criterion {n}: {} - {what} ({detail}; {:.2}s of {}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert!(pass, "criterion {n} failed: {detail}");
    assert!(elapsed < limit, "criterion {n} exceeded its runtime limit");
}

#[test]
fn criterion_1_landau_levels() {
    let t = Instant::now();
    let p = FieldProfile::constant(1.0);
    let d = sweep_bands(&p, -3.0, 3.0, 25, 5, &SliceOptions::default()).unwrap();
    let mut worst: f64 = 0.0;
    let mut complete = d.samples.len() == 25;
    for s in &d.samples {
        let slice = s.slice.as_ref().expect("every Landau sample solves");
        complete &= slice.eigenvalues.len() >= 5;
        for n in 1..=5 {
            let l = slice.eigenvalues.get(n - 1).copied().unwrap_or(f64::NAN);
            worst = worst.max((l - (2 * n - 1) as f64).abs());
        }
    }
    let report = flatness_test(&d, 1.0, &FlatnessOptions::default()).unwrap();
    let flat: Vec<usize> = report
        .verdicts
        .iter()
        .filter(|v| v.verdict == Verdict::FlatWithinBudget)
        .filter_map(|v| v.band)
        .collect();
    let all_flat = (1..=5).all(|n| flat.contains(&n));
    verdict(
        1,
        "Landau levels",
        complete && worst <= 1e-6 && all_flat,
        format!("max |lambda_n - (2n-1)| = {worst:.2e}, flat bands {flat:?}"),
        t.elapsed(),
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_2_power_law_asymptotics() {
    let t = Instant::now();
    let xis: Vec<f64> = [2.0, 2.5, 3.0, 3.5, 4.0]
        .iter()
        .map(|d: &f64| 10f64.powf(*d))
        .collect();
    let opts = SliceOptions::default();
    let pure = FieldProfile::power_law(1.0, 1.0, CoreModel::Pure).unwrap();
    let f1 = asymptotic_fit(&pure, 1, &xis, &opts).unwrap();
    let f2 = asymptotic_fit(&pure, 2, &xis, &opts).unwrap();
    let soft = FieldProfile::power_law(1.0, -0.5, CoreModel::Smooth).unwrap();
    let f3 = asymptotic_fit(&soft, 1, &xis, &opts).unwrap();
    let sqrt2 = 2f64.sqrt();
    let ok1 = (f1.slope - 0.5).abs() <= 0.02 && (f1.coefficient / sqrt2 - 1.0).abs() <= 0.02;
    let ok2 = (f2.slope - 0.5).abs() <= 0.02 && (f2.coefficient / (3.0 * sqrt2) - 1.0).abs() <= 0.02;
    let ok3 = (f3.slope + 1.0).abs() <= 0.05;
    verdict(
        2,
        "power-law asymptotics",
        ok1 && ok2 && ok3,
        format!(
            "n=1 slope {:.5} coef {:.5}; n=2 slope {:.5} coef {:.5}; alpha=-1/2 slope {:.5}",
            f1.slope, f1.coefficient, f2.slope, f2.coefficient, f3.slope
        ),
        t.elapsed(),
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_3_harmonic_approximation() {
    let t = Instant::now();
    let g = FieldProfile::gaussian();
    let theta = 0.5;
    let eta = 0.25 * (1.0 - 1e-6);
    let v = g.effective_velocity(theta).unwrap();
    let hs = [0.1, 0.03, 0.01, 0.003];
    let opts = SolverOptions::default();
    let mut rel = vec![Vec::new(); 3];
    let mut lower_ok = true;
    for &h in &hs {
        let c = compare_harmonic(&g, theta, h, 3, eta, &opts).unwrap();
        assert!(c.len() >= 3, "three levels below eta at h = {h}");
        for (n, row) in c.iter().take(3).enumerate() {
            rel[n].push(row.relative_error);
        }
        lower_ok &= c[0].lambda >= h * v / 2.0 - c[0].lambda_error;
    }
    let decreasing = rel.iter().all(|r| r.windows(2).all(|w| w[1] < w[0]));
    let small = rel.iter().all(|r| r[3] <= 0.05);
    verdict(
        3,
        "harmonic approximation",
        decreasing && small && lower_ok,
        format!(
            "errors at h=0.003: {:.4}, {:.4}, {:.4}; lower bound {}",
            rel[0][3],
            rel[1][3],
            rel[2][3],
            if lower_ok { "holds" } else { "violated" }
        ),
        t.elapsed(),
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_4_counting_bound() {
    let t = Instant::now();
    let g = FieldProfile::gaussian();
    let c = counting_check(&g, 0.5, 0.001, 0.02, None, &SolverOptions::default()).unwrap();
    let expected = 0.02 / (4.0 * PI.powf(-0.5) * 0.001) - 1.0;
    let arithmetic = (c.bound - expected).abs() <= 1e-9 * expected && c.bound.ceil() == 8.0;
    verdict(
        4,
        "counting bound",
        arithmetic && c.n_computed >= 8 && c.pass && c.outside_regime,
        format!(
            "N = {}, bound {:.4} (ceil {}), outside regime flagged: {}",
            c.n_computed,
            c.bound,
            c.bound.ceil(),
            c.outside_regime
        ),
        t.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_5_flat_band_exclusion_above_quarter() {
    let t = Instant::now();
    let g = FieldProfile::gaussian();
    let mut lines = Vec::new();
    let mut ok = true;
    for lambda in [0.3, 0.5, 1.0] {
        let (rep, _) = exclusion_analysis(
            &g,
            lambda,
            6,
            &SliceOptions::default(),
            &FlatnessOptions::default(),
        )
        .unwrap();
        let unbounded: Vec<_> = rep.sigma.components.iter().filter(|c| !c.is_bounded()).collect();
        let diverged = unbounded.iter().all(|c| {
            rep.verdicts
                .iter()
                .any(|v| v.component == **c && v.verdict == Verdict::NonFlatByDivergence)
        });
        ok &= unbounded.len() == 2 && diverged && rep.excluded == Exclusion::Yes;
        lines.push(format!("lambda {lambda}: excluded {}", rep.excluded));
    }
    verdict(
        5,
        "no flat band above 1/4",
        ok,
        lines.join(", "),
        t.elapsed(),
        Duration::from_secs(30),
    );
}

#[test]
fn criterion_6_moderately_small_eigenvalues() {
    let t = Instant::now();
    let g = FieldProfile::gaussian();
    let h = 0.01;
    let e = 0.05;
    let opts = SolverOptions::default();
    let mut vals = Vec::new();
    for theta in [0.3_f64, 0.5] {
        let pot = FiberPotential::centered(&g, theta).unwrap();
        let s = solve_potential(&pot, h, e, e, 1, &opts).unwrap();
        let budget = 2.0 * s.errors[0] + opts.domain.epsilon_trunc + s.tol;
        vals.push((s.eigenvalues[0], budget, g.effective_velocity(theta).unwrap()));
    }
    let diff = (vals[0].0 - vals[1].0).abs();
    let budget = vals[0].1 + vals[1].1;
    verdict(
        6,
        "non-constant lowest eigenvalue",
        vals[0].2 != vals[1].2 && diff > 3.0 * budget,
        format!(
            "lambda_1(0.3) = {:.7}, lambda_1(0.5) = {:.7}, difference {diff:.3e}, budget {budget:.3e}",
            vals[0].0, vals[1].0
        ),
        t.elapsed(),
        Duration::from_secs(30),
    );
}

fn rayleigh_defect(op: &fiberband_core::fiber::TridiagonalOperator, psi: &[f64], lambda: f64) -> f64 {
    let n = psi.len();
    let mut q = 0.0;
    for i in 0..n {
        let mut y = op.diag[i] * psi[i];
        if i > 0 {
            y += op.offdiag[i - 1] * psi[i - 1];
        }
        if i + 1 < n {
            y += op.offdiag[i] * psi[i + 1];
        }
        q += y * psi[i];
    }
    (q * op.grid.spacing() - lambda).abs()
}

#[test]
fn criterion_7_agmon_checks() {
    let t = Instant::now();
    let opts = SolverOptions::default();
    let mut notes = Vec::new();
    let mut ok = true;

    // harmonic oracle
    let q = QuadraticPotential { v: 1.0 };
    let s = solve_potential(&q, 1.0, 3.0, 3.0, 1, &opts).unwrap();
    let pair = s.eigenpair(0).unwrap();
    let zero = agmon_identity_residual(&s.operator, &pair, &AgmonWeight::zero()).unwrap();
    let capped_zero = agmon_identity_residual(
        &s.operator,
        &pair,
        &AgmonWeight {
            gamma: 0.4,
            cap: 0.0,
            center: 0.0,
        },
    )
    .unwrap();
    let defect = rayleigh_defect(&s.operator, &pair.psi, pair.lambda);
    let eps = 64.0 * f64::EPSILON * s.operator.norm();
    ok &= (zero - defect).abs() <= eps && capped_zero == zero;
    let study = agmon_refinement(&q, 1.0, 3.0, 1, 0.4, 3.0, 3, &opts).unwrap();
    ok &= study.min_order() >= 1.0;
    notes.push(format!("harmonic order {:.2}", study.min_order()));
    let rate = decay_rate(&q, 1.0, 0.05, None, 1.0).unwrap();
    let d = agmon_decay_check(&q, 0.01, 0.05, 1, rate.gamma, 1e4, &opts).unwrap();
    ok &= d.pass;

    // Gaussian fibers
    let g = FieldProfile::gaussian();
    for theta in [0.3_f64, 0.5] {
        let threshold = theta.min(1.0 - theta).powi(2);
        let e = 0.5 * threshold;
        let pot = FiberPotential::centered(&g, theta).unwrap();
        let rate = profile_decay_rate(&g, theta, e, None).unwrap();
        for h in [0.1, 0.01] {
            let s = solve_potential(&pot, h, e, e, 1, &opts).unwrap();
            let pair = s.eigenpair(0).unwrap();
            let zero = agmon_identity_residual(&s.operator, &pair, &AgmonWeight::zero()).unwrap();
            let defect = rayleigh_defect(&s.operator, &pair.psi, pair.lambda);
            ok &= (zero - defect).abs() <= 64.0 * f64::EPSILON * s.operator.norm();

            let study = agmon_refinement(&pot, h, e, 1, rate.gamma, 3.0, 3, &opts).unwrap();
            ok &= study.min_order() >= 1.0;

            let d = agmon_decay_check(&pot, h, e, 1, rate.gamma, 1e4, &opts).unwrap();
            let gamma_neg = 2.0 * pair.lambda.sqrt() * (threshold - pair.lambda).sqrt() / h;
            let neg = agmon_decay_check(&pot, h, e, 1, gamma_neg, 1e4, &opts).unwrap();
            ok &= d.pass && !neg.pass;
            notes.push(format!(
                "theta {theta} h {h}: order {:.2}, ratio {:.3}, control ratio {:.1e}",
                study.min_order(),
                d.ratio,
                neg.ratio
            ));
        }
    }
    verdict(
        7,
        "Agmon identity and decay",
        ok,
        notes.join("; "),
        t.elapsed(),
        Duration::from_secs(60),
    );
}

/// `(a, b)` by fixed-step RK4 on `ψ'' = (w − ω²)ψ` and plane-wave matching at `x_m`.
fn rk4_match(w: &dyn Fn(f64) -> f64, omega: f64, psi0: f64, dpsi0: f64, x_m: f64, steps: usize) -> (C, C) {
    let f = |x: f64, y: [f64; 2]| [y[1], (w(x) - omega * omega) * y[0]];
    let dx = x_m / steps as f64;
    let mut y = [psi0, dpsi0];
    for i in 0..steps {
        let x = i as f64 * dx;
        let k1 = f(x, y);
        let k2 = f(x + dx / 2.0, [y[0] + dx / 2.0 * k1[0], y[1] + dx / 2.0 * k1[1]]);
        let k3 = f(x + dx / 2.0, [y[0] + dx / 2.0 * k2[0], y[1] + dx / 2.0 * k2[1]]);
        let k4 = f(x + dx, [y[0] + dx * k3[0], y[1] + dx * k3[1]]);
        for j in 0..2 {
            y[j] += dx / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    let i_om = C::new(0.0, omega);
    let (psi, dpsi) = (C::from(y[0]), C::from(y[1]));
    let a = 0.5 * (psi + dpsi / i_om) * C::from_polar(1.0, -omega * x_m);
    let b = 0.5 * (psi - dpsi / i_om) * C::from_polar(1.0, omega * x_m);
    (a, b)
}

#[test]
fn criterion_8_scattering_suite() {
    let t = Instant::now();
    let opts = ScatteringOptions::default();
    let mut ok = true;
    let mut violations = 0;

    let free = |psi0: C, dpsi0: C| HalfLineProblem::new(1.0, |_| 0.0, 0.0, psi0, dpsi0).unwrap();
    let c = volterra_coefficients(&free(C::new(1.0, 0.0), C::new(0.0, 1.0)), 10.0, &opts).unwrap();
    let free_err1 = (c.a - C::new(1.0, 0.0)).norm().max(c.b.norm());
    violations += c.gronwall_violations;
    let c = volterra_coefficients(&free(C::new(1.0, 0.0), C::new(0.0, 0.0)), 10.0, &opts).unwrap();
    let free_err2 = (c.a - C::new(0.5, 0.0))
        .norm()
        .max((c.b - C::new(0.5, 0.0)).norm());
    violations += c.gronwall_violations;
    ok &= free_err1 <= 1e-8 && free_err2 <= 1e-8;

    let bump = |x: f64| {
        if (0.0..2.0).contains(&x) {
            0.8 * (PI * x / 2.0).sin().powi(2)
        } else {
            0.0
        }
    };
    let p = HalfLineProblem::new(1.0, bump, 0.0, C::new(1.0, 0.0), C::new(0.3, 0.0)).unwrap();
    let c = volterra_coefficients(&p, 4.0, &opts).unwrap();
    violations += c.gronwall_violations;
    let (a, b) = rk4_match(&bump, 1.0, 1.0, 0.3, 2.0, 20_000);
    let bump_err = (c.a - a).norm().max((c.b - b).norm());
    ok &= bump_err <= 1e-6;

    let xs: Vec<f64> = (0..=40).map(|i| 0.5 * i as f64).collect();
    let mut w_drift: f64 = 0.0;
    for omega in [1.0, 0.0] {
        let p1 = HalfLineProblem::new(omega, bump, 0.0, C::new(1.0, 0.0), C::new(0.0, 0.0)).unwrap();
        let p2 = HalfLineProblem::new(omega, bump, 0.0, C::new(0.2, 0.1), C::new(1.0, -0.5)).unwrap();
        let u = solution_at(&p1, &xs, &opts).unwrap();
        let v = solution_at(&p2, &xs, &opts).unwrap();
        let w0 = wronskian(u[0].0, u[0].1, v[0].0, v[0].1);
        for (ui, vi) in u.iter().zip(&v) {
            w_drift = w_drift.max((wronskian(ui.0, ui.1, vi.0, vi.1) - w0).norm());
        }
    }
    ok &= w_drift <= 1e-8;

    let g = FieldProfile::gaussian();
    let r = embedded_exclusion(&g, 0.5, 0.3, &opts).unwrap();
    violations += r.coefficients.gronwall_violations;
    ok &= r.excluded && r.amplitude > r.threshold && violations == 0;
    verdict(
        8,
        "scattering suite",
        ok,
        format!(
            "free errors {free_err1:.1e}/{free_err2:.1e}, bump error {bump_err:.1e}, Wronskian drift {w_drift:.1e}, \
             amplitude {:.3} vs threshold {:.1e}, Gronwall violations {violations}",
            r.amplitude, r.threshold
        ),
        t.elapsed(),
        Duration::from_secs(30),
    );
}

fn band_point(p: &FieldProfile, xi: f64, n: usize, o: &SliceOptions) -> (f64, f64, f64) {
    let s = spectrum_slice(p, xi, n, o).unwrap();
    (
        s.eigenvalues[n - 1],
        s.errors[n - 1],
        o.solver.tolerance(s.energy_cut),
    )
}

#[test]
fn criterion_9_cross_module_consistency() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let pl = FieldProfile::power_law(1.0, 1.0, CoreModel::Pure).unwrap();
    let opts = SliceOptions::default();

    let mut rescale_ok = true;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..10 {
        let xi = 10f64.powf(rng.random_range(1.5..3.0));
        let n = rng.random_range(1..=2);
        let (direct, err_d, tol_d) = band_point(&pl, xi, n, &opts);
        let r = RescaledFiber::new(&pl, xi).unwrap();
        let resc = rescaled_band_value(&r, n, &opts.solver).unwrap();
        let tol = err_d + resc.error + tol_d + xi * xi * opts.solver.tolerance(resc.lambda / (xi * xi));
        let diff = (direct - resc.lambda).abs();
        worst_ratio = worst_ratio.max(diff / tol);
        rescale_ok &= diff <= tol;
    }

    let profiles: Vec<(FieldProfile, f64, (f64, f64), usize)> = vec![
        (FieldProfile::constant(1.0), 1.0, (-3.0, 3.0), 3),
        (pl.clone(), 1.0, (2.0, 20.0), 3),
        (
            FieldProfile::step_like(0.5, 2.0, 1.0).unwrap(),
            1.0,
            (-2.0, 2.0),
            2,
        ),
        (FieldProfile::gaussian(), 0.05, (0.3, 0.7), 1),
    ];
    let mut fh_ok = true;
    let mut worst_fh: f64 = 0.0;
    for _ in 0..20 {
        let (p, h, (lo, hi), n_max) = &profiles[rng.random_range(0..profiles.len())];
        let xi = rng.random_range(*lo..*hi);
        let n = rng.random_range(1..=*n_max);
        let o = SliceOptions {
            h: *h,
            ..Default::default()
        };
        let mut o2 = o;
        o2.solver.domain.points_per_length *= 2.0;
        let fh = band_derivative(p, xi, n, &o).unwrap();
        let fh2 = band_derivative(p, xi, n, &o2).unwrap();
        let delta = 1e-3;
        let fd = |d: f64| {
            let (lp, _, tp) = band_point(p, xi + d, n, &o);
            let (lm, _, tm) = band_point(p, xi - d, n, &o);
            ((lp - lm) / (2.0 * d), tp + tm)
        };
        let (fd1, noise1) = fd(delta);
        let (fd2, _) = fd(delta / 2.0);
        // C(δ² + Δ²), both constants from Richardson differences
        let budget = 2.0 * (4.0 / 3.0) * ((fd1 - fd2).abs() + (fh - fh2).abs()) + 2.0 * noise1 / delta;
        let diff = (fh - fd1).abs();
        worst_fh = worst_fh.max(diff / budget);
        fh_ok &= diff <= budget;
    }
    verdict(
        9,
        "cross-module consistency",
        rescale_ok && fh_ok,
        format!(
            "rescaling worst diff/tol {worst_ratio:.2e}; Feynman-Hellmann worst diff/budget {worst_fh:.2}"
        ),
        t.elapsed(),
        Duration::from_secs(120),
    );
}
