//! Jost asymptotics of half-line solutions of `−ψ'' − ω²ψ + wψ = 0` and
//! exclusion of embedded fiber eigenvalues.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Side};
use crate::fiber::{FiberPotential, Potential};
use crate::field::{ExtendedReal, FieldProfile};
use crate::quadrature::adaptive_simpson;
use crate::spectral::ess_threshold;

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScatteringOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Required `∫_{x_cut}^∞ ‖M‖` when the cut is chosen automatically.
    pub tail_tol: f64,
    /// `|w|` below this marks the numerical horizon of the tail.
    pub horizon_tol: f64,
    pub max_steps: usize,
    /// Amplitudes must exceed this multiple of `(rtol + tail bound)`.
    pub exclusion_factor: f64,
}

impl Default for ScatteringOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-14,
            tail_tol: 1e-10,
            horizon_tol: 1e-14,
            max_steps: 2_000_000,
            exclusion_factor: 1e3,
        }
    }
}

impl ScatteringOptions {
    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        if !(pos(self.rtol)
            && pos(self.atol)
            && pos(self.tail_tol)
            && pos(self.horizon_tol)
            && pos(self.exclusion_factor))
            || self.max_steps == 0
        {
            return Err(Error::InvalidArgument(
                "scattering tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// `−ψ'' − ω²ψ + wψ = 0` on `[x_start, ∞)` with data `(ψ, ψ')` at `x_start`.
pub struct HalfLineProblem<'a> {
    pub omega: f64,
    pub w: Box<dyn Fn(f64) -> f64 + Sync + 'a>,
    pub x_start: f64,
    pub psi0: C,
    pub dpsi0: C,
}

impl<'a> HalfLineProblem<'a> {
    pub fn new<F>(omega: f64, w: F, x_start: f64, psi0: C, dpsi0: C) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Sync + 'a,
    {
        if !(omega >= 0.0 && omega.is_finite() && x_start.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need finite omega >= 0 and x_start, got omega = {omega}, x_start = {x_start}"
            )));
        }
        Ok(Self {
            omega,
            w: Box::new(w),
            x_start,
            psi0,
            dpsi0,
        })
    }

    fn with_data(&self, psi0: C, dpsi0: C) -> HalfLineProblem<'_> {
        HalfLineProblem {
            omega: self.omega,
            w: Box::new(|x| (self.w)(x)),
            x_start: self.x_start,
            psi0,
            dpsi0,
        }
    }

    /// `‖M(x)‖`: `|w|/ω` for `ω > 0`, `|w|(1 + x²)` for `ω = 0`.
    fn m_norm(&self, x: f64) -> f64 {
        let w = (self.w)(x).abs();
        if self.omega > 0.0 {
            w / self.omega
        } else {
            w * (1.0 + x * x)
        }
    }

    /// Amplitudes `A` at `x` from solution data.
    fn amplitudes_of(&self, x: f64, psi: C, dpsi: C) -> [C; 2] {
        let om = self.omega;
        if om > 0.0 {
            let i_om = C::new(0.0, om);
            let v1 = 0.5 * (psi + dpsi / i_om);
            let v2 = 0.5 * (psi - dpsi / i_om);
            [v1 * C::from_polar(1.0, -om * x), v2 * C::from_polar(1.0, om * x)]
        } else {
            [psi - x * dpsi, dpsi]
        }
    }

    /// `(ψ, ψ')` at `x` from amplitudes.
    fn solution_of(&self, x: f64, a: [C; 2]) -> (C, C) {
        let om = self.omega;
        if om > 0.0 {
            let v1 = a[0] * C::from_polar(1.0, om * x);
            let v2 = a[1] * C::from_polar(1.0, -om * x);
            (v1 + v2, C::new(0.0, om) * (v1 - v2))
        } else {
            (a[0] + x * a[1], a[1])
        }
    }

    fn rhs(&self, x: f64, y: &[f64; 5]) -> [f64; 5] {
        let a1 = C::new(y[0], y[1]);
        let a2 = C::new(y[2], y[3]);
        let w = (self.w)(x);
        let (d1, d2, g) = if self.omega > 0.0 {
            let om = self.omega;
            let c = C::new(0.0, -w / (2.0 * om));
            let e = C::from_polar(1.0, 2.0 * om * x);
            (c * (a1 + e.conj() * a2), -c * (e * a1 + a2), w.abs() / om)
        } else {
            (
                C::from(w) * (-x * a1 - x * x * a2),
                C::from(w) * (a1 + x * a2),
                w.abs() * (1.0 + x * x),
            )
        };
        [d1.re, d1.im, d2.re, d2.im, g]
    }
}

/// `u₁u₂' − u₁'u₂`.
pub fn wronskian(u1: C, du1: C, u2: C, du2: C) -> C {
    u1 * du2 - du1 * u2
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JostCoefficients {
    pub a: C,
    pub b: C,
    pub omega: f64,
    pub x_cut: f64,
    /// Bound `‖A(x_cut)‖·e^T(e^T − 1)`, `T = ∫_{x_cut}^∞ ‖M‖`, on the change of `(a, b)` beyond `x_cut`.
    pub tail_bound: f64,
    /// `‖A(x_start)‖`, the size of the initial data in amplitude form.
    pub initial_norm: f64,
    pub steps: usize,
    pub gronwall_violations: usize,
}

impl JostCoefficients {
    pub fn amplitude_sq(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr()
    }
}

/// Step-by-step integration of the amplitude system with a Gronwall audit.
pub struct VolterraIntegrator<'p, 'a> {
    problem: &'p HalfLineProblem<'a>,
    opts: ScatteringOptions,
    x: f64,
    y: [f64; 5],
    step: f64,
    initial_norm: f64,
    pub steps: usize,
    pub gronwall_violations: usize,
    /// Largest `‖A‖` seen at an accepted step.
    pub sup_norm: f64,
}

impl<'p, 'a> VolterraIntegrator<'p, 'a> {
    pub fn new(problem: &'p HalfLineProblem<'a>, opts: &ScatteringOptions) -> Result<Self> {
        opts.validate()?;
        let a = problem.amplitudes_of(problem.x_start, problem.psi0, problem.dpsi0);
        let y = [a[0].re, a[0].im, a[1].re, a[1].im, 0.0];
        let initial_norm = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
        let scale = if problem.omega > 0.0 {
            0.1 / problem.omega
        } else {
            0.1
        };
        Ok(Self {
            problem,
            opts: *opts,
            x: problem.x_start,
            y,
            step: scale.min(0.1),
            initial_norm,
            steps: 0,
            gronwall_violations: 0,
            sup_norm: initial_norm,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn amplitudes(&self) -> [C; 2] {
        [C::new(self.y[0], self.y[1]), C::new(self.y[2], self.y[3])]
    }

    pub fn solution(&self) -> (C, C) {
        self.problem.solution_of(self.x, self.amplitudes())
    }

    /// `∫_{x_start}^{x} ‖M‖` accumulated along the integration.
    pub fn m_integral(&self) -> f64 {
        self.y[4]
    }

    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        let p = self.problem;
        let opts = self.opts;
        let f = |x: f64, y: &[f64; 5]| p.rhs(x, y);
        while self.x < target {
            if self.steps >= opts.max_steps {
                return Err(Error::IntegrationFailed(format!(
                    "step limit {} reached at x = {}",
                    opts.max_steps, self.x
                )));
            }
            let h = self.step.min(target - self.x);
            let (y_new, err) = dopri_step(&f, self.x, &self.y, h);
            let mut ratio: f64 = 0.0;
            for i in 0..4 {
                let sc = opts.atol + opts.rtol * self.y[i].abs().max(y_new[i].abs()).max(self.initial_norm);
                ratio = ratio.max((err[i] / sc).abs());
            }
            if !ratio.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
                self.step *= 0.25;
                if self.step < 1e-14 * (1.0 + self.x.abs()) {
                    return Err(Error::IntegrationFailed(format!(
                        "non-finite state near x = {}",
                        self.x
                    )));
                }
                continue;
            }
            if ratio <= 1.0 {
                self.x = if h == target - self.x { target } else { self.x + h };
                self.y = y_new;
                self.steps += 1;
                let a = self.amplitudes();
                let norm = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
                self.sup_norm = self.sup_norm.max(norm);
                let gronwall = self.initial_norm * self.y[4].exp();
                if norm > gronwall * (1.0 + 100.0 * opts.rtol) + opts.atol {
                    self.gronwall_violations += 1;
                }
            }
            let factor = if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
            self.step = h * factor;
            if self.step < 1e-14 * (1.0 + self.x.abs()) {
                return Err(Error::IntegrationFailed(format!(
                    "step size underflow at x = {}",
                    self.x
                )));
            }
        }
        Ok(())
    }
}

// Dormand–Prince 5(4) tableau
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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand–Prince step; returns the 5th-order solution and the embedded error.
fn dopri_step<const N: usize, F>(f: &F, x: f64, y: &[f64; N], h: f64) -> ([f64; N], [f64; N])
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let comb = |terms: &[(f64, &[f64; N])]| -> [f64; N] {
        let mut out = *y;
        for (c, k) in terms {
            for i in 0..N {
                out[i] += h * c * k[i];
            }
        }
        out
    };
    let k1 = f(x, y);
    let k2 = f(x + C2 * h, &comb(&[(A21, &k1)]));
    let k3 = f(x + C3 * h, &comb(&[(A31, &k1), (A32, &k2)]));
    let k4 = f(x + C4 * h, &comb(&[(A41, &k1), (A42, &k2), (A43, &k3)]));
    let k5 = f(
        x + C5 * h,
        &comb(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = f(
        x + h,
        &comb(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
    );
    let y5 = comb(&[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
    let k7 = f(x + h, &y5);
    let mut err = [0.0; N];
    for i in 0..N {
        err[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    (y5, err)
}

/// Adaptive integration of `y' = f(x, y)` from `x0` to `x1` (either direction).
pub fn integrate_ode<const N: usize, F>(
    f: F,
    x0: f64,
    y0: [f64; N],
    x1: f64,
    rtol: f64,
    atol: f64,
    max_steps: usize,
) -> Result<[f64; N]>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = y0;
    let mut h = (0.01 * span).max(1e-6);
    let mut steps = 0;
    while dir * (x1 - x) > 0.0 {
        if steps >= max_steps {
            return Err(Error::IntegrationFailed(format!("step limit reached at x = {x}")));
        }
        let step = h.min(dir * (x1 - x));
        let (yn, err) = dopri_step(&f, x, &y, dir * step);
        let mut ratio: f64 = 0.0;
        for i in 0..N {
            let sc = atol + rtol * y[i].abs().max(yn[i].abs());
            ratio = ratio.max((err[i] / sc).abs());
        }
        if !ratio.is_finite() {
            return Err(Error::IntegrationFailed(format!("non-finite state near x = {x}")));
        }
        if ratio <= 1.0 {
            x = if step == dir * (x1 - x) {
                x1
            } else {
                x + dir * step
            };
            y = yn;
            steps += 1;
        }
        h = step
            * if ratio == 0.0 {
                5.0
            } else {
                (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
            };
        if h < 1e-14 * (1.0 + x.abs()) {
            return Err(Error::IntegrationFailed(format!(
                "step size underflow at x = {x}"
            )));
        }
    }
    Ok(y)
}

/// `(∫_{from}^{X} g, X)` where `X` is the first dyadic horizon with `|w| < horizon_tol`.
fn tail_integral<W, G>(w: &W, g: &G, from: f64, horizon_tol: f64) -> Result<(f64, f64)>
where
    W: Fn(f64) -> f64 + ?Sized,
    G: Fn(f64) -> f64,
{
    let small = |x: f64| {
        [1.0, 1.25, 1.5, 2.0]
            .iter()
            .all(|k| w(from + k * (x - from)).abs() < horizon_tol)
    };
    let mut len = 1.0;
    while !small(from + len) {
        len *= 2.0;
        if len > 1e9 {
            return Err(Error::NotIntegrable(format!(
                "|w| stays above {horizon_tol:e} beyond x = {}",
                from + 1e9
            )));
        }
    }
    let horizon = from + 2.0 * len;
    let mut total = 0.0;
    let mut a = from;
    let mut piece = 1.0f64.min(horizon - from);
    while a < horizon {
        let b = (a + piece).min(horizon);
        total += adaptive_simpson(g, a, b, 1e-10, horizon_tol * (b - a))?;
        a = b;
        piece *= 2.0;
    }
    Ok((total, horizon))
}

/// Smallest `x_start + 2^k` whose tail `∫‖M‖` is below `tail_tol`.
pub fn auto_cut(p: &HalfLineProblem<'_>, opts: &ScatteringOptions) -> Result<f64> {
    let (_, horizon) = tail_integral(&*p.w, &|x| p.m_norm(x), p.x_start, opts.horizon_tol)?;
    let mut len = 1.0;
    loop {
        let cut = p.x_start + len;
        if cut >= horizon {
            return Ok(horizon);
        }
        let (t, _) = tail_integral(&*p.w, &|x| p.m_norm(x), cut, opts.horizon_tol)?;
        if t <= opts.tail_tol {
            return Ok(cut);
        }
        len *= 2.0;
    }
}

/// Integrates to `x_cut` and reads off `(a, b)` with `ψ ≈ a e^{iωx} + b e^{−iωx}`
/// (`ψ ≈ a + bx` when `ω = 0`).
pub fn volterra_coefficients(
    p: &HalfLineProblem<'_>,
    x_cut: f64,
    opts: &ScatteringOptions,
) -> Result<JostCoefficients> {
    if !(x_cut >= p.x_start) {
        return Err(Error::InvalidArgument(format!(
            "x_cut = {x_cut} precedes x_start = {}",
            p.x_start
        )));
    }
    let (tail, _) = tail_integral(&*p.w, &|x| p.m_norm(x), x_cut, opts.horizon_tol)?;
    if tail > opts.tail_tol {
        return Err(Error::NotIntegrable(format!(
            "tail integral {tail:e} beyond x_cut = {x_cut} exceeds {:e}",
            opts.tail_tol
        )));
    }
    let mut it = VolterraIntegrator::new(p, opts)?;
    it.advance_to(x_cut)?;
    let a = it.amplitudes();
    let norm = (a[0].norm_sqr() + a[1].norm_sqr()).sqrt();
    let tb = norm * tail.exp() * tail.exp_m1();
    Ok(JostCoefficients {
        a: a[0],
        b: a[1],
        omega: p.omega,
        x_cut,
        tail_bound: tb,
        initial_norm: it.initial_norm,
        steps: it.steps,
        gronwall_violations: it.gronwall_violations,
    })
}

/// Solution values `(ψ, ψ')` at increasing points `xs ≥ x_start`.
pub fn solution_at(p: &HalfLineProblem<'_>, xs: &[f64], opts: &ScatteringOptions) -> Result<Vec<(C, C)>> {
    let mut it = VolterraIntegrator::new(p, opts)?;
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        if x < it.x() {
            return Err(Error::InvalidArgument(
                "points must be increasing and >= x_start".into(),
            ));
        }
        it.advance_to(x)?;
        out.push(it.solution());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartKind {
    /// The solution decaying into the forbidden region on the opposite side.
    DecayingSolution,
    /// Both basis solutions from an interior point; the smallest singular
    /// value of their coefficient matrix bounds every solution.
    Basis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddedExclusion {
    pub xi: f64,
    pub lambda: f64,
    pub excluded: bool,
    pub side: Side,
    pub omega: f64,
    pub start: StartKind,
    pub coefficients: JostCoefficients,
    /// Normalized squared amplitude (the squared smallest singular value for a basis start).
    pub amplitude: f64,
    pub threshold: f64,
    /// `∫|w|` over the side, up to the horizon.
    pub w_l1: f64,
    pub horizon: f64,
}

/// Certifies that `λ ≥ ess_threshold(ξ)` is not an eigenvalue of `L_ξ`.
pub fn embedded_exclusion(
    profile: &FieldProfile,
    xi: f64,
    lambda: f64,
    opts: &ScatteringOptions,
) -> Result<EmbeddedExclusion> {
    opts.validate()?;
    let threshold = ess_threshold(profile, xi);
    if ExtendedReal::Finite(lambda) < threshold || !lambda.is_finite() {
        return Err(Error::NotEmbedded { lambda, threshold });
    }
    let (lo, hi) = profile.flux_limits();
    let side_level = |phi: ExtendedReal| phi.finite().map(|p| (xi - p).powi(2));
    let (side, level, other) = match (side_level(hi), side_level(lo)) {
        (Some(l), other) if lambda >= l => (Side::Right, l, other),
        (other, Some(l)) if lambda >= l => (Side::Left, l, other),
        _ => return Err(Error::NotEmbedded { lambda, threshold }),
    };
    let omega = (lambda - level).max(0.0).sqrt();
    let pot = FiberPotential::new(profile, xi)?;
    let origin = pot.center();
    let (dir, phi) = match side {
        Side::Right => (1.0, hi),
        Side::Left => (-1.0, lo),
    };
    let phi = phi.finite().unwrap_or(f64::NAN);
    // half-line coordinate t ≥ 0 with x = origin + dir·t; factored to avoid cancellation
    let w = |t: f64| {
        profile
            .eval_a(origin + dir * t)
            .map_or(f64::NAN, |a| (phi - a) * (2.0 * xi - a - phi))
    };
    let (w_l1, horizon) = tail_integral(&w, &|t| w(t).abs(), 0.0, opts.horizon_tol)?;
    if !w_l1.is_finite() {
        return Err(Error::NotIntegrable("non-finite integral of |w|".into()));
    }

    let other_forbidden = match other {
        None => true,
        Some(l) => lambda < l,
    };
    let problem = HalfLineProblem::new(omega, w, 0.0, C::new(1.0, 0.0), C::new(0.0, 0.0))?;
    let cut = auto_cut(&problem, opts)?;

    if other_forbidden {
        let (psi, dpsi) = decaying_data(&pot, origin, -dir, lambda, opts)?;
        // derivative in t is dir·ψ'(x)
        let p = problem.with_data(C::from(psi), C::from(dir * dpsi));
        let coeff = volterra_coefficients(&p, cut, opts)?;
        let n0 = coeff.initial_norm.powi(2);
        let amplitude = coeff.amplitude_sq() / n0;
        let threshold = opts.exclusion_factor * (opts.rtol + coeff.tail_bound / coeff.initial_norm);
        Ok(EmbeddedExclusion {
            xi,
            lambda,
            excluded: amplitude > threshold,
            side,
            omega,
            start: StartKind::DecayingSolution,
            coefficients: coeff,
            amplitude,
            threshold,
            w_l1,
            horizon,
        })
    } else {
        let p1 = problem.with_data(C::new(1.0, 0.0), C::new(0.0, 0.0));
        let p2 = problem.with_data(C::new(0.0, 0.0), C::new(1.0, 0.0));
        let c1 = volterra_coefficients(&p1, cut, opts)?;
        let c2 = volterra_coefficients(&p2, cut, opts)?;
        // map from initial data (ψ, ψ') to (a, b), and from data to A(0)
        let coeff = [[c1.a, c2.a], [c1.b, c2.b]];
        let init = [
            problem.amplitudes_of(0.0, C::new(1.0, 0.0), C::new(0.0, 0.0)),
            problem.amplitudes_of(0.0, C::new(0.0, 0.0), C::new(1.0, 0.0)),
        ];
        let init = [[init[0][0], init[1][0]], [init[0][1], init[1][1]]];
        // compare (a, b) with A(0) over all data: σ_min(coeff·init⁻¹)²
        let ratio = mul2(&coeff, &inv2(&init)?);
        let smin = sigma_min2(&ratio);
        let tail = c1.tail_bound.max(c2.tail_bound) / c1.initial_norm.min(c2.initial_norm);
        let amplitude = smin * smin;
        let threshold = opts.exclusion_factor * (opts.rtol + tail);
        Ok(EmbeddedExclusion {
            xi,
            lambda,
            excluded: amplitude > threshold,
            side,
            omega,
            start: StartKind::Basis,
            coefficients: c1,
            amplitude,
            threshold,
            w_l1,
            horizon,
        })
    }
}

/// `(ψ, ψ')` at `origin` of the solution decaying into the forbidden side `dir`.
fn decaying_data(
    pot: &FiberPotential<'_>,
    origin: f64,
    dir: f64,
    lambda: f64,
    opts: &ScatteringOptions,
) -> Result<(f64, f64)> {
    // march outward until the accumulated decay action is large
    let mut t = 0.0;
    let mut action = 0.0;
    let step = 0.05;
    while action < 40.0 {
        let v = pot.value(origin + dir * (t + 0.5 * step))?;
        action += (v - lambda).max(0.0).sqrt() * step;
        t += step;
        if t > 1e6 {
            return Err(Error::IntegrationFailed(
                "no forbidden region found on the opposite side".into(),
            ));
        }
    }
    let x_deep = origin + dir * t;
    let k = (pot.value(x_deep)? - lambda).max(0.0).sqrt();
    // decaying away from the origin: ψ' = −dir·k·ψ
    let y0 = [1e-12, -dir * k * 1e-12];
    let f = |x: f64, y: &[f64; 2]| -> [f64; 2] {
        let v = pot.value(x).unwrap_or(f64::NAN);
        [y[1], (v - lambda) * y[0]]
    };
    let y = integrate_ode(f, x_deep, y0, origin, opts.rtol, 1e-300, opts.max_steps)?;
    let norm = y[0].hypot(y[1]);
    Ok((y[0] / norm, y[1] / norm))
}

fn mul2(a: &[[C; 2]; 2], b: &[[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn inv2(m: &[[C; 2]; 2]) -> Result<[[C; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.norm() == 0.0 {
        return Err(Error::InvalidArgument("singular amplitude map".into()));
    }
    Ok([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]])
}

/// Smallest singular value of a complex 2×2 matrix.
fn sigma_min2(m: &[[C; 2]; 2]) -> f64 {
    let fro: f64 = m.iter().flatten().map(|z| z.norm_sqr()).sum();
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).norm();
    // σ₁² + σ₂² = ‖m‖_F², σ₁σ₂ = |det|
    let disc = (fro * fro - 4.0 * det * det).max(0.0).sqrt();
    let small = 2.0 * det * det / (fro + disc);
    small.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(omega: f64, psi0: C, dpsi0: C) -> HalfLineProblem<'static> {
        HalfLineProblem::new(omega, |_| 0.0, 0.0, psi0, dpsi0).unwrap()
    }

    #[test]
    fn free_plane_wave() {
        let opts = ScatteringOptions::default();
        let p = free(1.0, C::new(1.0, 0.0), C::new(0.0, 1.0));
        let c = volterra_coefficients(&p, 5.0, &opts).unwrap();
        assert!((c.a - C::new(1.0, 0.0)).norm() < 1e-12);
        assert!(c.b.norm() < 1e-12);
        let p = free(1.0, C::new(1.0, 0.0), C::new(0.0, 0.0));
        let c = volterra_coefficients(&p, 5.0, &opts).unwrap();
        assert!((c.a - C::new(0.5, 0.0)).norm() < 1e-12);
        assert!((c.b - C::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn zero_frequency_linear_growth() {
        let p = free(0.0, C::new(2.0, 0.0), C::new(-1.0, 0.0));
        let c = volterra_coefficients(&p, 3.0, &ScatteringOptions::default()).unwrap();
        assert!((c.a - C::new(2.0, 0.0)).norm() < 1e-12);
        assert!((c.b - C::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn wronskian_examples() {
        let (om, x) = (2.0f64, 0.37f64);
        let w = wronskian(
            C::from((om * x).sin()),
            C::from(om * (om * x).cos()),
            C::from((om * x).cos()),
            C::from(-om * (om * x).sin()),
        );
        assert!((w - C::from(-2.0)).norm() < 1e-14);
        let u = C::new(0.3, 0.1);
        let du = C::new(-1.0, 2.0);
        assert_eq!(wronskian(u, du, 3.0 * u, 3.0 * du), C::new(0.0, 0.0));
    }

    #[test]
    fn sigma_min_of_diagonal() {
        let m = [[C::from(3.0), C::from(0.0)], [C::from(0.0), C::from(0.5)]];
        assert!((sigma_min2(&m) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn integrate_ode_exponential() {
        let y = integrate_ode(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], -2.0, 1e-11, 1e-14, 10_000).unwrap();
        assert!((y[0] - (-2f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn not_embedded_below_threshold() {
        let g = FieldProfile::gaussian();
        assert!(matches!(
            embedded_exclusion(&g, 0.5, 0.2, &ScatteringOptions::default()),
            Err(Error::NotEmbedded { .. })
        ));
    }
}
