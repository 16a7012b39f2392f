//! Harmonic approximation, eigenvalue counting, Agmon estimates and large-ξ asymptotics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::{
    solve_potential, EigenPair, FiberPotential, Grid, Potential, SolverOptions, TridiagonalOperator,
};
use crate::field::{ExtendedReal, FieldKind, FieldProfile};
use crate::spectral::{ess_threshold, solve_slice, SliceOptions};

/// `(2n − 1)·h·v_θ` for `n = 1..=n_max`.
pub fn harmonic_levels(profile: &FieldProfile, theta: f64, h: f64, n_max: usize) -> Result<Vec<f64>> {
    let v = profile.effective_velocity(theta)?;
    Ok(oscillator_levels(v, h, n_max))
}

pub fn oscillator_levels(v: f64, h: f64, n_max: usize) -> Vec<f64> {
    (1..=n_max).map(|n| (2 * n - 1) as f64 * h * v).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicComparison {
    pub n: usize,
    pub h: f64,
    pub theta: f64,
    pub lambda: f64,
    pub harmonic: f64,
    /// `|λ_n − (2n−1)hv_θ| / ((2n−1)h)`.
    pub relative_error: f64,
    /// Discretization error estimate of `λ_n`.
    pub lambda_error: f64,
}

fn check_h(h: f64) -> Result<()> {
    if h > 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("h must be positive, got {h}")))
    }
}

fn check_below_threshold(profile: &FieldProfile, theta: f64, eta: f64) -> Result<()> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidArgument(format!("eta must be positive, got {eta}")));
    }
    let t = ess_threshold(profile, theta);
    if ExtendedReal::Finite(eta) >= t {
        return Err(Error::InvalidArgument(format!(
            "eta = {eta} is not below the essential threshold {t}"
        )));
    }
    Ok(())
}

/// Eigenvalues of `h²D² + V_θ` up to `η`, paired with the harmonic levels.
pub fn compare_harmonic(
    profile: &FieldProfile,
    theta: f64,
    h: f64,
    n_max: usize,
    eta: f64,
    opts: &SolverOptions,
) -> Result<Vec<HarmonicComparison>> {
    check_h(h)?;
    check_below_threshold(profile, theta, eta)?;
    let v = profile.effective_velocity(theta)?;
    let pot = FiberPotential::centered(profile, theta)?;
    let opts = relative_tolerance(opts, eta);
    let spectrum = solve_potential(&pot, h, eta, eta, n_max, &opts)?;
    Ok(spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.errors)
        .enumerate()
        .filter(|(_, (l, _))| **l <= eta)
        .map(|(k, (&lambda, &err))| {
            let n = k + 1;
            let harmonic = (2 * n - 1) as f64 * h * v;
            HarmonicComparison {
                n,
                h,
                theta,
                lambda,
                harmonic,
                relative_error: (lambda - harmonic).abs() / ((2 * n - 1) as f64 * h),
                lambda_error: err,
            }
        })
        .collect())
}

/// Bisection tolerance scaled to the energy window when none is configured.
pub fn relative_tolerance(opts: &SolverOptions, e: f64) -> SolverOptions {
    SolverOptions {
        tol_lambda: Some(opts.tol_lambda.unwrap_or(1e-10 * e.abs().clamp(1e-300, 1.0))),
        ..*opts
    }
}

/// Default window of `θ` values: the central 80% of the flux range when both
/// fluxes are finite, otherwise `θ ± 1` clipped to the range.
pub fn default_theta_window(profile: &FieldProfile, theta: f64) -> (f64, f64) {
    let (lo, hi) = profile.flux_limits();
    match (lo.finite(), hi.finite()) {
        (Some(a), Some(b)) => (a + 0.1 * (b - a), b - 0.1 * (b - a)),
        _ => {
            let l = lo
                .finite()
                .map_or(theta - 1.0, |a| (theta - 1.0).max(0.5 * (a + theta)));
            let r = hi
                .finite()
                .map_or(theta + 1.0, |b| (theta + 1.0).min(0.5 * (b + theta)));
            (l, r)
        }
    }
}

const WINDOW_SCAN: usize = 401;

/// `(min, max)` of `v_θ = b(x_θ)` over the window, by scan.
pub fn velocity_range(profile: &FieldProfile, window: (f64, f64)) -> Result<(f64, f64)> {
    let (a, b) = window;
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidArgument(format!("invalid theta window [{a}, {b}]")));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..WINDOW_SCAN {
        let t = a + (b - a) * i as f64 / (WINDOW_SCAN - 1) as f64;
        let v = profile.effective_velocity(t)?;
        lo = lo.min(v);
        hi = hi.max(v);
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingCheck {
    pub h: f64,
    pub eta: f64,
    pub v_plus: f64,
    pub n_computed: usize,
    /// `η / (4v₊h) − 1`.
    pub bound: f64,
    pub pass: bool,
    /// The bound is `≤ 0`, so the check holds trivially.
    pub vacuous: bool,
    /// `η·|ln h|⁶ > 1`: `η` lies outside the small-`η` regime of the bound.
    pub outside_regime: bool,
}

/// Sturm count of `h²D² + V` below `η` compared with `η/(4v₊h) − 1`.
pub fn counting_check_potential<P: Potential + ?Sized>(
    pot: &P,
    h: f64,
    eta: f64,
    v_plus: f64,
    opts: &SolverOptions,
) -> Result<CountingCheck> {
    check_h(h)?;
    if !(v_plus > 0.0) {
        return Err(Error::InvalidArgument("v_plus must be positive".into()));
    }
    let spectrum = solve_potential(pot, h, eta, eta, 1, opts)?;
    let n_computed = spectrum.operator.count_below(eta);
    let bound = eta / (4.0 * v_plus * h) - 1.0;
    Ok(CountingCheck {
        h,
        eta,
        v_plus,
        n_computed,
        bound,
        pass: n_computed as f64 >= bound,
        vacuous: bound <= 0.0,
        outside_regime: eta * h.ln().abs().powi(6) > 1.0,
    })
}

pub fn counting_check(
    profile: &FieldProfile,
    theta: f64,
    h: f64,
    eta: f64,
    window: Option<(f64, f64)>,
    opts: &SolverOptions,
) -> Result<CountingCheck> {
    check_below_threshold(profile, theta, eta)?;
    let window = window.unwrap_or_else(|| default_theta_window(profile, theta));
    let (_, v_plus) = velocity_range(profile, window)?;
    let pot = FiberPotential::centered(profile, theta)?;
    counting_check_potential(&pot, h, eta, v_plus, opts)
}

/// `Φ(s) = min(γ|s − center|/√λ, cap)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgmonWeight {
    pub gamma: f64,
    pub cap: f64,
    pub center: f64,
}

impl AgmonWeight {
    pub fn zero() -> Self {
        Self {
            gamma: 0.0,
            cap: 0.0,
            center: 0.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.cap.is_finite() && self.cap >= 0.0 && self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidArgument(
                "Agmon weight needs finite gamma >= 0 and a finite cap >= 0".into(),
            ));
        }
        Ok(())
    }

    fn phi(&self, s: f64, lambda: f64) -> (f64, f64) {
        let slope = self.gamma / lambda.sqrt();
        let raw = slope * (s - self.center).abs();
        if raw < self.cap {
            (raw, slope * (s - self.center).signum())
        } else {
            (self.cap, 0.0)
        }
    }
}

/// Discrete form of `∫|hD(e^Φψ)|² + ∫(V − h²Φ'² − λ)e^{2Φ}ψ²`, in absolute value.
/// With `Φ ≡ 0` it equals `|⟨Tψ, ψ⟩ − λ|` exactly.
pub fn agmon_identity_residual(
    t: &TridiagonalOperator,
    pair: &EigenPair,
    weight: &AgmonWeight,
) -> Result<f64> {
    weight.validate()?;
    let n = t.len();
    if pair.psi.len() != n {
        return Err(Error::InvalidArgument(
            "eigenvector length does not match operator".into(),
        ));
    }
    let dx = t.grid.spacing();
    let lambda = pair.lambda;
    let mut z = Vec::with_capacity(n);
    let mut potential_term = 0.0;
    let h2 = t.h * t.h;
    for (i, s) in t.grid.points().enumerate() {
        let (phi, dphi) = if weight.gamma == 0.0 || weight.cap == 0.0 {
            (0.0, 0.0)
        } else {
            weight.phi(s, lambda)
        };
        let zi = phi.exp() * pair.psi[i];
        potential_term += (t.potential[i] - h2 * dphi * dphi - lambda) * zi * zi * dx;
        z.push(zi);
    }
    let kinetic = h2 / dx;
    let mut kinetic_term = kinetic * (z[0] * z[0] + z[n - 1] * z[n - 1]);
    for w in z.windows(2) {
        kinetic_term += kinetic * (w[1] - w[0]).powi(2);
    }
    Ok((kinetic_term + potential_term).abs())
}

/// `Σ e^{2γ|s_i − c|/√λ} ψ_i² Δ / Σ ψ_i² Δ`, evaluated in log space.
pub fn weighted_mass_ratio(grid: &Grid, psi: &[f64], lambda: f64, gamma: f64, center: f64) -> f64 {
    if gamma == 0.0 {
        return 1.0;
    }
    let slope = 2.0 * gamma / lambda.sqrt();
    let logs: Vec<f64> = grid
        .points()
        .zip(psi)
        .filter(|(_, p)| **p != 0.0)
        .map(|(s, p)| slope * (s - center).abs() + 2.0 * p.abs().ln())
        .collect();
    let mass: f64 = psi.iter().map(|p| p * p).sum();
    let m = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = logs.iter().map(|l| (l - m).exp()).sum();
    (m + sum.ln() - mass.ln()).exp()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub spacings: Vec<f64>,
    pub residuals: Vec<f64>,
    /// `log₂` of successive residual ratios.
    pub orders: Vec<f64>,
}

impl RefinementStudy {
    pub fn min_order(&self) -> f64 {
        self.orders.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Agmon identity residual of the `n`-th eigenpair on `levels` grids, halving the spacing each time.
#[allow(clippy::too_many_arguments)]
pub fn agmon_refinement<P: Potential + ?Sized>(
    pot: &P,
    h: f64,
    e: f64,
    n: usize,
    gamma: f64,
    cap: f64,
    levels: usize,
    opts: &SolverOptions,
) -> Result<RefinementStudy> {
    check_h(h)?;
    if n == 0 || levels < 2 {
        return Err(Error::InvalidArgument(
            "need n >= 1 and at least two levels".into(),
        ));
    }
    let weight = AgmonWeight {
        gamma,
        cap,
        center: pot.center(),
    };
    let base = relative_tolerance(opts, e);
    let mut spacings = Vec::with_capacity(levels);
    let mut residuals = Vec::with_capacity(levels);
    for k in 0..levels {
        let mut o = base;
        o.domain.points_per_length *= (1u64 << k) as f64;
        o.domain.max_points = o.domain.max_points.max(1 << 22);
        let s = solve_potential(pot, h, e, e, n, &o)?;
        if s.fine.len() < n {
            return Err(Error::MissingEigenpair {
                band: n,
                xi: f64::NAN,
            });
        }
        let pair = s.eigenpair(n - 1)?;
        spacings.push(s.operator.grid.spacing());
        residuals.push(agmon_identity_residual(&s.operator, &pair, &weight)?);
    }
    let orders = residuals
        .windows(2)
        .zip(spacings.windows(2))
        .map(|(r, d)| (r[0] / r[1]).ln() / (d[0] / d[1]).ln())
        .collect();
    Ok(RefinementStudy {
        spacings,
        residuals,
        orders,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRate {
    pub energy: f64,
    pub kappa: f64,
    pub c_e: f64,
    pub v_minus: f64,
    /// `v₋√κ / 2`.
    pub gamma: f64,
}

const KAPPA_GRID: usize = 99;
const DECAY_SCAN: usize = 4001;

/// Largest `κ` on a grid with `V(s) ≥ min(c_E s², (1+2κ)E)` for some `c_E > 0`,
/// checked on `[center − half_width, center + half_width]` and against the tail limit.
pub fn decay_rate<P: Potential + ?Sized>(
    pot: &P,
    v_minus: f64,
    energy: f64,
    tail_limit: Option<f64>,
    half_width: f64,
) -> Result<DecayRate> {
    if !(energy > 0.0 && v_minus > 0.0 && half_width > 0.0) {
        return Err(Error::InvalidArgument(
            "decay rate needs positive energy, v_minus and scan width".into(),
        ));
    }
    let c = pot.center();
    let samples: Vec<(f64, f64)> = (0..DECAY_SCAN)
        .map(|i| {
            let s = -half_width + 2.0 * half_width * i as f64 / (DECAY_SCAN - 1) as f64;
            pot.value(c + s).map(|v| (s, v))
        })
        .collect::<Result<_>>()?;
    let mut best: Option<(f64, f64)> = None;
    for j in 1..=KAPPA_GRID {
        let kappa = j as f64 / (KAPPA_GRID + 1) as f64;
        let level = (1.0 + 2.0 * kappa) * energy;
        if tail_limit.is_some_and(|t| level >= t) {
            break;
        }
        let c_e = samples
            .iter()
            .filter(|(s, v)| *s != 0.0 && *v < level)
            .map(|(s, v)| v / (s * s))
            .fold(f64::INFINITY, f64::min);
        if c_e > 0.0 {
            best = Some((kappa, c_e));
        }
    }
    let (kappa, c_e) = best.ok_or_else(|| {
        Error::InvalidArgument(format!("no kappa satisfies the lower bound at E = {energy}"))
    })?;
    Ok(DecayRate {
        energy,
        kappa,
        c_e,
        v_minus,
        gamma: v_minus * kappa.sqrt() / 2.0,
    })
}

/// [`decay_rate`] for `V_θ` with `v₋` from the θ-window, energy `e` and the
/// essential threshold as tail limit.
pub fn profile_decay_rate(
    profile: &FieldProfile,
    theta: f64,
    e: f64,
    window: Option<(f64, f64)>,
) -> Result<DecayRate> {
    let window = window.unwrap_or_else(|| default_theta_window(profile, theta));
    let (v_minus, _) = velocity_range(profile, window)?;
    let pot = FiberPotential::centered(profile, theta)?;
    let tail = ess_threshold(profile, theta);
    let tail_limit = tail.finite();
    // scan past the region where V stays below the largest level tried
    let level = tail_limit.map_or(3.0 * e, |t| t.min(3.0 * e) * (1.0 - 1e-9));
    let half_width = match pot.allowed_interval(level)? {
        Some((l, r)) => 2.0 * (l - pot.center()).abs().max((r - pot.center()).abs()).max(1e-3),
        None => 10.0,
    };
    decay_rate(&pot, v_minus, e, tail_limit, half_width)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgmonDecay {
    pub n: usize,
    pub lambda: f64,
    pub gamma: f64,
    pub ratio: f64,
    /// Ratio on the domain with doubled margins.
    pub ratio_doubled: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Weighted-mass ratio of the `n`-th eigenfunction, on the planned domain and
/// on one with doubled margins; passes when both are below `bound` and agree within 2×.
pub fn agmon_decay_check<P: Potential + ?Sized>(
    pot: &P,
    h: f64,
    e: f64,
    n: usize,
    gamma: f64,
    bound: f64,
    opts: &SolverOptions,
) -> Result<AgmonDecay> {
    check_h(h)?;
    if n == 0 {
        return Err(Error::InvalidArgument("band index starts at 1".into()));
    }
    let opts = relative_tolerance(opts, e);
    let doubled = SolverOptions {
        domain: opts.domain.doubled_margin(),
        ..opts
    };
    let ratio_for = |o: &SolverOptions| -> Result<(f64, f64)> {
        let s = solve_potential(pot, h, e, e, n, o)?;
        if s.fine.len() < n {
            return Err(Error::MissingEigenpair {
                band: n,
                xi: f64::NAN,
            });
        }
        let pair = s.eigenpair(n - 1)?;
        Ok((
            pair.lambda,
            weighted_mass_ratio(&s.operator.grid, &pair.psi, pair.lambda, gamma, pot.center()),
        ))
    };
    let (lambda, ratio) = ratio_for(&opts)?;
    let (_, ratio_doubled) = ratio_for(&doubled)?;
    let stable = ratio.is_finite()
        && ratio_doubled.is_finite()
        && ratio.max(ratio_doubled) < 2.0 * ratio.min(ratio_doubled);
    Ok(AgmonDecay {
        n,
        lambda,
        gamma,
        ratio,
        ratio_doubled,
        bound,
        pass: stable && ratio <= bound && ratio_doubled <= bound,
    })
}

/// `V_ξ(s) = (1 − a(x_ξ(1+s))/ξ)²`, the fiber potential rescaled around the turning point.
#[derive(Debug, Clone)]
pub struct RescaledFiber<'a> {
    inner: FiberPotential<'a>,
    pub xi: f64,
    pub x_xi: f64,
    /// `(ξ x_ξ)⁻¹`.
    pub h_xi: f64,
    /// `x_ξ b(x_ξ) / ξ`.
    pub v_xi: f64,
}

impl<'a> RescaledFiber<'a> {
    pub fn new(profile: &'a FieldProfile, xi: f64) -> Result<Self> {
        let x_xi = profile.turning_point(xi)?;
        if !(xi > 0.0 && x_xi > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "rescaling needs xi > 0 with a positive turning point (xi = {xi}, x = {x_xi})"
            )));
        }
        let inner = FiberPotential::centered(profile, xi)?;
        let v_xi = x_xi * profile.eval_b(x_xi)? / xi;
        Ok(Self {
            inner,
            xi,
            x_xi,
            h_xi: 1.0 / (xi * x_xi),
            v_xi,
        })
    }

    /// Eigenvalues of `h_ξ²D² + V_ξ` below `e`, at most `k_max`.
    pub fn solve(&self, e: f64, k_max: usize, opts: &SolverOptions) -> Result<crate::fiber::FiberSpectrum> {
        let opts = relative_tolerance(opts, e);
        solve_potential(self, self.h_xi, e, e, k_max, &opts)
    }
}

impl Potential for RescaledFiber<'_> {
    fn value(&self, s: f64) -> Result<f64> {
        Ok(self.inner.value(self.x_xi * s)? / (self.xi * self.xi))
    }

    fn allowed_interval(&self, e: f64) -> Result<Option<(f64, f64)>> {
        Ok(self
            .inner
            .allowed_interval(e * self.xi * self.xi)?
            .map(|(l, r)| (l / self.x_xi, r / self.x_xi)))
    }

    fn center(&self) -> f64 {
        0.0
    }

    fn well_velocity(&self) -> Option<f64> {
        Some(self.v_xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandMethod {
    Direct,
    Rescaled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandValue {
    pub xi: f64,
    pub lambda: f64,
    pub error: f64,
    pub method: BandMethod,
}

/// Rescaling is used once `h_ξ` drops below this value.
pub const RESCALE_BELOW: f64 = 0.1;

/// `λ_n(ξ)` through the rescaled fiber when `h_ξ` is small, the direct fiber otherwise.
pub fn band_value(profile: &FieldProfile, xi: f64, n: usize, opts: &SliceOptions) -> Result<BandValue> {
    if n == 0 {
        return Err(Error::InvalidArgument("band index starts at 1".into()));
    }
    let rescaled = RescaledFiber::new(profile, xi)
        .ok()
        .filter(|r| r.h_xi < RESCALE_BELOW);
    match rescaled {
        Some(r) => rescaled_band_value(&r, n, &opts.solver),
        None => {
            let (slice, _) = solve_slice(profile, xi, n, opts)?;
            let lambda = *slice
                .eigenvalues
                .get(n - 1)
                .ok_or(Error::MissingEigenpair { band: n, xi })?;
            Ok(BandValue {
                xi,
                lambda,
                error: slice.errors[n - 1],
                method: BandMethod::Direct,
            })
        }
    }
}

/// `ξ²·λ̃_n` from the rescaled fiber.
pub fn rescaled_band_value(r: &RescaledFiber<'_>, n: usize, opts: &SolverOptions) -> Result<BandValue> {
    let mut e = 20.0 * (2 * n - 1) as f64 * r.h_xi * r.v_xi;
    for _ in 0..8 {
        let threshold = ess_threshold(r.inner.profile(), r.xi).to_f64() / (r.xi * r.xi);
        let cut = e.min(threshold * (1.0 - 1e-9));
        let s = r.solve(cut, n, opts)?;
        if s.eigenvalues.len() >= n {
            let k = n - 1;
            return Ok(BandValue {
                xi: r.xi,
                lambda: r.xi * r.xi * s.eigenvalues[k],
                error: r.xi * r.xi * s.errors[k],
                method: BandMethod::Rescaled,
            });
        }
        if cut < e {
            break;
        }
        e *= 2.0;
    }
    Err(Error::MissingEigenpair { band: n, xi: r.xi })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub n: usize,
    pub samples: Vec<BandValue>,
    pub slope: f64,
    pub coefficient: f64,
    pub target_slope: f64,
    pub target_coefficient: f64,
    /// Root-mean-square residual of the log-log regression.
    pub residual: f64,
}

/// Least-squares fit of `ln λ_n` against `ln ξ` for a power-law field.
pub fn asymptotic_fit(
    profile: &FieldProfile,
    n: usize,
    xis: &[f64],
    opts: &SliceOptions,
) -> Result<AsymptoticFit> {
    let (c1, alpha) = match profile.kind() {
        FieldKind::PowerLaw { c1, alpha, .. } => (*c1, *alpha),
        _ => {
            return Err(Error::InvalidArgument(
                "asymptotic fit requires a power-law profile".into(),
            ))
        }
    };
    if xis.len() < 2 || xis.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
        return Err(Error::InvalidArgument(
            "need at least two positive xi samples".into(),
        ));
    }
    let lo = xis.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xis.iter().copied().fold(0.0, f64::max);
    if hi / lo < 10.0 {
        return Err(Error::InsufficientRange { ratio: hi / lo });
    }
    use rayon::prelude::*;
    let samples: Vec<BandValue> = xis
        .par_iter()
        .map(|&xi| band_value(profile, xi, n, opts))
        .collect::<Result<_>>()?;
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.xi.ln(), s.lambda.ln())).collect();
    let (slope, intercept, residual) = least_squares(&pts);
    let c0 = c1 / (1.0 + alpha);
    let target_slope = alpha / (1.0 + alpha);
    Ok(AsymptoticFit {
        n,
        samples,
        slope,
        coefficient: intercept.exp(),
        target_slope,
        target_coefficient: (2 * n - 1) as f64 * c1 * c0.powf(-target_slope),
        residual,
    })
}

/// Ordinary least squares `y = slope·x + intercept`; returns the RMS residual too.
pub fn least_squares(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    (slope, intercept, (rss / m).sqrt())
}
