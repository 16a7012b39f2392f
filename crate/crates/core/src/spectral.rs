//! Essential thresholds, band sweeps and the flat-band criterion.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::{solve_potential, FiberPotential, FiberSpectrum, Grid, SolverOptions};
use crate::field::{ExtendedReal, FieldProfile};

/// Bottom of the essential spectrum of `L_ξ`: `min((ξ − φ₋)², (ξ − φ₊)²)` over finite fluxes.
pub fn ess_threshold(profile: &FieldProfile, xi: f64) -> ExtendedReal {
    let (lo, hi) = profile.flux_limits();
    [lo, hi]
        .iter()
        .filter_map(|p| p.finite())
        .map(|p| (xi - p).powi(2))
        .fold(ExtendedReal::PosInf, |acc, v| {
            if ExtendedReal::Finite(v) < acc {
                ExtendedReal::Finite(v)
            } else {
                acc
            }
        })
}

/// Open interval with possibly infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: ExtendedReal,
    pub hi: ExtendedReal,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo < ExtendedReal::Finite(x) && ExtendedReal::Finite(x) < self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// `Σ_λ = {ξ : λ < ess_threshold(ξ)}` as ordered disjoint open intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaSet {
    pub lambda: f64,
    pub components: Vec<Interval>,
}

impl SigmaSet {
    pub fn component_of(&self, xi: f64) -> Option<usize> {
        self.components.iter().position(|c| c.contains(xi))
    }
}

pub fn sigma_lambda(profile: &FieldProfile, lambda: f64) -> Result<SigmaSet> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "lambda must be finite and >= 0, got {lambda}"
        )));
    }
    let (lo, hi) = profile.flux_limits();
    let r = lambda.sqrt();
    let mut excluded: Vec<(f64, f64)> = [lo, hi]
        .iter()
        .filter_map(|p| p.finite())
        .map(|p| (p - r, p + r))
        .collect();
    excluded.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, b) in excluded {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    let mut components = Vec::new();
    let mut start = ExtendedReal::NegInf;
    for (a, b) in merged {
        if start < ExtendedReal::Finite(a) {
            components.push(Interval {
                lo: start,
                hi: ExtendedReal::Finite(a),
            });
        }
        start = ExtendedReal::Finite(b);
    }
    components.push(Interval {
        lo: start,
        hi: ExtendedReal::PosInf,
    });
    Ok(SigmaSet { lambda, components })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SliceOptions {
    #[serde(flatten)]
    pub solver: SolverOptions,
    /// Semiclassical scale of `h²D² + (ξ − a)²`.
    pub h: f64,
    /// Cutoff when the threshold is infinite; chosen adaptively when absent.
    pub e_cap: Option<f64>,
    /// Relative refinement error accepted as converged.
    pub converge_tol: f64,
}

impl Default for SliceOptions {
    fn default() -> Self {
        Self {
            solver: SolverOptions::default(),
            h: 1.0,
            e_cap: None,
            converge_tol: 1e-4,
        }
    }
}

impl SliceOptions {
    pub fn validate(&self) -> Result<()> {
        self.solver.validate()?;
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidArgument("h must be positive".into()));
        }
        if let Some(e) = self.e_cap {
            if !(e > 0.0 && e.is_finite()) {
                return Err(Error::InvalidArgument("e_cap must be positive".into()));
            }
        }
        if !(self.converge_tol > 0.0) {
            return Err(Error::InvalidArgument("converge_tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenFlags {
    pub converged: bool,
    pub near_threshold: bool,
}

/// Discrete spectrum of one fiber below its essential threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSlice {
    pub xi: f64,
    pub ess_threshold: ExtendedReal,
    pub eigenvalues: Vec<f64>,
    pub errors: Vec<f64>,
    pub flags: Vec<EigenFlags>,
    /// Cutoff used for the solve.
    pub energy_cut: f64,
    /// Coarse grid; the fine grid halves its spacing.
    pub grid: Grid,
    pub domain_capped: bool,
}

impl SpectrumSlice {
    /// Buffer below the threshold inside which eigenvalues are flagged.
    pub fn buffer(&self) -> f64 {
        10.0 * self.grid.spacing().powi(2) + 1e-6
    }

    /// Bottom of the spectrum of the fiber as seen by this slice.
    pub fn spectral_floor(&self) -> f64 {
        match self.eigenvalues.first() {
            Some(&l) => l.min(self.ess_threshold.to_f64()),
            None => self.ess_threshold.to_f64(),
        }
    }
}

const MAX_ADAPTIVE_CAP: f64 = 1e8;

/// Solves the fiber at `ξ`; also returns the solver output for eigenvector access.
pub fn solve_slice(
    profile: &FieldProfile,
    xi: f64,
    k_max: usize,
    opts: &SliceOptions,
) -> Result<(SpectrumSlice, FiberSpectrum)> {
    opts.validate()?;
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be >= 1".into()));
    }
    let pot = FiberPotential::new(profile, xi)?;
    let threshold = ess_threshold(profile, xi);
    let (cut, spectrum) = match threshold.finite() {
        Some(t) => {
            let e = t - 1e-9 * t.max(1.0);
            (e, solve_potential(&pot, opts.h, e, e, k_max, &opts.solver)?)
        }
        None => match opts.e_cap {
            Some(cap) => (cap, solve_potential(&pot, opts.h, cap, cap, k_max, &opts.solver)?),
            None => {
                let mut cap = 4.0 * opts.h;
                loop {
                    let s = solve_potential(&pot, opts.h, cap, cap, k_max, &opts.solver)?;
                    if s.eigenvalues.len() >= k_max || cap >= MAX_ADAPTIVE_CAP {
                        break (cap, s);
                    }
                    cap *= 2.0;
                }
            }
        },
    };
    let grid = spectrum.plan.grid;
    let buffer = 10.0 * grid.spacing().powi(2) + 1e-6;
    let flags = spectrum
        .eigenvalues
        .iter()
        .zip(&spectrum.errors)
        .map(|(&l, &err)| {
            let near_threshold = threshold.finite().is_some_and(|t| l > t - buffer);
            EigenFlags {
                converged: !near_threshold && err <= opts.converge_tol * l.abs().max(1.0),
                near_threshold,
            }
        })
        .collect();
    let slice = SpectrumSlice {
        xi,
        ess_threshold: threshold,
        eigenvalues: spectrum.eigenvalues.clone(),
        errors: spectrum.errors.clone(),
        flags,
        energy_cut: cut,
        grid,
        domain_capped: spectrum.plan.capped,
    };
    Ok((slice, spectrum))
}

pub fn spectrum_slice(
    profile: &FieldProfile,
    xi: f64,
    k_max: usize,
    opts: &SliceOptions,
) -> Result<SpectrumSlice> {
    solve_slice(profile, xi, k_max, opts).map(|(s, _)| s)
}

/// One ξ sample of a band diagram; failed solves are kept as gaps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSample {
    pub xi: f64,
    pub ess_threshold: ExtendedReal,
    pub slice: Option<SpectrumSlice>,
    pub error: Option<String>,
}

impl BandSample {
    pub fn band(&self, n: usize) -> Option<f64> {
        self.slice
            .as_ref()
            .and_then(|s| s.eigenvalues.get(n.checked_sub(1)?).copied())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandDiagram {
    pub samples: Vec<BandSample>,
    pub k_max: usize,
    pub options: SliceOptions,
    pub profile: FieldProfile,
}

impl BandDiagram {
    pub fn xi_grid(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.xi).collect()
    }

    /// `λ_n` at each sample, `None` where undefined.
    pub fn band(&self, n: usize) -> Vec<Option<f64>> {
        self.samples.iter().map(|s| s.band(n)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Solves the fibers at the given `ξ` values in parallel; results keep input order.
pub fn sweep_points(
    profile: &FieldProfile,
    xis: &[f64],
    k_max: usize,
    opts: &SliceOptions,
) -> Result<BandDiagram> {
    opts.validate()?;
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be >= 1".into()));
    }
    let samples = xis
        .par_iter()
        .map(|&xi| {
            let threshold = ess_threshold(profile, xi);
            match spectrum_slice(profile, xi, k_max, opts) {
                Ok(slice) => BandSample {
                    xi,
                    ess_threshold: threshold,
                    slice: Some(slice),
                    error: None,
                },
                Err(e) => {
                    log::debug!("slice at xi = {xi} failed: {e}");
                    BandSample {
                        xi,
                        ess_threshold: threshold,
                        slice: None,
                        error: Some(e.to_string()),
                    }
                }
            }
        })
        .collect();
    Ok(BandDiagram {
        samples,
        k_max,
        options: *opts,
        profile: profile.clone(),
    })
}

/// Band diagram on `n_samples` equally spaced `ξ` in `[xi_min, xi_max]`.
/// An empty range gives an empty diagram.
pub fn sweep_bands(
    profile: &FieldProfile,
    xi_min: f64,
    xi_max: f64,
    n_samples: usize,
    k_max: usize,
    opts: &SliceOptions,
) -> Result<BandDiagram> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument("n_samples must be >= 2".into()));
    }
    if !(xi_min.is_finite() && xi_max.is_finite()) {
        return Err(Error::InvalidArgument("xi range must be finite".into()));
    }
    let xis: Vec<f64> = if xi_min < xi_max {
        let step = (xi_max - xi_min) / (n_samples - 1) as f64;
        (0..n_samples)
            .map(|i| {
                if i + 1 == n_samples {
                    xi_max
                } else {
                    xi_min + i as f64 * step
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    sweep_points(profile, &xis, k_max, opts)
}

/// `λ_n'(ξ) = ∫ 2(ξ − a(x)) ψ_n(x)² dx` on the fine grid.
pub fn band_derivative(profile: &FieldProfile, xi: f64, n: usize, opts: &SliceOptions) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("band index starts at 1".into()));
    }
    let (_, spectrum) = solve_slice(profile, xi, n, opts)?;
    if spectrum.fine.len() < n {
        return Err(Error::MissingEigenpair { band: n, xi });
    }
    let pair = spectrum.eigenpair(n - 1)?;
    let pot = FiberPotential::new(profile, xi)?;
    let grid = spectrum.operator.grid;
    let dx = grid.spacing();
    let mut acc = 0.0;
    for (i, x) in grid.points().enumerate() {
        acc += 2.0 * pot.detuning(x)? * pair.psi[i] * pair.psi[i] * dx;
    }
    // the kinetic scale h enters only through ψ
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Verdict {
    FlatWithinBudget,
    NonFlat,
    NonFlatByDivergence,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::FlatWithinBudget => "FLAT-within-budget",
            Verdict::NonFlat => "NON-FLAT",
            Verdict::NonFlatByDivergence => "NON-FLAT-by-divergence",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatnessVerdict {
    pub component: Interval,
    /// `None` when the verdict covers every band on the component.
    pub band: Option<usize>,
    pub samples: usize,
    pub min: f64,
    pub max: f64,
    pub oscillation: f64,
    /// Largest difference quotient between consecutive samples.
    pub derivative_bound: f64,
    pub budget: f64,
    pub verdict: Verdict,
    pub note: String,
}

impl FlatnessVerdict {
    /// Whether the band's sampled range comes within `factor·budget` of `lambda`.
    pub fn reaches(&self, lambda: f64, factor: f64) -> bool {
        let slack = factor * self.budget;
        lambda >= self.min - slack && lambda <= self.max + slack
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exclusion {
    Yes,
    No,
    Inconclusive,
}

impl std::fmt::Display for Exclusion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Exclusion::Yes => "yes",
            Exclusion::No => "no",
            Exclusion::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlatnessReport {
    pub lambda: f64,
    pub sigma: SigmaSet,
    pub verdicts: Vec<FlatnessVerdict>,
    /// Whether `λ` is excluded from the point spectrum of the full operator.
    pub excluded: Exclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlatnessOptions {
    /// Minimum samples on a component for a per-band verdict.
    pub min_samples: usize,
    /// Unbounded components diverge once the spectral floor reaches this multiple of `λ`.
    pub divergence_factor: f64,
    /// Oscillation at most this multiple of the budget is flat.
    pub flat_factor: f64,
    /// Oscillation above this multiple of the budget is non-flat.
    pub nonflat_factor: f64,
    /// Samples per bounded component (Chebyshev nodes) and per unbounded window.
    pub samples_per_component: usize,
    /// Doublings of the outward march on unbounded components.
    pub max_march: usize,
}

impl Default for FlatnessOptions {
    fn default() -> Self {
        Self {
            min_samples: 5,
            divergence_factor: 2.0,
            flat_factor: 2.0,
            nonflat_factor: 10.0,
            samples_per_component: 16,
            max_march: 14,
        }
    }
}

impl FlatnessOptions {
    pub fn validate(&self) -> Result<()> {
        if self.min_samples < 2 || self.samples_per_component < 2 {
            return Err(Error::InvalidArgument("sample counts must be >= 2".into()));
        }
        if !(self.divergence_factor > 1.0 && self.flat_factor > 0.0) || self.nonflat_factor < self.flat_factor
        {
            return Err(Error::InvalidArgument("invalid flatness factors".into()));
        }
        Ok(())
    }
}

/// Budget of one sample: `2·(refinement error) + ε_trunc + tol_λ`.
fn sample_budget(slice: &SpectrumSlice, k: usize, opts: &SliceOptions) -> f64 {
    let tol = opts.solver.tolerance(slice.energy_cut);
    2.0 * slice.errors[k] + opts.solver.domain.epsilon_trunc + tol
}

/// Per-component, per-band flatness verdicts for the level `λ` on an existing diagram.
pub fn flatness_test(diagram: &BandDiagram, lambda: f64, opts: &FlatnessOptions) -> Result<FlatnessReport> {
    opts.validate()?;
    let sigma = sigma_lambda(&diagram.profile, lambda)?;
    let mut verdicts = Vec::new();
    let mut starved = false;
    for comp in &sigma.components {
        let samples: Vec<&BandSample> = diagram.samples.iter().filter(|s| comp.contains(s.xi)).collect();
        let solved: Vec<&SpectrumSlice> = samples.iter().filter_map(|s| s.slice.as_ref()).collect();
        if !comp.is_bounded() {
            let floor_limit = opts.divergence_factor * lambda;
            if let Some(hit) = solved
                .iter()
                .find(|s| s.spectral_floor() >= floor_limit && s.spectral_floor() > lambda)
            {
                verdicts.push(FlatnessVerdict {
                    component: *comp,
                    band: None,
                    samples: solved.len(),
                    min: hit.spectral_floor(),
                    max: hit.spectral_floor(),
                    oscillation: f64::NAN,
                    derivative_bound: f64::NAN,
                    budget: 0.0,
                    verdict: Verdict::NonFlatByDivergence,
                    note: format!(
                        "spectral floor {:.6e} >= {} x lambda at xi = {}",
                        hit.spectral_floor(),
                        opts.divergence_factor,
                        hit.xi
                    ),
                });
                continue;
            }
        }
        if solved.len() < opts.min_samples {
            starved = true;
            verdicts.push(FlatnessVerdict {
                component: *comp,
                band: None,
                samples: solved.len(),
                min: f64::NAN,
                max: f64::NAN,
                oscillation: f64::NAN,
                derivative_bound: f64::NAN,
                budget: f64::NAN,
                verdict: Verdict::Inconclusive,
                note: format!("{} solved samples, need {}", solved.len(), opts.min_samples),
            });
            continue;
        }
        for n in 1..=diagram.k_max {
            if let Some(v) = band_verdict(comp, &solved, n, &diagram.options, opts) {
                verdicts.push(v);
            }
        }
    }
    let excluded = if verdicts
        .iter()
        .any(|v| v.verdict == Verdict::FlatWithinBudget && v.reaches(lambda, opts.flat_factor))
    {
        Exclusion::No
    } else if starved
        || verdicts
            .iter()
            .any(|v| v.verdict == Verdict::Inconclusive && v.reaches(lambda, opts.nonflat_factor))
    {
        Exclusion::Inconclusive
    } else {
        Exclusion::Yes
    };
    Ok(FlatnessReport {
        lambda,
        sigma,
        verdicts,
        excluded,
    })
}

fn band_verdict(
    comp: &Interval,
    solved: &[&SpectrumSlice],
    n: usize,
    slice_opts: &SliceOptions,
    opts: &FlatnessOptions,
) -> Option<FlatnessVerdict> {
    let points: Vec<(f64, f64, f64)> = solved
        .iter()
        .filter_map(|s| {
            s.eigenvalues
                .get(n - 1)
                .map(|&l| (s.xi, l, sample_budget(s, n - 1, slice_opts)))
        })
        .collect();
    if points.is_empty() {
        return None;
    }
    let min = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let max = points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let budget = points.iter().map(|p| p.2).fold(0.0, f64::max);
    let oscillation = max - min;
    let mut ordered = points.clone();
    ordered.sort_by(|a, b| a.0.total_cmp(&b.0));
    let derivative_bound = ordered
        .windows(2)
        .map(|w| ((w[1].1 - w[0].1) / (w[1].0 - w[0].0)).abs())
        .fold(0.0, f64::max);
    let missing = solved.len() - points.len();
    let (verdict, note) = if missing > 0 {
        (
            Verdict::NonFlat,
            format!("band undefined at {missing} of {} samples", solved.len()),
        )
    } else if points.len() < opts.min_samples {
        (Verdict::Inconclusive, format!("{} samples", points.len()))
    } else if oscillation <= opts.flat_factor * budget {
        (Verdict::FlatWithinBudget, String::new())
    } else if oscillation > opts.nonflat_factor * budget {
        (Verdict::NonFlat, String::new())
    } else {
        (
            Verdict::Inconclusive,
            "oscillation between flat and non-flat margins".to_string(),
        )
    };
    Some(FlatnessVerdict {
        component: *comp,
        band: Some(n),
        samples: points.len(),
        min,
        max,
        oscillation,
        derivative_bound,
        budget,
        verdict,
        note,
    })
}

/// Sample points for testing the level `λ`: Chebyshev nodes in bounded
/// components, a window plus a geometric outward march in unbounded ones.
pub fn exclusion_samples(sigma: &SigmaSet, opts: &FlatnessOptions) -> Vec<(usize, Vec<f64>)> {
    let m = opts.samples_per_component;
    let width = 3.0f64.max(2.0 * sigma.lambda.sqrt());
    sigma
        .components
        .iter()
        .enumerate()
        .map(|(idx, c)| {
            let pts = match (c.lo.finite(), c.hi.finite()) {
                (Some(lo), Some(hi)) => chebyshev_nodes(lo, hi, m),
                (Some(lo), None) => window(lo, lo + width, m),
                (None, Some(hi)) => window(hi - width, hi, m),
                (None, None) => window(-width, width, m),
            };
            (idx, pts)
        })
        .collect()
}

fn chebyshev_nodes(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut v: Vec<f64> = (0..m)
        .map(|j| mid + half * ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * m) as f64).cos())
        .collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `m` points strictly inside `(lo, hi)`.
fn window(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    let step = (hi - lo) / (m + 1) as f64;
    (1..=m).map(|j| lo + j as f64 * step).collect()
}

/// Builds samples adapted to `Σ_λ`, marching outward on unbounded components
/// until the divergence rule applies, then runs [`flatness_test`].
pub fn exclusion_analysis(
    profile: &FieldProfile,
    lambda: f64,
    k_max: usize,
    slice_opts: &SliceOptions,
    opts: &FlatnessOptions,
) -> Result<(FlatnessReport, BandDiagram)> {
    opts.validate()?;
    let sigma = sigma_lambda(profile, lambda)?;
    let base: Vec<f64> = exclusion_samples(&sigma, opts)
        .into_iter()
        .flat_map(|(_, p)| p)
        .collect();
    let mut diagram = sweep_points(profile, &base, k_max, slice_opts)?;
    let width = 3.0f64.max(2.0 * lambda.sqrt());
    let limit = opts.divergence_factor * lambda;
    for comp in sigma.components.iter().filter(|c| !c.is_bounded()) {
        let diverged = |d: &BandDiagram| {
            d.samples.iter().any(|s| {
                comp.contains(s.xi)
                    && s.slice
                        .as_ref()
                        .is_some_and(|sl| sl.spectral_floor() >= limit && sl.spectral_floor() > lambda)
            })
        };
        if diverged(&diagram) {
            continue;
        }
        // outward directions of this component
        let mut fronts = Vec::new();
        match (comp.lo.finite(), comp.hi.finite()) {
            (Some(lo), None) => fronts.push((lo + width, 1.0)),
            (None, Some(hi)) => fronts.push((hi - width, -1.0)),
            _ => {
                fronts.push((width, 1.0));
                fronts.push((-width, -1.0));
            }
        }
        'march: for k in 0..opts.max_march {
            let step = width * 2f64.powi(k as i32);
            let xis: Vec<f64> = fronts.iter().map(|(x0, dir)| x0 + dir * step).collect();
            let extra = sweep_points(profile, &xis, k_max, slice_opts)?;
            diagram.samples.extend(extra.samples);
            if diverged(&diagram) {
                break 'march;
            }
        }
    }
    diagram.samples.sort_by(|a, b| a.xi.total_cmp(&b.xi));
    let report = flatness_test(&diagram, lambda, opts)?;
    Ok((report, diagram))
}
