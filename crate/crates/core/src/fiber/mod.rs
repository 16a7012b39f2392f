//! Fiber operators `h²D² + V` on truncated grids.

pub mod domain;
pub mod grid;
pub mod potential;
pub mod tridiag;

use serde::{Deserialize, Serialize};

pub use domain::{plan_domain, DomainPlan, DomainPolicy};
pub use grid::Grid;
pub use potential::{FiberPotential, Potential, QuadraticPotential};
pub use tridiag::{EigenPair, TridiagonalOperator, DEFAULT_SEED, RESIDUAL_FACTOR};

use crate::error::{Error, Result};
use crate::field::FieldProfile;

/// `h²D² + (ξ − a(x))²` on `grid`.
pub fn assemble(profile: &FieldProfile, xi: f64, h: f64, grid: Grid) -> Result<TridiagonalOperator> {
    let pot = FiberPotential::new(profile, xi)?;
    TridiagonalOperator::from_potential(grid, h, |x| pot.value(x))
}

/// Grid for `L_ξ` (semiclassical scale `h`) resolving every eigenvalue below `e`.
pub fn auto_domain(profile: &FieldProfile, xi: f64, h: f64, e: f64) -> Result<Grid> {
    let pot = FiberPotential::new(profile, xi)?;
    Ok(plan_domain(&pot, h, e, &DomainPolicy::default())?.grid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Discretization {
    /// Central differences, reported on the finer of two grids.
    Second,
    /// Central differences on grids `Δ` and `Δ/2`, extrapolated to fourth order.
    #[default]
    Richardson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    #[serde(flatten)]
    pub domain: DomainPolicy,
    pub discretization: Discretization,
    /// Bisection tolerance; `1e-10·max(1, E)` when absent.
    pub tol_lambda: Option<f64>,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            domain: DomainPolicy::default(),
            discretization: Discretization::default(),
            tol_lambda: None,
            seed: DEFAULT_SEED,
        }
    }
}

impl SolverOptions {
    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        if let Some(t) = self.tol_lambda {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument("tol_lambda must be positive".into()));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, e: f64) -> f64 {
        self.tol_lambda
            .unwrap_or_else(|| TridiagonalOperator::default_tolerance(e))
    }
}

/// Eigenvalues below a cutoff from two nested grids.
#[derive(Debug, Clone)]
pub struct FiberSpectrum {
    /// Reported values (extrapolated or fine-grid, per the discretization).
    pub eigenvalues: Vec<f64>,
    /// Discretization error estimates `|λ_fine − λ_coarse| / 3`.
    pub errors: Vec<f64>,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    /// Operator on the finer grid; eigenvectors are computed here.
    pub operator: TridiagonalOperator,
    pub plan: DomainPlan,
    pub tol: f64,
    pub seed: u64,
}

impl FiberSpectrum {
    /// Eigenpair of the fine-grid operator for the `k`-th eigenvalue (0-based).
    pub fn eigenpair(&self, k: usize) -> Result<EigenPair> {
        let lambda = *self.fine.get(k).ok_or(Error::MissingEigenpair {
            band: k + 1,
            xi: f64::NAN,
        })?;
        self.operator.eigenvector_with(lambda, self.tol, self.seed)
    }
}

/// Solves `h²D² + V` for eigenvalues below `e_cut` on a domain planned at `e_domain`.
pub fn solve_potential<P: Potential + ?Sized>(
    pot: &P,
    h: f64,
    e_domain: f64,
    e_cut: f64,
    k_max: usize,
    opts: &SolverOptions,
) -> Result<FiberSpectrum> {
    opts.validate()?;
    let plan = plan_domain(pot, h, e_domain, &opts.domain)?;
    let tol = opts.tolerance(e_cut);
    let coarse_op = TridiagonalOperator::from_potential(plan.grid, h, |s| pot.value(s))?;
    let fine_op = TridiagonalOperator::from_potential(plan.grid.refined(), h, |s| pot.value(s))?;
    let mut coarse = coarse_op.eigenvalues_below(e_cut, k_max, Some(tol));
    let mut fine = fine_op.eigenvalues_below(e_cut, k_max, Some(tol));
    let m = coarse.len().min(fine.len());
    coarse.truncate(m);
    fine.truncate(m);
    let errors: Vec<f64> = fine
        .iter()
        .zip(&coarse)
        .map(|(f, c)| (f - c).abs() / 3.0)
        .collect();
    let eigenvalues = match opts.discretization {
        Discretization::Second => fine.clone(),
        Discretization::Richardson => fine
            .iter()
            .zip(&coarse)
            .map(|(f, c)| (4.0 * f - c) / 3.0)
            .collect(),
    };
    Ok(FiberSpectrum {
        eigenvalues,
        errors,
        coarse,
        fine,
        operator: fine_op,
        plan,
        tol,
        seed: opts.seed,
    })
}
