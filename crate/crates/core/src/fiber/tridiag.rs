//! Symmetric tridiagonal discretization of `h²D² + V` with Dirichlet ends,
//! Sturm-sequence counting, bisection and inverse iteration.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::grid::Grid;
use crate::error::{Error, Result};

/// Seed of the inverse-iteration start vector.
pub const DEFAULT_SEED: u64 = 0x5eed_f1be;
const MAX_INVERSE_ITERATIONS: usize = 12;
/// Accepted eigenpairs satisfy `‖Tψ − λψ‖/‖ψ‖ ≤ RESIDUAL_FACTOR·‖T‖`.
pub const RESIDUAL_FACTOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    pub h: f64,
    pub grid: Grid,
    /// `V(x_i)` on the grid.
    pub potential: Vec<f64>,
    /// `min_i V(x_i)`.
    pub potential_floor: f64,
}

/// Normalized eigenpair: `Σ ψ_i² Δ = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub lambda: f64,
    pub psi: Vec<f64>,
    pub residual: f64,
}

impl TridiagonalOperator {
    /// Second-order central differences for `h²D² + V` on `grid`.
    pub fn from_potential<F>(grid: Grid, h: f64, potential: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64>,
    {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidArgument(format!("h must be positive, got {h}")));
        }
        let dx = grid.spacing();
        let kinetic = h * h / (dx * dx);
        let potential: Vec<f64> = grid.points().map(&potential).collect::<Result<_>>()?;
        if let Some(bad) = potential.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite potential value {bad}"
            )));
        }
        let potential_floor = potential.iter().copied().fold(f64::INFINITY, f64::min);
        let diag = potential.iter().map(|v| 2.0 * kinetic + v).collect();
        let offdiag = vec![-kinetic; grid.n - 1];
        Ok(Self {
            diag,
            offdiag,
            h,
            grid,
            potential,
            potential_floor,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.offdiag[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.offdiag[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Infinity norm, used to scale residual bounds.
    pub fn norm(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    /// Default bisection tolerance `1e-10·max(1, |E|)`.
    pub fn default_tolerance(energy: f64) -> f64 {
        1e-10 * energy.abs().max(1.0)
    }

    /// Number of eigenvalues below `e`, from the signs of the shifted LDLᵀ pivots.
    pub fn count_below(&self, e: f64) -> usize {
        let max_off2 = self.offdiag.iter().map(|o| o * o).fold(1.0, f64::max);
        let pivmin = f64::MIN_POSITIVE * max_off2;
        let mut count = 0;
        let mut q = self.diag[0] - e;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q <= 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let e2 = self.offdiag[i - 1] * self.offdiag[i - 1];
            q = (self.diag[i] - e) - e2 / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q <= 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `min(count_below(e), k_max)` smallest eigenvalues, each bracketed to `tol`.
    pub fn eigenvalues_below(&self, e: f64, k_max: usize, tol: Option<f64>) -> Vec<f64> {
        let tol = tol.unwrap_or_else(|| Self::default_tolerance(e));
        let total = self.count_below(e);
        let m = total.min(k_max);
        if m == 0 {
            return Vec::new();
        }
        let (g_lo, _) = self.gershgorin();
        let start = g_lo - tol.max(f64::EPSILON * g_lo.abs());
        // (x, count(x)) evaluations shared by all bisections
        let mut samples: Vec<(f64, usize)> = vec![(start, 0), (e, total)];
        let mut out = Vec::with_capacity(m);
        for k in 1..=m {
            let mut lo = samples
                .iter()
                .filter(|s| s.1 < k)
                .map(|s| s.0)
                .fold(f64::NEG_INFINITY, f64::max);
            let mut hi = samples
                .iter()
                .filter(|s| s.1 >= k)
                .map(|s| s.0)
                .fold(f64::INFINITY, f64::min);
            while hi - lo > tol {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let c = self.count_below(mid);
                samples.push((mid, c));
                if c >= k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        out
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut y = self.diag[i] * x[i];
                if i > 0 {
                    y += self.offdiag[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    y += self.offdiag[i] * x[i + 1];
                }
                y
            })
            .collect()
    }

    /// `‖Tψ − λψ‖ / ‖ψ‖` in the Euclidean norm.
    pub fn residual(&self, lambda: f64, psi: &[f64]) -> f64 {
        let t = self.apply(psi);
        let r: f64 = t.iter().zip(psi).map(|(ti, pi)| (ti - lambda * pi).powi(2)).sum();
        let norm: f64 = psi.iter().map(|p| p * p).sum();
        (r / norm).sqrt()
    }

    /// Eigenvector for an isolated eigenvalue `lambda` by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Result<EigenPair> {
        self.eigenvector_with(lambda, Self::default_tolerance(lambda), DEFAULT_SEED)
    }

    /// Inverse iteration with shift `lambda + tol` and a seeded random start vector.
    pub fn eigenvector_with(&self, lambda: f64, tol: f64, seed: u64) -> Result<EigenPair> {
        let n = self.len();
        let norm_t = self.norm();
        let bound = RESIDUAL_FACTOR * norm_t;
        let lu = TridiagonalLu::factor(self, lambda + tol, norm_t);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        normalize_euclid(&mut x);
        for it in 0..MAX_INVERSE_ITERATIONS {
            lu.solve(&mut x);
            if x.iter().any(|v| !v.is_finite()) {
                return Err(Error::EigenvectorNotConverged { lambda });
            }
            normalize_euclid(&mut x);
            let residual = self.residual(lambda, &x);
            if it >= 1 && residual <= bound {
                let dx = self.grid.spacing();
                let scale = 1.0 / dx.sqrt();
                let mut psi: Vec<f64> = x.iter().map(|v| v * scale).collect();
                fix_sign(&mut psi);
                return Ok(EigenPair {
                    lambda,
                    psi,
                    residual,
                });
            }
        }
        Err(Error::EigenvectorNotConverged { lambda })
    }
}

fn normalize_euclid(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

/// First component above 1e-3 of the maximum magnitude is made positive.
fn fix_sign(psi: &mut [f64]) {
    let max = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = psi.iter().find(|v| v.abs() > 1e-3 * max) {
        if *first < 0.0 {
            psi.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// LU factorization of `T − σI` with partial pivoting (LAPACK `gttrf` layout).
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(t: &TridiagonalOperator, shift: f64, norm: f64) -> Self {
        let n = t.len();
        let mut dl = t.offdiag.clone();
        let mut du = t.offdiag.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|v| v - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        let tiny = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
        for v in d.iter_mut() {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        Self {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic(n: usize, half_width: f64) -> TridiagonalOperator {
        let grid = Grid::new(-half_width, half_width, n).unwrap();
        TridiagonalOperator::from_potential(grid, 1.0, |s| Ok(s * s)).unwrap()
    }

    #[test]
    fn assembly_stencil() {
        let t = harmonic(2001, 10.0);
        let dx = t.grid.spacing();
        assert!((t.diag[1000] - 2.0 / (dx * dx)).abs() < 1e-9);
        assert!(t.offdiag.iter().all(|&o| o == -1.0 / (dx * dx)));
        assert_eq!(t.potential_floor, 0.0);
    }

    #[test]
    fn harmonic_count_and_values() {
        let t = harmonic(4001, 12.0);
        assert_eq!(t.count_below(6.0), 3);
        assert_eq!(t.count_below(0.0), 0);
        let (_, hi) = t.gershgorin();
        assert_eq!(t.count_below(hi + 1.0), t.len());
        let ev = t.eigenvalues_below(6.0, 10, None);
        assert_eq!(ev.len(), 3);
        for (k, v) in ev.iter().enumerate() {
            // second-order error at dx = 0.006 is about dx²(2k+1)²/16
            assert!((v - (2 * k + 1) as f64).abs() < 1e-4, "{k}: {v}");
        }
        assert!(t.eigenvalues_below(-1.0, 5, None).is_empty());
    }

    #[test]
    fn k_max_truncates() {
        let t = harmonic(801, 10.0);
        assert_eq!(t.eigenvalues_below(20.0, 2, None).len(), 2);
    }

    #[test]
    fn eigenvector_shapes() {
        let t = harmonic(2001, 10.0);
        let ev = t.eigenvalues_below(4.0, 2, None);
        let ground = t.eigenvector(ev[0]).unwrap();
        let mid = t.len() / 2;
        assert!(ground.psi[mid] > 0.0);
        assert!(ground.psi.iter().all(|&p| p > -1e-12));
        let dx = t.grid.spacing();
        let mass: f64 = ground.psi.iter().map(|p| p * p * dx).sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert!(ground.residual <= RESIDUAL_FACTOR * t.norm());

        let first = t.eigenvector(ev[1]).unwrap();
        let big = 1e-6 * first.psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let signs: Vec<f64> = first
            .psi
            .iter()
            .filter(|p| p.abs() > big)
            .map(|p| p.signum())
            .collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(changes, 1);
        assert!(first.psi[mid].abs() < 1e-6);
        assert!((first.psi[mid - 100] + first.psi[mid + 100]).abs() < 1e-8);
    }

    #[test]
    fn eigenvector_is_deterministic() {
        let t = harmonic(1001, 9.0);
        let ev = t.eigenvalues_below(2.0, 1, None);
        let a = t.eigenvector(ev[0]).unwrap();
        let b = t.eigenvector(ev[0]).unwrap();
        assert_eq!(a, b);
    }
}
