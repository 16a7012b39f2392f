//! Truncation of the real line to a finite grid adapted to an energy window.

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::potential::Potential;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DomainPolicy {
    /// Grid points per local length scale.
    pub points_per_length: f64,
    /// Target size of the eigenfunction tail cut off by the Dirichlet ends.
    pub epsilon_trunc: f64,
    /// Multiplies the decay action `ln(1/ε_trunc)` required in each margin.
    pub safety: f64,
    /// Multiplies the margins after they are computed (2 doubles them).
    pub margin_scale: f64,
    /// Upper limit on a margin, in units of the allowed-region width.
    pub max_margin_factor: f64,
    pub max_points: usize,
}

impl Default for DomainPolicy {
    fn default() -> Self {
        Self {
            points_per_length: 24.0,
            epsilon_trunc: 1e-10,
            safety: 1.0,
            margin_scale: 1.0,
            max_margin_factor: 40.0,
            max_points: 400_001,
        }
    }
}

impl DomainPolicy {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.points_per_length)
            && positive(self.safety)
            && positive(self.margin_scale)
            && positive(self.max_margin_factor))
        {
            return Err(Error::InvalidArgument(
                "grid policy factors must be positive".into(),
            ));
        }
        if !(self.epsilon_trunc > 0.0 && self.epsilon_trunc < 1.0) {
            return Err(Error::InvalidArgument("epsilon_trunc must lie in (0, 1)".into()));
        }
        if self.max_points < 3 {
            return Err(Error::InvalidArgument("max_points must be >= 3".into()));
        }
        Ok(())
    }

    pub fn doubled_margin(&self) -> Self {
        Self {
            margin_scale: 2.0 * self.margin_scale,
            max_margin_factor: 2.0 * self.max_margin_factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainPlan {
    pub grid: Grid,
    /// `{V ≤ E}`, `None` when empty.
    pub allowed: Option<(f64, f64)>,
    /// Length scale the spacing resolves.
    pub length_scale: f64,
    /// A margin hit its cap before the required decay was reached.
    pub capped: bool,
}

/// Grid for `h²D² + V` covering `{V ≤ e}` plus decay margins on both sides.
pub fn plan_domain<P: Potential + ?Sized>(
    pot: &P,
    h: f64,
    e: f64,
    policy: &DomainPolicy,
) -> Result<DomainPlan> {
    policy.validate()?;
    if !(h > 0.0 && h.is_finite() && e.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need h > 0 and finite energy, got h = {h}, E = {e}"
        )));
    }
    let allowed = pot.allowed_interval(e)?;
    let center = pot.center();
    let (l, r) = allowed.unwrap_or((center, center));
    let width = r - l;

    let mut scale = f64::INFINITY;
    if let Some(v) = pot.well_velocity() {
        scale = scale.min((h / v).sqrt());
    }
    if e > 0.0 {
        scale = scale.min(h / e.sqrt());
    }
    if pot.well_velocity().is_none() && width > 0.0 {
        scale = scale.min(width);
    }
    if !scale.is_finite() {
        scale = h;
    }

    let max_len = policy.max_margin_factor * width.max(scale);
    let target = policy.safety * (1.0 / policy.epsilon_trunc).ln();
    let (ml, cap_l) = margin(pot, h, e, l, -1.0, scale, target, max_len)?;
    let (mr, cap_r) = margin(pot, h, e, r, 1.0, scale, target, max_len)?;
    let ml = (ml * policy.margin_scale).min(max_len * policy.margin_scale);
    let mr = (mr * policy.margin_scale).min(max_len * policy.margin_scale);

    let mut dx = scale / policy.points_per_length;
    let lo = l - ml;
    let hi = r + mr;
    let mut k_lo = ((center - lo) / dx).ceil().max(1.0);
    let mut k_hi = ((hi - center) / dx).ceil().max(1.0);
    if k_lo + k_hi + 1.0 > policy.max_points as f64 {
        log::warn!(
            "domain [{lo:.3}, {hi:.3}] at spacing {dx:.3e} exceeds {} points; coarsening",
            policy.max_points
        );
        let ratio = (k_lo + k_hi) / (policy.max_points - 1) as f64;
        dx *= ratio;
        k_lo = ((center - lo) / dx).ceil().max(1.0);
        k_hi = ((hi - center) / dx).ceil().max(1.0);
    }
    let grid = Grid::new(center - k_lo * dx, center + k_hi * dx, (k_lo + k_hi) as usize + 1)?;
    Ok(DomainPlan {
        grid,
        allowed,
        length_scale: scale,
        capped: cap_l || cap_r,
    })
}

/// Distance from `edge` in direction `dir` until `∫ √(V − e)₊ / h` reaches `target`.
#[allow(clippy::too_many_arguments)]
fn margin<P: Potential + ?Sized>(
    pot: &P,
    h: f64,
    e: f64,
    edge: f64,
    dir: f64,
    scale: f64,
    target: f64,
    max_len: f64,
) -> Result<(f64, bool)> {
    let mut dist = 0.0;
    let mut action = 0.0;
    while action < target {
        if dist >= max_len {
            return Ok((max_len, true));
        }
        let step = (0.25 * scale).max(0.1 * dist);
        let v = pot.value(edge + dir * (dist + 0.5 * step))?;
        action += (v - e).max(0.0).sqrt() / h * step;
        dist += step;
    }
    Ok((dist.max(2.0 * scale), false))
}
