//! One-dimensional potentials `V(s) ≥ 0` whose Schrödinger operators are discretized.

use crate::error::{Error, Result, Side};
use crate::field::{ExtendedReal, FieldKind, FieldProfile};

/// Potential of a fiber operator `h²D² + V(s)`.
pub trait Potential: Sync {
    fn value(&self, s: f64) -> Result<f64>;

    /// `{V ≤ e}` as `(left, right)`, `None` when empty. Errors with
    /// `UnboundedAllowedRegion` when the set reaches infinity.
    fn allowed_interval(&self, e: f64) -> Result<Option<(f64, f64)>>;

    /// Lattice anchor; grids built for this potential contain this point.
    fn center(&self) -> f64 {
        0.0
    }

    /// `|V'|^{1/2}`-type slope `v` with `V(s) ≈ v²(s − center)²` near a
    /// non-degenerate minimum, when known.
    fn well_velocity(&self) -> Option<f64> {
        None
    }
}

/// `V(s) = (ξ − a(origin + s))²`.
#[derive(Debug, Clone)]
pub struct FiberPotential<'a> {
    profile: &'a FieldProfile,
    xi: f64,
    origin: f64,
    anchor: f64,
    offset: f64,
    turning: bool,
}

impl<'a> FiberPotential<'a> {
    /// Potential of `L_ξ` in the original coordinate.
    pub fn new(profile: &'a FieldProfile, xi: f64) -> Result<Self> {
        Self::with_origin(profile, xi, 0.0)
    }

    /// `V_θ(s) = (θ − a(x_θ + s))²` in coordinates centered at the turning point.
    pub fn centered(profile: &'a FieldProfile, theta: f64) -> Result<Self> {
        let x_theta = profile.turning_point(theta)?;
        Self::with_origin(profile, theta, x_theta)
    }

    fn with_origin(profile: &'a FieldProfile, xi: f64, origin: f64) -> Result<Self> {
        if !xi.is_finite() {
            return Err(Error::InvalidArgument(format!("xi must be finite, got {xi}")));
        }
        let (turning, anchor) = match profile.turning_point(xi) {
            Ok(x) => (true, x),
            Err(_) => (false, default_anchor(profile)),
        };
        let offset = xi - profile_a(profile, anchor)?;
        Ok(Self {
            profile,
            xi,
            origin,
            anchor,
            offset,
            turning,
        })
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn profile(&self) -> &FieldProfile {
        self.profile
    }

    /// `ξ − a(origin + s)`.
    pub fn detuning(&self, s: f64) -> Result<f64> {
        let x = self.origin + s;
        Ok(self.offset - self.profile.integrate_b(self.anchor, x)?)
    }

    fn tail_limit(&self, side: Side) -> Option<f64> {
        let (lo, hi) = self.profile.flux_limits();
        let phi = match side {
            Side::Left => lo,
            Side::Right => hi,
        };
        phi.finite().map(|p| (self.xi - p).powi(2))
    }

    fn monotone_interval(&self, e: f64) -> Result<Option<(f64, f64)>> {
        let (lo, hi) = self.profile.flux_limits();
        let root = e.max(0.0).sqrt();
        let (t_lo, t_hi) = (self.xi - root, self.xi + root);
        if ExtendedReal::Finite(t_hi) <= lo || ExtendedReal::Finite(t_lo) >= hi {
            return Ok(None);
        }
        if ExtendedReal::Finite(t_lo) <= lo {
            return Err(Error::UnboundedAllowedRegion {
                energy: e,
                side: Side::Left,
            });
        }
        if ExtendedReal::Finite(t_hi) >= hi {
            return Err(Error::UnboundedAllowedRegion {
                energy: e,
                side: Side::Right,
            });
        }
        let left = self.profile.turning_point(t_lo)?;
        let right = self.profile.turning_point(t_hi)?;
        Ok(Some((left - self.origin, right - self.origin)))
    }

    fn scanned_interval(&self, e: f64) -> Result<Option<(f64, f64)>> {
        for side in [Side::Left, Side::Right] {
            if let Some(limit) = self.tail_limit(side) {
                if e >= limit {
                    return Err(Error::UnboundedAllowedRegion { energy: e, side });
                }
            }
        }
        let mut half = scan_extent(self.profile);
        let center = self.anchor - self.origin;
        loop {
            let found = scan(|s| self.value(s), center - half, center + half, e)?;
            match found {
                None => return Ok(None),
                Some((l, r, touches_l, touches_r)) => {
                    if !(touches_l || touches_r) {
                        return Ok(Some((l, r)));
                    }
                    if half > 1e8 {
                        let side = if touches_l { Side::Left } else { Side::Right };
                        return Err(Error::UnboundedAllowedRegion { energy: e, side });
                    }
                    half *= 4.0;
                }
            }
        }
    }
}

impl Potential for FiberPotential<'_> {
    fn value(&self, s: f64) -> Result<f64> {
        Ok(self.detuning(s)?.powi(2))
    }

    fn allowed_interval(&self, e: f64) -> Result<Option<(f64, f64)>> {
        if self.profile.is_monotone() {
            self.monotone_interval(e)
        } else {
            self.scanned_interval(e)
        }
    }

    fn center(&self) -> f64 {
        self.anchor - self.origin
    }

    fn well_velocity(&self) -> Option<f64> {
        if !self.turning {
            return None;
        }
        let b = self.profile.eval_b(self.anchor).ok()?.abs();
        (b > 0.0).then_some(b)
    }
}

/// `V(s) = v²s²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticPotential {
    pub v: f64,
}

impl Potential for QuadraticPotential {
    fn value(&self, s: f64) -> Result<f64> {
        Ok(self.v * self.v * s * s)
    }

    fn allowed_interval(&self, e: f64) -> Result<Option<(f64, f64)>> {
        if e < 0.0 {
            return Ok(None);
        }
        let r = e.sqrt() / self.v;
        Ok(Some((-r, r)))
    }

    fn well_velocity(&self) -> Option<f64> {
        Some(self.v)
    }
}

fn profile_a(profile: &FieldProfile, x: f64) -> Result<f64> {
    match profile.eval_a(x) {
        Ok(a) => Ok(a),
        Err(Error::OutOfRange { .. }) => {
            Ok(profile.eval_a(0.0).unwrap_or(0.0) + profile.integrate_b(0.0, x)?)
        }
        Err(e) => Err(e),
    }
}

fn default_anchor(profile: &FieldProfile) -> f64 {
    match profile.kind() {
        FieldKind::Tabulated { grid, .. } => 0.5 * (grid[0] + grid[grid.len() - 1]),
        _ => 0.0,
    }
}

fn scan_extent(profile: &FieldProfile) -> f64 {
    match profile.kind() {
        FieldKind::Tabulated { grid, .. } => 0.5 * (grid[grid.len() - 1] - grid[0]) + 1.0,
        FieldKind::StepLike { width, .. } => 40.0 * width.max(0.5),
        _ => 40.0,
    }
}

const SCAN_POINTS: usize = 4001;

/// Outermost sub-level crossings of `f ≤ e` on `[lo, hi]`, refined by bisection.
/// The flags report whether the set touches the scan edges.
fn scan<F>(f: F, lo: f64, hi: f64, e: f64) -> Result<Option<(f64, f64, bool, bool)>>
where
    F: Fn(f64) -> Result<f64>,
{
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let xs: Vec<f64> = (0..SCAN_POINTS).map(|i| lo + i as f64 * step).collect();
    let inside: Vec<bool> = xs.iter().map(|&x| f(x).map(|v| v <= e)).collect::<Result<_>>()?;
    let first = match inside.iter().position(|&b| b) {
        Some(i) => i,
        None => return Ok(None),
    };
    let last = inside.iter().rposition(|&b| b).unwrap_or(first);
    let refine = |out: f64, inn: f64| -> Result<f64> {
        let (mut a, mut b) = (out, inn);
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if f(m)? <= e {
                b = m;
            } else {
                a = m;
            }
        }
        Ok(b)
    };
    let left = if first == 0 {
        xs[0]
    } else {
        refine(xs[first - 1], xs[first])?
    };
    let right = if last + 1 == SCAN_POINTS {
        xs[last]
    } else {
        refine(xs[last + 1], xs[last])?
    };
    Ok(Some((left, right, first == 0, last + 1 == SCAN_POINTS)))
}
