//! Magnetic field profiles `b`, their vector potentials `a = a0 + ∫₀ˣ b`,
//! flux limits and turning points.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::adaptive_simpson;

/// Absolute/relative tolerance used for every quadrature of `b`.
pub const QUAD_TOL: f64 = 1e-10;
/// Tighter relative tolerance for short-range integrals of `b`.
const LOCAL_REL_TOL: f64 = 1e-13;
/// Residual tolerance for turning points: `|a(x) - xi| <= TURNING_TOL * (1 + |xi|)`.
pub const TURNING_TOL: f64 = 1e-12;

/// Node spacing in `asinh(x)` for the cumulative quadrature table.
const TABLE_STEP: f64 = 0.05;
/// Largest |x| covered by the cumulative table.
const TABLE_EXTENT: f64 = 1e15;
/// Keeps table segments out of subnormal arithmetic where `b` has decayed.
const TABLE_ABS_TOL: f64 = 1e-280;

/// A real number or one of the two infinities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Maps the infinities to `f64::INFINITY` / `f64::NEG_INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::NegInf => f64::NEG_INFINITY,
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInf => f64::INFINITY,
        }
    }

    pub fn from_f64(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtendedReal::PosInf
        } else if v == f64::NEG_INFINITY {
            ExtendedReal::NegInf
        } else {
            ExtendedReal::Finite(v)
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.to_f64().partial_cmp(&other.to_f64())
    }
}

impl PartialEq<f64> for ExtendedReal {
    fn eq(&self, other: &f64) -> bool {
        self.to_f64() == *other
    }
}

impl PartialOrd<f64> for ExtendedReal {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.to_f64().partial_cmp(other)
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => f.write_str("-inf"),
            ExtendedReal::Finite(v) => write!(f, "{v}"),
            ExtendedReal::PosInf => f.write_str("inf"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtendedRealRepr {
    Number(f64),
    Text(String),
}

impl Serialize for ExtendedReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedReal::Finite(v) => ExtendedRealRepr::Number(*v),
            ExtendedReal::NegInf => ExtendedRealRepr::Text("-inf".into()),
            ExtendedReal::PosInf => ExtendedRealRepr::Text("inf".into()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match ExtendedRealRepr::deserialize(d)? {
            ExtendedRealRepr::Number(v) => Ok(ExtendedReal::Finite(v)),
            ExtendedRealRepr::Text(t) => match t.as_str() {
                "inf" | "+inf" => Ok(ExtendedReal::PosInf),
                "-inf" => Ok(ExtendedReal::NegInf),
                other => Err(serde::de::Error::custom(format!(
                    "invalid extended real '{other}'"
                ))),
            },
        }
    }
}

/// Behaviour of a power-law field away from its `x → +∞` asymptotic branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CoreModel {
    /// `b(x) = c₁|x|^α` (only for `α > 0`); `a` is odd and increasing.
    #[default]
    Pure,
    /// `b(x) = c₁(1+x²)^{α/2}`: smooth and positive, both fluxes infinite.
    Smooth,
    /// `b(x) = c₁(1+x²)^{α/2}·(1+tanh x)/2`: positive, finite left flux.
    HalfLine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldKind {
    Constant {
        b0: f64,
    },
    PowerLaw {
        c1: f64,
        alpha: f64,
        #[serde(default)]
        core: CoreModel,
    },
    /// Normalized Gaussian `b(x) = π^{-1/2} e^{-x²}` with unit flux.
    Gaussian,
    /// `b₋ + (b₊ - b₋)(1 + tanh(x/width))/2`.
    StepLike {
        b_minus: f64,
        b_plus: f64,
        width: f64,
    },
    /// Piecewise-linear samples; `b = 0` outside the sample hull.
    Tabulated {
        grid: Vec<f64>,
        values: Vec<f64>,
    },
}

/// Cumulative integral table `∫₀^{node} b` used by kinds without a closed-form primitive.
#[derive(Debug, Clone, PartialEq)]
struct CumulativeTable {
    nodes: Vec<f64>,
    values: Vec<f64>,
    /// index of the node at x = 0
    zero: usize,
    step: f64,
}

/// Precomputed data derived from `b`: cached primitive nodes, flux limits and monotonicity.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialData {
    table: Option<Arc<CumulativeTable>>,
    /// Trapezoid sums of a tabulated field at its nodes, zero at `x = 0`.
    prefix: Option<Arc<[f64]>>,
    /// `φ₋ - a₀` and `φ₊ - a₀`.
    flux_offsets: (ExtendedReal, ExtendedReal),
    pub monotone: bool,
    /// Set when a flux limit relies on an assumed tail model.
    pub tail_assumed: bool,
}

/// Serialized form of a [`FieldProfile`]: the field kind plus an optional gauge constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    #[serde(flatten)]
    pub kind: FieldKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
}

impl TryFrom<ProfileSpec> for FieldProfile {
    type Error = Error;

    fn try_from(spec: ProfileSpec) -> Result<Self> {
        let p = FieldProfile::new(spec.kind)?;
        Ok(match spec.a0 {
            Some(a0) if a0.is_finite() => p.with_gauge(a0),
            Some(a0) => return Err(Error::InvalidProfile(format!("gauge a0 = {a0} is not finite"))),
            None => p,
        })
    }
}

impl From<FieldProfile> for ProfileSpec {
    fn from(p: FieldProfile) -> Self {
        ProfileSpec {
            kind: p.kind,
            a0: Some(p.a0),
        }
    }
}

/// An immutable magnetic field profile together with its gauge constant `a₀`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileSpec", into = "ProfileSpec")]
pub struct FieldProfile {
    kind: FieldKind,
    a0: f64,
    data: PotentialData,
}

impl FieldProfile {
    pub fn new(kind: FieldKind) -> Result<Self> {
        validate(&kind)?;
        let a0 = match kind {
            FieldKind::Gaussian => 0.5,
            _ => 0.0,
        };
        let data = PotentialData::build(&kind)?;
        Ok(Self { kind, a0, data })
    }

    pub fn constant(b0: f64) -> Self {
        Self::new(FieldKind::Constant { b0 }).expect("finite constant field")
    }

    /// Normalized Gaussian in the gauge `φ₋ = 0`, so `a(x) = (1 + erf x)/2`.
    pub fn gaussian() -> Self {
        Self::new(FieldKind::Gaussian).expect("gaussian profile")
    }

    pub fn power_law(c1: f64, alpha: f64, core: CoreModel) -> Result<Self> {
        Self::new(FieldKind::PowerLaw { c1, alpha, core })
    }

    pub fn step_like(b_minus: f64, b_plus: f64, width: f64) -> Result<Self> {
        Self::new(FieldKind::StepLike {
            b_minus,
            b_plus,
            width,
        })
    }

    pub fn tabulated(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::new(FieldKind::Tabulated { grid, values })
    }

    /// Returns the same field with gauge constant `a0`.
    pub fn with_gauge(mut self, a0: f64) -> Self {
        self.a0 = a0;
        self
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn gauge(&self) -> f64 {
        self.a0
    }

    pub fn data(&self) -> &PotentialData {
        &self.data
    }

    pub fn is_monotone(&self) -> bool {
        self.data.monotone
    }

    /// Evaluates `b(x)`.
    pub fn eval_b(&self, x: f64) -> Result<f64> {
        if let FieldKind::Tabulated { grid, .. } = &self.kind {
            let (lo, hi) = (grid[0], grid[grid.len() - 1]);
            if !(lo..=hi).contains(&x) {
                return Err(Error::OutOfRange { x, lo, hi });
            }
        }
        Ok(self.b(x))
    }

    /// Evaluates `a(x) = a₀ + ∫₀ˣ b(u) du`.
    pub fn eval_a(&self, x: f64) -> Result<f64> {
        if let FieldKind::Tabulated { grid, .. } = &self.kind {
            let (lo, hi) = (grid[0], grid[grid.len() - 1]);
            if !(lo..=hi).contains(&x) {
                return Err(Error::OutOfRange { x, lo, hi });
            }
        }
        self.a(x)
    }

    /// `b` with the tail model applied outside a tabulated hull.
    pub(crate) fn b(&self, x: f64) -> f64 {
        match &self.kind {
            FieldKind::Constant { b0 } => *b0,
            FieldKind::PowerLaw { c1, alpha, core } => power_law_b(*c1, *alpha, *core, x),
            FieldKind::Gaussian => (-x * x).exp() / PI.sqrt(),
            FieldKind::StepLike {
                b_minus,
                b_plus,
                width,
            } => b_minus + (b_plus - b_minus) * 0.5 * (1.0 + (x / width).tanh()),
            FieldKind::Tabulated { grid, values } => interpolate(grid, values, x),
        }
    }

    /// `a` with the tail model applied outside a tabulated hull.
    pub(crate) fn a(&self, x: f64) -> Result<f64> {
        Ok(match &self.kind {
            FieldKind::Constant { b0 } => self.a0 + b0 * x,
            FieldKind::PowerLaw { c1, alpha, core } => match core {
                CoreModel::Pure => self.a0 + c1 * x.signum() * x.abs().powf(alpha + 1.0) / (alpha + 1.0),
                _ => self.a0 + self.table_primitive(x)?,
            },
            FieldKind::Gaussian => self.a0 - 0.5 + 0.5 * libm::erfc(-x),
            FieldKind::StepLike {
                b_minus,
                b_plus,
                width,
            } => {
                let y = x / width;
                self.a0 + b_minus * x + (b_plus - b_minus) * (0.5 * x + 0.5 * width * ln_cosh(y))
            }
            FieldKind::Tabulated { grid, values } => {
                let prefix = self.data.prefix.as_deref().expect("tabulated prefix sums");
                self.a0 + tabulated_primitive(grid, values, prefix, x)
            }
        })
    }

    /// `∫_{x0}^{x1} b(u) du`, computed without forming `a(x1) - a(x0)` when that
    /// difference would cancel badly.
    pub fn integrate_b(&self, x0: f64, x1: f64) -> Result<f64> {
        if x0 == x1 {
            return Ok(0.0);
        }
        match &self.kind {
            FieldKind::Gaussian => {
                let v = if x0 >= 0.0 && x1 >= 0.0 {
                    0.5 * (libm::erfc(x0) - libm::erfc(x1))
                } else if x0 <= 0.0 && x1 <= 0.0 {
                    0.5 * (libm::erfc(-x1) - libm::erfc(-x0))
                } else {
                    0.5 * (libm::erf(x1) - libm::erf(x0))
                };
                Ok(v)
            }
            FieldKind::PowerLaw {
                core: CoreModel::Smooth | CoreModel::HalfLine,
                ..
            } => {
                let table = self.data.table.as_ref().expect("table for smooth cores");
                let (k0, k1) = (table.segment(x0), table.segment(x1));
                if k0.abs_diff(k1) <= 1 {
                    adaptive_simpson(&|u| self.b(u), x0, x1, LOCAL_REL_TOL, 0.0)
                } else {
                    Ok(self.table_primitive(x1)? - self.table_primitive(x0)?)
                }
            }
            _ => Ok(self.a(x1)? - self.a(x0)?),
        }
    }

    fn table_primitive(&self, x: f64) -> Result<f64> {
        let table = self.data.table.as_ref().expect("cumulative table present");
        let k = table.segment(x);
        let node = table.nodes[k];
        let partial = adaptive_simpson(&|u| self.b(u), node, x, LOCAL_REL_TOL, 0.0)?;
        Ok(table.values[k] + partial)
    }

    /// Limits `φ± = lim_{x→±∞} a(x)`.
    ///
    /// For tabulated profiles the limits assume `b = 0` outside the samples;
    /// `data().tail_assumed` reports that.
    pub fn flux_limits(&self) -> (ExtendedReal, ExtendedReal) {
        let shift = |e: ExtendedReal| match e {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(v + self.a0),
            other => other,
        };
        (shift(self.data.flux_offsets.0), shift(self.data.flux_offsets.1))
    }

    /// The unique `x` with `a(x) = xi` for an increasing vector potential.
    pub fn turning_point(&self, xi: f64) -> Result<f64> {
        if !self.data.monotone {
            return Err(Error::NonMonotone);
        }
        let (lo_flux, hi_flux) = self.flux_limits();
        if !xi.is_finite() || !(lo_flux < xi && hi_flux > xi) {
            return Err(Error::OutsideFluxRange {
                value: xi,
                lo: lo_flux,
                hi: hi_flux,
            });
        }
        let target_tol = TURNING_TOL * (1.0 + xi.abs());
        let f = |x: f64| -> Result<f64> { Ok(self.a(x)? - xi) };

        // bracket
        let (mut lo, mut hi) = match &self.kind {
            FieldKind::Tabulated { grid, .. } => (grid[0], grid[grid.len() - 1]),
            _ => {
                let f0 = f(0.0)?;
                if f0 == 0.0 {
                    return Ok(0.0);
                }
                let dir = if f0 < 0.0 { 1.0 } else { -1.0 };
                let mut inner = 0.0;
                let mut outer = dir;
                let mut found = false;
                for _ in 0..2100 {
                    let fo = f(outer)?;
                    if fo == 0.0 {
                        return Ok(outer);
                    }
                    if (fo > 0.0) == (dir > 0.0) {
                        found = true;
                        break;
                    }
                    inner = outer;
                    outer *= 2.0;
                    if !outer.is_finite() {
                        break;
                    }
                }
                if !found {
                    return Err(Error::OutsideFluxRange {
                        value: xi,
                        lo: lo_flux,
                        hi: hi_flux,
                    });
                }
                if dir > 0.0 {
                    (inner, outer)
                } else {
                    (outer, inner)
                }
            }
        };

        let mut x = 0.5 * (lo + hi);
        for _ in 0..400 {
            let fx = f(x)?;
            if fx.abs() <= target_tol {
                return Ok(x);
            }
            if fx < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if hi - lo <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                return Ok(x);
            }
            let slope = self.b(x);
            let newton = x - fx / slope;
            x = if slope > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Ok(x)
    }

    /// Effective velocity `v_θ = b(x_θ)`.
    pub fn effective_velocity(&self, theta: f64) -> Result<f64> {
        let x = self.turning_point(theta)?;
        let b = self.b(x);
        if b <= 0.0 {
            return Err(Error::NonPositiveField { x, b });
        }
        Ok(b)
    }
}

impl PotentialData {
    fn build(kind: &FieldKind) -> Result<Self> {
        use ExtendedReal::*;
        let mut data = PotentialData {
            table: None,
            prefix: None,
            flux_offsets: (NegInf, PosInf),
            monotone: true,
            tail_assumed: false,
        };
        match kind {
            FieldKind::Constant { b0 } => {
                data.monotone = *b0 > 0.0;
                data.flux_offsets = match b0.partial_cmp(&0.0) {
                    Some(Ordering::Greater) => (NegInf, PosInf),
                    Some(Ordering::Less) => (PosInf, NegInf),
                    _ => (Finite(0.0), Finite(0.0)),
                };
            }
            FieldKind::PowerLaw { c1, alpha, core } => match core {
                CoreModel::Pure | CoreModel::Smooth => {
                    if *core == CoreModel::Smooth {
                        data.table = Some(Arc::new(CumulativeTable::build(|u| {
                            power_law_b(*c1, *alpha, *core, u)
                        })?));
                    }
                }
                CoreModel::HalfLine => {
                    let table = CumulativeTable::build(|u| power_law_b(*c1, *alpha, *core, u))?;
                    // b decays like e^{2x} on the left; the table edge carries the limit
                    data.flux_offsets = (Finite(table.values[0]), PosInf);
                    data.table = Some(Arc::new(table));
                }
            },
            FieldKind::Gaussian => {
                data.flux_offsets = (Finite(-0.5), Finite(0.5));
            }
            FieldKind::StepLike {
                b_minus,
                b_plus,
                width,
            } => {
                data.monotone = *b_minus > 0.0 && *b_plus > 0.0;
                let ln2 = std::f64::consts::LN_2;
                let left = match b_minus.partial_cmp(&0.0) {
                    Some(Ordering::Greater) => NegInf,
                    Some(Ordering::Less) => PosInf,
                    _ => Finite(-b_plus * 0.5 * width * ln2),
                };
                let right = match b_plus.partial_cmp(&0.0) {
                    Some(Ordering::Greater) => PosInf,
                    Some(Ordering::Less) => NegInf,
                    _ => Finite(b_minus * 0.5 * width * ln2),
                };
                data.flux_offsets = (left, right);
            }
            FieldKind::Tabulated { grid, values } => {
                data.monotone = values.iter().all(|&v| v > 0.0);
                data.tail_assumed = true;
                let prefix = prefix_sums(grid, values);
                data.flux_offsets = (
                    Finite(tabulated_primitive(grid, values, &prefix, grid[0])),
                    Finite(tabulated_primitive(grid, values, &prefix, grid[grid.len() - 1])),
                );
                data.prefix = Some(prefix.into());
            }
        }
        Ok(data)
    }
}

impl CumulativeTable {
    fn build<F: Fn(f64) -> f64>(b: F) -> Result<Self> {
        let kmax = (TABLE_EXTENT.asinh() / TABLE_STEP).ceil() as i64;
        let nodes: Vec<f64> = (-kmax..=kmax).map(|k| (k as f64 * TABLE_STEP).sinh()).collect();
        let zero = kmax as usize;
        let mut values = vec![0.0; nodes.len()];
        for k in zero + 1..nodes.len() {
            let seg = adaptive_simpson(&b, nodes[k - 1], nodes[k], LOCAL_REL_TOL, TABLE_ABS_TOL)?;
            values[k] = values[k - 1] + seg;
        }
        for k in (0..zero).rev() {
            let seg = adaptive_simpson(&b, nodes[k], nodes[k + 1], LOCAL_REL_TOL, TABLE_ABS_TOL)?;
            values[k] = values[k + 1] - seg;
        }
        Ok(Self {
            nodes,
            values,
            zero,
            step: TABLE_STEP,
        })
    }

    /// Index of the node nearest to `x` (clamped to the table).
    fn segment(&self, x: f64) -> usize {
        let k = (x.asinh() / self.step).round() as i64 + self.zero as i64;
        k.clamp(0, self.nodes.len() as i64 - 1) as usize
    }
}

fn validate(kind: &FieldKind) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidProfile(m.to_string()));
    match kind {
        FieldKind::Constant { b0 } if !b0.is_finite() => bad("b0 must be finite"),
        FieldKind::PowerLaw { c1, alpha, core } => {
            if !(c1.is_finite() && *c1 > 0.0) {
                return bad("power law requires c1 > 0");
            }
            if !alpha.is_finite() || *alpha <= -1.0 || *alpha == 0.0 {
                return bad("power law requires alpha in (-1, 0) or (0, inf)");
            }
            if *core == CoreModel::Pure && *alpha < 0.0 {
                return bad("alpha < 0 needs a regularized core (smooth or half_line)");
            }
            Ok(())
        }
        FieldKind::StepLike {
            b_minus,
            b_plus,
            width,
        } => {
            if !(b_minus.is_finite() && b_plus.is_finite()) {
                return bad("step limits must be finite");
            }
            if !(width.is_finite() && *width > 0.0) {
                return bad("step width must be positive");
            }
            Ok(())
        }
        FieldKind::Tabulated { grid, values } => {
            if grid.len() < 2 || grid.len() != values.len() {
                return bad("tabulated profile needs >= 2 samples and matching lengths");
            }
            if grid.windows(2).any(|w| !(w[1] > w[0])) {
                return bad("tabulated grid must be strictly increasing");
            }
            if grid.iter().chain(values.iter()).any(|v| !v.is_finite()) {
                return bad("tabulated data must be finite");
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn power_law_b(c1: f64, alpha: f64, core: CoreModel, x: f64) -> f64 {
    match core {
        CoreModel::Pure => c1 * x.abs().powf(alpha),
        CoreModel::Smooth => c1 * (1.0 + x * x).powf(0.5 * alpha),
        CoreModel::HalfLine => {
            let gate = 1.0 / (1.0 + (-2.0 * x).exp());
            c1 * (1.0 + x * x).powf(0.5 * alpha) * gate
        }
    }
}

fn ln_cosh(y: f64) -> f64 {
    let a = y.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

fn interpolate(grid: &[f64], values: &[f64], x: f64) -> f64 {
    let n = grid.len();
    if x < grid[0] || x > grid[n - 1] {
        return 0.0;
    }
    let k = match grid.partition_point(|&g| g <= x) {
        0 => 0,
        p if p >= n => n - 2,
        p => p - 1,
    };
    let t = (x - grid[k]) / (grid[k + 1] - grid[k]);
    values[k] + t * (values[k + 1] - values[k])
}

fn segment(grid: &[f64], x: f64) -> usize {
    grid.partition_point(|&g| g <= x).clamp(1, grid.len() - 1) - 1
}

/// Integral of the linear interpolant over `[grid[k], x]` inside segment `k`.
fn partial_segment(grid: &[f64], values: &[f64], k: usize, x: f64) -> f64 {
    0.5 * (values[k] + interpolate(grid, values, x)) * (x - grid[k])
}

/// Exact integrals of the piecewise-linear interpolant from `0` (clamped to the hull) to each node.
fn prefix_sums(grid: &[f64], values: &[f64]) -> Vec<f64> {
    let mut acc = Vec::with_capacity(grid.len());
    acc.push(0.0);
    for k in 0..grid.len() - 1 {
        let last = acc[k];
        acc.push(last + 0.5 * (values[k] + values[k + 1]) * (grid[k + 1] - grid[k]));
    }
    let z = grid[0].max(0.0_f64.min(grid[grid.len() - 1]));
    let kz = segment(grid, z);
    let shift = acc[kz] + partial_segment(grid, values, kz, z);
    acc.iter_mut().for_each(|v| *v -= shift);
    acc
}

fn tabulated_primitive(grid: &[f64], values: &[f64], prefix: &[f64], x: f64) -> f64 {
    let x = x.clamp(grid[0], grid[grid.len() - 1]);
    let k = segment(grid, x);
    prefix[k] + partial_segment(grid, values, k, x)
}
