//! Model specifications, moment profiles and deformation weights.

use std::fmt;

use serde::Deserialize;

use crate::error::{Error, Result};

pub const MIN_GRID_POINTS: usize = 64;
pub const MIN_RADIUS: f64 = 2.0;
pub const DEFAULT_RADIUS: f64 = 5.0;
pub const DEFAULT_GRID_POINTS: usize = 2001;
pub const DEFAULT_T: f64 = 100.0;
/// Bound on `|rho|` and `|tau|`.
pub const MAX_WEIGHT: i64 = 10_000;

/// Quintic smoothstep, clamped to `[0, 1]`.
pub fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (x * (6.0 * x - 15.0) + 10.0)
}

fn smoothstep_derivative(x: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    30.0 * x * x * (x - 1.0) * (x - 1.0)
}

/// Moment profile of the cylinder: `r + rho` for `|r| ≤ 1/4`, `±1/2 + rho`
/// for `|r| ≥ 3/4`, non-decreasing.
///
/// The transition integrates `1 − smoothstep`, so the slope falls from 1 to 0
/// smoothly across `[1/4, 3/4]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProfileMu {
    pub rho: i64,
}

impl ProfileMu {
    pub fn new(rho: i64) -> Self {
        ProfileMu { rho }
    }

    fn shape(a: f64) -> f64 {
        if a <= 0.25 {
            a
        } else if a >= 0.75 {
            0.5
        } else {
            let x = (a - 0.25) / 0.5;
            let i = x - x.powi(6) + 3.0 * x.powi(5) - 2.5 * x.powi(4);
            0.25 + 0.5 * i
        }
    }

    pub fn value(&self, r: f64) -> f64 {
        self.rho as f64 + r.signum() * Self::shape(r.abs())
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let a = r.abs();
        if a <= 0.25 {
            1.0
        } else {
            1.0 - smoothstep((a - 0.25) / 0.5)
        }
    }

    /// `μ(−∞)` and `μ(+∞)` doubled, which are integers.
    pub fn doubled_limits(&self) -> (i64, i64) {
        (2 * self.rho - 1, 2 * self.rho + 1)
    }
}

/// Moment profile of the disc in the radial coordinate `s ≥ 0`:
/// `rho + (8/3)s² + O(s⁴)` at the origin and `rho + 1/2` for `s ≥ 3/4`.
pub fn disc_mu(rho: i64, s: f64) -> f64 {
    let x = (4.0 * s / 3.0).min(1.0);
    let y = 1.0 - x * x;
    rho as f64 + 0.5 * (1.0 - y * y * y)
}

fn disc_mu_derivative(s: f64) -> f64 {
    let x = 4.0 * s / 3.0;
    if x >= 1.0 {
        return 0.0;
    }
    let y = 1.0 - x * x;
    0.5 * 3.0 * y * y * 2.0 * x * (4.0 / 3.0)
}

/// Length of the orbit through radius `s`: `2πs` near the origin, `1` for
/// `s ≥ 3/4`, matching the cylinder end.
pub fn orbit_length(s: f64) -> f64 {
    let w = smoothstep((s - 0.25) / 0.5);
    2.0 * std::f64::consts::PI * s * (1.0 - w) + w
}

pub fn orbit_length_derivative(s: f64) -> f64 {
    let x = (s - 0.25) / 0.5;
    let w = smoothstep(x);
    let dw = smoothstep_derivative(x) / 0.5;
    2.0 * std::f64::consts::PI * ((1.0 - w) - s * dw) + dw
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Cylinder,
    Disc,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Cylinder => "cylinder",
            ModelKind::Disc => "disc",
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cylinder" => Ok(ModelKind::Cylinder),
            "disc" => Ok(ModelKind::Disc),
            other => Err(Error::InvalidModel(format!("unknown model kind {other:?}"))),
        }
    }
}

/// How the orbital operator is added to the Dirac operator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Deformation {
    /// `D + t·φ⁴·D_K`.
    ConstantT(f64),
    /// `D + φ⁴·f⁴·D_K` with the proper function `f = sqrt(1 + r²)`.
    ProperFunction,
    /// `D + ε·f⁴·D_K − (1 − ε)·i·f⁴·c(μ)` with `f = |μ|`.
    EpsilonFamily(f64),
}

impl Default for Deformation {
    fn default() -> Self {
        Deformation::ConstantT(DEFAULT_T)
    }
}

impl fmt::Display for Deformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Deformation::ConstantT(t) => write!(f, "t={t}"),
            Deformation::ProperFunction => f.write_str("proper"),
            Deformation::EpsilonFamily(e) => write!(f, "epsilon={e}"),
        }
    }
}

impl std::str::FromStr for Deformation {
    type Err = Error;

    /// `t=<real>`, `proper`, or `epsilon=<real>` (a real may be written `p/q`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "proper" {
            return Ok(Deformation::ProperFunction);
        }
        let (key, value) = s
            .split_once('=')
            .ok_or_else(|| Error::InvalidModel(format!("bad deformation {s:?}; expected t=, epsilon= or proper")))?;
        let v = parse_real(value)?;
        match key.trim() {
            "t" => Ok(Deformation::ConstantT(v)),
            "epsilon" | "eps" => Ok(Deformation::EpsilonFamily(v)),
            other => Err(Error::InvalidModel(format!("unknown deformation parameter {other:?}"))),
        }
    }
}

/// Parses a decimal or `p/q` real.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::InvalidModel(format!("bad number {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0.0 {
                return Err(bad());
            }
            Ok(p / q)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub r_max: f64,
    pub n: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { r_max: DEFAULT_RADIUS, n: DEFAULT_GRID_POINTS }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelSpec1D {
    pub kind: ModelKind,
    pub rho: i64,
    pub tau: i64,
    pub deformation: Deformation,
    pub grid: Grid,
}

impl ModelSpec1D {
    /// Default deformation and grid.
    pub fn new(kind: ModelKind, rho: i64, tau: i64) -> Self {
        ModelSpec1D { kind, rho, tau, deformation: Deformation::default(), grid: Grid::default() }
    }

    pub fn cylinder(rho: i64, tau: i64) -> Self {
        Self::new(ModelKind::Cylinder, rho, tau)
    }

    pub fn disc(rho: i64, tau: i64) -> Self {
        Self::new(ModelKind::Disc, rho, tau)
    }

    pub fn with_deformation(mut self, d: Deformation) -> Self {
        self.deformation = d;
        self
    }

    pub fn with_grid(mut self, r_max: f64, n: usize) -> Self {
        self.grid = Grid { r_max, n };
        self
    }

    pub fn with_tau(mut self, tau: i64) -> Self {
        self.tau = tau;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let g = self.grid;
        if g.n < MIN_GRID_POINTS {
            return Err(Error::InvalidModel(format!("grid needs N >= {MIN_GRID_POINTS}, got {}", g.n)));
        }
        if !(g.r_max.is_finite() && g.r_max >= MIN_RADIUS) {
            return Err(Error::InvalidModel(format!("grid needs R_max >= {MIN_RADIUS}, got {}", g.r_max)));
        }
        if self.rho.abs() > MAX_WEIGHT || self.tau.abs() > MAX_WEIGHT {
            return Err(Error::InvalidModel(format!(
                "|rho| and |tau| are limited to {MAX_WEIGHT} (rho={}, tau={})",
                self.rho, self.tau
            )));
        }
        match self.deformation {
            Deformation::ConstantT(t) if !(t.is_finite() && t > 0.0) => {
                Err(Error::InvalidModel(format!("t must be positive and finite, got {t}")))
            }
            Deformation::EpsilonFamily(e) if !(0.0..=1.0).contains(&e) => {
                Err(Error::InvalidModel(format!("epsilon must lie in [0, 1], got {e}")))
            }
            _ => Ok(()),
        }
    }

    /// Cutoff `φ`: vanishes where `μ` may meet `tau`, equals 1 away from it.
    pub fn cutoff(&self, r: f64) -> f64 {
        let bump = smoothstep((r.abs() - 0.125) / 0.125);
        match self.kind {
            ModelKind::Cylinder if self.tau != self.rho => 1.0,
            _ => bump,
        }
    }

    pub fn mu(&self, r: f64) -> f64 {
        match self.kind {
            ModelKind::Cylinder => ProfileMu::new(self.rho).value(r),
            ModelKind::Disc => disc_mu(self.rho, r),
        }
    }

    pub fn mu_derivative(&self, r: f64) -> f64 {
        match self.kind {
            ModelKind::Cylinder => ProfileMu::new(self.rho).derivative(r),
            ModelKind::Disc => disc_mu_derivative(r),
        }
    }

    /// `(w, ε)` such that the deformation adds `w·(μ − ε·tau)` to the
    /// orbital potential `μ − tau`.
    pub fn deformation_weight(&self, r: f64) -> (f64, f64) {
        let phi4 = self.cutoff(r).powi(4);
        match self.deformation {
            Deformation::ConstantT(t) => (t * phi4, 1.0),
            Deformation::ProperFunction => ((1.0 + r * r).powi(2) * phi4, 1.0),
            Deformation::EpsilonFamily(e) => (self.mu(r).abs().powi(4) * phi4, e),
        }
    }

    /// Inner radius of the disc.
    pub fn inner_radius(&self) -> f64 {
        1e-3 * self.grid.r_max
    }

    /// Coefficient `W` of the plus block `d/dr + W`.
    pub fn potential(&self, r: f64) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mu = self.mu(r);
        let tau = self.tau as f64;
        let (w, eps) = self.deformation_weight(r);
        match self.kind {
            ModelKind::Cylinder => two_pi * ((mu - tau) + w * (mu - eps * tau)),
            ModelKind::Disc => {
                let l = orbit_length(r);
                two_pi * ((mu - tau) / l + l * w * (mu - eps * tau)) - orbit_length_derivative(r) / (2.0 * l)
            }
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    kind: ModelKind,
    rho: i64,
    tau: i64,
    deformation: Option<DeformationDoc>,
    grid: Option<GridDoc>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum DeformationDoc {
    Constant { t: f64 },
    Proper,
    Epsilon { epsilon: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GridDoc {
    r_max: Option<f64>,
    n: Option<usize>,
}

/// Parses a model document:
///
/// ```toml
/// kind = "cylinder"          # or "disc"
/// rho = 0
/// tau = 0
///
/// [deformation]              # optional; default constant t = 100
/// kind = "constant"          # "constant" (with t), "proper", "epsilon" (with epsilon)
/// t = 100.0
///
/// [grid]                     # optional; defaults r_max = 5, n = 2001
/// r_max = 5.0
/// n = 2001
/// ```
///
/// `default_n` replaces the built-in grid size when the document omits `n`.
pub fn parse_model_spec(text: &str, default_n: Option<usize>) -> Result<ModelSpec1D> {
    let doc: ModelDoc = toml::from_str(text).map_err(|e| {
        let at = e
            .span()
            .map(|s| format!(" at line {}", text[..s.start.min(text.len())].matches('\n').count() + 1))
            .unwrap_or_default();
        Error::InvalidModel(format!("{}{at}", e.message()))
    })?;
    let deformation = match doc.deformation {
        None => Deformation::default(),
        Some(DeformationDoc::Constant { t }) => Deformation::ConstantT(t),
        Some(DeformationDoc::Proper) => Deformation::ProperFunction,
        Some(DeformationDoc::Epsilon { epsilon }) => Deformation::EpsilonFamily(epsilon),
    };
    let mut grid = Grid { n: default_n.unwrap_or(DEFAULT_GRID_POINTS), ..Grid::default() };
    if let Some(g) = doc.grid {
        grid.r_max = g.r_max.unwrap_or(grid.r_max);
        grid.n = g.n.unwrap_or(grid.n);
    }
    let spec = ModelSpec1D { kind: doc.kind, rho: doc.rho, tau: doc.tau, deformation, grid };
    spec.validate()?;
    Ok(spec)
}
