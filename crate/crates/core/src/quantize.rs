//! Quantization of toric data and its compatibility with circle reduction.
//!
//! For a Delzant polyhedron the quantization character is the indicator of
//! its lattice points. Reduction by the circle with weight `xi` at a regular
//! integer level is the hyperplane slice in quotient-lattice coordinates, and
//! its Riemann-Roch number is the lattice-point count of that slice.
//!
//! The general definition for non-toric spaces (a pushforward of an index
//! localized near `μ⁻¹(ρ)`) needs manifold data and is not computable here;
//! only the toric case is implemented.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::character::FormalCharacter;
use crate::error::{Error, Result};
use crate::exact::{dot_int_rat, format_point, int_rat, nullspace, solve, Rat};
use crate::lattice::Weight;
use crate::polytope::{DelzantReport, Polyhedron};
use crate::REPORT_SCHEMA;

/// Tag attached to every boundary term of a localization report.
pub const VANISHING_TAG: &str = "fixed-point vanishing";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DelzantMode {
    /// Non-Delzant input is an error.
    #[default]
    Strict,
    /// Non-Delzant input is accepted; the report carries the violations.
    Warn,
}

/// Indicator of `P ∩ ℤⁿ`; fails on non-Delzant input.
pub fn quantize(p: &Polyhedron) -> Result<FormalCharacter> {
    quantize_with(p, DelzantMode::Strict).map(|(c, _)| c)
}

pub fn quantize_with(p: &Polyhedron, mode: DelzantMode) -> Result<(FormalCharacter, DelzantReport)> {
    let report = p.delzant_check()?;
    if !report.is_delzant && mode == DelzantMode::Strict {
        return Err(Error::NotDelzant(report.summary()));
    }
    Ok((FormalCharacter::indicator(p.clone()), report))
}

/// Number of lattice points of a bounded polytope.
///
/// Smoothness is not enforced: reduced spaces at regular levels may be
/// orbifolds, and their count is still the value compared against.
pub fn riemann_roch(p: &Polyhedron) -> Result<u64> {
    if !p.is_bounded() {
        return Err(Error::Unbounded("riemann_roch"));
    }
    Ok(p.lattice_points(None)?.len() as u64)
}

/// A point of a minimal face on which `⟨xi,·⟩` is constant and equal to `level`.
///
/// For pointed polyhedra these are exactly the vertices at that level.
pub fn critical_point(p: &Polyhedron, xi: &Weight, level: i64) -> Result<Option<Vec<Rat>>> {
    if xi.rank() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: xi.rank() });
    }
    let normals: Vec<Vec<Rat>> =
        p.facets().iter().map(|f| f.normal().iter().map(int_rat).collect()).collect();
    let xb = xi.to_big();
    let lineality = nullspace(&normals, p.dim());
    if lineality.iter().any(|d| !dot_int_rat(&xb, d).is_zero()) {
        return Ok(None);
    }
    let c = int_rat(&BigInt::from(level));
    Ok(p.minimal_faces()?.into_iter().map(|f| f.point).find(|v| dot_int_rat(&xb, v) == c))
}

/// The reduced polytope at a regular level.
pub fn reduce(p: &Polyhedron, xi: &Weight, level: i64) -> Result<Polyhedron> {
    if !xi.is_primitive() {
        xi.primitive()?;
        return Err(Error::NotPrimitive(xi.to_string(), crate::lattice::gcd_all(&xi.to_big()).to_string()));
    }
    if let Some(v) = critical_point(p, xi, level)? {
        return Err(Error::IrregularLevel { xi: xi.to_string(), level, vertex: format_point(&v) });
    }
    p.slice(xi, level)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRReport {
    pub xi: Weight,
    pub level: i64,
    pub regular: bool,
    /// Multiplicity of `level` in the restricted quantization.
    pub lhs: i64,
    /// Riemann-Roch number of the reduced space.
    pub rhs: i64,
    pub pass: bool,
}

impl QRReport {
    pub fn to_json(&self) -> Value {
        json!({
            "schema": REPORT_SCHEMA,
            "report": "verify-qr",
            "xi": self.xi.coords(),
            "level": self.level,
            "regular": self.regular,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "pass": self.pass,
        })
    }
}

/// Compares the restricted quantization with the quantization of the reduction.
pub fn verify_qr(p: &Polyhedron, xi: &Weight, level: i64) -> Result<QRReport> {
    let q = quantize(p)?;
    verify_with(p, &q, xi, level)
}

fn verify_with(p: &Polyhedron, q: &FormalCharacter, xi: &Weight, level: i64) -> Result<QRReport> {
    let lhs = q.restrict(xi)?.evaluate(&Weight(vec![level]))?;
    let regular = critical_point(p, xi, level)?.is_none();
    let rhs = if p.dim() == 1 {
        // the reduced space is a point or empty
        p.contains_weight(&Weight(vec![xi.coords()[0] * level]))? as i64
    } else if regular {
        riemann_roch(&reduce(p, xi, level)?)? as i64
    } else {
        riemann_roch(&p.slice(xi, level)?)? as i64
    };
    Ok(QRReport { xi: xi.clone(), level, regular, lhs, rhs, pass: regular && lhs == rhs })
}

/// [`verify_qr`] over many `(xi, level)` pairs in parallel; results keep input order.
pub fn verify_qr_many(p: &Polyhedron, cases: &[(Weight, i64)]) -> Result<Vec<QRReport>> {
    let q = quantize(p)?;
    cases.par_iter().map(|(xi, level)| verify_with(p, &q, xi, *level)).collect()
}

/// Integer levels from one below to one above the range of `⟨xi,·⟩` on a bounded polytope.
pub fn level_sweep(p: &Polyhedron, xi: &Weight) -> Result<Vec<i64>> {
    match p.level_range(xi)? {
        None => Ok(Vec::new()),
        Some((lo, hi)) => {
            let lo = crate::exact::floor_i64(&lo)? - 1;
            let hi = crate::exact::ceil_i64(&hi)? + 1;
            Ok((lo..=hi).collect())
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryTerm {
    /// Facets whose intersection is the face.
    pub face: Vec<usize>,
    /// Nearest point to the weight on the face; a critical point of `|ρ − x|²` on `P`.
    pub point: Vec<Rat>,
    pub contribution: i64,
    pub justification: &'static str,
}

impl BoundaryTerm {
    pub fn label(&self) -> String {
        let ids: Vec<String> = self.face.iter().map(|i| i.to_string()).collect();
        format!("face[{}]@{}", ids.join(","), format_point(&self.point))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationReport {
    pub rho: Weight,
    pub fiber_contribution: i64,
    pub boundary_terms: Vec<BoundaryTerm>,
}

impl LocalizationReport {
    pub fn total(&self) -> i64 {
        self.fiber_contribution + self.boundary_terms.iter().map(|t| t.contribution).sum::<i64>()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": REPORT_SCHEMA,
            "report": "localize",
            "rho": self.rho.coords(),
            "fiber_contribution": self.fiber_contribution,
            "boundary_terms": self.boundary_terms.iter().map(|t| json!({
                "label": t.label(),
                "face": t.face,
                "contribution": t.contribution,
                "justification": t.justification,
            })).collect::<Vec<_>>(),
            "total": self.total(),
        })
    }
}

/// Splits the multiplicity of `rho` into the contribution of the fiber over
/// `rho` and of the other critical sets of `|rho − μ|²`, which lie over
/// proper faces and contribute zero.
pub fn localization_report(p: &Polyhedron, rho: &Weight) -> Result<LocalizationReport> {
    if rho.rank() != p.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), found: rho.rank() });
    }
    let fiber_contribution = p.contains_weight(rho)? as i64;
    let mut boundary_terms = Vec::new();
    if !p.is_flagged_empty() {
        let r = rho.to_rational();
        let n = p.facets().len();
        for k in 1..=p.dim().min(n) {
            for face in crate::exact::combinations(n, k) {
                let Some(x) = project_onto_face(p, &face, &r) else { continue };
                if x == r || !p.contains(&x)? {
                    continue;
                }
                let active: Vec<usize> =
                    (0..n).filter(|&i| p.facets()[i].slack(&x).is_zero()).collect();
                if active != face {
                    continue;
                }
                boundary_terms.push(BoundaryTerm {
                    face,
                    point: x,
                    contribution: 0,
                    justification: VANISHING_TAG,
                });
            }
        }
    }
    Ok(LocalizationReport { rho: rho.clone(), fiber_contribution, boundary_terms })
}

/// Orthogonal projection of `y` onto `{x : ⟨n_i, x⟩ = b_i, i ∈ face}`;
/// `None` when the face normals are dependent.
fn project_onto_face(p: &Polyhedron, face: &[usize], y: &[Rat]) -> Option<Vec<Rat>> {
    let rows: Vec<Vec<Rat>> =
        face.iter().map(|&i| p.facets()[i].normal().iter().map(int_rat).collect()).collect();
    let gram: Vec<Vec<Rat>> = rows
        .iter()
        .map(|a| rows.iter().map(|b| a.iter().zip(b).map(|(u, v)| u * v).sum()).collect())
        .collect();
    let resid: Vec<Rat> =
        face.iter().map(|&i| p.facets()[i].slack(y)).collect();
    let lambda = solve(&gram, &resid)?;
    let mut x = y.to_vec();
    for (l, row) in lambda.iter().zip(&rows) {
        for (xj, aj) in x.iter_mut().zip(row) {
            *xj -= l * aj;
        }
    }
    Some(x)
}
