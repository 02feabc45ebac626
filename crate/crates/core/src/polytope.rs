//! Rational convex polyhedra in H-representation.
//!
//! A [`Polyhedron`] is `{x : ⟨n_i, x⟩ ≥ b_i}` with primitive integer inward
//! normals and rational offsets. All predicates are decided in exact
//! arithmetic. Enumerative routines (vertices, faces, Delzant check) work by
//! active-set enumeration and are limited to dimension [`VERTEX_DIM_LIMIT`].
//!
//! # Text format
//!
//! Polytope documents are TOML:
//!
//! ```toml
//! name = "square"        # optional
//! dim = 2
//!
//! [[facets]]
//! normal = [1, 0]        # integers; rescaled to the primitive vector
//! offset = 0             # integer or "p/q"; meaning ⟨normal, x⟩ ≥ offset
//!
//! [[facets]]
//! normal = [-1, 0]
//! offset = "-2"
//! ```
//!
//! Unknown keys are rejected. A normal `[2, 4]` with offset `3` is stored as
//! `[1, 2]` with offset `3/2`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exact::{
    ceil_i64, combinations, dot_int_rat, floor_i64, format_point, format_rational, int_rat,
    nullspace, parse_rational, particular_solution, rank_int, to_i64, Rat,
};
use crate::lattice::{complete_to_basis, gcd_all, UnimodularMatrix, Weight};

pub const VERTEX_DIM_LIMIT: usize = 4;

/// `⟨normal, x⟩ ≥ offset` with `normal` primitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halfspace {
    normal: Vec<BigInt>,
    offset: Rat,
}

impl Halfspace {
    /// Rescales `normal` to its primitive multiple (and `offset` with it).
    pub fn new(normal: Vec<BigInt>, offset: Rat) -> Result<Self> {
        let g = gcd_all(&normal);
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        let normal = normal.iter().map(|c| c / &g).collect();
        Ok(Halfspace { normal, offset: offset / int_rat(&g) })
    }

    pub fn from_i64(normal: &[i64], offset: Rat) -> Result<Self> {
        Self::new(normal.iter().map(|&c| BigInt::from(c)).collect(), offset)
    }

    pub fn normal(&self) -> &[BigInt] {
        &self.normal
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn slack(&self, x: &[Rat]) -> Rat {
        dot_int_rat(&self.normal, x) - &self.offset
    }
}

/// Why a polyhedron was recognised as empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmptyCertificate {
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polyhedron {
    dim: usize,
    facets: Vec<Halfspace>,
    name: Option<String>,
    empty: Option<EmptyCertificate>,
}

/// A minimal face: a vertex when the polyhedron is pointed, otherwise a
/// translate of the lineality space represented by one of its points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub point: Vec<Rat>,
    pub active: Vec<usize>,
}

/// Integer box `lo ≤ x ≤ hi` (inclusive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBox {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl LatticeBox {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        assert_eq!(lo.len(), hi.len());
        LatticeBox { lo, hi }
    }

    pub fn cube(dim: usize, lo: i64, hi: i64) -> Self {
        LatticeBox { lo: vec![lo; dim], hi: vec![hi; dim] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DelzantFailure {
    /// Number of facets meeting at the face differs from the codimension.
    ActiveCount { found: usize, expected: usize },
    /// `|det|` of the active normals at a vertex.
    Determinant(BigInt),
    /// gcd of the maximal minors of the active normals (non-pointed case).
    MinorGcd(BigInt),
}

impl fmt::Display for DelzantFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelzantFailure::ActiveCount { found, expected } => {
                write!(f, "{found} active facets, expected {expected}")
            }
            DelzantFailure::Determinant(d) => write!(f, "|det| = {d}"),
            DelzantFailure::MinorGcd(g) => write!(f, "gcd of maximal minors = {g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantViolation {
    pub vertex: Vec<Rat>,
    pub failure: DelzantFailure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelzantReport {
    pub is_delzant: bool,
    pub violations: Vec<DelzantViolation>,
}

impl DelzantReport {
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{}: {}", format_point(&v.vertex), v.failure))
            .collect();
        parts.join("; ")
    }
}

/// Lattice coordinates on the hyperplane `⟨xi, x⟩ = level`.
///
/// `basis` is unimodular with `⟨xi, basis·y⟩ = y₀`, so the integer points of
/// the hyperplane are exactly `basis·(level, z)` for `z ∈ ℤⁿ⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneChart {
    pub xi: Weight,
    pub level: i64,
    pub basis: UnimodularMatrix,
}

impl HyperplaneChart {
    pub fn new(xi: &Weight, level: i64) -> Result<Self> {
        let u = complete_to_basis(xi)?;
        let basis = u.inverse().matrix().transpose();
        let basis = UnimodularMatrix::new(basis).expect("inverse transpose of unimodular");
        Ok(HyperplaneChart { xi: xi.clone(), level, basis })
    }

    /// Point of the hyperplane with reduced coordinates `z`.
    pub fn lift(&self, z: &Weight) -> Result<Weight> {
        let mut y = vec![BigInt::from(self.level)];
        y.extend(z.to_big());
        let x = self.basis.matrix().mul_vec(&y);
        x.iter().map(to_i64).collect::<Result<Vec<_>>>().map(Weight)
    }

    /// Halfspace coefficients in chart coordinates `(y₀, z)`.
    fn pull_back(&self, normal: &[BigInt]) -> Vec<BigInt> {
        // ⟨n, B y⟩ = ⟨Bᵀ n, y⟩
        self.basis.matrix().transpose().mul_vec(normal)
    }
}

impl Polyhedron {
    /// Validates dimensions and rejects duplicate facets.
    pub fn new(dim: usize, facets: Vec<Halfspace>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Precondition("polyhedron dimension must be positive".into()));
        }
        for (i, f) in facets.iter().enumerate() {
            if f.normal.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: f.normal.len() });
            }
            if facets[..i].contains(f) {
                return Err(Error::Precondition(format!("facet {i} duplicates an earlier facet")));
            }
        }
        Ok(Polyhedron { dim, facets, name: None, empty: None })
    }

    /// Like [`Polyhedron::new`] but silently merges duplicate facets.
    fn from_facets_dedup(dim: usize, facets: Vec<Halfspace>) -> Self {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for f in facets {
            let key = (f.normal.clone(), f.offset.clone());
            if seen.insert(key) {
                out.push(f);
            }
        }
        Polyhedron { dim, facets: out, name: None, empty: None }
    }

    /// `{x : ⟨n_i, x⟩ ≥ b_i}` from integer data.
    pub fn from_inequalities(rows: &[(Vec<i64>, i64)]) -> Result<Self> {
        let dim = rows.first().map(|r| r.0.len()).ok_or_else(|| {
            Error::Precondition("at least one inequality is needed to fix the dimension".into())
        })?;
        let facets = rows
            .iter()
            .map(|(n, b)| Halfspace::from_i64(n, Rat::from_integer(BigInt::from(*b))))
            .collect::<Result<Vec<_>>>()?;
        Polyhedron::new(dim, facets)
    }

    /// Axis-parallel box `∏ [lo_i, hi_i]`.
    pub fn rectangle(lo: &[i64], hi: &[i64]) -> Result<Self> {
        let d = lo.len();
        let mut rows = Vec::new();
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            rows.push((e.clone(), lo[i]));
            e[i] = -1;
            rows.push((e, -hi[i]));
        }
        Polyhedron::from_inequalities(&rows).map(|p| p.named("box"))
    }

    pub fn cube(dim: usize, k: i64) -> Result<Self> {
        Polyhedron::rectangle(&vec![0; dim], &vec![k; dim])
    }

    /// `{x ≥ 0, Σx ≤ k}`.
    pub fn standard_simplex(dim: usize, k: i64) -> Result<Self> {
        let mut rows: Vec<(Vec<i64>, i64)> = (0..dim)
            .map(|i| {
                let mut e = vec![0; dim];
                e[i] = 1;
                (e, 0)
            })
            .collect();
        rows.push((vec![-1; dim], -k));
        Polyhedron::from_inequalities(&rows).map(|p| p.named("simplex"))
    }

    /// `{x ≥ 0}`.
    pub fn orthant(dim: usize) -> Result<Self> {
        let rows: Vec<(Vec<i64>, i64)> = (0..dim)
            .map(|i| {
                let mut e = vec![0; dim];
                e[i] = 1;
                (e, 0)
            })
            .collect();
        Polyhedron::from_inequalities(&rows).map(|p| p.named("orthant"))
    }

    /// `{lo ≤ x_0 ≤ hi}` in `dim` dimensions.
    pub fn slab(dim: usize, lo: i64, hi: i64) -> Result<Self> {
        let mut e = vec![0; dim];
        e[0] = 1;
        let mut f = vec![0; dim];
        f[0] = -1;
        Polyhedron::from_inequalities(&[(e, lo), (f, -hi)]).map(|p| p.named("slab"))
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = Some(name.to_string());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn is_flagged_empty(&self) -> bool {
        self.empty.is_some()
    }

    pub fn empty_certificate(&self) -> Option<&EmptyCertificate> {
        self.empty.as_ref()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: n });
        }
        Ok(())
    }

    fn normal_rank(&self) -> usize {
        let rows: Vec<&[BigInt]> = self.facets.iter().map(|f| f.normal.as_slice()).collect();
        rank_int(&rows)
    }

    /// Exact membership of a rational point.
    pub fn contains(&self, x: &[Rat]) -> Result<bool> {
        self.check_dim(x.len())?;
        if self.empty.is_some() {
            return Ok(false);
        }
        Ok(self.facets.iter().all(|f| !f.slack(x).is_negative()))
    }

    /// Exact membership of a lattice point.
    pub fn contains_weight(&self, w: &Weight) -> Result<bool> {
        self.check_dim(w.rank())?;
        if self.empty.is_some() {
            return Ok(false);
        }
        Ok(self.facets.iter().all(|f| {
            let v: BigInt = f.normal.iter().zip(w.coords()).map(|(n, &c)| n * c).sum();
            !(int_rat(&v) - &f.offset).is_negative()
        }))
    }

    fn active_set(&self, x: &[Rat]) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.facets[i].slack(x).is_zero()).collect()
    }

    /// All minimal faces, each with its full active set, in lexicographic
    /// order of representative points.
    pub fn minimal_faces(&self) -> Result<Vec<Face>> {
        if self.dim > VERTEX_DIM_LIMIT {
            return Err(Error::DimensionGuard { dim: self.dim, limit: VERTEX_DIM_LIMIT });
        }
        if self.empty.is_some() {
            return Ok(Vec::new());
        }
        let r = self.normal_rank();
        if r == 0 {
            return Ok(vec![Face { point: vec![Rat::zero(); self.dim], active: Vec::new() }]);
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut faces = Vec::new();
        for subset in combinations(self.facets.len(), r) {
            let rows: Vec<&[BigInt]> = subset.iter().map(|&i| self.facets[i].normal()).collect();
            if rank_int(&rows) != r {
                continue;
            }
            let Some(x) = self.solve_active(&subset) else { continue };
            if !self.facets.iter().all(|f| !f.slack(&x).is_negative()) {
                continue;
            }
            let active = self.active_set(&x);
            if seen.insert(active.clone()) {
                let point = self.solve_active(&active).expect("consistent active system");
                faces.push(Face { point, active });
            }
        }
        faces.sort_by(|a, b| a.point.cmp(&b.point));
        Ok(faces)
    }

    fn solve_active(&self, idx: &[usize]) -> Option<Vec<Rat>> {
        let a: Vec<Vec<Rat>> =
            idx.iter().map(|&i| self.facets[i].normal.iter().map(int_rat).collect()).collect();
        let b: Vec<Rat> = idx.iter().map(|&i| self.facets[i].offset.clone()).collect();
        particular_solution(&a, &b, self.dim)
    }

    /// Vertices with their active facet sets, lexicographically ordered.
    pub fn vertices(&self) -> Result<Vec<Face>> {
        if self.dim > VERTEX_DIM_LIMIT {
            return Err(Error::DimensionGuard { dim: self.dim, limit: VERTEX_DIM_LIMIT });
        }
        if self.empty.is_some() {
            return Ok(Vec::new());
        }
        let r = self.normal_rank();
        if r < self.dim {
            return Err(Error::NotPointed { lineality: self.dim - r });
        }
        self.minimal_faces()
    }

    /// Emptiness, decided exactly through minimal faces.
    pub fn is_empty(&self) -> Result<bool> {
        Ok(self.empty.is_some() || self.minimal_faces()?.is_empty())
    }

    /// True iff the recession cone `{x : ⟨n_i, x⟩ ≥ 0}` is `{0}`.
    pub fn is_bounded(&self) -> bool {
        if self.empty.is_some() {
            return true;
        }
        let d = self.dim;
        if self.normal_rank() < d {
            return false;
        }
        // A nonzero pointed cone has an extreme ray: a line cut out by d−1
        // independent tight constraints, in one of its two directions.
        let normals: Vec<Vec<Rat>> =
            self.facets.iter().map(|f| f.normal.iter().map(int_rat).collect()).collect();
        for subset in combinations(self.facets.len(), d - 1) {
            let rows: Vec<Vec<Rat>> = subset.iter().map(|&i| normals[i].clone()).collect();
            let null = nullspace(&rows, d);
            if null.len() != 1 {
                continue;
            }
            let dir = &null[0];
            for sign in [Rat::one(), -Rat::one()] {
                let ray: Vec<Rat> = dir.iter().map(|v| v * &sign).collect();
                if self.facets.iter().all(|f| !dot_int_rat(&f.normal, &ray).is_negative()) {
                    return false;
                }
            }
        }
        true
    }

    /// Smoothness: at every minimal face the active normals must number
    /// `rank` and extend to a lattice basis.
    pub fn delzant_check(&self) -> Result<DelzantReport> {
        let faces = self.minimal_faces()?;
        let r = self.normal_rank();
        let mut violations = Vec::new();
        for face in faces {
            let failure = if face.active.len() != r {
                Some(DelzantFailure::ActiveCount { found: face.active.len(), expected: r })
            } else {
                let g = maximal_minor_gcd(
                    &face.active.iter().map(|&i| self.facets[i].normal.clone()).collect::<Vec<_>>(),
                );
                if g.is_one() {
                    None
                } else if r == self.dim {
                    Some(DelzantFailure::Determinant(g))
                } else {
                    Some(DelzantFailure::MinorGcd(g))
                }
            };
            if let Some(failure) = failure {
                violations.push(DelzantViolation { vertex: face.point, failure });
            }
        }
        Ok(DelzantReport { is_delzant: violations.is_empty(), violations })
    }

    /// Integer points of `P` (or of `P ∩ box`), lexicographically ordered.
    pub fn lattice_points(&self, bbox: Option<&LatticeBox>) -> Result<Vec<Weight>> {
        if self.empty.is_some() {
            return Ok(Vec::new());
        }
        if let Some(b) = bbox {
            self.check_dim(b.lo.len())?;
        }
        let (lo, hi) = if self.is_bounded() {
            let verts = self.vertices()?;
            if verts.is_empty() {
                return Ok(Vec::new());
            }
            let mut lo = vec![i64::MAX; self.dim];
            let mut hi = vec![i64::MIN; self.dim];
            for v in &verts {
                for k in 0..self.dim {
                    lo[k] = lo[k].min(ceil_i64(&v.point[k])?);
                    hi[k] = hi[k].max(floor_i64(&v.point[k])?);
                }
            }
            if let Some(b) = bbox {
                for k in 0..self.dim {
                    lo[k] = lo[k].max(b.lo[k]);
                    hi[k] = hi[k].min(b.hi[k]);
                }
            }
            (lo, hi)
        } else {
            let b = bbox.ok_or(Error::UnboundedNeedsBox)?;
            (b.lo.clone(), b.hi.clone())
        };
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Ok(Vec::new());
        }
        let tests = self.integer_tests()?;
        let mut out = Vec::new();
        let mut cur = lo.clone();
        scan_box(&lo, &hi, 0, &mut cur, &mut |p| {
            if tests.iter().all(|(n, b)| n.iter().zip(p).map(|(a, &c)| a * c as i128).sum::<i128>() >= *b) {
                out.push(Weight(p.to_vec()));
            }
        });
        Ok(out)
    }

    /// Facets as `(normal, ⌈offset⌉)` for integer points.
    fn integer_tests(&self) -> Result<Vec<(Vec<i128>, i128)>> {
        self.facets
            .iter()
            .map(|f| {
                let n = f
                    .normal
                    .iter()
                    .map(|c| i128::try_from(c).map_err(|_| Error::Overflow(c.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                let b = ceil_i64(&f.offset)? as i128;
                Ok((n, b))
            })
            .collect()
    }

    /// `P ∩ {⟨xi, x⟩ = level}` in the lattice coordinates of the hyperplane.
    pub fn slice(&self, xi: &Weight, level: i64) -> Result<Polyhedron> {
        self.slice_with_chart(xi, level).map(|(p, _)| p)
    }

    pub fn slice_with_chart(&self, xi: &Weight, level: i64) -> Result<(Polyhedron, HyperplaneChart)> {
        self.check_dim(xi.rank())?;
        if self.dim < 2 {
            return Err(Error::Precondition("slicing needs dimension at least 2".into()));
        }
        let chart = HyperplaneChart::new(xi, level)?;
        let c = int_rat(&BigInt::from(level));
        let mut facets = Vec::new();
        let mut empty = self.empty.clone();
        for (i, f) in self.facets.iter().enumerate() {
            let coeffs = chart.pull_back(&f.normal);
            let rest = coeffs[1..].to_vec();
            let offset = &f.offset - int_rat(&coeffs[0]) * &c;
            if rest.iter().all(Zero::is_zero) {
                if offset.is_positive() && empty.is_none() {
                    empty = Some(EmptyCertificate {
                        reason: format!(
                            "facet {i} restricts to 0 >= {} on the hyperplane",
                            format_rational(&offset)
                        ),
                    });
                }
                continue;
            }
            facets.push(Halfspace::new(rest, offset)?);
        }
        let mut p = Polyhedron::from_facets_dedup(self.dim - 1, facets);
        if empty.is_none() && p.dim <= VERTEX_DIM_LIMIT && p.minimal_faces()?.is_empty() {
            empty = Some(EmptyCertificate {
                reason: format!("no point of the polyhedron satisfies <{xi},x> = {level}"),
            });
        }
        p.empty = empty;
        p.name = self.name.as_ref().map(|n| format!("{n}|<{},x>={level}", xi));
        Ok((p, chart))
    }

    /// Vertex `v` with `⟨xi, v⟩ = level`, if any; `None` means the level is regular.
    pub fn vertex_at_level(&self, xi: &Weight, level: i64) -> Result<Option<Vec<Rat>>> {
        self.check_dim(xi.rank())?;
        let xi_big = xi.to_big();
        let c = int_rat(&BigInt::from(level));
        Ok(self
            .vertices()?
            .into_iter()
            .find(|v| dot_int_rat(&xi_big, &v.point) == c)
            .map(|v| v.point))
    }

    /// Range `[min, max]` of `⟨xi, ·⟩` over the vertices of a bounded polytope.
    pub fn level_range(&self, xi: &Weight) -> Result<Option<(Rat, Rat)>> {
        self.check_dim(xi.rank())?;
        if !self.is_bounded() {
            return Err(Error::Unbounded("level_range"));
        }
        let xi_big = xi.to_big();
        let vals: Vec<Rat> =
            self.vertices()?.iter().map(|v| dot_int_rat(&xi_big, &v.point)).collect();
        Ok(vals.iter().min().cloned().zip(vals.iter().max().cloned()))
    }

    /// Image under `x ↦ U·x`.
    pub fn transform(&self, u: &UnimodularMatrix) -> Result<Polyhedron> {
        self.check_dim(u.dim())?;
        let inv_t = u.inverse().matrix().transpose();
        let facets = self
            .facets
            .iter()
            .map(|f| Halfspace::new(inv_t.mul_vec(&f.normal), f.offset.clone()))
            .collect::<Result<Vec<_>>>()?;
        let mut p = Polyhedron::from_facets_dedup(self.dim, facets);
        p.empty = self.empty.clone();
        p.name = self.name.clone();
        Ok(p)
    }

    /// `P + w`.
    pub fn translate(&self, w: &Weight) -> Result<Polyhedron> {
        self.check_dim(w.rank())?;
        let wr = w.to_rational();
        let facets = self
            .facets
            .iter()
            .map(|f| Halfspace { normal: f.normal.clone(), offset: &f.offset + dot_int_rat(&f.normal, &wr) })
            .collect();
        Ok(Polyhedron { dim: self.dim, facets, name: self.name.clone(), empty: self.empty.clone() })
    }

    /// Cartesian product `P × Q`.
    pub fn product(&self, other: &Polyhedron) -> Polyhedron {
        let d = self.dim + other.dim;
        let mut facets = Vec::new();
        for f in &self.facets {
            let mut n = f.normal.clone();
            n.resize(d, BigInt::zero());
            facets.push(Halfspace { normal: n, offset: f.offset.clone() });
        }
        for f in &other.facets {
            let mut n = vec![BigInt::zero(); self.dim];
            n.extend(f.normal.iter().cloned());
            facets.push(Halfspace { normal: n, offset: f.offset.clone() });
        }
        let mut p = Polyhedron::from_facets_dedup(d, facets);
        p.empty = self.empty.clone().or_else(|| other.empty.clone());
        p
    }

    /// The single point `{w}`, as pairs of opposite halfspaces.
    pub fn point(w: &Weight) -> Result<Polyhedron> {
        let mut rows = Vec::new();
        for (k, &c) in w.coords().iter().enumerate() {
            let mut e = vec![0i64; w.rank()];
            e[k] = 1;
            rows.push((e.clone(), c));
            e[k] = -1;
            rows.push((e, -c));
        }
        Polyhedron::from_inequalities(&rows).map(|p| p.named("point"))
    }

    /// Polyhedron with every offset replaced by zero (the recession cone).
    pub fn recession_cone(&self) -> Polyhedron {
        let facets = self
            .facets
            .iter()
            .map(|f| Halfspace { normal: f.normal.clone(), offset: Rat::zero() })
            .collect();
        Polyhedron::from_facets_dedup(self.dim, facets)
    }

    /// Serialises in the TOML document format.
    pub fn to_spec_text(&self) -> Result<String> {
        let mut s = String::new();
        if let Some(n) = &self.name {
            s.push_str(&format!("name = {}\n", toml_string(n)));
        }
        s.push_str(&format!("dim = {}\n", self.dim));
        let facets: Vec<(Vec<BigInt>, Rat)> = if self.empty.is_some() {
            // an explicitly empty polyhedron is written as x_0 ≥ 1, −x_0 ≥ 0
            let mut e = vec![BigInt::zero(); self.dim];
            e[0] = BigInt::one();
            let mut f = vec![BigInt::zero(); self.dim];
            f[0] = -BigInt::one();
            vec![(e, Rat::one()), (f, Rat::zero())]
        } else {
            self.facets.iter().map(|f| (f.normal.clone(), f.offset.clone())).collect()
        };
        for (n, b) in facets {
            let parts = n.iter().map(|c| to_i64(c).map(|v| v.to_string())).collect::<Result<Vec<_>>>()?;
            s.push_str(&format!(
                "\n[[facets]]\nnormal = [{}]\noffset = \"{}\"\n",
                parts.join(", "),
                format_rational(&b)
            ));
        }
        Ok(s)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "dim": self.dim,
            "empty": self.empty.as_ref().map(|e| e.reason.clone()),
            "facets": self.facets.iter().map(|f| serde_json::json!({
                "normal": f.normal.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "offset": format_rational(&f.offset),
            })).collect::<Vec<_>>(),
        })
    }
}

fn toml_string(s: &str) -> String {
    let escaped = s.replace('\\', "\\\\").replace('"', "\\\"");
    format!("\"{escaped}\"")
}

fn scan_box(lo: &[i64], hi: &[i64], k: usize, cur: &mut [i64], f: &mut impl FnMut(&[i64])) {
    if k == lo.len() {
        f(cur);
        return;
    }
    for v in lo[k]..=hi[k] {
        cur[k] = v;
        scan_box(lo, hi, k + 1, cur, f);
    }
}

/// gcd of all `r×r` minors of an `r×d` integer matrix (`r ≤ d`).
fn maximal_minor_gcd(rows: &[Vec<BigInt>]) -> BigInt {
    let r = rows.len();
    if r == 0 {
        return BigInt::one();
    }
    let d = rows[0].len();
    let mut g = BigInt::zero();
    for cols in combinations(d, r) {
        let m: Vec<Vec<BigInt>> =
            rows.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        let minor = crate::lattice::IntMatrix::from_big_rows(m, r).det();
        g = g.gcd(&minor);
    }
    g.abs()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolytopeDoc {
    name: Option<String>,
    dim: usize,
    #[serde(default)]
    facets: Vec<FacetDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FacetDoc {
    normal: Vec<i64>,
    offset: OffsetDoc,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OffsetDoc {
    Int(i64),
    Text(String),
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses a polytope document (see module docs for the grammar).
pub fn parse_polytope(text: &str) -> Result<Polyhedron> {
    let doc: PolytopeDoc = toml::from_str(text).map_err(|e| Error::Parse {
        location: e
            .span()
            .map(|s| format!("line {}", line_of(text, s.start)))
            .unwrap_or_else(|| "document".into()),
        message: e.message().to_string(),
    })?;
    if doc.dim == 0 {
        return Err(Error::Parse { location: "dim".into(), message: "dimension must be positive".into() });
    }
    let mut facets = Vec::with_capacity(doc.facets.len());
    for (i, f) in doc.facets.into_iter().enumerate() {
        if f.normal.len() != doc.dim {
            return Err(Error::Parse {
                location: format!("facets[{i}].normal"),
                message: format!("expected {} entries, found {}", doc.dim, f.normal.len()),
            });
        }
        if f.normal.iter().all(|&c| c == 0) {
            return Err(Error::Parse {
                location: format!("facets[{i}].normal"),
                message: "zero normal".into(),
            });
        }
        let offset = match f.offset {
            OffsetDoc::Int(v) => Rat::from_integer(BigInt::from(v)),
            OffsetDoc::Text(s) => parse_rational(&s).map_err(|m| Error::Parse {
                location: format!("facets[{i}].offset"),
                message: m,
            })?,
        };
        let h = Halfspace::from_i64(&f.normal, offset)?;
        if let Some(j) = facets.iter().position(|g| g == &h) {
            return Err(Error::Parse {
                location: format!("facets[{i}]"),
                message: format!("duplicates facets[{j}]"),
            });
        }
        facets.push(h);
    }
    let mut p = Polyhedron::new(doc.dim, facets)?;
    p.name = doc.name;
    Ok(p)
}
