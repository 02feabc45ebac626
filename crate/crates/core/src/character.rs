//! Formal characters of a torus: total integer-valued functions on the
//! weight lattice.
//!
//! Infinite supports are stored intensionally (polyhedral indicators and
//! their pushforwards along circle subgroups), never truncated. Every
//! operation is exact; evaluation at a weight always yields an integer.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{ceil_i64, dot_int_rat, floor_i64, format_rational};
use crate::lattice::Weight;
use crate::polytope::{HyperplaneChart, Polyhedron, VERTEX_DIM_LIMIT};

#[derive(Clone, Debug, PartialEq)]
pub enum Support {
    /// Weight → nonzero coefficient.
    Finite(BTreeMap<Weight, i64>),
    /// Indicator function of the lattice points of a polyhedron.
    Indicator(Polyhedron),
    /// Unnormalized `Σ scale·term`.
    Sum(Vec<(i64, FormalCharacter)>),
    /// Rank-1 character `m ↦ #{λ ∈ P ∩ ℤⁿ : ⟨xi, λ⟩ = m}`; every fiber is bounded.
    Pushforward { polytope: Polyhedron, xi: Weight },
    /// `(a ⊠ b)(v₀, v₁) = a(v₀)·b(v₁)` when no closed form is available.
    Outer(Box<FormalCharacter>, Box<FormalCharacter>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormalCharacter {
    rank: usize,
    support: Support,
}

fn rank_check(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::RankMismatch(expected, found));
    }
    Ok(())
}

fn checked(v: Option<i64>) -> Result<i64> {
    v.ok_or_else(|| Error::Overflow("character coefficient".into()))
}

impl FormalCharacter {
    pub fn zero(rank: usize) -> Self {
        FormalCharacter { rank, support: Support::Finite(BTreeMap::new()) }
    }

    pub fn delta(w: &Weight) -> Self {
        let mut m = BTreeMap::new();
        m.insert(w.clone(), 1);
        FormalCharacter { rank: w.rank(), support: Support::Finite(m) }
    }

    /// Finite character from `(weight, coefficient)` pairs; repeated weights add up.
    pub fn finite(rank: usize, terms: impl IntoIterator<Item = (Weight, i64)>) -> Result<Self> {
        let mut m: BTreeMap<Weight, i64> = BTreeMap::new();
        for (w, c) in terms {
            rank_check(rank, w.rank())?;
            let e = m.entry(w).or_insert(0);
            *e = checked(e.checked_add(c))?;
        }
        m.retain(|_, c| *c != 0);
        Ok(FormalCharacter { rank, support: Support::Finite(m) })
    }

    pub fn indicator(p: Polyhedron) -> Self {
        FormalCharacter { rank: p.dim(), support: Support::Indicator(p) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    /// Coefficients when the support is finite (including sums of finite terms).
    pub fn finite_terms(&self) -> Option<BTreeMap<Weight, i64>> {
        match &self.support {
            Support::Finite(m) => Some(m.clone()),
            Support::Sum(terms) => {
                let mut out: BTreeMap<Weight, i64> = BTreeMap::new();
                for (k, t) in terms {
                    for (w, c) in t.finite_terms()? {
                        *out.entry(w).or_insert(0) += k * c;
                    }
                }
                out.retain(|_, c| *c != 0);
                Some(out)
            }
            Support::Outer(a, b) => {
                let (fa, fb) = (a.finite_terms()?, b.finite_terms()?);
                let mut out = BTreeMap::new();
                for (wa, ca) in &fa {
                    for (wb, cb) in &fb {
                        out.insert(wa.concat(wb), ca * cb);
                    }
                }
                Some(out)
            }
            Support::Indicator(p) if p.is_flagged_empty() => Some(BTreeMap::new()),
            Support::Indicator(_) | Support::Pushforward { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finite_terms().is_some()
    }

    pub fn scale(&self, k: i64) -> FormalCharacter {
        match &self.support {
            Support::Finite(m) => {
                let m = m.iter().map(|(w, c)| (w.clone(), c * k)).filter(|(_, c)| *c != 0).collect();
                FormalCharacter { rank: self.rank, support: Support::Finite(m) }
            }
            _ if k == 0 => FormalCharacter::zero(self.rank),
            _ if k == 1 => self.clone(),
            _ => FormalCharacter { rank: self.rank, support: Support::Sum(vec![(k, self.clone())]) },
        }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &FormalCharacter) -> Result<FormalCharacter> {
        rank_check(self.rank, other.rank)?;
        if let (Support::Finite(a), Support::Finite(b)) = (&self.support, &other.support) {
            return FormalCharacter::finite(
                self.rank,
                a.iter().chain(b.iter()).map(|(w, c)| (w.clone(), *c)),
            );
        }
        let mut terms = Vec::new();
        for c in [self, other] {
            match &c.support {
                Support::Sum(t) => terms.extend(t.iter().cloned()),
                Support::Finite(m) if m.is_empty() => {}
                _ => terms.push((1, c.clone())),
            }
        }
        Ok(FormalCharacter { rank: self.rank, support: Support::Sum(terms) })
    }

    pub fn sub(&self, other: &FormalCharacter) -> Result<FormalCharacter> {
        self.add(&other.scale(-1))
    }

    /// Multiplicity of `w`.
    pub fn evaluate(&self, w: &Weight) -> Result<i64> {
        rank_check(self.rank, w.rank())?;
        match &self.support {
            Support::Finite(m) => Ok(m.get(w).copied().unwrap_or(0)),
            Support::Indicator(p) => Ok(p.contains_weight(w)? as i64),
            Support::Sum(terms) => {
                let mut acc = 0i64;
                for (k, t) in terms {
                    acc = checked(acc.checked_add(checked(k.checked_mul(t.evaluate(w)?))?))?;
                }
                Ok(acc)
            }
            Support::Pushforward { polytope, xi } => fiber_count(polytope, xi, w.coords()[0]),
            Support::Outer(a, b) => {
                let (w0, w1) = w.coords().split_at(a.rank);
                let va = a.evaluate(&Weight(w0.to_vec()))?;
                if va == 0 {
                    return Ok(0);
                }
                checked(va.checked_mul(b.evaluate(&Weight(w1.to_vec()))?))
            }
        }
    }

    /// `v ↦ c(v − w)`.
    pub fn translate(&self, w: &Weight) -> Result<FormalCharacter> {
        rank_check(self.rank, w.rank())?;
        let support = match &self.support {
            Support::Finite(m) => Support::Finite(m.iter().map(|(v, c)| (v.add(w), *c)).collect()),
            Support::Indicator(p) => Support::Indicator(p.translate(w)?),
            Support::Sum(terms) => Support::Sum(
                terms
                    .iter()
                    .map(|(k, t)| Ok((*k, t.translate(w)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Support::Pushforward { polytope, xi } => {
                let shift = HyperplaneChart::new(xi, w.coords()[0])?.lift(&Weight::zero(xi.rank() - 1))?;
                Support::Pushforward { polytope: polytope.translate(&shift)?, xi: xi.clone() }
            }
            Support::Outer(a, b) => {
                let (w0, w1) = w.coords().split_at(a.rank);
                Support::Outer(
                    Box::new(a.translate(&Weight(w0.to_vec()))?),
                    Box::new(b.translate(&Weight(w1.to_vec()))?),
                )
            }
        };
        Ok(FormalCharacter { rank: self.rank, support })
    }

    /// Same-torus tensor product (convolution). One operand must have finite support.
    pub fn tensor(&self, other: &FormalCharacter) -> Result<FormalCharacter> {
        rank_check(self.rank, other.rank)?;
        let (finite, rest) = match (self.finite_terms(), other.finite_terms()) {
            (Some(a), Some(b)) => {
                let mut terms = Vec::with_capacity(a.len() * b.len());
                for (wa, ca) in &a {
                    for (wb, cb) in &b {
                        terms.push((wa.add(wb), checked(ca.checked_mul(*cb))?));
                    }
                }
                return FormalCharacter::finite(self.rank, terms);
            }
            (Some(a), None) => (a, other),
            (None, Some(b)) => (b, self),
            (None, None) => return Err(Error::InfiniteConvolution),
        };
        if finite.len() == 1 {
            let (w, c) = finite.iter().next().unwrap();
            return Ok(rest.translate(w)?.scale(*c));
        }
        let terms = finite
            .iter()
            .map(|(w, c)| Ok((*c, rest.translate(w)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(FormalCharacter { rank: self.rank, support: Support::Sum(terms) })
    }

    /// Outer tensor product on the product torus; ranks add.
    pub fn outer(&self, other: &FormalCharacter) -> Result<FormalCharacter> {
        let rank = self.rank + other.rank;
        if self.rank == 0 {
            return Ok(other.scale(self.evaluate(&Weight(vec![]))?));
        }
        if other.rank == 0 {
            return Ok(self.scale(other.evaluate(&Weight(vec![]))?));
        }
        match (&self.support, &other.support) {
            (Support::Finite(a), Support::Finite(b)) => {
                let mut terms = Vec::new();
                for (wa, ca) in a {
                    for (wb, cb) in b {
                        terms.push((wa.concat(wb), checked(ca.checked_mul(*cb))?));
                    }
                }
                FormalCharacter::finite(rank, terms)
            }
            (Support::Indicator(p), Support::Indicator(q)) => {
                Ok(FormalCharacter::indicator(p.product(q)))
            }
            (Support::Finite(a), Support::Indicator(q)) => {
                let terms = a
                    .iter()
                    .map(|(w, c)| Ok((*c, FormalCharacter::indicator(Polyhedron::point(w)?.product(q)))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FormalCharacter { rank, support: Support::Sum(terms) })
            }
            (Support::Indicator(p), Support::Finite(b)) => {
                let terms = b
                    .iter()
                    .map(|(w, c)| Ok((*c, FormalCharacter::indicator(p.product(&Polyhedron::point(w)?)))))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FormalCharacter { rank, support: Support::Sum(terms) })
            }
            (Support::Sum(ts), _) => {
                let terms = ts
                    .iter()
                    .map(|(k, t)| Ok((*k, t.outer(other)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FormalCharacter { rank, support: Support::Sum(terms) })
            }
            (_, Support::Sum(ts)) => {
                let terms = ts
                    .iter()
                    .map(|(k, t)| Ok((*k, self.outer(t)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(FormalCharacter { rank, support: Support::Sum(terms) })
            }
            _ => Ok(FormalCharacter {
                rank,
                support: Support::Outer(Box::new(self.clone()), Box::new(other.clone())),
            }),
        }
    }

    /// Restriction to the circle subgroup with primitive weight `xi`: the
    /// rank-1 character `m ↦ Σ_{⟨xi,w⟩ = m} c(w)`.
    pub fn restrict(&self, xi: &Weight) -> Result<FormalCharacter> {
        rank_check(self.rank, xi.rank())?;
        if !xi.is_primitive() {
            xi.primitive()?;
            return Err(Error::NotPrimitive(xi.to_string(), gcd_of(xi).to_string()));
        }
        let support = match &self.support {
            Support::Finite(m) => {
                return FormalCharacter::finite(1, m.iter().map(|(w, c)| (Weight(vec![w.dot(xi)]), *c)))
            }
            Support::Indicator(p) => {
                if p.dim() <= VERTEX_DIM_LIMIT && p.is_empty()? {
                    return Ok(FormalCharacter::zero(1));
                }
                check_bounded_fibers(p, xi)?;
                Support::Pushforward { polytope: p.clone(), xi: xi.clone() }
            }
            Support::Sum(terms) => Support::Sum(
                terms
                    .iter()
                    .map(|(k, t)| Ok((*k, t.restrict(xi)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Support::Pushforward { polytope, xi: inner } => {
                let s = xi.coords()[0];
                Support::Pushforward {
                    polytope: polytope.clone(),
                    xi: Weight(inner.coords().iter().map(|c| c * s).collect()),
                }
            }
            Support::Outer(..) => {
                return Err(Error::Unsupported(
                    "restriction of an outer product with a pushforward factor".into(),
                ))
            }
        };
        Ok(FormalCharacter { rank: 1, support })
    }

    /// Weights on which two characters are compared by [`FormalCharacter::equal_on_probes`]:
    /// finite supports plus lattice neighbourhoods of polyhedral vertices.
    pub fn probe_points(&self) -> Result<BTreeSet<Weight>> {
        let mut out = BTreeSet::new();
        self.collect_probes(&mut out)?;
        Ok(out)
    }

    fn collect_probes(&self, out: &mut BTreeSet<Weight>) -> Result<()> {
        match &self.support {
            Support::Finite(m) => out.extend(m.keys().cloned()),
            Support::Indicator(p) => {
                let radius = if p.dim() <= 2 { 2 } else { 1 };
                for face in p.minimal_faces()? {
                    let lo = face.point.iter().map(|c| floor_i64(c).map(|v| v - radius)).collect::<Result<Vec<_>>>()?;
                    let hi = face.point.iter().map(|c| ceil_i64(c).map(|v| v + radius)).collect::<Result<Vec<_>>>()?;
                    box_points(&lo, &hi, &mut Vec::new(), out);
                }
            }
            Support::Sum(terms) => {
                for (_, t) in terms {
                    t.collect_probes(out)?;
                }
            }
            Support::Pushforward { polytope, xi } => {
                let xb = xi.to_big();
                for face in polytope.minimal_faces()? {
                    let v = dot_int_rat(&xb, &face.point);
                    for m in floor_i64(&v)? - 2..=ceil_i64(&v)? + 2 {
                        out.insert(Weight(vec![m]));
                    }
                }
            }
            Support::Outer(a, b) => {
                let (pa, pb) = (a.probe_points()?, b.probe_points()?);
                for wa in &pa {
                    for wb in &pb {
                        out.insert(wa.concat(wb));
                    }
                }
            }
        }
        Ok(())
    }

    /// Semi-decision of equality: compares evaluations on the union of both
    /// probe sets. Agreement there is evidence, not proof, of equality.
    pub fn equal_on_probes(&self, other: &FormalCharacter) -> Result<bool> {
        rank_check(self.rank, other.rank)?;
        let mut probes = self.probe_points()?;
        probes.extend(other.probe_points()?);
        for w in &probes {
            if self.evaluate(w)? != other.evaluate(w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn to_json(&self) -> Result<Value> {
        Ok(match &self.support {
            Support::Finite(m) => json!({
                "rank": self.rank,
                "kind": "finite",
                "terms": m.iter().map(|(w, c)| json!({"weight": w.coords(), "coefficient": c})).collect::<Vec<_>>(),
            }),
            Support::Indicator(p) => json!({
                "rank": self.rank,
                "kind": "indicator",
                "polytope": p.to_spec_text()?,
            }),
            Support::Sum(terms) => json!({
                "rank": self.rank,
                "kind": "sum",
                "terms": terms
                    .iter()
                    .map(|(k, t)| Ok(json!({"scale": k, "character": t.to_json()?})))
                    .collect::<Result<Vec<_>>>()?,
            }),
            Support::Pushforward { polytope, xi } => json!({
                "rank": self.rank,
                "kind": "pushforward",
                "xi": xi.coords(),
                "polytope": polytope.to_spec_text()?,
            }),
            Support::Outer(a, b) => json!({
                "rank": self.rank,
                "kind": "outer",
                "left": a.to_json()?,
                "right": b.to_json()?,
            }),
        })
    }
}

fn gcd_of(w: &Weight) -> num_bigint::BigInt {
    crate::lattice::gcd_all(&w.to_big())
}

fn box_points(lo: &[i64], hi: &[i64], cur: &mut Vec<i64>, out: &mut BTreeSet<Weight>) {
    let k = cur.len();
    if k == lo.len() {
        out.insert(Weight(cur.clone()));
        return;
    }
    for v in lo[k]..=hi[k] {
        cur.push(v);
        box_points(lo, hi, cur, out);
        cur.pop();
    }
}

/// Every fiber of `⟨xi,·⟩` on `P` is bounded iff the recession cone meets the
/// hyperplane `⟨xi,·⟩ = 0` only at the origin.
fn check_bounded_fibers(p: &Polyhedron, xi: &Weight) -> Result<()> {
    if p.dim() == 1 {
        return Ok(());
    }
    let cone_slice = p.recession_cone().slice(xi, 0)?;
    if cone_slice.is_bounded() {
        return Ok(());
    }
    let xb = xi.to_big();
    let level = p
        .minimal_faces()
        .ok()
        .and_then(|f| f.first().map(|face| format_rational(&dot_int_rat(&xb, &face.point))))
        .unwrap_or_else(|| "every attained level".into());
    Err(Error::UnboundedFiber { xi: xi.to_string(), level })
}

fn fiber_count(p: &Polyhedron, xi: &Weight, level: i64) -> Result<i64> {
    if p.dim() == 1 {
        // xi = ±1: the fiber is the single point xi·level
        return Ok(p.contains_weight(&Weight(vec![xi.coords()[0] * level]))? as i64);
    }
    Ok(p.slice(xi, level)?.lattice_points(None)?.len() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn delta_examples() {
        assert_eq!(FormalCharacter::delta(&w(&[0])).evaluate(&w(&[0])).unwrap(), 1);
        assert_eq!(FormalCharacter::delta(&w(&[2])).evaluate(&w(&[3])).unwrap(), 0);
        assert_eq!(FormalCharacter::delta(&w(&[1, -1])).evaluate(&w(&[1, -1])).unwrap(), 1);
    }

    #[test]
    fn add_examples() {
        let d2 = FormalCharacter::delta(&w(&[2]));
        let s = d2.add(&d2).unwrap();
        assert_eq!(s.evaluate(&w(&[2])).unwrap(), 2);
        let d1 = FormalCharacter::delta(&w(&[1]));
        let z = d1.add(&d1.scale(-1)).unwrap();
        assert_eq!(z, FormalCharacter::zero(1));
        let sq = FormalCharacter::indicator(Polyhedron::cube(2, 2).unwrap());
        let t = sq.add(&FormalCharacter::delta(&w(&[1, 1]))).unwrap();
        assert_eq!(t.evaluate(&w(&[1, 1])).unwrap(), 2);
        assert!(matches!(d1.add(&sq), Err(Error::RankMismatch(1, 2))));
    }

    #[test]
    fn tensor_examples() {
        let t = FormalCharacter::delta(&w(&[2])).tensor(&FormalCharacter::delta(&w(&[3]))).unwrap();
        assert_eq!(t, FormalCharacter::delta(&w(&[5])));
        let q = FormalCharacter::indicator(Polyhedron::orthant(2).unwrap());
        let id = FormalCharacter::delta(&w(&[0, 0])).tensor(&q).unwrap();
        assert!(id.equal_on_probes(&q).unwrap());
        let o = FormalCharacter::delta(&w(&[1])).outer(&FormalCharacter::delta(&w(&[2]))).unwrap();
        assert_eq!(o, FormalCharacter::delta(&w(&[1, 2])));
        assert_eq!(q.tensor(&q), Err(Error::InfiniteConvolution));
    }

    #[test]
    fn evaluate_examples() {
        let sq = FormalCharacter::indicator(Polyhedron::cube(2, 2).unwrap());
        assert_eq!(sq.evaluate(&w(&[1, 1])).unwrap(), 1);
        assert_eq!(sq.evaluate(&w(&[3, 3])).unwrap(), 0);
        let q = FormalCharacter::indicator(Polyhedron::orthant(2).unwrap());
        let s = q.sub(&FormalCharacter::delta(&w(&[0, 0]))).unwrap();
        assert_eq!(s.evaluate(&w(&[0, 0])).unwrap(), 0);
        assert_eq!(s.evaluate(&w(&[0, 1])).unwrap(), 1);
    }

    #[test]
    fn restrict_examples() {
        let sq = FormalCharacter::indicator(Polyhedron::cube(2, 2).unwrap());
        let r = sq.restrict(&w(&[1, 0])).unwrap();
        assert_eq!(r.evaluate(&w(&[1])).unwrap(), 3);
        assert_eq!(r.evaluate(&w(&[5])).unwrap(), 0);
        let q = FormalCharacter::indicator(Polyhedron::orthant(2).unwrap());
        assert_eq!(q.restrict(&w(&[1, 1])).unwrap().evaluate(&w(&[2])).unwrap(), 3);
    }

    #[test]
    fn restrict_rejects_unbounded_fibers() {
        let q = FormalCharacter::indicator(Polyhedron::orthant(2).unwrap());
        assert!(matches!(q.restrict(&w(&[1, 0])), Err(Error::UnboundedFiber { .. })));
        let slab = FormalCharacter::indicator(Polyhedron::slab(2, 0, 1).unwrap());
        assert!(matches!(slab.restrict(&w(&[1, 0])), Err(Error::UnboundedFiber { .. })));
        assert!(matches!(q.restrict(&w(&[2, 2])), Err(Error::NotPrimitive(..))));
    }

    #[test]
    fn translate_pushforward() {
        let sq = FormalCharacter::indicator(Polyhedron::cube(2, 2).unwrap());
        let r = sq.restrict(&w(&[1, 1])).unwrap();
        let shifted = FormalCharacter::delta(&w(&[3])).tensor(&r).unwrap();
        for m in -2..10 {
            assert_eq!(shifted.evaluate(&w(&[m])).unwrap(), r.evaluate(&w(&[m - 3])).unwrap());
        }
        let flipped = r.restrict(&w(&[-1])).unwrap();
        assert_eq!(flipped.evaluate(&w(&[-1])).unwrap(), 2);
    }

    #[test]
    fn outer_of_indicators_is_product() {
        let seg = Polyhedron::from_inequalities(&[(vec![1], 0), (vec![-1], -2)]).unwrap();
        let a = FormalCharacter::indicator(seg.clone());
        let o = a.outer(&a).unwrap();
        let sq = FormalCharacter::indicator(Polyhedron::cube(2, 2).unwrap());
        assert!(o.equal_on_probes(&sq).unwrap());
        let mixed = FormalCharacter::delta(&w(&[1])).outer(&a).unwrap();
        assert_eq!(mixed.evaluate(&w(&[1, 2])).unwrap(), 1);
        assert_eq!(mixed.evaluate(&w(&[0, 2])).unwrap(), 0);
    }

    #[test]
    fn json_shapes() {
        let d = FormalCharacter::delta(&w(&[1, 2])).to_json().unwrap();
        assert_eq!(d["kind"], "finite");
        assert_eq!(d["terms"][0]["weight"], json!([1, 2]));
        let sq = FormalCharacter::indicator(Polyhedron::cube(2, 2).unwrap()).to_json().unwrap();
        assert_eq!(sq["kind"], "indicator");
        let text = sq["polytope"].as_str().unwrap();
        assert_eq!(crate::polytope::parse_polytope(text).unwrap().facets().len(), 4);
    }
}
