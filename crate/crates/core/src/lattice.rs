//! Exact integer lattice linear algebra.
//!
//! Everything here runs on arbitrary-precision integers. The Hermite normal
//! form is column-style: for `A` of full column rank, `A·U = H` where `H` is
//! lower trapezoidal, every pivot is positive, and the entries to the left of
//! a pivot in its row lie in `[0, pivot)`. With this convention `H` is unique.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int_rat, row_reduce, Rat};

/// A character of the torus: an integer vector in the weight lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn new(coords: Vec<i64>) -> Self {
        Weight(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn to_big(&self) -> Vec<BigInt> {
        self.0.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn to_rational(&self) -> Vec<Rat> {
        self.0.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect()
    }

    pub fn dot(&self, other: &Weight) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Concatenation, used for outer products of characters.
    pub fn concat(&self, other: &Weight) -> Weight {
        let mut c = self.0.clone();
        c.extend_from_slice(&other.0);
        Weight(c)
    }

    pub fn is_primitive(&self) -> bool {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c)) == 1
    }

    pub fn primitive(&self) -> Result<Weight> {
        let p = primitive(&self.to_big())?;
        p.iter()
            .map(crate::exact::to_i64)
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Weight {
    type Err = String;

    /// Comma-separated integers, optionally wrapped in parentheses.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if t.is_empty() {
            return Ok(Weight(Vec::new()));
        }
        t.split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|_| format!("invalid weight component {p:?}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Weight)
    }
}

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(rows.iter().all(|row| row.len() == cols), "ragged matrix");
        IntMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                    Some(p) => {
                        m.swap(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    fn col_op(&mut self, a: usize, b: usize, m: [[&BigInt; 2]; 2]) {
        // new col a = m00*col a + m10*col b ; new col b = m01*col a + m11*col b
        for i in 0..self.rows {
            let x = self.get(i, a).clone();
            let y = self.get(i, b).clone();
            self.set(i, a, m[0][0] * &x + m[1][0] * &y);
            self.set(i, b, m[0][1] * &x + m[1][1] * &y);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// col `target` -= q * col `src`
    fn axpy_col(&mut self, target: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, target) - q * self.get(i, src);
            self.set(i, target, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
                format!("[{}]", r.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Square integer matrix with determinant ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMatrix(IntMatrix);

impl UnimodularMatrix {
    /// Checks `|det| = 1` exactly.
    pub fn new(m: IntMatrix) -> Option<Self> {
        if m.rows() != m.cols() {
            return None;
        }
        let d = m.det();
        (d.abs() == BigInt::one()).then_some(UnimodularMatrix(m))
    }

    pub fn identity(n: usize) -> Self {
        UnimodularMatrix(IntMatrix::identity(n))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn det(&self) -> BigInt {
        self.0.det()
    }

    /// Exact inverse; integral because the determinant is a unit.
    pub fn inverse(&self) -> UnimodularMatrix {
        let n = self.dim();
        let mut aug: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut r: Vec<Rat> = self.0.row(i).iter().map(int_rat).collect();
                r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                r
            })
            .collect();
        let pivots = row_reduce(&mut aug);
        debug_assert_eq!(pivots.len(), n);
        let rows = aug
            .into_iter()
            .map(|r| {
                r[n..]
                    .iter()
                    .map(|v| {
                        debug_assert!(v.is_integer());
                        v.to_integer()
                    })
                    .collect()
            })
            .collect();
        UnimodularMatrix(IntMatrix::from_big_rows(rows, n))
    }
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// `v / gcd(v)`, preserving direction.
pub fn primitive(v: &[BigInt]) -> Result<Vec<BigInt>> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|c| c / &g).collect())
}

/// `(g, p, q)` with `p·a + q·b = g = gcd(a, b) ≥ 0`.
fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if a.is_zero() {
        return (b.abs(), BigInt::zero(), b.signum());
    }
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Column Hermite normal form: returns `(H, U)` with `A·U = H`.
pub fn hermite_normal_form(a: &IntMatrix) -> Result<(IntMatrix, UnimodularMatrix)> {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(n);
    let mut pc = 0;
    for i in 0..m {
        if pc == n {
            break;
        }
        for j in pc + 1..n {
            if h.get(i, j).is_zero() {
                continue;
            }
            let x = h.get(i, pc).clone();
            let y = h.get(i, j).clone();
            let (g, p, q) = ext_gcd(&x, &y);
            let yg = -(&y / &g);
            let xg = &x / &g;
            let op = [[&p, &yg], [&q, &xg]];
            h.col_op(pc, j, op);
            u.col_op(pc, j, op);
        }
        if h.get(i, pc).is_zero() {
            continue;
        }
        if h.get(i, pc).is_negative() {
            h.negate_col(pc);
            u.negate_col(pc);
        }
        let piv = h.get(i, pc).clone();
        for k in 0..pc {
            let q = h.get(i, k).div_floor(&piv);
            if !q.is_zero() {
                h.axpy_col(k, pc, &q);
                u.axpy_col(k, pc, &q);
            }
        }
        pc += 1;
    }
    if pc < n {
        return Err(Error::RankDeficient { rank: pc, cols: n });
    }
    Ok((h, UnimodularMatrix(u)))
}

/// Unimodular matrix whose first column is the primitive vector `xi`.
///
/// Built by iterated extended gcd against coordinate 0, processing the other
/// coordinates in index order. Each completion column is then signed so that
/// its first nonzero entry is positive.
pub fn complete_to_basis(xi: &Weight) -> Result<UnimodularMatrix> {
    let n = xi.rank();
    let x0 = xi.to_big();
    let g = gcd_all(&x0);
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !g.is_one() {
        return Err(Error::NotPrimitive(xi.to_string(), g.to_string()));
    }
    // Row vector x is driven to e_1 by column ops V; then x = e_1·V⁻¹, so the
    // first row of V⁻¹ is x and U = (V⁻¹)ᵀ has first column x.
    let mut x = x0;
    let mut vinv = IntMatrix::identity(n);
    for b in 1..n {
        if x[b].is_zero() {
            continue;
        }
        let (g, p, q) = ext_gcd(&x[0], &x[b]);
        let xa = &x[0] / &g;
        let xb = &x[b] / &g;
        // V ← V·M with M = [[p, -xb], [q, xa]]; V⁻¹ ← M⁻¹·V⁻¹, M⁻¹ = [[xa, xb], [-q, p]].
        for j in 0..n {
            let r0 = vinv.get(0, j).clone();
            let rb = vinv.get(b, j).clone();
            vinv.set(0, j, &xa * &r0 + &xb * &rb);
            vinv.set(b, j, -&q * &r0 + &p * &rb);
        }
        x[0] = g;
        x[b] = BigInt::zero();
    }
    if x[0].is_negative() {
        for j in 0..n {
            let v = -vinv.get(0, j);
            vinv.set(0, j, v);
        }
    }
    let mut u = vinv.transpose();
    for j in 1..n {
        if let Some(i) = (0..n).find(|&i| !u.get(i, j).is_zero()) {
            if u.get(i, j).is_negative() {
                u.negate_col(j);
            }
        }
    }
    debug_assert_eq!(u.column(0), xi.to_big());
    Ok(UnimodularMatrix(u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&big(&[2, 4])).unwrap(), big(&[1, 2]));
        assert_eq!(primitive(&big(&[-3, 6])).unwrap(), big(&[-1, 2]));
        assert_eq!(primitive(&big(&[0, 0])), Err(Error::ZeroVector));
        assert_eq!(primitive(&big(&[0, -5])).unwrap(), big(&[0, -1]));
    }

    #[test]
    fn hnf_identity() {
        let a = IntMatrix::identity(2);
        let (h, u) = hermite_normal_form(&a).unwrap();
        assert_eq!(h, IntMatrix::identity(2));
        assert_eq!(u, UnimodularMatrix::identity(2));
    }

    #[test]
    fn hnf_permutation_gives_identity() {
        let a = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        let (h, u) = hermite_normal_form(&a).unwrap();
        assert_eq!(h, IntMatrix::identity(2));
        // a signed permutation
        let m = u.matrix();
        for i in 0..2 {
            let nz = (0..2).filter(|&j| !m.get(i, j).is_zero()).count();
            assert_eq!(nz, 1);
        }
        assert_eq!(a.mul(m), h);
    }

    #[test]
    fn hnf_upper_triangular_input() {
        let a = IntMatrix::from_rows(&[vec![2, 1], vec![0, 1]]);
        let (h, u) = hermite_normal_form(&a).unwrap();
        assert_eq!(a.mul(u.matrix()), h);
        assert_eq!(u.det().abs(), BigInt::one());
        assert_eq!(h, IntMatrix::from_rows(&[vec![1, 0], vec![1, 2]]));
    }

    #[test]
    fn hnf_rank_deficient() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(hermite_normal_form(&a), Err(Error::RankDeficient { rank: 1, cols: 2 }));
    }

    #[test]
    fn hnf_tall_matrix() {
        let a = IntMatrix::from_rows(&[vec![3, 5], vec![1, 7], vec![4, -2]]);
        let (h, u) = hermite_normal_form(&a).unwrap();
        assert_eq!(a.mul(u.matrix()), h);
        assert!(h.get(0, 1).is_zero());
        assert!(h.get(0, 0).is_positive());
    }

    #[test]
    fn completion_examples() {
        assert_eq!(
            complete_to_basis(&Weight(vec![1, 0])).unwrap(),
            UnimodularMatrix::identity(2)
        );
        let swap = complete_to_basis(&Weight(vec![0, 1])).unwrap();
        assert_eq!(swap.matrix(), &IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]));
        let u = complete_to_basis(&Weight(vec![2, 3])).unwrap();
        assert_eq!(u.matrix().column(0), big(&[2, 3]));
        assert_eq!(u.det().abs(), BigInt::one());
    }

    #[test]
    fn completion_rejects_non_primitive() {
        assert!(matches!(
            complete_to_basis(&Weight(vec![2, 4])),
            Err(Error::NotPrimitive(..))
        ));
        assert_eq!(complete_to_basis(&Weight(vec![0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn inverse_roundtrip() {
        let u = complete_to_basis(&Weight(vec![3, -5, 7])).unwrap();
        let inv = u.inverse();
        assert_eq!(u.matrix().mul(inv.matrix()), IntMatrix::identity(3));
    }

    #[test]
    fn weight_parsing() {
        assert_eq!("1,-2".parse::<Weight>().unwrap(), Weight(vec![1, -2]));
        assert_eq!("(3)".parse::<Weight>().unwrap(), Weight(vec![3]));
        assert!("1,x".parse::<Weight>().is_err());
    }
}
