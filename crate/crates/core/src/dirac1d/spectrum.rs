//! Numerics for symmetric tridiagonal matrices with zero diagonal.

use nalgebra::{DMatrix, SymmetricEigen};

/// Number of eigenvalues strictly below `x` (Sturm count via `LDLᵀ`).
pub fn count_below(e2: &[f64], x: f64, tiny: f64) -> usize {
    let mut count = 0;
    let mut d = -x;
    if d < 0.0 {
        count += 1;
    }
    for &b2 in e2 {
        if d == 0.0 {
            d = -tiny;
        }
        d = -x - b2 / d;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// `‖T‖∞` for the tridiagonal matrix with off-diagonal `e`.
pub fn inf_norm(e: &[f64]) -> f64 {
    let n = e.len() + 1;
    (0..n)
        .map(|i| {
            let l = if i > 0 { e[i - 1].abs() } else { 0.0 };
            let r = if i + 1 < n { e[i].abs() } else { 0.0 };
            l + r
        })
        .fold(0.0, f64::max)
}

/// The `k` smallest singular values of the off-diagonal block, ascending.
///
/// Eigenvalues of `T` come in pairs `±σ`, so `#{σ < x} = (N(x) − N(−x)) / 2`.
/// Values below `resolution` are reported as `resolution`.
pub fn smallest_singular_values(e: &[f64], k: usize, resolution: f64) -> Vec<f64> {
    let e2: Vec<f64> = e.iter().map(|v| v * v).collect();
    let norm = inf_norm(e).max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * norm * 1e-3;
    let below = |x: f64| (count_below(&e2, x, tiny) - count_below(&e2, -x, tiny)) / 2;
    let half = e.len().div_ceil(2);
    (0..k.min(half))
        .map(|i| {
            if below(resolution) > i {
                return resolution;
            }
            let (mut lo, mut hi) = (resolution, norm * 1.01);
            for _ in 0..200 {
                if hi - lo <= 1e-10 * hi {
                    break;
                }
                let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
                if below(mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// LU factorization of a general tridiagonal matrix with partial pivoting.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn new(mut dl: Vec<f64>, mut d: Vec<f64>, mut du: Vec<f64>, tiny: f64) -> Self {
        let n = d.len();
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
        for v in d.iter_mut() {
            if v.abs() < tiny {
                *v = if *v < 0.0 { -tiny } else { tiny };
            }
        }
        TridiagLu { dl, d, du, du2, swapped }
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

/// Orthonormal basis of the invariant subspace of the `block` eigenvalues of
/// `T` closest to `shift`, by block inverse iteration.
pub fn invariant_subspace(e: &[f64], shift: f64, block: usize, iterations: usize) -> DMatrix<f64> {
    let n = e.len() + 1;
    let tiny = f64::EPSILON * inf_norm(e).max(1.0);
    let lu = TridiagLu::new(e.to_vec(), vec![-shift; n], e.to_vec(), tiny);
    let mut x = DMatrix::from_fn(n, block, |i, j| {
        let t = (i + 1) as f64 * (0.7548776662 + 0.1 * j as f64) + 0.5698402910 * j as f64;
        (t.fract() - 0.5) + if i % block == j { 0.25 } else { 0.0 }
    });
    for _ in 0..iterations {
        for j in 0..block {
            let mut col: Vec<f64> = x.column(j).iter().copied().collect();
            lu.solve(&mut col);
            x.set_column(j, &nalgebra::DVector::from_vec(col));
        }
        x = x.qr().q();
    }
    x
}

/// Eigen-decomposition of a small symmetric matrix, eigenvalues unsorted.
pub fn symmetric_eigen(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(m);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense(e: &[f64]) -> DMatrix<f64> {
        let n = e.len() + 1;
        DMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                e[i]
            } else if i == j + 1 {
                e[j]
            } else {
                0.0
            }
        })
    }

    fn sample(n: usize) -> Vec<f64> {
        (0..n).map(|i| 1.0 + ((i * 37 % 11) as f64) * 0.3 - if i % 3 == 0 { 0.9 } else { 0.0 }).collect()
    }

    #[test]
    fn sturm_matches_dense() {
        let e = sample(19);
        let (vals, _) = symmetric_eigen(dense(&e));
        let e2: Vec<f64> = e.iter().map(|v| v * v).collect();
        for x in [-2.0, -0.5, 0.1, 0.7, 1.9, 3.0] {
            let direct = vals.iter().filter(|&&v| v < x).count();
            assert_eq!(count_below(&e2, x, 1e-300), direct, "x = {x}");
        }
    }

    #[test]
    fn singular_values_match_dense() {
        let e = sample(19);
        let (vals, _) = symmetric_eigen(dense(&e));
        let mut pos: Vec<f64> = vals.iter().filter(|&&v| v > 0.0).copied().collect();
        pos.sort_by(f64::total_cmp);
        let got = smallest_singular_values(&e, 4, 1e-14);
        for (g, p) in got.iter().zip(&pos) {
            assert!((g - p).abs() < 1e-8 * p.max(1.0), "{g} vs {p}");
        }
    }

    #[test]
    fn lu_solves() {
        let e = sample(9);
        let shift = 0.37;
        let mut m = dense(&e);
        for i in 0..10 {
            m[(i, i)] = -shift;
        }
        let lu = TridiagLu::new(e.clone(), vec![-shift; 10], e.clone(), 1e-300);
        let b: Vec<f64> = (0..10).map(|i| i as f64 - 3.0).collect();
        let mut x = b.clone();
        lu.solve(&mut x);
        let r = &m * nalgebra::DVector::from_vec(x) - nalgebra::DVector::from_vec(b);
        assert!(r.norm() < 1e-10);
    }

    #[test]
    fn inverse_iteration_finds_near_zero_pair() {
        // dimerized chain with a defect: one mode at the left edge, one at the wall
        let e = vec![0.1, 1.0, 0.1, 1.0, 0.1, 1.0, 1.0, 0.1, 1.0, 0.1, 1.0];
        let shift = 1e-3;
        let q = invariant_subspace(&e, shift, 2, 30);
        let (vals, vecs) = symmetric_eigen(dense(&e));
        let mut idx: Vec<usize> = (0..vals.len()).collect();
        idx.sort_by(|&a, &b| (vals[a] - shift).abs().total_cmp(&(vals[b] - shift).abs()));
        assert!((vals[idx[2]] - shift).abs() > 10.0 * (vals[idx[1]] - shift).abs());
        for &i in &idx[..2] {
            let proj = q.transpose() * vecs.column(i);
            assert!((proj.norm() - 1.0).abs() < 1e-8);
        }
    }
}
