//! Graded index of the discretized model operators.
//!
//! A square truncation always has `dim ker A = dim ker Aᵀ`, so every
//! normalizable zero mode comes with a partner supported at an artificial
//! end. The kernel cluster of singular values is found by a gap rule, its
//! invariant subspace is split by chirality, and only modes supported away
//! from the truncation ends are counted.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::Weight;

use super::assemble::{build_operator, OperatorMatrix};
use super::model::{disc_mu, Deformation, ModelKind, ModelSpec1D, ProfileMu};
use super::spectrum::{inf_norm, invariant_subspace, smallest_singular_values, symmetric_eigen};

/// Number of smallest singular values examined.
pub const SPECTRUM_WINDOW: usize = 8;
/// Required ratio between the gap and the kernel cluster.
pub const SEPARATION: f64 = 100.0;
const INVERSE_ITERATIONS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct IndexResult {
    pub index: i64,
    pub dim_ker_plus: usize,
    pub dim_ker_minus: usize,
    /// Smallest singular value above the kernel cluster.
    pub spectral_gap: f64,
    pub kernel_cluster: Vec<f64>,
    pub refinement_consistent: bool,
    /// `spectral_gap / max(kernel cluster, noise floor)`.
    pub separation_ratio: f64,
    /// Grid actually reported (the refined one when the coarse grid was unresolved).
    pub n: usize,
}

impl IndexResult {
    pub fn to_json(&self) -> Value {
        json!({
            "index": self.index,
            "dim_ker_plus": self.dim_ker_plus,
            "dim_ker_minus": self.dim_ker_minus,
            "spectral_gap": self.spectral_gap,
            "kernel_cluster": self.kernel_cluster,
            "refinement_consistent": self.refinement_consistent,
            "separation_ratio": self.separation_ratio,
            "n": self.n,
        })
    }
}

/// Outcome of the analysis at a single grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridAnalysis {
    pub singular_values: Vec<f64>,
    pub noise_floor: f64,
    /// `(dim ker A, dim ker Aᵀ, cluster size)` when the spectrum separates.
    pub split: Option<(usize, usize, usize)>,
}

impl GridAnalysis {
    pub fn resolved(&self) -> bool {
        self.split.is_some()
    }

    pub fn index(&self) -> Option<i64> {
        self.split.map(|(p, m, _)| p as i64 - m as i64)
    }

    pub fn separation_ratio(&self) -> Option<f64> {
        self.split.map(|(_, _, k)| {
            let cmax = if k == 0 { 0.0 } else { self.singular_values[k - 1] };
            self.singular_values[k] / cmax.max(self.noise_floor)
        })
    }
}

/// Largest `k` with `σ_k ≥ 100·max(σ_{k−1}, floor)`; `σ_{−1}` counts as the floor.
fn cluster_size(sv: &[f64], floor: f64) -> Option<usize> {
    (0..sv.len())
        .rev()
        .find(|&k| {
            let below = if k == 0 { floor } else { sv[k - 1].max(floor) };
            sv[k] >= SEPARATION * below
        })
}

/// Kernel analysis of one discretization.
pub fn analyze_grid(op: &OperatorMatrix) -> GridAnalysis {
    let e = op.couplings();
    let floor = e.len() as f64 * f64::EPSILON * inf_norm(e);
    let sv = smallest_singular_values(e, SPECTRUM_WINDOW, floor * 1e-6);
    let Some(k) = cluster_size(&sv, floor) else {
        return GridAnalysis { singular_values: sv, noise_floor: floor, split: None };
    };
    if k == 0 {
        return GridAnalysis { singular_values: sv, noise_floor: floor, split: Some((0, 0, 0)) };
    }
    let shift = (sv[k - 1].max(floor) * sv[k]).sqrt();
    let basis = invariant_subspace(e, shift, 2 * k, INVERSE_ITERATIONS);
    let plus = count_interior_modes(op, &basis, true);
    let minus = count_interior_modes(op, &basis, false);
    GridAnalysis { singular_values: sv, noise_floor: floor, split: Some((plus, minus, k)) }
}

/// Dimension of the chirality's part of the cluster that is supported in the interior.
fn count_interior_modes(op: &OperatorMatrix, basis: &DMatrix<f64>, plus: bool) -> usize {
    let rows: Vec<usize> = (0..basis.nrows()).filter(|&i| op.is_plus_node(i) == plus).collect();
    let b = basis.ncols();
    let p = DMatrix::from_fn(rows.len(), b, |r, c| basis[(rows[r], c)]);
    let (vals, vecs) = symmetric_eigen(p.transpose() * &p);
    let chosen: Vec<usize> = (0..b).filter(|&i| vals[i] > 0.5).collect();
    if chosen.is_empty() {
        return 0;
    }
    let mut q = DMatrix::zeros(rows.len(), chosen.len());
    for (c, &i) in chosen.iter().enumerate() {
        let v = &p * vecs.column(i) / vals[i].sqrt();
        q.set_column(c, &v);
    }
    let mask = op.interior_mask();
    let mut masked = q.clone();
    for (r, &node) in rows.iter().enumerate() {
        if !mask[node] {
            masked.row_mut(r).fill(0.0);
        }
    }
    let (weights, _) = symmetric_eigen(q.transpose() * masked);
    weights.iter().filter(|&&w| w >= 0.5).count()
}

/// Index with a refinement check at `2N`.
pub fn compute_index(op: &OperatorMatrix) -> Result<IndexResult> {
    let coarse = analyze_grid(op);
    let grid = op.spec().grid;
    let fine_op = op.regrid(grid.r_max, 2 * grid.n)?;
    let fine = analyze_grid(&fine_op);
    let (chosen, n, consistent) = match (coarse.split, fine.split) {
        (Some(_), Some(_)) => {
            let same = coarse.split.map(|s| (s.0, s.1)) == fine.split.map(|s| (s.0, s.1));
            (&coarse, grid.n, same)
        }
        (Some(_), None) => (&coarse, grid.n, false),
        (None, Some(_)) => (&fine, 2 * grid.n, false),
        (None, None) => {
            return Err(Error::Unresolved(format!(
                "no gap of {SEPARATION}x among the smallest singular values at N = {} ({:.3e}) or N = {} ({:.3e})",
                grid.n,
                coarse.singular_values.first().copied().unwrap_or(f64::NAN),
                2 * grid.n,
                fine.singular_values.first().copied().unwrap_or(f64::NAN),
            )))
        }
    };
    let (plus, minus, k) = chosen.split.expect("resolved");
    Ok(IndexResult {
        index: plus as i64 - minus as i64,
        dim_ker_plus: plus,
        dim_ker_minus: minus,
        spectral_gap: chosen.singular_values[k],
        kernel_cluster: chosen.singular_values[..k].to_vec(),
        refinement_consistent: consistent,
        separation_ratio: chosen.separation_ratio().expect("resolved"),
        n,
    })
}

/// Assembles and computes in one step.
pub fn model_index(spec: &ModelSpec1D) -> Result<IndexResult> {
    compute_index(&build_operator(spec)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chirality {
    Plus,
    Minus,
}

/// Number of square-integrable zero modes of the cylinder operator for one
/// chirality, from the signs of `μ − tau` at both ends.
///
/// The plus solution is `exp(−2π∫(μ − tau))`, which decays at both ends
/// iff `μ(−∞) < tau < μ(+∞)`; the minus solution `exp(+2π∫(μ − tau))` needs
/// the reverse.
pub fn analytic_zero_mode_count(profile: &ProfileMu, tau: i64, chirality: Chirality) -> Result<i64> {
    let (lo, hi) = profile.doubled_limits();
    let t = 2 * tau;
    if lo == t || hi == t {
        return Err(Error::InvalidModel(format!("tau = {tau} equals a limit of the profile")));
    }
    Ok(match chirality {
        Chirality::Plus => (lo < t && t < hi) as i64,
        Chirality::Minus => (hi < t && t < lo) as i64,
    })
}

/// Zero-mode count of the disc operator: the solution `s^a` at the origin
/// must have `a > 0` and the solution must decay at infinity.
pub fn disc_zero_mode_count(rho: i64, tau: i64, chirality: Chirality) -> i64 {
    let n = tau - rho;
    let (regular, decays) = match chirality {
        // exponent n + 1/2 at the origin; decays iff rho + 1/2 > tau
        Chirality::Plus => (n >= 0, n <= 0),
        // exponent −(n + 1/2); decays iff rho + 1/2 < tau
        Chirality::Minus => (n <= -1, n >= 1),
    };
    (regular && decays) as i64
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepEntry {
    pub deformation: Deformation,
    pub result: std::result::Result<IndexResult, Error>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub entries: Vec<SweepEntry>,
    /// All resolved indices agree.
    pub all_equal: bool,
}

/// Index for every deformation in `family`, computed in parallel; entries keep input order.
pub fn deformation_sweep(spec: &ModelSpec1D, family: &[Deformation]) -> SweepResult {
    let entries: Vec<SweepEntry> = family
        .par_iter()
        .map(|&d| SweepEntry { deformation: d, result: model_index(&spec.with_deformation(d)) })
        .collect();
    let resolved: Vec<i64> = entries.iter().filter_map(|e| e.result.as_ref().ok().map(|r| r.index)).collect();
    let all_equal = resolved.windows(2).all(|w| w[0] == w[1]);
    SweepResult { entries, all_equal }
}

/// A union of closed intervals; endpoints may be infinite.
#[derive(Clone, Debug, PartialEq)]
pub struct Region(pub Vec<(f64, f64)>);

impl Region {
    pub fn line() -> Self {
        Region(vec![(f64::NEG_INFINITY, f64::INFINITY)])
    }

    /// `|r| ≥ a`.
    pub fn outside(a: f64) -> Self {
        Region(vec![(f64::NEG_INFINITY, -a), (a, f64::INFINITY)])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcyclicityProbe {
    /// `min (tau − μ)²` over the region.
    pub kappa: f64,
    /// Bound on `|⟨{D, D_K}s, s⟩| / ⟨D_K² s, s⟩` over sections supported in the region.
    pub c_rho: f64,
}

/// Lower bound for `D_K²` and the anticommutator constant on a region.
///
/// On the mode `tau`, `D_K` is multiplication by `g = 2π(μ − tau)` (divided
/// by the orbit length on the disc) in the off-diagonal slot, and the
/// anticommutator with `D` is `diag(2g² ∓ g')`. The Rayleigh bound over
/// sections supported in the region is therefore `sup (2 + |g'|/g²)`,
/// evaluated on a fine sample of the region clipped to the grid.
pub fn probe_acyclicity(spec: &ModelSpec1D, region: &Region) -> Result<AcyclicityProbe> {
    spec.validate()?;
    let tau = spec.tau as f64;
    let lo_domain = match spec.kind {
        ModelKind::Cylinder => f64::NEG_INFINITY,
        ModelKind::Disc => 0.0,
    };
    let mu = |r: f64| -> f64 {
        match spec.kind {
            ModelKind::Cylinder => ProfileMu::new(spec.rho).value(r.clamp(-1.0, 1.0)),
            ModelKind::Disc => disc_mu(spec.rho, r.clamp(0.0, 1.0)),
        }
    };
    let mut kappa = f64::INFINITY;
    for &(a, b) in &region.0 {
        let a = a.max(lo_domain);
        if a > b {
            continue;
        }
        // μ is monotone, so the extreme values of μ − tau sit at the ends
        let (ma, mb) = (mu(a) - tau, mu(b) - tau);
        let k = if ma <= 0.0 && mb >= 0.0 { 0.0 } else { (ma * ma).min(mb * mb) };
        kappa = kappa.min(k);
    }
    if !kappa.is_finite() {
        return Err(Error::Precondition("probe region is empty".into()));
    }
    if kappa == 0.0 {
        return Ok(AcyclicityProbe { kappa, c_rho: f64::INFINITY });
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let g = |r: f64| match spec.kind {
        ModelKind::Cylinder => two_pi * (spec.mu(r) - tau),
        ModelKind::Disc => two_pi * (spec.mu(r) - tau) / super::model::orbit_length(r),
    };
    let (r_lo, r_hi) = match spec.kind {
        ModelKind::Cylinder => (-spec.grid.r_max, spec.grid.r_max),
        ModelKind::Disc => (spec.inner_radius(), spec.grid.r_max),
    };
    let mut c: f64 = 0.0;
    let h = 1e-6;
    for &(a, b) in &region.0 {
        let (a, b) = (a.max(r_lo), b.min(r_hi));
        if a > b {
            continue;
        }
        let samples = 4000;
        for i in 0..=samples {
            let r = a + (b - a) * i as f64 / samples as f64;
            let gv = g(r);
            let dg = (g(r + h) - g(r - h)) / (2.0 * h);
            c = c.max(2.0 + dg.abs() / (gv * gv));
        }
    }
    Ok(AcyclicityProbe { kappa, c_rho: c })
}

/// Product of the factor indices with each factor's mode replaced by the
/// matching entry of `multimode`.
pub fn product_index(specs: &[ModelSpec1D], multimode: &Weight) -> Result<i64> {
    if specs.len() != multimode.rank() {
        return Err(Error::DimensionMismatch { expected: specs.len(), found: multimode.rank() });
    }
    let indices: Vec<i64> = specs
        .par_iter()
        .zip(multimode.coords().par_iter())
        .map(|(s, &tau)| model_index(&s.with_tau(tau)).map(|r| r.index))
        .collect::<Result<Vec<_>>>()?;
    Ok(indices.iter().product())
}
