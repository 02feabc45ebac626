//! Staggered, exponentially fitted discretization of `d/dr + W(r)`.
//!
//! Plus and minus components live on alternating nodes of a uniform grid of
//! `2N` interior points. The boundary values are ghost nodes set to zero: one
//! chirality at each end. The plus block `A` maps plus values to minus values
//! and the assembled Dirac operator `[[0, Aᵀ], [A, 0]]`, ordered by position,
//! is a symmetric tridiagonal matrix with zero diagonal.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

use super::model::{ModelKind, ModelSpec1D};

/// Which chirality sits on the odd grid points (counting the first ghost as 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    /// Plus on odd points; the minus component vanishes at the left end and
    /// the plus component at the right end.
    PlusOdd,
    /// Minus on odd points; the plus component vanishes at the left end.
    MinusOdd,
}

/// A square banded block stored as three diagonals.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedBlock {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BandedBlock {
    pub fn size(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.size();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
            if i + 1 < n {
                m[(i, i + 1)] = self.upper[i];
                m[(i + 1, i)] = self.lower[i];
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    spec: ModelSpec1D,
    layout: Layout,
    /// Interior node positions, ascending; `2N` of them.
    positions: Vec<f64>,
    /// Couplings between consecutive nodes; `2N − 1` of them.
    couplings: Vec<f64>,
    /// Nodes with distance at least [`INTERIOR_MARGIN`] from every truncation end.
    interior: Vec<bool>,
}

/// Modes supported within this distance of an artificial end are truncation artifacts.
pub const INTERIOR_MARGIN: f64 = 1.0;

/// Coefficients `(left, right)` of the exact two-point scheme for
/// `u' + W u = 0` over a cell of width `h`.
pub fn fitted_coefficients(w: f64, h: f64) -> (f64, f64) {
    let x = h * w;
    if x.abs() < 1e-8 {
        return (-1.0 / h + 0.5 * w, 1.0 / h + 0.5 * w);
    }
    (-w / x.exp_m1(), w / -(-x).exp_m1())
}

impl OperatorMatrix {
    pub fn spec(&self) -> &ModelSpec1D {
        &self.spec
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    /// Number of nodes per chirality.
    pub fn n(&self) -> usize {
        self.positions.len() / 2
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn is_plus_node(&self, i: usize) -> bool {
        // node i sits at grid point i + 1
        match self.layout {
            Layout::PlusOdd => i.is_multiple_of(2),
            Layout::MinusOdd => !i.is_multiple_of(2),
        }
    }

    pub fn interior_mask(&self) -> &[bool] {
        &self.interior
    }

    /// The block `A` (rows: minus nodes, columns: plus nodes, both ascending).
    pub fn plus_block(&self) -> BandedBlock {
        let n = self.n();
        let e = &self.couplings;
        let mut b = BandedBlock { lower: vec![0.0; n - 1], diag: vec![0.0; n], upper: vec![0.0; n - 1] };
        for j in 0..n {
            match self.layout {
                Layout::PlusOdd => {
                    // minus node 2j+1 sits between plus nodes 2j and 2j+2
                    let m = 2 * j + 1;
                    b.diag[j] = e[m - 1];
                    if j + 1 < n {
                        b.upper[j] = e[m];
                    }
                }
                Layout::MinusOdd => {
                    // minus node 2j sits between plus nodes 2j−1 and 2j+1
                    let m = 2 * j;
                    b.diag[j] = e[m];
                    if j > 0 {
                        b.lower[j - 1] = e[m - 1];
                    }
                }
            }
        }
        b
    }

    /// Dense Dirac matrix in position order (for small grids and tests).
    pub fn dirac_dense(&self) -> DMatrix<f64> {
        let n = self.positions.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &c) in self.couplings.iter().enumerate() {
            m[(i, i + 1)] = c;
            m[(i + 1, i)] = c;
        }
        m
    }

    /// Same model at a different grid.
    pub fn regrid(&self, r_max: f64, n: usize) -> Result<OperatorMatrix> {
        build_operator(&self.spec.with_grid(r_max, n))
    }
}

pub fn build_cylinder_operator(spec: &ModelSpec1D) -> Result<OperatorMatrix> {
    if spec.kind != ModelKind::Cylinder {
        return Err(Error::InvalidModel("build_cylinder_operator needs kind = cylinder".into()));
    }
    spec.validate()?;
    let r = spec.grid.r_max;
    Ok(assemble(spec, -r, r, Layout::PlusOdd, |x| x.abs() <= r - INTERIOR_MARGIN))
}

pub fn build_disc_operator(spec: &ModelSpec1D) -> Result<OperatorMatrix> {
    if spec.kind != ModelKind::Disc {
        return Err(Error::InvalidModel("build_disc_operator needs kind = disc".into()));
    }
    spec.validate()?;
    // exponent of the plus solution at the origin; the minus one is its negative
    let a_plus = (spec.tau - spec.rho) as f64 + 0.5;
    if a_plus.abs() < 0.25 {
        return Err(Error::AmbiguousIndicial(a_plus));
    }
    // the chirality whose solution is singular at the origin vanishes at the inner radius
    let layout = if a_plus > 0.0 { Layout::PlusOdd } else { Layout::MinusOdd };
    let r = spec.grid.r_max;
    Ok(assemble(spec, spec.inner_radius(), r, layout, |x| x <= r - INTERIOR_MARGIN))
}

pub fn build_operator(spec: &ModelSpec1D) -> Result<OperatorMatrix> {
    match spec.kind {
        ModelKind::Cylinder => build_cylinder_operator(spec),
        ModelKind::Disc => build_disc_operator(spec),
    }
}

fn assemble(
    spec: &ModelSpec1D,
    a: f64,
    b: f64,
    layout: Layout,
    interior: impl Fn(f64) -> bool,
) -> OperatorMatrix {
    let n = spec.grid.n;
    let step = (b - a) / (2 * n + 1) as f64;
    let point = |k: usize| a + k as f64 * step;
    let positions: Vec<f64> = (1..=2 * n).map(point).collect();
    let h = 2.0 * step;
    let mut op = OperatorMatrix {
        spec: *spec,
        layout,
        positions,
        couplings: Vec::with_capacity(2 * n - 1),
        interior: Vec::new(),
    };
    for i in 0..2 * n - 1 {
        // the coupling belongs to the cell centred on the minus node of the pair
        let c = if op.is_plus_node(i) {
            let (left, _) = fitted_coefficients(spec.potential(point(i + 2)), h);
            left
        } else {
            let (_, right) = fitted_coefficients(spec.potential(point(i + 1)), h);
            right
        };
        op.couplings.push(c);
    }
    op.interior = op.positions.iter().map(|&x| interior(x)).collect();
    op
}
