//! Polytope corpus shared by the integration tests.
//!
//! Every entry keeps its raw inequalities `⟨n, x⟩ ≥ b` so membership and fiber
//! counts can be computed by brute force, independently of the library.
#![allow(dead_code)]

use toricq::{IntMatrix, LatticeBox, Polyhedron, UnimodularMatrix, Weight};

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub rows: Vec<(Vec<i64>, i64)>,
    /// Box containing every lattice point (bounded entries only).
    pub bbox: Option<(Vec<i64>, Vec<i64>)>,
}

impl Entry {
    fn new(name: &str, rows: Vec<(Vec<i64>, i64)>, lo: &[i64], hi: &[i64]) -> Self {
        Entry { name: name.into(), rows, bbox: Some((lo.to_vec(), hi.to_vec())) }
    }

    pub fn dim(&self) -> usize {
        self.rows[0].0.len()
    }

    pub fn polyhedron(&self) -> Polyhedron {
        Polyhedron::from_inequalities(&self.rows).unwrap().named(&self.name)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.rows.iter().all(|(n, b)| n.iter().zip(x).map(|(a, c)| a * c).sum::<i64>() >= *b)
    }

    /// All lattice points, by scanning the bounding box.
    pub fn points(&self) -> Vec<Vec<i64>> {
        let (lo, hi) = self.bbox.clone().expect("bounded entry");
        let mut out = Vec::new();
        let mut cur = lo.clone();
        loop {
            if self.contains(&cur) {
                out.push(cur.clone());
            }
            let mut k = 0;
            loop {
                if k == cur.len() {
                    return out;
                }
                cur[k] += 1;
                if cur[k] <= hi[k] {
                    break;
                }
                cur[k] = lo[k];
                k += 1;
            }
        }
    }

    /// Lattice points that are vertices: their tight normals have full rank.
    pub fn lattice_vertices(&self) -> Vec<Vec<i64>> {
        self.points()
            .into_iter()
            .filter(|x| {
                let tight: Vec<Vec<i64>> = self
                    .rows
                    .iter()
                    .filter(|(n, b)| n.iter().zip(x).map(|(a, c)| a * c).sum::<i64>() == *b)
                    .map(|(n, _)| n.clone())
                    .collect();
                int_rank(tight) == self.dim()
            })
            .collect()
    }

    pub fn lattice_box(&self) -> LatticeBox {
        let (lo, hi) = self.bbox.clone().expect("bounded entry");
        LatticeBox::new(lo, hi)
    }

    /// Image under `x ↦ U x + shift`; `u_inv` must be the inverse of `u`.
    pub fn image(&self, name: &str, u: &[Vec<i64>], u_inv: &[Vec<i64>], shift: &[i64]) -> Entry {
        let d = self.dim();
        // ⟨n, x⟩ ≥ b  ⇔  ⟨U⁻ᵀ n, y − s⟩ ≥ b
        let rows = self
            .rows
            .iter()
            .map(|(n, b)| {
                let m: Vec<i64> = (0..d).map(|j| (0..d).map(|i| u_inv[i][j] * n[i]).sum()).collect();
                let off = b + m.iter().zip(shift).map(|(a, c)| a * c).sum::<i64>();
                (m, off)
            })
            .collect();
        let pts: Vec<Vec<i64>> = self
            .points()
            .iter()
            .map(|x| (0..d).map(|i| (0..d).map(|j| u[i][j] * x[j]).sum::<i64>() + shift[i]).collect())
            .collect();
        let lo: Vec<i64> = (0..d).map(|k| pts.iter().map(|p| p[k]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..d).map(|k| pts.iter().map(|p| p[k]).max().unwrap()).collect();
        Entry { name: name.into(), rows, bbox: Some((lo, hi)) }
    }
}

fn int_rank(mut m: Vec<Vec<i64>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..cols {
                    m[r][k] = a * m[r][k] - b * m[rank][k];
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn unimodular(u: &[Vec<i64>]) -> UnimodularMatrix {
    UnimodularMatrix::new(IntMatrix::from_rows(u)).expect("unimodular")
}

pub fn rectangle(a: i64, b: i64) -> Entry {
    Entry::new(
        &format!("rect{a}x{b}"),
        vec![(vec![1, 0], 0), (vec![0, 1], 0), (vec![-1, 0], -a), (vec![0, -1], -b)],
        &[0, 0],
        &[a, b],
    )
}

pub fn simplex(d: usize, k: i64) -> Entry {
    let mut rows: Vec<(Vec<i64>, i64)> = (0..d)
        .map(|i| {
            let mut n = vec![0; d];
            n[i] = 1;
            (n, 0)
        })
        .collect();
    rows.push((vec![-1; d], -k));
    Entry::new(&format!("simplex{d}_{k}"), rows, &vec![0; d], &vec![k; d])
}

/// Hirzebruch trapezoid: `0 ≤ y ≤ b`, `x ≥ 0`, `x + a·y ≤ a·b + c`.
pub fn hirzebruch(a: i64, b: i64, c: i64) -> Entry {
    Entry::new(
        &format!("hirzebruch{a}_{b}_{c}"),
        vec![(vec![1, 0], 0), (vec![0, 1], 0), (vec![0, -1], -b), (vec![-1, -a], -(a * b + c))],
        &[0, 0],
        &[a * b + c, b],
    )
}

pub fn cuboid(a: i64, b: i64, c: i64) -> Entry {
    let rows = vec![
        (vec![1, 0, 0], 0),
        (vec![0, 1, 0], 0),
        (vec![0, 0, 1], 0),
        (vec![-1, 0, 0], -a),
        (vec![0, -1, 0], -b),
        (vec![0, 0, -1], -c),
    ];
    Entry::new(&format!("box{a}x{b}x{c}"), rows, &[0, 0, 0], &[a, b, c])
}

/// `[0,k]²` with the corners at the origin and at `(k,k)` cut off at depth `c`.
pub fn hexagon(k: i64, c: i64) -> Entry {
    let mut e = rectangle(k, k);
    e.rows.push((vec![1, 1], c));
    e.rows.push((vec![-1, -1], c - 2 * k));
    e.name = format!("hexagon{k}_{c}");
    e
}

/// `[0,k]³` with the corner at the origin cut off at depth `c`.
pub fn corner_cut_cube(k: i64, c: i64) -> Entry {
    let mut e = cuboid(k, k, k);
    e.rows.push((vec![1, 1, 1], c));
    e.name = format!("cutcube{k}_{c}");
    e
}

/// `k·Δ² × [0, h]`.
pub fn prism(k: i64, h: i64) -> Entry {
    let rows = vec![
        (vec![1, 0, 0], 0),
        (vec![0, 1, 0], 0),
        (vec![-1, -1, 0], -k),
        (vec![0, 0, 1], 0),
        (vec![0, 0, -1], -h),
    ];
    Entry::new(&format!("prism{k}_{h}"), rows, &[0, 0, 0], &[k, k, h])
}

/// Bounded Delzant polytopes in dimensions 2 and 3.
pub fn corpus() -> Vec<Entry> {
    let shear = vec![vec![1, 1], vec![0, 1]];
    let shear_inv = vec![vec![1, -1], vec![0, 1]];
    let mix = vec![vec![2, 1], vec![1, 1]];
    let mix_inv = vec![vec![1, -1], vec![-1, 2]];
    let u3 = vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]];
    let u3_inv = vec![vec![1, -1, 1], vec![0, 1, -1], vec![0, 0, 1]];
    vec![
        rectangle(1, 1),
        rectangle(2, 3),
        rectangle(4, 1),
        simplex(2, 1),
        simplex(2, 3),
        simplex(3, 1),
        simplex(3, 2),
        hirzebruch(1, 2, 1),
        hirzebruch(2, 1, 2),
        hirzebruch(3, 2, 1),
        hexagon(3, 1),
        cuboid(1, 1, 1),
        cuboid(2, 1, 3),
        corner_cut_cube(3, 1),
        corner_cut_cube(3, 2),
        prism(2, 1),
        rectangle(3, 2).image("rect3x2_sheared", &shear, &shear_inv, &[0, 0]),
        simplex(2, 2).image("simplex2_2_mixed", &mix, &mix_inv, &[1, -2]),
        hirzebruch(1, 2, 2).image("hirzebruch1_2_2_mixed", &mix, &mix_inv, &[0, 3]),
        rectangle(2, 2).image("rect2x2_translated", &[vec![1, 0], vec![0, 1]], &[vec![1, 0], vec![0, 1]], &[-2, 3]),
        simplex(3, 3).image("simplex3_3_translated", &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], &[1, -1, 2]),
        cuboid(1, 2, 1).image("box1x2x1_sheared", &u3, &u3_inv, &[0, 0, 0]),
    ]
}

pub fn directions(dim: usize) -> Vec<Weight> {
    let raw: Vec<Vec<i64>> = match dim {
        2 => vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1], vec![2, 1], vec![1, 2], vec![-3, 2]],
        3 => vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 0],
            vec![1, 1, 1],
            vec![1, -1, 2],
            vec![2, 1, -1],
        ],
        _ => unreachable!("corpus is in dimensions 2 and 3"),
    };
    raw.into_iter().map(Weight).collect()
}

/// Lattice points of `entry` with `⟨xi, x⟩ = level`, by brute force.
pub fn fiber_count(entry: &Entry, xi: &Weight, level: i64) -> usize {
    entry
        .points()
        .iter()
        .filter(|x| x.iter().zip(xi.coords()).map(|(a, b)| a * b).sum::<i64>() == level)
        .count()
}

/// Levels covering the image of `⟨xi, ·⟩` with one level of margin on each side.
pub fn level_span(entry: &Entry, xi: &Weight) -> (i64, i64) {
    let vals: Vec<i64> = entry
        .lattice_vertices()
        .iter()
        .map(|x| x.iter().zip(xi.coords()).map(|(a, b)| a * b).sum())
        .collect();
    (vals.iter().min().unwrap() - 1, vals.iter().max().unwrap() + 1)
}
