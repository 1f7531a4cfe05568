//! Sparse Bose-Hubbard Hamiltonian in the truncated Fock basis.

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::basis::FockBasis;
use crate::error::{Error, Result};
use crate::model::{Boundary, ModelSpec};
use crate::C64;

/// Real symmetric matrix in compressed-row form.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

/// Nearest-neighbour bonds, each listed once. A two-site periodic lattice has
/// a single bond.
pub fn bonds(num_sites: usize, boundary: Boundary) -> Vec<(usize, usize)> {
    let mut out: Vec<_> = (0..num_sites.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    if boundary == Boundary::Periodic && num_sites > 2 {
        out.push((num_sites - 1, 0));
    }
    out
}

/// Assembles `Ĥ = −J Σ_⟨ij⟩ (â_i†â_j + h.c.) + (U/2) Σ n̂_i(n̂_i − 1) + μN + Σ s_i n̂_i`.
///
/// Hops that would exceed the occupation cap are dropped, so the result is
/// the Hamiltonian projected onto the truncated space.
pub fn build_hamiltonian(basis: &FockBasis, spec: &ModelSpec, onsite_shifts: &[f64]) -> Result<SparseHamiltonian> {
    if basis.num_sites() != spec.num_sites {
        return Err(Error::DimensionMismatch { expected: spec.num_sites, actual: basis.num_sites() });
    }
    if basis.num_particles() != spec.num_particles {
        return Err(Error::DimensionMismatch { expected: spec.num_particles, actual: basis.num_particles() });
    }
    if onsite_shifts.len() != spec.num_sites {
        return Err(Error::DimensionMismatch { expected: spec.num_sites, actual: onsite_shifts.len() });
    }
    let bonds = bonds(spec.num_sites, spec.boundary);
    let cap = basis.cap() as u8;
    let hopping = 1.0;
    let u_half = 0.5 * spec.interaction;
    let mu_n = spec.chemical_potential * spec.num_particles as f64;

    let rows: Vec<Vec<(usize, f64)>> = (0..basis.dim())
        .into_par_iter()
        .with_min_len(256)
        .map_init(
            || vec![0u8; basis.num_sites()],
            |scratch, row| {
                let state = basis.state(row);
                let mut entries = Vec::with_capacity(2 * bonds.len() + 1);
                let mut diag = mu_n;
                for (&n, &s) in state.iter().zip(onsite_shifts) {
                    let n = n as f64;
                    diag += u_half * n * (n - 1.0) + s * n;
                }
                entries.push((row, diag));
                for &(i, j) in &bonds {
                    for (from, to) in [(i, j), (j, i)] {
                        // â_to† â_from
                        let (nf, nt) = (state[from], state[to]);
                        if nf == 0 || nt == cap {
                            continue;
                        }
                        scratch.copy_from_slice(state);
                        scratch[from] -= 1;
                        scratch[to] += 1;
                        let col = basis.lookup(scratch).expect("hop stays in the fixed-N sector");
                        let amp = -hopping * ((nf as f64) * (nt as f64 + 1.0)).sqrt();
                        entries.push((col, amp));
                    }
                }
                entries.sort_by_key(|&(c, _)| c);
                entries.dedup_by(|b, a| {
                    if a.0 == b.0 {
                        a.1 += b.1;
                        true
                    } else {
                        false
                    }
                });
                entries
            },
        )
        .collect();

    let nnz = rows.iter().map(Vec::len).sum();
    let mut row_ptr = Vec::with_capacity(basis.dim() + 1);
    let mut cols = Vec::with_capacity(nnz);
    let mut vals = Vec::with_capacity(nnz);
    row_ptr.push(0);
    for r in rows {
        for (c, v) in r {
            cols.push(c);
            vals.push(v);
        }
        row_ptr.push(cols.len());
    }
    Ok(SparseHamiltonian { dim: basis.dim(), row_ptr, cols, vals })
}

impl SparseHamiltonian {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()].iter().copied().zip(self.vals[span].iter().copied())
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.row(r).find(|&(cc, _)| cc == c).map_or(0.0, |(_, v)| v)
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|r| self.get(r, r)).collect()
    }

    /// Exact symmetry of the stored entries.
    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|r| self.row(r).all(|(c, v)| self.get(c, r) == v))
    }

    /// Gershgorin bound on the spectral radius.
    pub fn norm_bound(&self) -> f64 {
        (0..self.dim).map(|r| self.row(r).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        y.par_iter_mut().with_min_len(512).enumerate().for_each(|(r, out)| {
            *out = self.row(r).map(|(c, v)| v * x[c]).sum();
        });
    }

    pub fn apply_complex(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        y.par_iter_mut().with_min_len(512).enumerate().for_each(|(r, out)| {
            *out = self.row(r).map(|(c, v)| x[c] * v).sum();
        });
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.apply(x, &mut y);
        y
    }

    /// `⟨x|Ĥ|x⟩`.
    pub fn expectation(&self, x: &[f64]) -> f64 {
        let hx = self.mul_vec(x);
        x.iter().zip(&hx).map(|(a, b)| a * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for (c, v) in self.row(r) {
                m[(r, c)] = v;
            }
        }
        m
    }
}
