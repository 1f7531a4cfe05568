//! Real-time propagation `ψ ↦ e^{−iĤt}ψ`.
//!
//! Small matrices use their dense eigendecomposition. Larger ones use a
//! Lanczos-Krylov approximation of dimension [`KRYLOV_DIM`]; the time step is
//! halved until the a-posteriori error estimate `β_m |[e^{−iTτ}e₁]_m|` drops
//! below [`KRYLOV_TOL`], and the remaining interval is covered by further
//! steps.

use nalgebra::DMatrix;

use super::eigen::{dense_spectrum, sorted_eigen, Spectrum, DENSE_CAP};
use super::hamiltonian::SparseHamiltonian;
use crate::error::{Error, Result};
use crate::C64;

pub const KRYLOV_DIM: usize = 30;
pub const KRYLOV_TOL: f64 = 1e-10;
const MAX_HALVINGS: usize = 60;
const MAX_STEPS: usize = 1_000_000;

pub(crate) fn cdot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn cnorm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Evolution under one fixed Hamiltonian.
pub enum Propagator<'a> {
    Dense(Spectrum),
    Krylov(&'a SparseHamiltonian),
}

impl<'a> Propagator<'a> {
    /// Dense below [`DENSE_CAP`], Krylov above.
    pub fn new(h: &'a SparseHamiltonian) -> Self {
        if h.dim() < DENSE_CAP {
            Propagator::Dense(dense_spectrum(h))
        } else {
            Propagator::Krylov(h)
        }
    }

    pub fn krylov(h: &'a SparseHamiltonian) -> Self {
        Propagator::Krylov(h)
    }

    pub fn dense(h: &SparseHamiltonian) -> Self {
        Propagator::Dense(dense_spectrum(h))
    }

    /// `e^{−iĤt}ψ`; `t` may be negative.
    pub fn evolve(&self, psi: &[C64], t: f64) -> Result<Vec<C64>> {
        match self {
            Propagator::Dense(spec) => Ok(dense_evolve(spec, psi, t)),
            Propagator::Krylov(h) => krylov_evolve(h, psi, t),
        }
    }
}

/// `e^{−iĤt}ψ` with the default strategy for the dimension of `h`.
pub fn propagate(h: &SparseHamiltonian, psi: &[C64], t: f64) -> Result<Vec<C64>> {
    if psi.len() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), actual: psi.len() });
    }
    Propagator::new(h).evolve(psi, t)
}

pub(crate) fn dense_evolve(spec: &Spectrum, psi: &[C64], t: f64) -> Vec<C64> {
    let v = &spec.vectors;
    let n = v.nrows();
    let coeffs: Vec<C64> = (0..n)
        .map(|k| {
            let c: C64 = (0..n).map(|s| psi[s] * v[(s, k)]).sum();
            c * C64::from_polar(1.0, -spec.values[k] * t)
        })
        .collect();
    (0..n).map(|s| (0..n).map(|k| coeffs[k] * v[(s, k)]).sum()).collect()
}

struct KrylovBasis {
    vectors: Vec<Vec<C64>>,
    spectrum: Spectrum,
    /// `β_m` after the last vector; zero on invariant-subspace breakdown.
    tail: f64,
}

fn build_krylov(h: &SparseHamiltonian, v0: Vec<C64>) -> KrylovBasis {
    let dim = h.dim();
    let m_max = KRYLOV_DIM.min(dim);
    let mut vectors = vec![v0];
    let mut alphas = Vec::with_capacity(m_max);
    let mut betas: Vec<f64> = Vec::with_capacity(m_max);
    let mut w = vec![C64::new(0.0, 0.0); dim];
    let mut tail = 0.0;
    for j in 0..m_max {
        h.apply_complex(&vectors[j], &mut w);
        let alpha = cdot(&vectors[j], &w).re;
        alphas.push(alpha);
        for _ in 0..2 {
            for v in &vectors {
                let c = cdot(v, &w);
                w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
            }
        }
        let beta = cnorm(&w);
        if beta <= 1e-13 * alpha.abs().max(1.0) {
            tail = 0.0;
            break;
        }
        if j + 1 == m_max {
            tail = beta;
            break;
        }
        betas.push(beta);
        vectors.push(w.iter().map(|x| x / beta).collect());
    }
    let m = alphas.len();
    let t = DMatrix::from_fn(m, m, |r, c| {
        if r == c {
            alphas[r]
        } else if r + 1 == c {
            betas[r]
        } else if c + 1 == r {
            betas[c]
        } else {
            0.0
        }
    });
    KrylovBasis { vectors, spectrum: sorted_eigen(t), tail }
}

/// `e^{−iTτ}e₁` in the Krylov coordinates.
fn small_exp(spec: &Spectrum, tau: f64) -> Vec<C64> {
    let m = spec.values.len();
    (0..m)
        .map(|r| {
            (0..m)
                .map(|k| spec.vectors[(r, k)] * spec.vectors[(0, k)] * C64::from_polar(1.0, -spec.values[k] * tau))
                .sum()
        })
        .collect()
}

fn krylov_evolve(h: &SparseHamiltonian, psi: &[C64], t: f64) -> Result<Vec<C64>> {
    let mut current = psi.to_vec();
    let total = t.abs();
    let sign = t.signum();
    let mut done = 0.0;
    let mut steps = 0;
    while done < total {
        let nrm = cnorm(&current);
        if nrm == 0.0 {
            return Ok(current);
        }
        let kb = build_krylov(h, current.iter().map(|x| x / nrm).collect());
        let mut tau = total - done;
        let mut halvings = 0;
        let coeffs = loop {
            let c = small_exp(&kb.spectrum, sign * tau);
            let err = kb.tail * c[c.len() - 1].norm();
            if err <= KRYLOV_TOL {
                break c;
            }
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(Error::NotConverged { solver: "krylov propagation", iterations: steps, residual: err });
            }
            tau *= 0.5;
        };
        let mut next = vec![C64::new(0.0, 0.0); h.dim()];
        for (c, v) in coeffs.iter().zip(&kb.vectors) {
            let c = c * nrm;
            next.iter_mut().zip(v).for_each(|(x, vi)| *x += c * vi);
        }
        current = next;
        done = if halvings == 0 { total } else { done + tau };
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::NotConverged { solver: "krylov propagation", iterations: steps, residual: f64::NAN });
        }
    }
    Ok(current)
}
