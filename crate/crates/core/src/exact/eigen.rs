//! Lowest eigenpair of a sparse symmetric Hamiltonian.
//!
//! Below [`DENSE_CAP`] the matrix is diagonalized densely; above it a
//! Lanczos iteration with full reorthogonalization and explicit restarts
//! from the current Ritz vector is used.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hamiltonian::SparseHamiltonian;
use crate::error::{Error, Result};

/// Largest dimension handled by dense diagonalization of ground states.
pub const DENSE_CAP: usize = 500;
/// Residual target `‖Hψ − Eψ‖`.
pub const RESIDUAL_TOL: f64 = 1e-10;
/// Total matrix-vector products allowed for one ground-state solve.
pub const MAX_MATVECS: usize = 5000;

const KRYLOV_MAX: usize = 250;
const CHECK_EVERY: usize = 8;
const START_SEED: u64 = 0x0005_eed0_f1a2_c205;

/// Eigenpairs sorted by ascending eigenvalue; `vectors` holds them as columns.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

/// Full dense spectrum.
pub fn dense_spectrum(h: &SparseHamiltonian) -> Spectrum {
    sorted_eigen(h.to_dense())
}

pub(crate) fn sorted_eigen(m: DMatrix<f64>) -> Spectrum {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Spectrum { values, vectors }
}

/// `‖Hψ − Eψ‖` for a real vector.
pub fn residual(h: &SparseHamiltonian, energy: f64, psi: &[f64]) -> f64 {
    let hpsi = h.mul_vec(psi);
    hpsi.iter().zip(psi).map(|(a, b)| (a - energy * b).powi(2)).sum::<f64>().sqrt()
}

/// Lowest eigenpair `(E₀, ψ₀)` with unit norm and residual below [`RESIDUAL_TOL`],
/// or below the round-off floor `64 ε ‖Ĥ‖` when that is larger.
///
/// The sign of `ψ₀` is fixed so that its largest-magnitude entry is positive.
pub fn ground_state(h: &SparseHamiltonian) -> Result<(f64, Vec<f64>)> {
    let (energy, mut psi) = if h.dim() < DENSE_CAP {
        let spec = dense_spectrum(h);
        (spec.values[0], spec.vectors.column(0).iter().copied().collect())
    } else {
        lanczos_ground_state(h, residual_floor(h), MAX_MATVECS)?
    };
    fix_sign(&mut psi);
    let res = residual(h, energy, &psi);
    if res > residual_floor(h) {
        return Err(Error::NotConverged { solver: "ground state", iterations: 0, residual: res });
    }
    Ok((energy, psi))
}

fn residual_floor(h: &SparseHamiltonian) -> f64 {
    RESIDUAL_TOL.max(64.0 * f64::EPSILON * h.norm_bound())
}

fn fix_sign(psi: &mut [f64]) {
    let pivot = psi.iter().copied().fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot < 0.0 {
        psi.iter_mut().for_each(|x| *x = -*x);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Restarted Lanczos for the smallest eigenvalue.
pub fn lanczos_ground_state(h: &SparseHamiltonian, tol: f64, max_matvecs: usize) -> Result<(f64, Vec<f64>)> {
    let dim = h.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    let nrm = norm(&start);
    start.iter_mut().for_each(|x| *x /= nrm);

    let mut matvecs = 0;
    let mut last_residual = f64::INFINITY;
    let krylov_max = KRYLOV_MAX.min(dim);
    let mut w = vec![0.0; dim];

    while matvecs < max_matvecs {
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut ritz: Option<(f64, Vec<f64>)> = None;

        for j in 0..krylov_max {
            h.apply(&basis[j], &mut w);
            matvecs += 1;
            let alpha = dot(&basis[j], &w);
            alphas.push(alpha);
            axpy(-alpha, &basis[j], &mut w);
            if j > 0 {
                axpy(-betas[j - 1], &basis[j - 1], &mut w);
            }
            // Two passes of Gram-Schmidt against the whole basis.
            for _ in 0..2 {
                for v in &basis {
                    let c = dot(v, &w);
                    axpy(-c, v, &mut w);
                }
            }
            let beta = norm(&w);
            let m = alphas.len();
            let exhausted = beta <= 1e-12 * alpha.abs().max(1.0) || m == krylov_max || matvecs >= max_matvecs;
            if exhausted || m % CHECK_EVERY == 0 {
                let (theta, s) = lowest_tridiagonal(&alphas, &betas);
                if exhausted || beta * s[m - 1].abs() < 0.1 * tol {
                    ritz = Some((theta, s));
                    break;
                }
            }
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        }

        let (_, s) = ritz.expect("loop exits through a Ritz check");
        let mut x = vec![0.0; dim];
        for (coef, v) in s.iter().zip(&basis) {
            axpy(*coef, v, &mut x);
        }
        let nrm = norm(&x);
        x.iter_mut().for_each(|xi| *xi /= nrm);
        let energy = h.expectation(&x);
        last_residual = residual(h, energy, &x);
        if last_residual < tol {
            return Ok((energy, x));
        }
        start = x;
    }
    Err(Error::NotConverged { solver: "lanczos", iterations: matvecs, residual: last_residual })
}

fn lowest_tridiagonal(alphas: &[f64], betas: &[f64]) -> (f64, Vec<f64>) {
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
    let spec = sorted_eigen(t);
    (spec.values[0], spec.vectors.column(0).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::basis::FockBasis;
    use crate::exact::hamiltonian::build_hamiltonian;
    use crate::model::ModelSpec;

    fn hamiltonian(m: usize, n: usize, cap: usize, u: f64) -> SparseHamiltonian {
        let basis = FockBasis::new(m, n, cap).unwrap();
        build_hamiltonian(&basis, &ModelSpec::new(m, n, u), &vec![0.0; m]).unwrap()
    }

    #[test]
    fn two_site_free_ground_state() {
        let h = hamiltonian(2, 2, 4, 0.0);
        let (e, psi) = ground_state(&h).unwrap();
        assert!((e + 2.0).abs() < 1e-12);
        let expected = [0.5, 0.5f64.sqrt(), 0.5];
        for (a, b) in psi.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn strong_repulsion_ground_state_is_unit_filling() {
        // J/U → 0 stands in for the J = 0 limit: E₀ → 0 and ψ₀ → |1,1⟩.
        let h = hamiltonian(2, 2, 4, 1e6);
        let (e, psi) = ground_state(&h).unwrap();
        assert!(e.abs() < 1e-5);
        assert!((psi[1] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lanczos_matches_dense() {
        for u in [0.5, 3.0, 40.0] {
            let h = hamiltonian(6, 6, 3, u);
            let dense = dense_spectrum(&h);
            let (e, psi) = lanczos_ground_state(&h, 1e-10, MAX_MATVECS).unwrap();
            assert!((e - dense.values[0]).abs() < 1e-10, "U={u}");
            assert!(residual(&h, e, &psi) < 1e-10);
        }
    }

    #[test]
    fn variational_bound() {
        let h = hamiltonian(5, 5, 5, 2.0);
        let (e0, _) = ground_state(&h).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mut v: Vec<f64> = (0..h.dim()).map(|_| rng.random::<f64>() - 0.5).collect();
            let n = norm(&v);
            v.iter_mut().for_each(|x| *x /= n);
            assert!(e0 <= h.expectation(&v) + 1e-12);
        }
    }

    #[test]
    fn iteration_cap_reports_non_convergence() {
        let h = hamiltonian(8, 8, 4, 3.0);
        assert!(matches!(lanczos_ground_state(&h, 1e-10, 3), Err(Error::NotConverged { .. })));
    }
}
