use nalgebra::DMatrix;
use proptest::prelude::*;

use qprobe_core::exact::qubits::{bell_elements, eigenvalues, zeta_from_bell, zeta_from_coherence, zeta_from_pauli};
use qprobe_core::exact::state::linear_density_moments;
use qprobe_core::exact::{
    build_hamiltonian, coherence_series_ed, dense_spectrum, densities, ground_state, propagate, thermal_state,
    two_qubit_rdm, ExactBackend, FockBasis, SparseHamiltonian, SystemState,
};
use qprobe_core::{Boundary, EquilibriumSpec, Error, ModelSpec, ProbeLayout, TimeGrid, C64};

fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficient of `x^N` in `(1 + x + … + x^cap)^M` by inclusion-exclusion.
fn bounded_compositions(m: i64, n: i64, cap: i64) -> f64 {
    (0..=m)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(m, j) * binomial(n - j * (cap + 1) + m - 1, m - 1)
        })
        .sum()
}

#[test]
fn basis_dimensions_match_generating_function() {
    assert_eq!(bounded_compositions(8, 8, 4), 5475.0);
    for (m, n, cap) in [(8, 8, 4), (2, 2, 4), (2, 2, 1), (6, 6, 3), (5, 9, 2), (7, 7, 7), (9, 5, 2)] {
        let basis = FockBasis::new(m, n, cap).unwrap();
        assert_eq!(basis.dim() as f64, bounded_compositions(m as i64, n as i64, cap as i64), "{m} {n} {cap}");
    }
    let two = FockBasis::new(2, 2, 4).unwrap();
    let states: Vec<&[u8]> = two.iter().collect();
    assert_eq!(states, vec![&[2u8, 0][..], &[1, 1], &[0, 2]]);
    assert_eq!(FockBasis::new(2, 2, 1).unwrap().iter().collect::<Vec<_>>(), vec![&[1u8, 1][..]]);
    assert_eq!(FockBasis::new(2, 5, 2).unwrap_err(), Error::EmptySector { sites: 2, particles: 5, cap: 2 });
}

fn hamiltonian(spec: &ModelSpec, cap: usize) -> (FockBasis, SparseHamiltonian) {
    let basis = FockBasis::new(spec.num_sites, spec.num_particles, cap).unwrap();
    let h = build_hamiltonian(&basis, spec, &vec![0.0; spec.num_sites]).unwrap();
    (basis, h)
}

#[test]
fn chemical_potential_shifts_every_level_by_mu_n() {
    let spec = ModelSpec::new(5, 5, 2.0);
    let (_, h0) = hamiltonian(&spec, 3);
    let (_, h1) = hamiltonian(&spec.clone().with_chemical_potential(0.37), 3);
    let (a, b) = (dense_spectrum(&h0), dense_spectrum(&h1));
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((y - x - 0.37 * 5.0).abs() < 1e-12);
    }
}

#[test]
fn hamiltonian_is_hermitian_and_conserves_particles() {
    for boundary in [Boundary::Periodic, Boundary::Open] {
        let spec = ModelSpec::new(6, 7, 1.3).with_boundary(boundary);
        let (basis, h) = hamiltonian(&spec, 3);
        assert!(h.is_symmetric());
        for r in 0..h.dim() {
            for (c, _) in h.row(r) {
                assert!(c < basis.dim());
                let total: usize = basis.state(c).iter().map(|&x| x as usize).sum();
                assert_eq!(total, 7);
            }
        }
    }
}

#[test]
fn probe_shift_is_density_operator() {
    let spec = ModelSpec::new(6, 6, 1.0);
    let basis = FockBasis::new(6, 6, 4).unwrap();
    let h0 = build_hamiltonian(&basis, &spec, &[0.0; 6]).unwrap();
    for probes in [ProbeLayout::new(2, 0.3), ProbeLayout::new(0, 0.3)] {
        let h1 = build_hamiltonian(&basis, &spec, &probes.onsite_shifts(6)).unwrap();
        for r in 0..basis.dim() {
            let occ = basis.state(r);
            let expected = 0.3 * (occ[0] as f64 + occ[probes.site_right(6)] as f64);
            assert!((h1.get(r, r) - h0.get(r, r) - expected).abs() < 1e-14);
            for (c, v) in h1.row(r).filter(|&(c, _)| c != r) {
                assert_eq!(v, h0.get(r, c));
            }
        }
    }
}

/// `e^{−iAt}ψ` by scaling and squaring a truncated Taylor series.
fn dense_exponential(a: &DMatrix<f64>, psi: &[C64], t: f64) -> Vec<C64> {
    let n = a.nrows();
    let norm = a.iter().map(|x| x.abs()).sum::<f64>() * t.abs();
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let scale = t / 2f64.powi(squarings);
    let m = a.map(|x| C64::new(0.0, -x * scale));
    let mut exp = DMatrix::<C64>::identity(n, n);
    let mut term = DMatrix::<C64>::identity(n, n);
    for k in 1..40 {
        term = &term * &m / C64::new(k as f64, 0.0);
        exp += &term;
    }
    for _ in 0..squarings {
        exp = &exp * &exp;
    }
    let v = nalgebra::DVector::from_column_slice(psi);
    (exp * v).iter().copied().collect()
}

#[test]
fn propagation_matches_dense_exponential_oracle() {
    // dim 56 (5 sites, 5 bosons, cap 3) and the full 4-site space (dim 35).
    for (spec, cap) in [(ModelSpec::new(5, 5, 2.0), 3), (ModelSpec::new(4, 4, 0.7).with_boundary(Boundary::Open), 4)] {
        let (_, h) = hamiltonian(&spec, cap);
        let dense = h.to_dense();
        let psi: Vec<C64> = (0..h.dim()).map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.91).cos())).collect();
        let nrm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<C64> = psi.into_iter().map(|z| z / nrm).collect();
        for t in [0.0, 0.05, 0.8, -2.5, 6.0] {
            let ours = propagate(&h, &psi, t).unwrap();
            let krylov = qprobe_core::exact::Propagator::krylov(&h).evolve(&psi, t).unwrap();
            let oracle = dense_exponential(&dense, &psi, t);
            for v in [&ours, &krylov] {
                let diff = v.iter().zip(&oracle).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                assert!(diff < 1e-9, "t={t} diff={diff}");
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                assert!((norm - 1.0).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn strong_repulsion_suppresses_correlations() {
    let backend = ExactBackend::new(&ModelSpec::new(8, 8, 100.0), 4).unwrap();
    let state = backend.equilibrium_state().unwrap();
    for dc in 0..8 {
        assert!(backend.g2(&state, dc).abs() < 0.01, "Δc={dc}");
    }
    let d = densities(backend.basis(), &state);
    assert!(d.iter().all(|x| (x - 1.0).abs() < 1e-10));
}

#[test]
fn local_correlation_decreases_with_repulsion() {
    let g2: Vec<f64> = [1.0, 3.0, 10.0, 30.0, 100.0]
        .iter()
        .map(|&u| {
            let backend = ExactBackend::new(&ModelSpec::new(8, 8, u), 4).unwrap();
            backend.g2(&backend.equilibrium_state().unwrap(), 0)
        })
        .collect();
    assert!(g2.windows(2).all(|w| w[1] < w[0]), "{g2:?}");
}

#[test]
fn occupation_cap_converges() {
    for u in [3.0, 10.0] {
        let spec = ModelSpec::new(8, 8, u);
        let (b4, b5) = (ExactBackend::new(&spec, 4).unwrap(), ExactBackend::new(&spec, 5).unwrap());
        let (s4, s5) = (b4.equilibrium_state().unwrap(), b5.equilibrium_state().unwrap());
        for dc in 0..5 {
            assert!((b4.g2(&s4, dc) - b5.g2(&s5, dc)).abs() < 1e-4, "U={u} Δc={dc}");
        }
    }
}

#[test]
fn translational_invariance_on_the_ring() {
    let backend = ExactBackend::new(&ModelSpec::new(7, 7, 2.0), 4).unwrap();
    let state = backend.equilibrium_state().unwrap();
    let d = densities(backend.basis(), &state);
    assert!(d.iter().all(|x| (x - d[0]).abs() < 1e-10));
    for dc in 0..7 {
        let pairs: Vec<f64> = (0..7)
            .map(|i| qprobe_core::exact::density_pair(backend.basis(), &state, i, (i + dc) % 7))
            .collect();
        assert!(pairs.iter().all(|p| (p - pairs[0]).abs() < 1e-10));
    }
}

fn fd_derivatives(z: impl Fn(f64) -> C64) -> (C64, C64) {
    let h = 1e-4;
    let (p, m, o) = (z(h), z(-h), z(0.0));
    ((p - m) / (2.0 * h), (p - 2.0 * o + m) / (h * h))
}

#[test]
fn derivative_identities_for_equilibrium_states() {
    let spec = ModelSpec::new(6, 6, 3.0);
    let backend = ExactBackend::new(&spec, 4).unwrap();
    let h0 = backend.hamiltonian();
    let states = [SystemState::ground(h0).unwrap(), thermal_state(h0, 0.8).unwrap()];
    for state in &states {
        for probes in [ProbeLayout::new(0, 1.0), ProbeLayout::new(1, 1.0), ProbeLayout::new(3, 0.4)] {
            let h1 = backend.probed(&probes).unwrap();
            let eval = qprobe_core::exact::CoherenceEvaluator::new(state, h0, &h1).unwrap();
            let (first, second) = fd_derivatives(|t| eval.at(t).unwrap());
            let (v1, v2) = backend.interaction_moments(state, &probes);
            assert!((first - C64::new(0.0, v1)).norm() < 1e-6, "{probes:?}");
            assert!((second + v2).norm() < 1e-6, "{probes:?}: {second} vs {v2}");
            let d = densities(backend.basis(), state);
            assert!((v1 - probes.coupling * (d[0] + d[probes.site_right(6)])).abs() < 1e-12);
        }
    }
}

#[test]
fn coherence_series_limits() {
    let spec = ModelSpec::new(6, 6, 2.0);
    let backend = ExactBackend::new(&spec, 4).unwrap();
    let state = backend.equilibrium_state().unwrap();
    let grid = TimeGrid::default();
    let flat = backend.coherence_series(&state, &ProbeLayout::new(2, 0.0), &grid).unwrap();
    assert!(flat.values.iter().all(|z| (z - C64::new(1.0, 0.0)).norm() < 1e-12));
    let series = backend.coherence_series(&state, &ProbeLayout::new(2, 1.0), &TimeGrid::new(0.1, 100).unwrap()).unwrap();
    assert!((series.values[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
    assert!(series.values.iter().all(|z| z.norm() <= 1.0 + 1e-12));
}

#[test]
fn krylov_and_spectral_coherence_agree() {
    // dim 875: above the dense cap, so the pure state takes the Krylov path.
    let spec = ModelSpec::new(7, 6, 3.0);
    let backend = ExactBackend::new(&spec, 4).unwrap();
    let state = backend.equilibrium_state().unwrap();
    let probes = ProbeLayout::new(2, 1.0);
    let grid = TimeGrid::new(0.05, 10).unwrap();
    let krylov = backend.coherence_series(&state, &probes, &grid).unwrap();
    let h1 = backend.probed(&probes).unwrap();
    let spec1 = dense_spectrum(&h1);
    let SystemState::Pure { energy, vector } = &state else { unreachable!() };
    for (r, z) in krylov.values.iter().enumerate() {
        let t = grid.time(r);
        let echo: C64 = (0..h1.dim())
            .map(|k| {
                let a: f64 = spec1.vectors.column(k).iter().zip(vector).map(|(x, y)| x * y).sum();
                C64::from_polar(a * a, spec1.values[k] * t)
            })
            .sum();
        let expected = echo * C64::from_polar(1.0, -energy * t);
        assert!((z - expected).norm() < 1e-9, "t={t}");
    }
}

#[test]
fn non_equilibrium_state_is_rejected() {
    let spec = ModelSpec::new(4, 4, 1.0);
    let (_, h0) = hamiltonian(&spec, 4);
    let mut vector = vec![0.0; h0.dim()];
    vector[0] = 1.0;
    let state = SystemState::Pure { energy: h0.get(0, 0), vector };
    let err = coherence_series_ed(&state, &h0, &h0, 0, 0.0, &TimeGrid::default()).unwrap_err();
    assert!(matches!(err, Error::NotEquilibrium { .. }));
}

#[test]
fn two_site_ground_state_and_correlations() {
    let (basis, h) = hamiltonian(&ModelSpec::new(2, 2, 0.0), 4);
    let (e0, psi) = ground_state(&h).unwrap();
    assert!((e0 + 2.0).abs() < 1e-12);
    for (a, b) in psi.iter().zip([0.5, 0.5f64.sqrt(), 0.5]) {
        assert!((a - b).abs() < 1e-12);
    }
    assert!((h.get(0, 1) + 2f64.sqrt()).abs() < 1e-15);
    assert!((h.get(1, 2) + 2f64.sqrt()).abs() < 1e-15);
    let state = SystemState::Pure { energy: e0, vector: psi };
    assert!((qprobe_core::exact::density_pair(&basis, &state, 0, 1) - 0.5).abs() < 1e-12);
    assert!((qprobe_core::exact::exact_g2(&basis, &state, 1, true) + 0.5).abs() < 1e-12);
}

fn two_site_setup(u: f64, beta: Option<f64>) -> (ExactBackend, SystemState) {
    let mut spec = ModelSpec::new(2, 2, u);
    if let Some(b) = beta {
        spec = spec.with_equilibrium(EquilibriumSpec::thermal(b));
    }
    let backend = ExactBackend::new(&spec, 4).unwrap();
    let state = backend.equilibrium_state().unwrap();
    (backend, state)
}

#[test]
fn two_qubit_state_starts_in_bell_state() {
    let (backend, state) = two_site_setup(1.0, None);
    let rho = backend.rdm(&state, &ProbeLayout::new(1, 0.5), 0.0).unwrap();
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        assert!((rho[(i, j)] - C64::new(0.5, 0.0)).norm() < 1e-14);
    }
    assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-14);
}

#[test]
fn two_qubit_state_is_a_density_matrix_and_reads_out_zeta() {
    for (u, beta) in [(1.0, None), (0.3, Some(2.0)), (4.0, Some(0.5))] {
        let (backend, state) = two_site_setup(u, beta);
        for probes in [ProbeLayout::new(0, 0.7), ProbeLayout::new(1, 1.3)] {
            let grid = TimeGrid::new(0.37, 12).unwrap();
            let series = backend.coherence_series(&state, &probes, &grid).unwrap();
            for (r, zeta) in series.values.iter().enumerate() {
                let rho = backend.rdm(&state, &probes, grid.time(r)).unwrap();
                assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
                assert!((rho - rho.adjoint()).norm() < 1e-12);
                assert!(eigenvalues(&rho)[0] >= -1e-12);
                let (re, im) = zeta_from_pauli(&rho);
                assert!((re - zeta.re).abs() < 1e-10 && (im - zeta.im).abs() < 1e-10);
                assert!((zeta_from_coherence(&rho) - zeta).norm() < 1e-10);
                let (bre, bim) = zeta_from_bell(&rho);
                assert!((bre - zeta.re).abs() < 1e-10 && (bim - zeta.im).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn bell_and_pauli_readouts_differ_by_two_in_the_printed_form() {
    let (backend, state) = two_site_setup(1.0, None);
    let rho = backend.rdm(&state, &ProbeLayout::new(1, 0.9), 0.8).unwrap();
    let (pp, mm, _) = bell_elements(&rho);
    let (pauli_re, _) = zeta_from_pauli(&rho);
    assert!((2.0 * (pp - mm) - 2.0 * pauli_re).abs() < 1e-12);
    assert!((2.0 * (pp - mm) - 4.0 * rho[(3, 0)].re).abs() < 1e-12);
}

#[test]
fn rdm_cap() {
    let backend = ExactBackend::new(&ModelSpec::new(8, 8, 1.0), 4).unwrap();
    let state = SystemState::Pure { energy: 0.0, vector: vec![0.0; backend.basis().dim()] };
    assert!(matches!(backend.rdm(&state, &ProbeLayout::new(1, 1.0), 0.1), Err(Error::DimensionOverCap { .. })));
}

#[test]
fn moments_of_linear_operator() {
    let backend = ExactBackend::new(&ModelSpec::new(2, 2, 0.0), 4).unwrap();
    let state = backend.equilibrium_state().unwrap();
    let (m1, m2) = linear_density_moments(backend.basis(), &state, &[1.0, 0.0]);
    // ψ₀ = (½, 1/√2, ½) over (2,0), (1,1), (0,2)
    assert!((m1 - 1.0).abs() < 1e-12);
    assert!((m2 - 1.5).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn variational_bound(u in 0.0f64..10.0, seed in any::<u64>()) {
        let (_, h) = hamiltonian(&ModelSpec::new(5, 5, u), 3);
        let (e0, _) = ground_state(&h).unwrap();
        let mut x = seed;
        let v: Vec<f64> = (0..h.dim()).map(|_| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        }).collect();
        let n: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        let v: Vec<f64> = v.iter().map(|a| a / n).collect();
        prop_assert!(e0 <= h.expectation(&v) + 1e-12);
    }

    #[test]
    fn coherence_symmetric_in_time(u in 0.1f64..5.0, eta in -1.5f64..1.5, t in 0.0f64..5.0, dc in 0usize..5, beta in prop::option::of(0.1f64..5.0)) {
        let mut spec = ModelSpec::new(5, 5, u);
        if let Some(b) = beta {
            spec = spec.with_equilibrium(EquilibriumSpec::thermal(b));
        }
        let backend = ExactBackend::new(&spec, 3).unwrap();
        let state = backend.equilibrium_state().unwrap();
        let h1 = backend.probed(&ProbeLayout::new(dc, eta)).unwrap();
        let eval = qprobe_core::exact::CoherenceEvaluator::new(&state, backend.hamiltonian(), &h1).unwrap();
        let (a, b) = (eval.at(t).unwrap(), eval.at(-t).unwrap());
        prop_assert!((a - b.conj()).norm() < 1e-10);
        prop_assert!(a.norm() <= 1.0 + 1e-12);
    }
}

#[test]
fn two_qubit_rdm_free_function_checks_dimensions() {
    let (_, h0) = hamiltonian(&ModelSpec::new(2, 2, 1.0), 4);
    let (_, h_other) = hamiltonian(&ModelSpec::new(3, 3, 1.0), 4);
    let state = SystemState::ground(&h0).unwrap();
    assert!(matches!(two_qubit_rdm(&state, &h0, &h_other, 0.1), Err(Error::DimensionMismatch { .. })));
}
