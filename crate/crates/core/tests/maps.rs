mod common;

use std::f64::consts::PI;

use common::{apply_by_units, bloch_state, kron, max_diff, max_norm, ptrace_r, ptrace_s, sigma, tr, z};
use openmap_core::mapgen::e_map;
use openmap_core::random::{ginibre, haar_unitary, random_density, seeded};
use openmap_core::states::correlations;
use openmap_core::superop::mean_affine;
use openmap_core::twoqubit::two_qubit_unitary;
use openmap_core::{
    choi_analysis, AffineMap, CMatrix, DensityMatrix, Dynamics, JointBasis, JointState,
    MeanValueVector, OmegaParameters, PhiParameters, SuperOperator, TransferMatrix,
};
use proptest::prelude::*;

const DIMS: [(usize, usize); 3] = [(2, 2), (2, 3), (3, 2)];

/// `t_{αβ;μν} = Tr[F_{μν} U† F_{αβ} U]/(NM)` one entry at a time.
fn direct_transfer(u: &CMatrix, jb: &JointBasis, ab: (usize, usize), mn: (usize, usize)) -> f64 {
    let nm = (jb.n() * jb.m()) as f64;
    let heis = u.adjoint() * jb.element(ab.0, ab.1) * u;
    (tr(&(jb.element(mn.0, mn.1) * heis)) / z(nm, 0.0)).re
}

fn random_setup(seed: u64, n: usize, m: usize) -> (Dynamics, CMatrix) {
    let mut rng = seeded(seed);
    let u = haar_unitary(&mut rng, n * m);
    let pi = random_density(&mut rng, n * m, n * m);
    (Dynamics::with_dims(u, n, m).unwrap(), pi)
}

#[test]
fn transfer_row_for_sigma1_at_right_angle() {
    let jb = JointBasis::with_dims(2, 2).unwrap();
    let t = TransferMatrix::new(&two_qubit_unitary(PI / 2.0), &jb).unwrap();
    for mu in 0..4 {
        for nu in 0..4 {
            let expected = if (mu, nu) == (2, 3) { -1.0 } else { 0.0 };
            assert!((t.get(1, 0, mu, nu) - expected).abs() < 1e-12, "({mu},{nu})");
        }
    }
}

#[test]
fn transfer_matches_direct_traces_and_fixes_the_identity() {
    let mut rng = seeded(3);
    for &(n, m) in &DIMS {
        let jb = JointBasis::with_dims(n, m).unwrap();
        let u = haar_unitary(&mut rng, n * m);
        let t = TransferMatrix::new(&u, &jb).unwrap();
        for a in 0..jb.s_len() {
            for b in 0..jb.r_len() {
                for mu in 0..jb.s_len() {
                    for nu in 0..jb.r_len() {
                        let direct = direct_transfer(&u, &jb, (a, b), (mu, nu));
                        assert!((t.get(a, b, mu, nu) - direct).abs() < 1e-12);
                    }
                }
                let delta = if (a, b) == (0, 0) { 1.0 } else { 0.0 };
                assert!((t.get(0, 0, a, b) - delta).abs() < 1e-14);
                assert!((t.get(a, b, 0, 0) - delta).abs() < 1e-14);
            }
        }
        let inv = t.inverse();
        assert!((inv.matrix() * t.matrix() - nalgebra::DMatrix::<f64>::identity(jb.len(), jb.len())).amax() < 1e-12);
        let back = TransferMatrix::new(&u.adjoint(), &jb).unwrap();
        assert!((back.matrix() - inv.matrix()).amax() < 1e-12);
    }
}

#[test]
fn omega_of_identity_with_zero_parameters_is_identity() {
    let dyn_ = Dynamics::with_dims(CMatrix::identity(4, 4), 2, 2).unwrap();
    let omega = dyn_.omega(&OmegaParameters::zeros(2, 2).unwrap()).unwrap();
    assert!(max_diff(omega.homogeneous().rep(), &CMatrix::identity(4, 4)) < 1e-15);
    assert!(max_norm(omega.offset()) < 1e-15);
}

#[test]
fn omega_of_unit_matrix_is_unit_plus_twice_offset() {
    let g = PI / 3.0;
    let dyn_ = Dynamics::with_dims(two_qubit_unitary(g), 2, 2).unwrap();
    let params = OmegaParameters::from_entries(2, 2, &[(2, 3, 0.3), (1, 3, -0.6)]).unwrap();
    let omega = dyn_.omega(&params).unwrap();
    let two_k = (sigma(1) * z(-0.3, 0.0) + sigma(2) * z(-0.6, 0.0)) * z(g.sin(), 0.0);
    assert!(max_diff(&omega.apply(&sigma(0)).unwrap(), &(sigma(0) + two_k)) < 1e-12);
}

#[test]
fn heisenberg_update_of_sigma1_mean() {
    let g = 0.9;
    let dyn_ = Dynamics::with_dims(two_qubit_unitary(g), 2, 2).unwrap();
    let state = JointState::product(dyn_.basis(), &bloch_state([1.0, 0.0, 0.0]), &(sigma(0) * z(0.5, 0.0))).unwrap();
    let v = dyn_.heisenberg_means(&state).unwrap();
    assert!((v.get(1) - g.cos()).abs() < 1e-12);
    let ident = Dynamics::with_dims(CMatrix::identity(4, 4), 2, 2).unwrap();
    let same = ident.heisenberg_means(&state).unwrap();
    assert!((same.get(1) - 1.0).abs() < 1e-15 && same.get(2).abs() < 1e-15);
}

#[test]
fn phi_mean_map_for_partially_polarized_environment() {
    let g = PI / 4.0;
    let (c, s) = (g.cos(), g.sin());
    let dyn_ = Dynamics::with_dims(two_qubit_unitary(g), 2, 2).unwrap();
    let rho_r = DensityMatrix::new(bloch_state([0.0, 0.0, 0.6])).unwrap();
    let gamma = openmap_core::CorrelationTable::from_entries(2, 2, &[(1, 3, 0.2)]).unwrap();
    let phi = dyn_.phi(&PhiParameters::new(rho_r, gamma).unwrap()).unwrap();
    let hat = mean_affine(&phi, dyn_.basis().basis_s()).unwrap();
    let expected = nalgebra::DMatrix::from_row_slice(3, 3, &[c, -0.6 * s, 0.0, 0.6 * s, c, 0.0, 0.0, 0.0, 1.0]);
    assert!((hat.matrix() - expected).amax() < 1e-12);
    assert!(hat.shift()[0].abs() < 1e-12);
    assert!((hat.shift()[1] - 0.2 * s).abs() < 1e-12);
    assert!(hat.shift()[2].abs() < 1e-12);
}

#[test]
fn e_map_of_replacement_is_completely_depolarizing() {
    let mut rng = seeded(5);
    let rho0 = random_density(&mut rng, 3, 2);
    let e = e_map(&SuperOperator::replacement(&rho0).unwrap());
    for _ in 0..20 {
        let q = ginibre(&mut rng, 3, 3);
        let expected = CMatrix::identity(3, 3) * (tr(&q) / z(3.0, 0.0));
        assert!(max_diff(&e.apply(&q).unwrap(), &expected) < 1e-12);
    }
}

#[test]
fn e_map_of_two_qubit_d_is_d() {
    let dyn_ = Dynamics::with_dims(two_qubit_unitary(1.1), 2, 2).unwrap();
    let d = dyn_.d_map(&DensityMatrix::new(bloch_state([0.0, 0.0, 0.4])).unwrap()).unwrap();
    assert!(max_diff(e_map(&d).rep(), d.rep()) < 1e-12);
    assert!(max_diff(&d.apply(&sigma(0)).unwrap(), &sigma(0)) < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn transfer_is_orthogonal(seed in any::<u64>(), dims in prop::sample::select(DIMS.to_vec())) {
        let (n, m) = dims;
        let u = haar_unitary(&mut seeded(seed), n * m);
        let t = TransferMatrix::new(&u, &JointBasis::with_dims(n, m).unwrap()).unwrap();
        prop_assert!(t.orthogonality_defect() < 1e-12);
    }

    #[test]
    fn heisenberg_means_match_direct_traces(seed in any::<u64>(), dims in prop::sample::select(DIMS.to_vec())) {
        let (n, m) = dims;
        let (dyn_, pi) = random_setup(seed, n, m);
        let state = JointState::from_matrix(dyn_.basis(), &pi).unwrap();
        let v = dyn_.heisenberg_means(&state).unwrap();
        let u = dyn_.unitary();
        for a in 1..n * n {
            let f = kron(dyn_.basis().basis_s().element(a), &CMatrix::identity(m, m));
            let direct = tr(&(u.adjoint() * f * u * &pi)).re;
            prop_assert!((v.get(a) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn omega_reproduces_the_reduced_joint_evolution(seed in any::<u64>(), dims in prop::sample::select(DIMS.to_vec())) {
        let (n, m) = dims;
        let (dyn_, pi) = random_setup(seed, n, m);
        let state = JointState::from_matrix(dyn_.basis(), &pi).unwrap();
        let omega = dyn_.omega(&OmegaParameters::from_joint_state(&state)).unwrap();
        let u = dyn_.unitary();
        let truth = ptrace_r(&(u * &pi * u.adjoint()), n, m);
        prop_assert!(max_diff(&omega.apply(&ptrace_r(&pi, n, m)).unwrap(), &truth) < 1e-12);
        let hat = mean_affine(&omega, dyn_.basis().basis_s()).unwrap();
        let predicted = hat.apply(&state.s_means()).unwrap();
        let heis = dyn_.heisenberg_means(&state).unwrap();
        for a in 1..n * n {
            prop_assert!((predicted.get(a) - heis.get(a)).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_reproduces_the_reduced_joint_evolution(seed in any::<u64>(), dims in prop::sample::select(DIMS.to_vec())) {
        let (n, m) = dims;
        let (dyn_, pi) = random_setup(seed, n, m);
        let state = JointState::from_matrix(dyn_.basis(), &pi).unwrap();
        let rho_r = DensityMatrix::new(ptrace_s(&pi, n, m)).unwrap();
        let phi = dyn_.phi(&PhiParameters::new(rho_r, correlations(&state)).unwrap()).unwrap();
        let u = dyn_.unitary();
        let truth = ptrace_r(&(u * &pi * u.adjoint()), n, m);
        prop_assert!(max_diff(&phi.apply(&ptrace_r(&pi, n, m)).unwrap(), &truth) < 1e-12);
    }

    #[test]
    fn offset_ignores_subsystem_means(seed in any::<u64>(), dims in prop::sample::select(DIMS.to_vec())) {
        let (n, m) = dims;
        let (dyn_, pi) = random_setup(seed, n, m);
        let mut rng = seeded(seed ^ 0x5a5a);
        let other = random_density(&mut rng, n * m, n * m);
        let a = JointState::from_matrix(dyn_.basis(), &pi).unwrap();
        let b = JointState::from_matrix(dyn_.basis(), &other).unwrap();
        let params = OmegaParameters::from_joint_state(&a);
        let omega = dyn_.omega(&params).unwrap();
        let spliced = params.joint_state(dyn_.basis(), &b.s_means()).unwrap();
        let again = dyn_.omega(&OmegaParameters::from_joint_state(&spliced)).unwrap();
        prop_assert!(max_diff(omega.offset(), again.offset()) < 1e-15);
        // Linear in Q, so the consistency holds for the spliced table even if it is not positive.
        let pi_s = spliced.matrix(dyn_.basis()).unwrap();
        let u = dyn_.unitary();
        let truth = ptrace_r(&(u * &pi_s * u.adjoint()), n, m);
        prop_assert!(max_diff(&omega.apply(&ptrace_r(&pi_s, n, m)).unwrap(), &truth) < 1e-12);
    }

    #[test]
    fn l_and_d_are_channels(seed in any::<u64>(), dims in prop::sample::select(DIMS.to_vec())) {
        let (n, m) = dims;
        let mut rng = seeded(seed);
        let dyn_ = Dynamics::with_dims(haar_unitary(&mut rng, n * m), n, m).unwrap();
        let l = choi_analysis(&dyn_.l_map());
        prop_assert!(l.is_cp && l.is_tp && l.is_unital);
        let rho_r = DensityMatrix::new(random_density(&mut rng, m, m)).unwrap();
        let d = dyn_.d_map(&rho_r).unwrap();
        let rd = choi_analysis(&d);
        prop_assert!(rd.is_cp && rd.is_tp);
        prop_assert!(d.hermiticity_defect() < 1e-12);
    }

    #[test]
    fn l_matches_its_definition(seed in any::<u64>(), dims in prop::sample::select(DIMS.to_vec())) {
        let (n, m) = dims;
        let mut rng = seeded(seed);
        let u = haar_unitary(&mut rng, n * m);
        let dyn_ = Dynamics::with_dims(u.clone(), n, m).unwrap();
        let mixed = CMatrix::identity(m, m) * z(1.0 / m as f64, 0.0);
        let q = ginibre(&mut rng, n, n);
        let direct = apply_by_units(|e| ptrace_r(&(&u * kron(e, &mixed) * u.adjoint()), n, m), &q);
        prop_assert!(max_diff(&dyn_.l_map().apply(&q).unwrap(), &direct) < 1e-12);
    }

    #[test]
    fn mean_map_agrees_with_parent(seed in any::<u64>(), dims in prop::sample::select(DIMS.to_vec())) {
        let (n, m) = dims;
        let (dyn_, pi) = random_setup(seed, n, m);
        let state = JointState::from_matrix(dyn_.basis(), &pi).unwrap();
        let omega = dyn_.omega(&OmegaParameters::from_joint_state(&state)).unwrap();
        let basis = dyn_.basis().basis_s();
        let hat = mean_affine(&omega, basis).unwrap();
        let mut rng = seeded(seed.wrapping_add(1));
        let v = MeanValueVector::new(n, (0..n * n - 1).map(|_| rand::Rng::random_range(&mut rng, -1.0..1.0)).collect()).unwrap();
        let image = omega.apply(&v.to_matrix(basis).unwrap()).unwrap();
        let extracted = MeanValueVector::from_matrix(basis, &image).unwrap();
        let predicted = hat.apply(&v).unwrap();
        for a in 1..n * n {
            prop_assert!((extracted.get(a) - predicted.get(a)).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_map_is_functorial(seed in any::<u64>()) {
        let (dyn_a, pi_a) = random_setup(seed, 2, 3);
        let (dyn_b, pi_b) = random_setup(seed ^ 0xabcdef, 2, 3);
        let a = dyn_a.omega(&OmegaParameters::from_joint_state(&JointState::from_matrix(dyn_a.basis(), &pi_a).unwrap())).unwrap();
        let b = dyn_b.omega(&OmegaParameters::from_joint_state(&JointState::from_matrix(dyn_b.basis(), &pi_b).unwrap())).unwrap();
        let basis = dyn_a.basis().basis_s();
        let lhs = mean_affine(&a.compose(&b).unwrap(), basis).unwrap();
        let rhs = mean_affine(&a, basis).unwrap().compose(&mean_affine(&b, basis).unwrap()).unwrap();
        prop_assert!((lhs.matrix() - rhs.matrix()).amax() < 1e-10);
        prop_assert!((lhs.shift() - rhs.shift()).amax() < 1e-10);
    }

    #[test]
    fn l_mean_map_respects_mixtures(seed in any::<u64>(), p in 0.0f64..1.0) {
        let mut rng = seeded(seed);
        let dyn_ = Dynamics::with_dims(haar_unitary(&mut rng, 6), 3, 2).unwrap();
        let basis = dyn_.basis().basis_s();
        let hat = mean_affine(&AffineMap::plain(dyn_.l_map()), basis).unwrap();
        let v1 = MeanValueVector::from_matrix(basis, &random_density(&mut rng, 3, 3)).unwrap();
        let v2 = MeanValueVector::from_matrix(basis, &random_density(&mut rng, 3, 3)).unwrap();
        let mix = MeanValueVector::new(3, v1.components().iter().zip(v2.components()).map(|(x, y)| p * x + (1.0 - p) * y).collect()).unwrap();
        let lhs = hat.apply(&mix).unwrap();
        let (h1, h2) = (hat.apply(&v1).unwrap(), hat.apply(&v2).unwrap());
        for a in 1..9 {
            prop_assert!((lhs.get(a) - (p * h1.get(a) + (1.0 - p) * h2.get(a))).abs() < 1e-12);
        }
    }

    #[test]
    fn affine_maps_preserve_trace(seed in any::<u64>(), dims in prop::sample::select(DIMS.to_vec())) {
        let (n, m) = dims;
        let (dyn_, pi) = random_setup(seed, n, m);
        let state = JointState::from_matrix(dyn_.basis(), &pi).unwrap();
        let omega = dyn_.omega(&OmegaParameters::from_joint_state(&state)).unwrap();
        let q = ginibre(&mut seeded(seed), n, n);
        prop_assert!((tr(&omega.apply(&q).unwrap()) - tr(&q)).norm() < 1e-12);
    }
}
