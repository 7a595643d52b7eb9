mod common;

use common::{bloch_state, max_diff, min_eig, ptrace_r, tr, z};
use openmap_core::domain::{
    compatible, domain_shrinkage_demo, sample_points, DomainParameters, DomainQuery, Sampling,
    Search,
};
use openmap_core::random::{haar_unitary, random_density, seeded};
use openmap_core::twoqubit::two_qubit_unitary;
use openmap_core::{
    CorrelationTable, DensityMatrix, Dynamics, JointBasis, JointState, MeanValueVector,
    OmegaParameters, PhiParameters,
};
use proptest::prelude::*;

const GRID: Sampling = Sampling::Grid { points_per_axis: 20 };

fn inside_ball(points: &[MeanValueVector]) -> usize {
    points
        .iter()
        .filter(|v| v.components().iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-9)
        .count()
}

fn phi_params(xi3: f64, entries: &[(usize, usize, f64)]) -> PhiParameters {
    PhiParameters::new(
        DensityMatrix::new(bloch_state([0.0, 0.0, xi3])).unwrap(),
        CorrelationTable::from_entries(2, 2, entries).unwrap(),
    )
    .unwrap()
}

#[test]
fn empty_parameters_give_the_bloch_ball_for_both_kinds() {
    let dyn_ = Dynamics::with_dims(two_qubit_unitary(0.7), 2, 2).unwrap();
    let r = domain_shrinkage_demo(
        &dyn_,
        &OmegaParameters::zeros(2, 2).unwrap(),
        &phi_params(0.0, &[]),
        GRID,
        Search::Canonical,
    )
    .unwrap();
    let ball = inside_ball(&sample_points(2, GRID).unwrap());
    assert_eq!(r.total, 8000);
    assert_eq!(r.omega_compatible, ball);
    assert_eq!(r.phi_compatible, ball);
    assert_eq!(r.omega_only + r.phi_only, 0);
}

#[test]
fn uncorrelated_pure_environment_admits_every_state() {
    let dyn_ = Dynamics::with_dims(two_qubit_unitary(0.7), 2, 2).unwrap();
    let r = domain_shrinkage_demo(
        &dyn_,
        &OmegaParameters::zeros(2, 2).unwrap(),
        &phi_params(1.0, &[]),
        GRID,
        Search::Canonical,
    )
    .unwrap();
    assert_eq!(r.phi_compatible, inside_ball(&sample_points(2, GRID).unwrap()));
}

#[test]
fn fixed_correlations_shrink_the_domain() {
    let dyn_ = Dynamics::with_dims(two_qubit_unitary(0.7), 2, 2).unwrap();
    let omega = OmegaParameters::from_entries(2, 2, &[(1, 3, 0.8)]).unwrap();
    // Same ⟨Σ₁Ξ₃⟩ = 0.8 at ⟨Σ₁⟩ = 0, but now held as a correlation on top of ⟨Ξ₃⟩ = 0.8.
    let phi = phi_params(0.8, &[(1, 3, 0.8)]);
    let r = domain_shrinkage_demo(&dyn_, &omega, &phi, GRID, Search::Canonical).unwrap();
    assert!(r.phi_compatible < r.omega_compatible, "{r:?}");
    assert!(r.omega_only > 0);
}

#[test]
fn omega_domain_points_evolve_consistently() {
    let dyn_ = Dynamics::with_dims(two_qubit_unitary(1.2), 2, 2).unwrap();
    let params = OmegaParameters::from_entries(2, 2, &[(1, 3, 0.3), (2, 3, -0.2)]).unwrap();
    let omega = dyn_.omega(&params).unwrap();
    let u = dyn_.unitary();
    let mut checked = 0;
    for v in sample_points(2, Sampling::Grid { points_per_axis: 7 }).unwrap() {
        let q = DomainQuery {
            means: v,
            parameters: DomainParameters::Omega(params.clone()),
            fixed: Some(dyn_.omega_parameter_indices()),
        };
        let r = compatible(&q, dyn_.basis(), Search::Thorough).unwrap();
        if let Some(pi) = r.witness {
            let truth = ptrace_r(&(u * &pi * u.adjoint()), 2, 2);
            assert!(max_diff(&omega.apply(&ptrace_r(&pi, 2, 2)).unwrap(), &truth) < 1e-12);
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn more_fixed_quantities_never_enlarge_the_domain() {
    let dyn_ = Dynamics::with_dims(two_qubit_unitary(0.9), 2, 2).unwrap();
    let pi = random_density(&mut seeded(8), 4, 4);
    let params = OmegaParameters::from_joint_state(&JointState::from_matrix(dyn_.basis(), &pi).unwrap());
    let nested: [Option<Vec<(usize, usize)>>; 4] = [
        Some(vec![]),
        Some(vec![(1, 3)]),
        Some(vec![(1, 3), (2, 3)]),
        None,
    ];
    let points = sample_points(2, Sampling::Grid { points_per_axis: 6 }).unwrap();
    for v in points {
        let verdicts: Vec<bool> = nested
            .iter()
            .map(|fixed| {
                let q = DomainQuery {
                    means: v.clone(),
                    parameters: DomainParameters::Omega(params.clone()),
                    fixed: fixed.clone(),
                };
                compatible(&q, dyn_.basis(), Search::Thorough).unwrap().compatible
            })
            .collect();
        for w in verdicts.windows(2) {
            assert!(w[0] || !w[1], "{v:?}: {verdicts:?}");
        }
    }
}

fn check_witness(q: &DomainQuery, jb: &JointBasis, pi: &openmap_core::CMatrix) {
    assert!(min_eig(pi) >= -1e-10);
    assert!((tr(pi) - z(1.0, 0.0)).norm() < 1e-12);
    let state = JointState::from_matrix(jb, pi).unwrap();
    for a in 1..jb.s_len() {
        assert!((state.mean(a, 0) - q.means.get(a)).abs() < 1e-12);
    }
    if let DomainParameters::Omega(p) = &q.parameters {
        let fixed = q.fixed.clone().unwrap_or_else(|| {
            (0..jb.s_len()).flat_map(|mu| (1..jb.r_len()).map(move |nu| (mu, nu))).collect()
        });
        for (mu, nu) in fixed {
            assert!((state.mean(mu, nu) - p.get(mu, nu)).abs() < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn witnesses_are_states_with_the_requested_means(seed in any::<u64>(), thorough in any::<bool>()) {
        let mut rng = seeded(seed);
        let jb = JointBasis::with_dims(2, 3).unwrap();
        let dyn_ = Dynamics::new(haar_unitary(&mut rng, 6), jb.clone()).unwrap();
        let pi = random_density(&mut rng, 6, 6);
        let params = OmegaParameters::from_joint_state(&JointState::from_matrix(&jb, &pi).unwrap());
        let rho = random_density(&mut rng, 2, 2);
        let q = DomainQuery {
            means: MeanValueVector::from_matrix(jb.basis_s(), &rho).unwrap(),
            parameters: DomainParameters::Omega(params),
            fixed: Some(dyn_.omega_parameter_indices()),
        };
        let search = if thorough { Search::Thorough } else { Search::Canonical };
        let r = compatible(&q, &jb, search).unwrap();
        if let Some(w) = &r.witness {
            check_witness(&q, &jb, w);
        }
    }

    #[test]
    fn the_true_state_is_always_compatible(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let jb = JointBasis::with_dims(2, 2).unwrap();
        let pi = random_density(&mut rng, 4, 4);
        let state = JointState::from_matrix(&jb, &pi).unwrap();
        let q = DomainQuery {
            means: state.s_means(),
            parameters: DomainParameters::Omega(OmegaParameters::from_joint_state(&state)),
            fixed: None,
        };
        let r = compatible(&q, &jb, Search::Canonical).unwrap();
        prop_assert!(r.compatible);
        check_witness(&q, &jb, r.witness.as_ref().unwrap());
    }
}
