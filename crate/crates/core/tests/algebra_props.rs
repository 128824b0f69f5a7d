use std::f64::consts::PI;

use num_complex::Complex64;
use photon_su6::algebra::*;
use photon_su6::linalg::{max_abs_diff, max_abs_real, unitarity_residual};
use photon_su6::state::*;
use photon_su6::testing::{euler_exp, naive_structure_constants, taylor_exp_real};
use proptest::prelude::*;

fn state_strategy() -> impl Strategy<Value = CoherentState> {
    proptest::array::uniform12(-1.0f64..1.0)
        .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let alpha = core::array::from_fn(|k| Complex64::new(v[2 * k], v[2 * k + 1]));
            CoherentState::new(alpha).unwrap()
        })
}

fn direction_strategy() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0f64..1.0, DIM)
        .prop_filter("non-zero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-3)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / n).collect()
        })
}

struct Fixture {
    basis: GeneratorBasis,
    g: StructureConstants,
    adj: AdjointRep,
}

fn fixture() -> &'static Fixture {
    static F: std::sync::OnceLock<Fixture> = std::sync::OnceLock::new();
    F.get_or_init(|| {
        let basis = su6_basis();
        let g = structure_constants(&basis).unwrap();
        let adj = adjoint_matrices(&g);
        Fixture { basis, g, adj }
    })
}

#[test]
#[allow(clippy::needless_range_loop)]
fn structure_constants_match_definition() {
    let f = fixture();
    let naive = naive_structure_constants(f.basis.generators());
    let mut worst = 0.0f64;
    for l in 0..DIM {
        for m in 0..DIM {
            for n in 0..DIM {
                worst = worst.max((naive[l][m][n] - f.g.get(l, m, n)).abs());
            }
        }
    }
    assert!(worst < 1e-14, "{worst}");
}

#[test]
fn closure_over_all_pairs() {
    let f = fixture();
    assert!(f.g.closure_residual(&f.basis) < 1e-10);
    assert!(f.g.antisymmetry_residual() < 1e-14);
}

#[test]
fn adjoint_closure_factor_is_unit() {
    let f = fixture();
    for (l, m) in [(0, 1), (3, 5), (11, 20), (4, 30)] {
        if let Some((c, residual)) = f.adj.closure_factor(&f.g, l, m) {
            assert!((c.abs() - 1.0).abs() < 1e-10, "({l},{m}) factor {c}");
            assert!(residual < 1e-10);
        }
    }
}

#[test]
fn su2_exponentials_follow_euler_formula() {
    for triple in [skyrmion_generators(), antiskyrmion_generators(), embedded_pauli(6, 0, 5)] {
        for m in &triple {
            for dphi in [0.3, 1.0, 2.5, -4.0, 7.0] {
                let u = exp_generator(m, dphi).unwrap();
                assert!(max_abs_diff(&u, &euler_exp(m, dphi / 2.0)) < 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_identity(l in 0..DIM, m in 0..DIM, n in 0..DIM) {
        prop_assert!(jacobi_residual(&fixture().basis, l, m, n) < 1e-9);
    }

    #[test]
    fn generator_exponentials_are_unitary(l in 0..DIM, dphi in -10.0f64..10.0) {
        let u = exp_generator(fixture().basis.get(l), dphi).unwrap();
        prop_assert!(unitarity_residual(&u) < 1e-12);
    }

    #[test]
    fn hypersphere_radius_is_fixed(state in state_strategy(), n0 in 0.1f64..10.0) {
        let state = state.with_scale(n0, 1.0);
        let a = all_expectations(&state, &fixture().basis);
        prop_assert!((a.norm() - hypersphere_radius(&state)).abs() < 1e-10 * n0);
        prop_assert!((hypersphere_radius(&state) - n0 * (5.0f64 / 3.0).sqrt()).abs() < 1e-12 * n0);
    }

    #[test]
    fn rotations_conserve_radius(state in state_strategy(), d in direction_strategy(), dphi in -6.0f64..6.0) {
        let f = fixture();
        let mut s = state;
        for _ in 0..5 {
            let u = exp_generator(&f.basis.combine(&d), dphi).unwrap();
            s = apply_unitary(&s, &u).unwrap();
            let radius = all_expectations(&s, &f.basis).norm();
            prop_assert!((radius - (5.0f64 / 3.0).sqrt()).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjoint_exponential_matches_series(d in direction_strategy(), dphi in -3.0f64..3.0) {
        let f = fixture();
        let fast = exp_adjoint(&f.adj, &d, dphi).unwrap();
        let reference = taylor_exp_real(&(f.adj.along(&d) * dphi));
        prop_assert!(max_abs_real(&(fast - reference)) < 1e-10);
    }

    #[test]
    fn quantum_classical_correspondence(
        state in state_strategy(),
        axis in 0..DIM,
        d in direction_strategy(),
        dphi in -6.0f64..6.0,
    ) {
        let f = fixture();
        let r = correspondence_check(&state, &f.basis, &f.adj, &RotationAxis::Generator(axis), dphi).unwrap();
        prop_assert!(r < 1e-9, "axis {axis}: {r}");
        let r = correspondence_check(&state, &f.basis, &f.adj, &RotationAxis::Direction(d), dphi).unwrap();
        prop_assert!(r < 1e-9, "direction: {r}");
    }

    #[test]
    fn torus_round_trip(theta_p in -3.1f64..3.1, phi_t in -3.1f64..3.1) {
        prop_assume!(theta_p.abs() > 0.01);
        let t = state_to_torus(&torus_state(theta_p, phi_t)).unwrap();
        prop_assert!((t.l_p - 0.5).abs() < 1e-10);
        prop_assert!((t.theta_p - theta_p).abs() < 1e-9);
        prop_assert!(wrap_angle(t.phi_t - phi_t).abs() < 1e-9);
    }

    #[test]
    fn su2_states_sit_on_their_sphere(theta in 0.0f64..PI, phi in -PI..PI) {
        for (kind, sphere) in [
            (Su2Kind::Skyrmion, skyrmion_sphere as fn(&CoherentState) -> SpherePoint),
            (Su2Kind::Antiskyrmion, antiskyrmion_sphere),
        ] {
            let p = sphere(&su2_state(theta, phi, kind));
            prop_assert!((p.radius() - 1.0).abs() < 1e-12);
            prop_assert!((p.theta - theta).abs() < 1e-9);
            if theta > 1e-6 && theta < PI - 1e-6 {
                prop_assert!(wrap_angle(p.phi - phi).abs() < 1e-9);
            }
        }
    }
}
