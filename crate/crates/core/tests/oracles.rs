//! Closed forms checked against independent quadrature.

use std::f64::consts::PI;

use approx::{assert_abs_diff_eq, assert_relative_eq};
use pdmwell::info_measures::{classical_entropy, entropy_density};
use pdmwell::numerics::Integrator;
use pdmwell::{
    closed_measures, numeric_measures, ClassicalEnsemble, DeformedWell, EigenState, MeasureContext,
    Space,
};

const DEFORMATIONS: [f64; 5] = [0.0, 0.4, -0.4, 0.8, -0.8];

fn state(s: f64, n: u32) -> EigenState {
    EigenState::new(DeformedWell::natural(s).unwrap(), n).unwrap()
}

#[test]
fn densities_are_normalized_in_every_space() {
    let q = Integrator::default();
    for &s in &DEFORMATIONS {
        for n in 1..=3 {
            let st = state(s, n);
            for space in [Space::Position, Space::Wavevector, Space::DeformedEta] {
                let p = st.density_profile(space);
                let norm = p.integrate(&q, |z| p.eval(z), 0.0).unwrap();
                assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-8);
            }
        }
    }
}

#[test]
fn transform_matches_closed_form() {
    let q = Integrator::default();
    for &s in &[0.0, 0.5, 0.8] {
        for n in 1..=3 {
            let st = state(s, n);
            let psi = st.wavefunction_x();
            let kn = st.wavenumber();
            let l = st.box_length();
            for k in [0.0, kn, -kn, 3.0 * PI / l, -3.0 * PI / l, 2.7] {
                let oracle = st.well().deformed_fourier(&psi, k, &q).unwrap();
                let closed = st.eigenfunction_k(k);
                assert_abs_diff_eq!((oracle - closed).norm(), 0.0, epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn transform_is_linear() {
    let q = Integrator::default();
    let w = DeformedWell::natural(0.3).unwrap();
    let a = EigenState::new(w, 1).unwrap().wavefunction_x();
    let b = EigenState::new(w, 2).unwrap().wavefunction_x();
    let (alpha, beta) = (
        num_complex::Complex64::new(0.6, 0.2),
        num_complex::Complex64::new(-0.1, 0.77),
    );
    let mix = a.superpose(alpha, &b, beta).unwrap();
    for k in [-4.0, 0.3, 1.9] {
        let lhs = w.deformed_fourier(&mix, k, &q).unwrap();
        let rhs = alpha * w.deformed_fourier(&a, k, &q).unwrap()
            + beta * w.deformed_fourier(&b, k, &q).unwrap();
        assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-10);
    }
}

#[test]
fn second_wavevector_moment() {
    let q = Integrator::default();
    for &s in &[0.0, 0.5, -0.8] {
        for n in 1..=3 {
            let st = state(s, n);
            let p = st.density_profile(Space::Wavevector);
            let k2 = p.integrate(&q, |k| k * k * p.eval(k), 2.0).unwrap();
            assert_relative_eq!(k2, st.k_moments().k2_mean, max_relative = 1e-6);
        }
    }
}

#[test]
fn fisher_is_four_times_momentum_square() {
    for &s in &DEFORMATIONS {
        for n in [1, 2, 5] {
            let st = state(s, n);
            let m = closed_measures(&st, Space::Position, MeasureContext::default()).unwrap();
            assert_eq!(m.fisher, 4.0 * st.quantum_moments().p2_mean);
        }
    }
}

#[test]
fn measures_agree_with_quadrature_on_a_sample() {
    let ctx = MeasureContext::default();
    for &(s, n) in &[(0.2, 1), (-0.5, 3), (0.8, 10)] {
        let st = state(s, n);
        for space in [Space::Position, Space::Wavevector] {
            let num = numeric_measures(
                &st.density_profile(space),
                Some(st.amplitude_derivative(space)),
                ctx,
            )
            .unwrap();
            let cl = closed_measures(&st, space, ctx).unwrap();
            assert_relative_eq!(num.shannon, cl.shannon, max_relative = 1e-7);
            assert_relative_eq!(num.fisher, cl.fisher, max_relative = 1e-7);
            assert_relative_eq!(num.disequilibrium, cl.disequilibrium, max_relative = 1e-7);
            assert_relative_eq!(num.l_heisenberg, cl.l_heisenberg, max_relative = 1e-7);
            assert!(num.length_inequalities_hold(1e-9));
        }
    }
}

#[test]
fn entropy_density_integrates_to_entropy() {
    let q = Integrator::default();
    let ctx = MeasureContext::default();
    for &s in &DEFORMATIONS {
        for n in 1..=3 {
            let st = state(s, n);
            for space in [Space::Position, Space::Wavevector] {
                let p = st.density_profile(space);
                let v = p
                    .integrate(&q, |z| entropy_density(&st, space, z, ctx), 0.0)
                    .unwrap();
                let closed = closed_measures(&st, space, ctx).unwrap().shannon;
                assert_abs_diff_eq!(v, closed, epsilon = 1e-8);
            }
        }
    }
}

#[test]
fn classical_entropy_offset_numerically() {
    let q = Integrator::default();
    let ctx = MeasureContext::default();
    let w = DeformedWell::natural(0.7).unwrap();
    let cl = ClassicalEnsemble::new(w, 1.0).unwrap();
    let p = cl.density_profile();
    let s_cl = -p
        .integrate(&q, |x| pdmwell::numerics::plogp(p.eval(x)), 0.0)
        .unwrap();
    assert_abs_diff_eq!(s_cl, classical_entropy(&w, ctx), epsilon = 1e-10);
    let norm = p.integrate(&q, |x| p.eval(x), 0.0).unwrap();
    assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
}

#[test]
fn correspondence_principle() {
    let st = state(0.8, 10);
    let cl = ClassicalEnsemble::for_state(&st);
    let q = Integrator::default();
    let mut nodes = vec![-1.0];
    nodes.extend(st.nodes_x());
    nodes.push(1.0);
    // Average over each pair of lobes, compared with the classical density
    // at the middle of the pair.
    let mut worst: f64 = 0.0;
    for w in nodes.windows(3).step_by(2) {
        let average = q
            .integrate_points(|x| st.density_x(x), &[w[0], w[1], w[2]])
            .unwrap()
            .value
            / (w[2] - w[0]);
        let classical = cl.density(0.5 * (w[0] + w[2])).unwrap();
        worst = worst.max((average / classical - 1.0).abs());
    }
    assert!(worst < 0.02, "worst cell deviation {worst}");
    for i in 1..4000 {
        let x = -1.0 + i as f64 / 2000.0;
        assert!(st.density_x(x) <= 2.0 * cl.density(x).unwrap() + 1e-9);
    }
}

#[test]
fn quantum_moments_approach_classical() {
    let st = state(0.5, 200);
    let q = st.quantum_moments();
    let c = ClassicalEnsemble::for_state(&st).moments();
    for (a, b) in [
        (q.x_mean, c.x_mean),
        (q.x2_mean, c.x2_mean),
        (q.p2_mean, c.p2_mean),
    ] {
        assert!((a / b - 1.0).abs() < 0.01);
    }
}
