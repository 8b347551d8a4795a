//! Atom-field dynamics checked end to end: the per-block analytic
//! propagator against the dense matrix exponential, closed-form inversion
//! formulas against exact evolution, conserved quantities under random
//! parameters, and the Bessel series against an independent quadrature.

use bosonalg::{
    barut_girardello_state, bessel_i0, block_eigenvalues, build_hamiltonian, evolve_state,
    evolve_unitary, glauber_state, revival_period, sz_closed_linear_glauber, sz_closed_su11_bg,
    sz_closed_su11_glauber, sz_exact, AtomFieldState, FockState, JCModel, JCVariant, C64,
};
use proptest::prelude::*;

fn coherent_setup(variant: JCVariant, coupling: f64, cutoff: usize, alpha: C64) -> (JCModel, AtomFieldState) {
    let m = JCModel::new(variant, 1.0, 1.0, coupling, cutoff).unwrap();
    let field = glauber_state(alpha, cutoff).unwrap();
    (m, AtomFieldState::ground_with_field(&field).unwrap())
}

/// Dense-diagonalization spectrum against the closed-form block pairs for
/// both coupling variants at the acceptance size.
#[test]
fn spectra_match_block_eigenvalues_at_acceptance_size() {
    for variant in [JCVariant::Linear, JCVariant::Su11] {
        let m = JCModel::new(variant, 1.3, 0.9, 0.7, 120).unwrap();
        let h = build_hamiltonian(&m).unwrap();
        let sym = (h.matrix() + h.matrix().adjoint()) * C64::new(0.5, 0.0);
        let mut numeric: Vec<f64> = nalgebra::SymmetricEigen::new(sym)
            .eigenvalues
            .iter()
            .copied()
            .collect();
        numeric.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let mut closed = vec![
            -0.5 * m.omega0(),
            m.omega() * (m.cutoff() - 1) as f64 + 0.5 * m.omega0(),
        ];
        for n in 1..m.cutoff() {
            let (lo, hi) = block_eigenvalues(&m, n).unwrap();
            closed.push(lo);
            closed.push(hi);
        }
        closed.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let dev = numeric
            .iter()
            .zip(&closed)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-9, "{variant}: {dev}");
    }
}

/// The analytic per-block propagator must agree with the dense matrix
/// exponential of the full Hamiltonian.
#[test]
fn block_propagator_matches_dense_exponential() {
    let m = JCModel::new(JCVariant::Linear, 1.4, 0.8, 0.9, 8).unwrap();
    let field = FockState::number_state(8, 3).unwrap();
    let init = AtomFieldState::ground_with_field(&field).unwrap();
    let h = build_hamiltonian(&m).unwrap();
    for t in [0.3, 1.9, 7.2] {
        let u = evolve_unitary(&h, t).unwrap();
        let joint = FockState::from_amplitudes(init.amplitudes().to_vec()).unwrap();
        let dense = u.apply(&joint).unwrap();
        let blocks = evolve_state(&m, &init, t).unwrap();
        let dev = dense
            .amplitudes()
            .iter()
            .zip(blocks.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(dev < 1e-10, "t={t}: {dev}");
    }
}

/// Independent integral representation of the Bessel series:
/// I0(z) = (1/pi) Int_0^pi e^{z cos x} dx, by Simpson's rule.
#[test]
fn bessel_series_matches_quadrature() {
    let simpson_i0 = |z: C64| {
        let n = 4000usize; // even
        let h = std::f64::consts::PI / n as f64;
        let f = |x: f64| (z * C64::new(x.cos(), 0.0)).exp();
        let mut acc = f(0.0) + f(std::f64::consts::PI);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += f(k as f64 * h) * C64::new(w, 0.0);
        }
        acc * C64::new(h / (3.0 * std::f64::consts::PI), 0.0)
    };
    for z in [
        C64::new(0.5, 0.0),
        C64::new(2.0, 0.0),
        C64::new(10.0, 0.0),
        C64::new(1.0, 0.7),
        C64::new(0.0, 3.0),
    ] {
        let series = bessel_i0(z).unwrap();
        let quad = simpson_i0(z);
        let rel = (series - quad).norm() / series.norm().max(1.0);
        assert!(rel < 1e-12, "z={z}: {rel}");
    }
}

/// Eqs.-level closed forms against exact evolution on dense grids at the
/// acceptance sizes (resonance, matched tail guards).
#[test]
fn closed_forms_track_exact_evolution() {
    let times: Vec<f64> = (0..200).map(|k| 10.0 * k as f64 / 199.0).collect();
    let alpha = C64::new(3.0, 0.0);

    let (lin, lin_init) = coherent_setup(JCVariant::Linear, 1.0, 120, alpha);
    let exact = sz_exact(&lin, &lin_init, &times).unwrap();
    for (&t, &v) in times.iter().zip(exact.values()) {
        let closed = sz_closed_linear_glauber(alpha, 1.0, t).unwrap();
        assert!((closed - v).abs() < 1e-8, "linear t={t}");
    }

    let (su, su_init) = coherent_setup(JCVariant::Su11, 1.0, 120, alpha);
    let exact = sz_exact(&su, &su_init, &times).unwrap();
    for (&t, &v) in times.iter().zip(exact.values()) {
        let closed = sz_closed_su11_glauber(alpha, 1.0, t);
        assert!((closed - v).abs() < 1e-8, "su11 t={t}");
    }

    let eta = C64::new(2.0, 0.0);
    let su_bg = JCModel::new(JCVariant::Su11, 1.0, 1.0, 1.0, 120).unwrap();
    let bg_field = barut_girardello_state(eta, 120).unwrap();
    let bg_init = AtomFieldState::ground_with_field(&bg_field).unwrap();
    let exact = sz_exact(&su_bg, &bg_init, &times).unwrap();
    for (&t, &v) in times.iter().zip(exact.values()) {
        let closed = sz_closed_su11_bg(eta, 1.0, t).unwrap();
        assert!((closed - v).abs() < 1e-8, "eigenfield t={t}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn excitation_and_norm_are_conserved(
        variant_su11 in proptest::bool::ANY,
        omega in 0.5..2.0f64,
        omega0 in 0.5..2.0f64,
        coupling in 0.1..1.5f64,
        a_mod in 0.0..2.2f64,
        a_phase in 0.0..std::f64::consts::TAU,
        t in 0.0..20.0f64,
    ) {
        let variant = if variant_su11 { JCVariant::Su11 } else { JCVariant::Linear };
        let m = JCModel::new(variant, omega, omega0, coupling, 60).unwrap();
        let field = glauber_state(C64::from_polar(a_mod, a_phase), 60).unwrap();
        let init = AtomFieldState::ground_with_field(&field).unwrap();
        let evolved = evolve_state(&m, &init, t).unwrap();
        prop_assert!((evolved.norm() - 1.0).abs() < 1e-10);
        prop_assert!(
            (evolved.excitation_expectation() - init.excitation_expectation()).abs() < 1e-9
        );
        prop_assert!(evolved.sz_expectation().abs() <= 0.5 + 1e-9);
    }

    #[test]
    fn su11_inversion_is_periodic_for_any_coupling(
        coupling in 0.5..2.0f64,
        t in 0.0..3.0f64,
    ) {
        let (m, init) = coherent_setup(JCVariant::Su11, coupling, 80, C64::new(2.0, 0.0));
        let period = revival_period(&m).unwrap();
        prop_assert!((period - std::f64::consts::PI / coupling).abs() < 1e-12);
        let a = evolve_state(&m, &init, t).unwrap().sz_expectation();
        let b = evolve_state(&m, &init, t + period).unwrap().sz_expectation();
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    #[test]
    fn closed_form_agrees_pointwise_at_random_times(
        t in 0.0..10.0f64,
        a_mod in 0.5..2.5f64,
    ) {
        let alpha = C64::new(a_mod, 0.0);
        let (lin, init) = coherent_setup(JCVariant::Linear, 1.0, 100, alpha);
        let exact = evolve_state(&lin, &init, t).unwrap().sz_expectation();
        let closed = sz_closed_linear_glauber(alpha, 1.0, t).unwrap();
        prop_assert!((exact - closed).abs() < 1e-8, "{exact} vs {closed}");
    }

    #[test]
    fn detuned_blocks_match_dense_spectrum_at_small_size(
        omega in 0.5..2.0f64,
        omega0 in 0.5..2.0f64,
        coupling in 0.1..1.0f64,
    ) {
        let m = JCModel::new(JCVariant::Su11, omega, omega0, coupling, 12).unwrap();
        let h = build_hamiltonian(&m).unwrap();
        let sym = (h.matrix() + h.matrix().adjoint()) * C64::new(0.5, 0.0);
        let mut numeric: Vec<f64> = nalgebra::SymmetricEigen::new(sym)
            .eigenvalues.iter().copied().collect();
        numeric.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut closed = vec![
            -0.5 * omega0,
            omega * 11.0 + 0.5 * omega0,
        ];
        for n in 1..12 {
            let (lo, hi) = block_eigenvalues(&m, n).unwrap();
            closed.push(lo);
            closed.push(hi);
        }
        closed.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let dev = numeric.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max);
        prop_assert!(dev < 1e-10, "{dev}");
    }
}
