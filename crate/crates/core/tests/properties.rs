//! Property-based checks of algebraic and numerical invariants.

use euclid_pt::algebra::{apply_pt, build_hamiltonian, E2Element, Monomial, PtSymmetryE2};
use euclid_pt::cli::fmt_e;
use euclid_pt::dyson::{similarity_transform, DysonParamsE2};
use euclid_pt::e3::{apply_pt_e3, e3_adjoint, DysonParamsE3, E3Element, Generator3, PtSymmetryE3};
use euclid_pt::mathieu::{characteristic_values, MathieuClass};
use euclid_pt::spectral::{build_matrix, eigen_spectrum, SpectralProblem};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn c64() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn element() -> impl Strategy<Value = E2Element> {
    proptest::array::uniform10(c64()).prop_map(E2Element::from_coeffs)
}

fn linear_element() -> impl Strategy<Value = E2Element> {
    (c64(), c64(), c64(), c64()).prop_map(|(a, b, c, d)| {
        E2Element::term(Monomial::One, a) + E2Element::term(Monomial::U, b) + E2Element::term(Monomial::V, c) + E2Element::term(Monomial::J, d)
    })
}

fn symmetry() -> impl Strategy<Value = PtSymmetryE2> {
    proptest::sample::select(PtSymmetryE2::ALL.to_vec())
}

fn dyson() -> impl Strategy<Value = DysonParamsE2> {
    (-1.5..1.5f64, -1.5..1.5f64, -1.5..1.5f64).prop_map(|(l, r, t)| DysonParamsE2::new(l, r, t))
}

fn dyson_e3() -> impl Strategy<Value = DysonParamsE3> {
    proptest::array::uniform6(-1.2..1.2f64).prop_map(DysonParamsE3::from_array)
}

/// Applies the table of `p` to a generator combination.
fn act(p: &DysonParamsE3, v: [C64; 6]) -> [C64; 6] {
    let t = e3_adjoint(p);
    let mut out = [C64::new(0.0, 0.0); 6];
    for (g, c) in Generator3::ALL.iter().zip(v) {
        for (o, x) in out.iter_mut().zip(t.image(*g)) {
            *o += c * x;
        }
    }
    out
}

fn unit(g: Generator3) -> [C64; 6] {
    std::array::from_fn(|k| C64::new(if k == g.index() { 1.0 } else { 0.0 }, 0.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugate_of_product_reverses_order(a in linear_element(), b in linear_element()) {
        let lhs = a.multiply(&b).unwrap().hermitian_conjugate();
        let rhs = b.hermitian_conjugate().multiply(&a.hermitian_conjugate()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn hermitian_conjugation_is_an_involution(a in element()) {
        prop_assert!(a.hermitian_conjugate().hermitian_conjugate().approx_eq(&a, 1e-12));
    }

    #[test]
    fn pt_maps_are_antilinear_involutions(s in symmetry(), a in element(), z in c64()) {
        prop_assert!(apply_pt(s, &apply_pt(s, &a)).approx_eq(&a, 1e-12));
        prop_assert!(apply_pt(s, &a.scale(z)).approx_eq(&apply_pt(s, &a).scale(z.conj()), 1e-12));
    }

    #[test]
    fn pt_maps_are_algebra_homomorphisms(s in symmetry(), a in linear_element(), b in linear_element()) {
        let lhs = apply_pt(s, &a.multiply(&b).unwrap());
        let rhs = apply_pt(s, &a).multiply(&apply_pt(s, &b)).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn built_hamiltonians_are_pt_invariant(s in symmetry(), mu in proptest::array::uniform9(-3.0..3.0f64)) {
        let h = build_hamiltonian(s, mu);
        prop_assert!(apply_pt(s, &h).approx_eq(&h, 1e-14));
    }

    #[test]
    fn similarity_inverse_undoes_the_map(p in dyson(), h in element()) {
        let inv = DysonParamsE2::new(-p.lambda, -p.rho, -p.tau);
        let back = similarity_transform(&inv, &similarity_transform(&p, &h));
        prop_assert!(back.approx_eq(&h, 1e-8 * h.max_abs().max(1.0)));
    }

    #[test]
    fn similarity_doubling_composes(p in dyson(), h in element()) {
        let double = DysonParamsE2::new(2.0 * p.lambda, 2.0 * p.rho, 2.0 * p.tau);
        let once = similarity_transform(&p, &similarity_transform(&p, &h));
        let direct = similarity_transform(&double, &h);
        prop_assert!(once.approx_eq(&direct, 1e-9 * direct.max_abs().max(1.0)));
    }

    #[test]
    fn matrices_are_pentadiagonal(h in element(), s in 0.0..2.0f64) {
        prop_assert!(build_matrix(&SpectralProblem::new(h, s, 12)).bandwidth() <= 2);
    }

    #[test]
    fn e3_tables_invert_under_negation(p in dyson_e3()) {
        for g in Generator3::ALL {
            let there_and_back = act(&p, act(&p.scaled(-1.0), unit(g)));
            for (x, y) in there_and_back.iter().zip(unit(g)) {
                prop_assert!((x - y).norm() < 1e-9, "{g:?}: {there_and_back:?}");
            }
        }
    }

    #[test]
    fn e3_tables_compose_along_a_ray(p in dyson_e3()) {
        for g in Generator3::ALL {
            let twice = act(&p, act(&p, unit(g)));
            let direct = e3_adjoint(&p.scaled(2.0)).image(g);
            let scale = direct.iter().map(|x| x.norm()).fold(1.0, f64::max);
            for (x, y) in twice.iter().zip(direct) {
                prop_assert!((x - y).norm() < 1e-9 * scale, "{g:?}");
            }
        }
    }

    #[test]
    fn e3_pt_maps_are_involutions(c in proptest::array::uniform6(c64())) {
        let el = E3Element::linear(c);
        for s in [PtSymmetryE3::PT1, PtSymmetryE3::PT2, PtSymmetryE3::PT3, PtSymmetryE3::PT4] {
            prop_assert!(apply_pt_e3(s, &apply_pt_e3(s, &el)).approx_eq(&el, 1e-12));
        }
    }

    #[test]
    fn fmt_e_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::ZERO) {
        let s = fmt_e(x);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-12 * x.abs(), "{x} -> {s}");
        prop_assert_eq!(s.split('e').next().unwrap().trim_start_matches('-').len(), 14);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn pt_symmetric_spectra_are_closed_under_conjugation(
        s in symmetry(),
        mu in proptest::array::uniform9(-1.0..1.0f64),
    ) {
        // a dominant J² keeps the interior well conditioned
        let mut mu = mu;
        mu[0] = 2.0;
        let sp = eigen_spectrum(&SpectralProblem::new(build_hamiltonian(s, mu), 0.0, 24)).unwrap();
        let interior = &sp.eigenvalues[..sp.trusted / 2];
        for e in interior {
            let partner = sp.eigenvalues.iter().map(|f| (f - e.conj()).norm()).fold(f64::INFINITY, f64::min);
            prop_assert!(partner < 1e-6 * e.norm().max(1.0), "{s}: {e} has no conjugate partner");
        }
    }

    #[test]
    fn real_q_gives_real_characteristic_values(q in -8.0..8.0f64) {
        for name in ["even-pi", "odd-pi", "even-2pi", "odd-2pi", "even-half", "odd-half"] {
            let cls: MathieuClass = name.parse().unwrap();
            for a in characteristic_values(C64::new(q, 0.0), cls, 5, 40).unwrap() {
                prop_assert!(a.im.abs() < 1e-9 * a.norm().max(1.0), "{name}: {a}");
            }
        }
    }

    #[test]
    fn characteristic_values_respect_q_reflections(q in c64()) {
        let values = |name: &str, q: C64| characteristic_values(q, name.parse().unwrap(), 5, 40).unwrap();
        let close = |a: &[C64], b: &[C64]| a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-8 * x.norm().max(1.0));
        // a_{2n}, b_{2n+2} are even in q; q → −q swaps a_{2n+1} with b_{2n+1}
        prop_assert!(close(&values("even-pi", q), &values("even-pi", -q)));
        prop_assert!(close(&values("odd-pi", q), &values("odd-pi", -q)));
        prop_assert!(close(&values("even-2pi", q), &values("odd-2pi", -q)));
        // conjugate q gives conjugate values
        let conj: Vec<C64> = values("even-2pi", q).iter().map(|a| a.conj()).collect();
        prop_assert!(close(&conj, &values("even-2pi", q.conj())));
    }
}
