//! Independent oracles: matrix representations, pointwise differential operators and ODE shooting.

use std::f64::consts::PI;

use euclid_pt::algebra::{build_hamiltonian, E2Element, PtSymmetryE2};
use euclid_pt::dyson::{similarity_transform, DysonParamsE2};
use euclid_pt::e3::oracle::{conjugate_oracle, represent};
use euclid_pt::e3::{build_h_tilde_pt1, transform_h_tilde, DysonParamsE3, E3Element, Generator3, Monomial3};
use euclid_pt::mathieu::{characteristic_values, default_truncation, MathieuClass, Parity, Periodicity};
use euclid_pt::spectral::{build_matrix, SpectralProblem};
use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M3 = Matrix3<C64>;

const I: C64 = C64::new(0.0, 1.0);

/// 3×3 representation of E2: J = i(E12 − E21), u = iE13, v = iE23.
fn e2_rep() -> [M3; 3] {
    let mut j = M3::zeros();
    j[(0, 1)] = I;
    j[(1, 0)] = -I;
    let mut u = M3::zeros();
    u[(0, 2)] = I;
    let mut v = M3::zeros();
    v[(1, 2)] = I;
    [u, v, j]
}

fn represent_e2(h: &E2Element) -> M3 {
    let [u, v, j] = e2_rep();
    h.terms().fold(M3::zeros(), |acc, (m, c)| {
        let (a, b, k) = m.exponents();
        let mut prod = M3::identity();
        for (p, g) in [(a, u), (b, v), (k, j)] {
            for _ in 0..p {
                prod *= g;
            }
        }
        acc + prod * c
    })
}

fn random_element(rng: &mut ChaCha8Rng) -> E2Element {
    E2Element::from_coeffs(std::array::from_fn(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
}

#[test]
fn e2_rep_satisfies_the_commutation_relations() {
    let [u, v, j] = e2_rep();
    assert!((j * u - u * j + v * I).norm() < 1e-15);
    assert!((j * v - v * j - u * I).norm() < 1e-15);
    assert!((u * v - v * u).norm() < 1e-15);
}

#[test]
fn e2_similarity_transform_matches_matrix_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let [u, v, j] = e2_rep();
    for _ in 0..50 {
        let p = DysonParamsE2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let h = random_element(&mut rng);
        let x = j * C64::new(p.lambda, 0.0) + u * C64::new(p.rho, 0.0) + v * C64::new(p.tau, 0.0);
        let expected = x.exp() * represent_e2(&h) * (-x).exp();
        let got = represent_e2(&similarity_transform(&p, &h));
        assert!((expected - got).norm() < 1e-10 * expected.norm().max(1.0), "{p:?}");
    }
}

/// Applies uᵃvᵇJᶜ to a finite Fourier sum pointwise: J acts first as −i d/dθ.
fn apply_pointwise(h: &E2Element, modes: &[(f64, C64)], theta: f64) -> C64 {
    h.terms()
        .map(|(m, c)| {
            let (a, b, k) = m.exponents();
            let jpsi: C64 = modes.iter().map(|&(w, cn)| cn * w.powi(k as i32) * (I * w * theta).exp()).sum();
            c * theta.sin().powi(a as i32) * theta.cos().powi(b as i32) * jpsi
        })
        .sum()
}

#[test]
fn banded_matrix_matches_the_differential_operator() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for sector in [0.0, 1.0, 0.37] {
        let h = random_element(&mut rng);
        let p = SpectralProblem::new(h.clone(), sector, 10);
        let m = build_matrix(&p);
        // support away from the edges so no band is clipped
        let coeffs: Vec<C64> = (0..p.dim())
            .map(|i| if (3..p.dim() - 3).contains(&i) { C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) } else { C64::new(0.0, 0.0) })
            .collect();
        let modes: Vec<(f64, C64)> = coeffs.iter().enumerate().map(|(i, &c)| (p.wavenumber(i), c)).collect();
        let image: Vec<(f64, C64)> = (0..p.dim())
            .map(|r| (p.wavenumber(r), (0..p.dim()).map(|c| m.get(r, c) * coeffs[c]).sum()))
            .collect();
        for k in 0..40 {
            let theta = 2.0 * PI * k as f64 / 40.0 + 0.01;
            let direct = apply_pointwise(&h, &modes, theta);
            let via: C64 = image.iter().map(|&(w, c)| c * (I * w * theta).exp()).sum();
            assert!((direct - via).norm() < 1e-10 * direct.norm().max(1.0), "sector {sector}, theta {theta}");
        }
    }
}

#[test]
fn pt_hamiltonians_commute_with_their_theta_maps_pointwise() {
    // (PT ψ)(θ) = ψ*(shift + orientation θ); H must map PT ψ to PT(Hψ)
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for s in PtSymmetryE2::ALL {
        let (shift, orient) = s.theta_map();
        let mu: [f64; 9] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let h = build_hamiltonian(s, mu);
        let modes: Vec<(f64, C64)> = (-4..=4).map(|n| (n as f64, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))).collect();
        // PT ψ as a Fourier sum: ψ*(shift + o θ) = Σ c_n* e^{−in shift} e^{−i n o θ}
        let pt_modes: Vec<(f64, C64)> = modes.iter().map(|&(w, c)| (-w * orient, c.conj() * (-I * w * shift).exp())).collect();
        for k in 0..24 {
            let theta = 2.0 * PI * k as f64 / 24.0 + 0.02;
            let lhs = apply_pointwise(&h, &pt_modes, theta);
            let rhs = apply_pointwise(&h, &modes, shift + orient * theta).conj();
            assert!((lhs - rhs).norm() < 1e-10 * rhs.norm().max(1.0), "{s} at theta {theta}");
        }
    }
}

#[test]
fn e3_transform_of_quadratic_elements_matches_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let quadratic_probes = [
        E3Element::term(Monomial3::Gen(Generator3::Pz), C64::new(0.0, 0.8)),
        build_h_tilde_pt1([1.0, 1.0, 0.3, 0.5, 0.5, 0.0, 0.2, 0.2, 0.7]),
    ];
    for _ in 0..30 {
        let p = DysonParamsE3::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let random = Monomial3::all()
            .into_iter()
            .fold(E3Element::zero(), |acc, m| acc + E3Element::term(m, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
        for h in quadratic_probes.iter().chain(std::iter::once(&random)) {
            let got = represent(&transform_h_tilde(&p, h).unwrap());
            let expected = conjugate_oracle(&p, h);
            assert!((got - expected).norm() < 1e-9 * expected.norm().max(1.0), "{p:?}");
        }
    }
}

/// RK4 for y'' = (2q cos 2z − a) y from z = 0 to `end`, returning (y, y').
fn shoot(a: C64, q: C64, y0: C64, dy0: C64, end: f64) -> (C64, C64) {
    let steps = 4000;
    let h = end / steps as f64;
    let f = |z: f64, y: C64| (q * 2.0 * (2.0 * z).cos() - a) * y;
    let (mut y, mut dy) = (y0, dy0);
    for i in 0..steps {
        let z = i as f64 * h;
        let (k1y, k1d) = (dy, f(z, y));
        let (k2y, k2d) = (dy + k1d * (h / 2.0), f(z + h / 2.0, y + k1y * (h / 2.0)));
        let (k3y, k3d) = (dy + k2d * (h / 2.0), f(z + h / 2.0, y + k2y * (h / 2.0)));
        let (k4y, k4d) = (dy + k3d * h, f(z + h, y + k3y * h));
        y += (k1y + k2y * 2.0 + k3y * 2.0 + k4y) * (h / 6.0);
        dy += (k1d + k2d * 2.0 + k3d * 2.0 + k4d) * (h / 6.0);
    }
    (y, dy)
}

/// Boundary function whose zeros are the characteristic values of `cls`.
fn boundary(a: C64, q: C64, cls: MathieuClass) -> C64 {
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let (y0, dy0) = match cls.parity {
        Parity::Even => (one, zero),
        Parity::Odd => (zero, one),
    };
    match (cls.parity, cls.periodicity) {
        (Parity::Even, Periodicity::Pi) | (Parity::Odd, Periodicity::TwoPi) => shoot(a, q, y0, dy0, PI / 2.0).1,
        (Parity::Even, Periodicity::TwoPi) | (Parity::Odd, Periodicity::Pi) => shoot(a, q, y0, dy0, PI / 2.0).0,
        (Parity::Even, Periodicity::HalfInteger) => shoot(a, q, y0, dy0, PI).0,
        (Parity::Odd, Periodicity::HalfInteger) => shoot(a, q, y0, dy0, PI).1,
    }
}

#[test]
fn characteristic_values_are_roots_of_the_shooting_function() {
    let classes = ["even-pi", "odd-pi", "even-2pi", "odd-2pi", "even-half", "odd-half"];
    for q in [C64::new(1.0, 0.0), C64::new(0.0, 1.2), C64::new(-0.7, 2.5), C64::new(0.0, 5.0)] {
        for name in classes {
            let cls: MathieuClass = name.parse().unwrap();
            let values = characteristic_values(q, cls, 4, default_truncation(q, 4)).unwrap();
            for a in values {
                // secant refinement of the ODE boundary function, started at the computed value
                let (mut x0, mut x1) = (a, a + C64::new(1e-6, 1e-6));
                let (mut f0, mut f1) = (boundary(x0, q, cls), boundary(x1, q, cls));
                for _ in 0..30 {
                    if (x1 - x0).norm() < 1e-13 || f1 == f0 {
                        break;
                    }
                    let x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
                    (x0, f0) = (x1, f1);
                    x1 = x2;
                    f1 = boundary(x1, q, cls);
                }
                assert!((x1 - a).norm() < 1e-8 * a.norm().max(1.0), "{name} q = {q}: {a} vs shooting root {x1}");
            }
        }
    }
}
