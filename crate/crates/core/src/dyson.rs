//! Dyson maps η = exp(λJ + ρu + τv) on E2 and the per-symmetry hermitization constraints.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::algebra::{build_hamiltonian, E2Element, Monomial, PtSymmetryE2};
use crate::error::{Error, Result};

const SERIES_THRESHOLD: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct DysonParamsE2 {
    pub lambda: f64,
    pub rho: f64,
    pub tau: f64,
}

impl DysonParamsE2 {
    pub fn new(lambda: f64, rho: f64, tau: f64) -> Self {
        Self { lambda, rho, tau }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    J,
    U,
    V,
}

/// sinh(x)/x.
pub fn sinhc(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 + x2 / 6.0 * (1.0 + x2 / 20.0 * (1.0 + x2 / 42.0))
    } else {
        x.sinh() / x
    }
}

/// (1 − cosh x)/x.
pub fn one_minus_cosh_over(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        -x / 2.0 * (1.0 + x2 / 12.0 * (1.0 + x2 / 30.0 * (1.0 + x2 / 56.0)))
    } else {
        let s = (x / 2.0).sinh();
        -2.0 * s * s / x
    }
}

/// x·coth(x), finite at x = 0.
pub fn x_coth_x(x: f64) -> f64 {
    if x.abs() < SERIES_THRESHOLD {
        let x2 = x * x;
        1.0 + x2 / 3.0 - x2 * x2 / 45.0
    } else {
        x / x.tanh()
    }
}

/// η g η⁻¹ for a single generator; always degree ≤ 1.
pub fn adjoint_generator(p: &DysonParamsE2, g: Generator) -> E2Element {
    let DysonParamsE2 { lambda, rho, tau } = *p;
    let (ch, sh) = (lambda.cosh(), lambda.sinh());
    let r = |x: f64| C64::new(x, 0.0);
    let i = |x: f64| C64::new(0.0, x);
    match g {
        Generator::U => E2Element::term(Monomial::U, r(ch)) + E2Element::term(Monomial::V, i(-sh)),
        Generator::V => E2Element::term(Monomial::V, r(ch)) + E2Element::term(Monomial::U, i(sh)),
        Generator::J => {
            let a = sinhc(lambda);
            let b = one_minus_cosh_over(lambda);
            E2Element::j()
                + E2Element::term(Monomial::U, C64::new(rho * b, -tau * a))
                + E2Element::term(Monomial::V, C64::new(tau * b, rho * a))
        }
    }
}

/// h = η H η⁻¹ by substituting generator images and re-expanding.
pub fn similarity_transform(p: &DysonParamsE2, h: &E2Element) -> E2Element {
    let images = [
        adjoint_generator(p, Generator::U),
        adjoint_generator(p, Generator::V),
        adjoint_generator(p, Generator::J),
    ];
    let mut out = E2Element::zero();
    for (m, c) in h.terms() {
        let (a, b, j) = m.exponents();
        let mut prod = E2Element::one();
        for (power, image) in [(a, &images[0]), (b, &images[1]), (j, &images[2])] {
            for _ in 0..power {
                prod = prod
                    .multiply(image)
                    .expect("images have degree 1, so products of at most two stay in range");
            }
        }
        out = out + prod * c;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitizationResult {
    pub symmetry: PtSymmetryE2,
    pub params: DysonParamsE2,
    pub constrained_mu: [f64; 9],
    pub h: E2Element,
    pub free_parameter_names: Vec<String>,
    /// max |coeff(h − h†)|
    pub residual: f64,
    /// Right-hand side of the coth equation that fixed λ, when λ is not free.
    pub coth_rhs: Option<f64>,
}

impl HermitizationResult {
    pub fn original(&self) -> E2Element {
        build_hamiltonian(self.symmetry, self.constrained_mu)
    }
}

pub type FreeParams = BTreeMap<String, f64>;

/// Names accepted by `hermitize`: (required, optional).
pub fn free_parameter_names(s: PtSymmetryE2) -> (&'static [&'static str], &'static [&'static str]) {
    match s {
        PtSymmetryE2::PT1 | PtSymmetryE2::PT2 => (&["lambda", "mu1", "mu3", "mu4"], &["mu8"]),
        PtSymmetryE2::PT3 => (&["mu1", "mu2", "mu3", "mu4", "mu5", "mu6", "mu7", "mu8"], &["mu9"]),
        PtSymmetryE2::PT4 | PtSymmetryE2::PT5 => (&["mu1", "mu2", "mu4", "mu5", "mu6", "mu7", "mu8"], &[]),
    }
}

struct Inputs<'a> {
    map: &'a FreeParams,
}

impl Inputs<'_> {
    fn get(&self, name: &str) -> f64 {
        self.map[name]
    }
    fn opt(&self, name: &str) -> f64 {
        self.map.get(name).copied().unwrap_or(0.0)
    }
}

fn validate(s: PtSymmetryE2, free: &FreeParams) -> Result<()> {
    let (required, optional) = free_parameter_names(s);
    for name in required {
        if !free.contains_key(*name) {
            return Err(Error::InvalidInput(format!("{s} requires free parameter {name}")));
        }
    }
    for (name, value) in free {
        if !required.contains(&name.as_str()) && !optional.contains(&name.as_str()) {
            return Err(Error::InvalidInput(format!("{name} is not a free parameter of {s}")));
        }
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!("{name} must be finite")));
        }
    }
    if free["mu1"] == 0.0 {
        return Err(Error::DegenerateCouplings("mu1 = 0".into()));
    }
    Ok(())
}

/// λ from coth(kλ) = rhs given as a ratio num/den, so that rhs = ±∞ is representable.
/// Returns (λ·k, rhs).
fn arcoth_ratio(num: f64, den: f64) -> Result<(f64, f64)> {
    let rhs = num / den;
    if num == 0.0 && den == 0.0 {
        return Err(Error::DegenerateCouplings("coth equation is 0/0".into()));
    }
    if rhs.abs() <= 1.0 {
        return Err(Error::MapUndefined { rhs });
    }
    Ok(((den / num).atanh(), rhs))
}

/// Solves the closed-form hermitization constraints for symmetry `s`.
pub fn hermitize(s: PtSymmetryE2, free: &FreeParams) -> Result<HermitizationResult> {
    validate(s, free)?;
    let f = Inputs { map: free };
    let m1 = f.get("mu1");
    let mut rhs = None;
    let (params, mu) = match s {
        PtSymmetryE2::PT1 => {
            let (lambda, m3, m4, m8) = (f.get("lambda"), f.get("mu3"), f.get("mu4"), f.opt("mu8"));
            let params = DysonParamsE2::new(lambda, -lambda * m4 / m1, lambda * m3 / m1);
            let m7 = m8 + (m4 * m4 - m3 * m3) / m1;
            let m9 = -2.0 * m3 * m4 / m1;
            (params, [m1, 0.0, m3, m4, -2.0 * m4, 2.0 * m3, m7, m8, m9])
        }
        PtSymmetryE2::PT2 => {
            let (lambda, m3, m4, m8) = (f.get("lambda"), f.get("mu3"), f.get("mu4"), f.opt("mu8"));
            let k = x_coth_x(lambda) / m1;
            let params = DysonParamsE2::new(lambda, m3 * k, m4 * k);
            let m7 = m8 + (m3 * m3 - m4 * m4) / m1;
            let m9 = 2.0 * m3 * m4 / m1;
            (params, [m1, 0.0, m3, m4, 2.0 * m4, -2.0 * m3, m7, m8, m9])
        }
        PtSymmetryE2::PT3 => {
            let [m2, m3, m4, m5, m6, m7, m8] = ["mu2", "mu3", "mu4", "mu5", "mu6", "mu7", "mu8"].map(|n| f.get(n));
            let num = m2 * m5 + m1 * (m6 - 2.0 * m3);
            let den = m1 * (2.0 * m4 - m5) - m2 * m6;
            let (lambda, coth2) = if num == 0.0 && den == 0.0 {
                // coth λ is unconstrained by the linear terms; fix coth 2λ from a target μ9.
                let k = m5 * m6 / m1 + 2.0 * m7;
                if k == 0.0 {
                    return Err(Error::DegenerateCouplings("PT3: both coth equations are indeterminate".into()));
                }
                let c2num = f.opt("mu9") - (m5 * m5 + m6 * m6) / (2.0 * m1);
                let (two_lambda, r) = arcoth_ratio(c2num, k)?;
                rhs = Some(r);
                (two_lambda / 2.0, r)
            } else if den == 0.0 {
                return Err(Error::DegenerateCouplings("PT3: coth λ diverges (λ = 0)".into()));
            } else {
                let (lambda, r) = arcoth_ratio(num, den)?;
                rhs = Some(r);
                (lambda, (1.0 + r * r) / (2.0 * r))
            };
            let rho = (m5 * lambda + m6 * x_coth_x(lambda)) / (2.0 * m1);
            let m9 = (m5 * m5 + m6 * m6 + 2.0 * m5 * m6 * coth2) / (2.0 * m1) + 2.0 * m7 * coth2;
            (DysonParamsE2::new(lambda, rho, rho), [m1, m2, m3, m4, m5, m6, m7, m8, m9])
        }
        PtSymmetryE2::PT4 => {
            let [m2, m4, m5, m6, m7, m8] = ["mu2", "mu4", "mu5", "mu6", "mu7", "mu8"].map(|n| f.get(n));
            let num = 4.0 * m1 * (m8 - m7) - m5 * m5 - m6 * m6;
            let den = 2.0 * m5 * m6;
            let lambda = if den == 0.0 {
                if num == 0.0 {
                    return Err(Error::DegenerateCouplings("PT4: coth 2λ equation is 0/0".into()));
                }
                0.0
            } else {
                let (two_lambda, r) = arcoth_ratio(num, den)?;
                rhs = Some(r);
                two_lambda / 2.0
            };
            let tau = (m5 * x_coth_x(lambda) + m6 * lambda) / (2.0 * m1);
            let m3 = (m1 * m5 + m2 * m6 - 2.0 * m1 * m4) / (2.0 * m1) * lambda.tanh()
                + m2 * m5 / (2.0 * m1)
                + m6 / 2.0;
            (DysonParamsE2::new(lambda, 0.0, tau), [m1, m2, m3, m4, m5, m6, m7, m8, 0.0])
        }
        PtSymmetryE2::PT5 => {
            let [m2, m4, m5, m6, m7, m8] = ["mu2", "mu4", "mu5", "mu6", "mu7", "mu8"].map(|n| f.get(n));
            let num = m5 * m5 + m6 * m6 - 4.0 * m1 * m7 + 4.0 * m1 * m8;
            let den = 2.0 * m5 * m6;
            let coth_coef = (2.0 * m1 * m4 + m1 * m5 - m2 * m6) / (2.0 * m1);
            let lambda = if den == 0.0 {
                if num == 0.0 {
                    return Err(Error::DegenerateCouplings("PT5: coth 2λ equation is 0/0".into()));
                }
                if coth_coef != 0.0 {
                    return Err(Error::DegenerateCouplings("PT5: mu5*mu6 = 0 forces λ = 0 where coth λ diverges".into()));
                }
                0.0
            } else {
                let (two_lambda, r) = arcoth_ratio(num, den)?;
                rhs = Some(r);
                two_lambda / 2.0
            };
            let rho = (m5 * lambda - m6 * x_coth_x(lambda)) / (2.0 * m1);
            let coth_term = if coth_coef == 0.0 { 0.0 } else { coth_coef / lambda.tanh() };
            let m3 = coth_term + m2 * m5 / (2.0 * m1) - m6 / 2.0;
            (DysonParamsE2::new(lambda, rho, 0.0), [m1, m2, m3, m4, m5, m6, m7, m8, 0.0])
        }
    };
    let h = similarity_transform(&params, &build_hamiltonian(s, mu));
    let (required, optional) = free_parameter_names(s);
    let free_parameter_names = required
        .iter()
        .chain(optional.iter().filter(|n| free.contains_key(**n)))
        .map(|n| n.to_string())
        .collect();
    Ok(HermitizationResult {
        symmetry: s,
        params,
        constrained_mu: mu,
        residual: h.hermiticity_residual(),
        h,
        free_parameter_names,
        coth_rhs: rhs,
    })
}

/// Convenience for building a `FreeParams` map.
pub fn free_params<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> FreeParams {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

/// Couplings of the PT5 three-parameter family
/// H = J² − iμ3{v,J} − μ4{u,J} + μ7u², i.e. μ1 = 1, μ2 = 0, μ5 = −2μ4, μ6 = −2μ3, μ8 = μ9 = 0.
pub fn pt5_three_param_mu(mu3: f64, mu4: f64, mu7: f64) -> [f64; 9] {
    [1.0, 0.0, mu3, mu4, -2.0 * mu4, -2.0 * mu3, mu7, 0.0, 0.0]
}

pub fn pt5_three_param_element(mu3: f64, mu4: f64, mu7: f64) -> E2Element {
    build_hamiltonian(PtSymmetryE2::PT5, pt5_three_param_mu(mu3, mu4, mu7))
}

/// Free parameters of `hermitize(PT5, ·)` that realise the three-parameter family.
pub fn pt5_three_param_free(mu3: f64, mu4: f64, mu7: f64) -> FreeParams {
    let m = pt5_three_param_mu(mu3, mu4, mu7);
    free_params([
        ("mu1", m[0]),
        ("mu2", m[1]),
        ("mu4", m[3]),
        ("mu5", m[4]),
        ("mu6", m[5]),
        ("mu7", m[6]),
        ("mu8", m[7]),
    ])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pt5Reduction {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub rho: f64,
}

impl Pt5Reduction {
    /// h = J² + α{u,J} + βu² + γ.
    pub fn hermitian_element(&self) -> E2Element {
        let anti = E2Element::u()
            .anticommutator(&E2Element::j())
            .expect("degree 2");
        E2Element::monomial(Monomial::JJ)
            + anti * self.alpha
            + E2Element::monomial(Monomial::UU) * self.beta
            + E2Element::one() * self.gamma
    }
}

/// Complex-valued version of the reduction, valid on both sides of the reality boundary
/// by continuing λ into the complex plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pt5ReductionComplex {
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
    pub lambda: C64,
}

fn pt5_coth_ratio(mu3: f64, mu4: f64, mu7: f64) -> (f64, f64) {
    (mu3 * mu3 + mu4 * mu4 - mu7, 2.0 * mu3 * mu4)
}

fn reduction_from_lambda(mu3: f64, mu4: f64, mu7: f64, lambda: C64) -> Pt5ReductionComplex {
    let (ch, sh) = (lambda.cosh(), lambda.sinh());
    let w = ch * mu3 - sh * mu4;
    let alpha = (lambda / 2.0).tanh() * mu3 - mu4;
    let gamma = w * w - sh * sh * mu7;
    let beta = w * (2.0 * mu3) / (ch + 1.0) + mu7 - gamma * 2.0;
    Pt5ReductionComplex { alpha, beta, gamma, lambda }
}

/// α, β, γ of the Hermitian counterpart J² + α{u,J} + βu² + γ of the three-parameter family.
pub fn reduce_pt5_three_param(mu3: f64, mu4: f64, mu7: f64) -> Result<Pt5Reduction> {
    let (num, den) = pt5_coth_ratio(mu3, mu4, mu7);
    let lambda = if den == 0.0 {
        0.0
    } else {
        let (two_lambda, _) = arcoth_ratio(num, den)?;
        two_lambda / 2.0
    };
    let r = reduction_from_lambda(mu3, mu4, mu7, C64::new(lambda, 0.0));
    Ok(Pt5Reduction {
        alpha: r.alpha.re,
        beta: r.beta.re,
        gamma: r.gamma.re,
        lambda,
        rho: mu3 * x_coth_x(lambda) - mu4 * lambda,
    })
}

/// Same reduction with λ = ½ artanh(2μ3μ4/(μ3²+μ4²−μ7)) continued to complex values.
pub fn reduce_pt5_three_param_complex(mu3: f64, mu4: f64, mu7: f64) -> Result<Pt5ReductionComplex> {
    let (num, den) = pt5_coth_ratio(mu3, mu4, mu7);
    let lambda = if den == 0.0 {
        C64::new(0.0, 0.0)
    } else if num == 0.0 {
        // tanh 2λ = ∞: 2λ = iπ/2
        C64::new(0.0, std::f64::consts::FRAC_PI_4)
    } else {
        let x = den / num;
        if (x.abs() - 1.0).abs() < 1e-14 {
            return Err(Error::MapUndefined { rhs: num / den });
        }
        // approach the cut from above so the branch is fixed
        C64::new(x, 0.0).atanh() / 2.0
    };
    Ok(reduction_from_lambda(mu3, mu4, mu7, lambda))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pt5Axis {
    Mu3,
    Mu4,
    Mu7,
}

/// Parameter values where the three-parameter family is predicted to have exceptional points.
pub fn ep_predictions_pt5(mu3: f64, mu4: f64, mu7: f64, axis: Pt5Axis) -> Vec<f64> {
    let mut out = match axis {
        Pt5Axis::Mu3 | Pt5Axis::Mu4 => {
            if mu7 < 0.0 {
                return Vec::new();
            }
            let other = if axis == Pt5Axis::Mu3 { mu4 } else { mu3 };
            let r = mu7.sqrt();
            vec![-other - r, -other + r, other - r, other + r]
        }
        Pt5Axis::Mu7 => vec![(mu3 - mu4).powi(2), (mu3 + mu4).powi(2)],
    };
    out.sort_by(f64::total_cmp);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpticalLatticeMap {
    pub lambda: f64,
    pub h: E2Element,
}

/// Hermitian partner of J² + μ7u² + μ8v² + iμ9uv under η = exp(λJ), coth 2λ = (μ7 − μ8)/μ9.
pub fn optical_lattice_map(mu7: f64, mu8: f64, mu9: f64) -> Result<OpticalLatticeMap> {
    let d = mu7 - mu8;
    let lambda = if mu9 == 0.0 {
        if d == 0.0 {
            return Err(Error::DegenerateCouplings("mu7 = mu8 and mu9 = 0".into()));
        }
        0.0
    } else {
        let (two_lambda, _) = arcoth_ratio(d, mu9)?;
        two_lambda / 2.0
    };
    let big_h = build_hamiltonian(PtSymmetryE2::PT5, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, mu7, mu8, mu9]);
    let h = similarity_transform(&DysonParamsE2::new(lambda, 0.0, 0.0), &big_h);
    Ok(OpticalLatticeMap { lambda, h })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_branches_are_continuous() {
        for x in [9.99e-5, -9.99e-5, 3e-6] {
            assert!((sinhc(x) - x.sinh() / x).abs() < 1e-15);
            let s = (x / 2.0).sinh();
            assert!((one_minus_cosh_over(x) + 2.0 * s * s / x).abs() < 1e-18);
            assert!((x_coth_x(x) - x / x.tanh()).abs() < 1e-15);
        }
        assert_eq!(sinhc(0.0), 1.0);
        assert_eq!(one_minus_cosh_over(0.0), 0.0);
    }

    #[test]
    fn u_image_under_pure_lambda() {
        let l = 0.83;
        let img = adjoint_generator(&DysonParamsE2::new(l, 0.0, 0.0), Generator::U);
        let expected = E2Element::term(Monomial::U, C64::new(l.cosh(), 0.0))
            + E2Element::term(Monomial::V, C64::new(0.0, -l.sinh()));
        assert!(img.approx_eq(&expected, 1e-15));
    }

    #[test]
    fn j_image_at_lambda_zero() {
        let (rho, tau) = (0.4, -1.1);
        let img = adjoint_generator(&DysonParamsE2::new(0.0, rho, tau), Generator::J);
        let expected = E2Element::j()
            + E2Element::term(Monomial::V, C64::new(0.0, rho))
            + E2Element::term(Monomial::U, C64::new(0.0, -tau));
        assert!(img.approx_eq(&expected, 0.0));
    }

    #[test]
    fn casimir_and_j2_fixed() {
        let p = DysonParamsE2::new(0.7, -0.3, 1.9);
        assert!(similarity_transform(&p, &E2Element::casimir()).approx_eq(&E2Element::casimir(), 1e-12));
        let jj = E2Element::monomial(Monomial::JJ);
        let q = DysonParamsE2::new(1.3, 0.0, 0.0);
        assert!(similarity_transform(&q, &jj).approx_eq(&jj, 1e-14));
    }

    #[test]
    fn pt1_counterpart_matches_closed_form() {
        let (m1, m3, m4) = (1.7, 0.6, -0.45);
        let r = hermitize(
            PtSymmetryE2::PT1,
            &free_params([("lambda", 0.9), ("mu1", m1), ("mu3", m3), ("mu4", m4)]),
        )
        .unwrap();
        let anti = |a: E2Element| a.anticommutator(&E2Element::j()).unwrap();
        let expected = E2Element::monomial(Monomial::JJ) * m1 + anti(E2Element::v()) * m3 - anti(E2Element::u()) * m4
            + E2Element::monomial(Monomial::UV) * (-2.0 * m3 * m4 / m1)
            + E2Element::monomial(Monomial::UU) * ((m4 * m4 - m3 * m3) / m1);
        assert!(r.h.approx_eq(&expected, 1e-12), "{}", r.h);
        assert!(r.residual < 1e-12);
        assert!(r.original().is_hermitian(1e-12));
    }

    #[test]
    fn pt3_mathieu_is_undefined() {
        let mut f = free_params([("mu1", 1.0), ("mu7", 0.6)]);
        for n in ["mu2", "mu3", "mu4", "mu5", "mu6", "mu8"] {
            f.insert(n.into(), 0.0);
        }
        assert!(matches!(hermitize(PtSymmetryE2::PT3, &f), Err(Error::MapUndefined { .. })));
    }

    #[test]
    fn pt5_family_reality_window() {
        for (mu4, ok) in [(0.5, true), (0.99, true), (1.01, false), (2.0, false), (2.99, false), (3.01, true), (-0.5, true), (-2.0, false)] {
            let r = hermitize(PtSymmetryE2::PT5, &pt5_three_param_free(1.0, mu4, 4.0));
            assert_eq!(r.is_ok(), ok, "mu4 = {mu4}");
            assert_eq!(reduce_pt5_three_param(1.0, mu4, 4.0).is_ok(), ok);
        }
        assert!(matches!(reduce_pt5_three_param(1.0, 2.0, 4.0), Err(Error::MapUndefined { .. })));
    }

    #[test]
    fn pt5_family_recovers_mu3() {
        let r = hermitize(PtSymmetryE2::PT5, &pt5_three_param_free(0.5, 0.1, 0.0)).unwrap();
        assert!((r.constrained_mu[2] - 0.5).abs() < 1e-12);
        assert!(r.residual < 1e-12);
    }

    #[test]
    fn reduction_agrees_with_general_transform() {
        for (m3, m4, m7) in [(0.5, 0.1, 0.0), (0.5, 0.3, 0.0), (1.0, 0.5, 0.0), (1.0, 3.5, 4.0), (-0.7, 0.2, 1.3)] {
            let red = reduce_pt5_three_param(m3, m4, m7).unwrap();
            let gen = hermitize(PtSymmetryE2::PT5, &pt5_three_param_free(m3, m4, m7)).unwrap();
            // u² + v² = 1 makes the two forms differ by a multiple of the Casimir minus one.
            let diff = gen.h - red.hermitian_element();
            let c = diff.coeff(Monomial::VV);
            let rest = diff - (E2Element::casimir() - E2Element::one()) * c;
            assert!(rest.max_abs() < 1e-10, "({m3},{m4},{m7}): {rest}");
            assert!((gen.params.lambda - red.lambda).abs() < 1e-14);
            assert!((gen.params.rho - red.rho).abs() < 1e-12);
        }
    }

    #[test]
    fn complex_reduction_matches_real_one() {
        let a = reduce_pt5_three_param(0.8, 0.3, -1.0).unwrap();
        let b = reduce_pt5_three_param_complex(0.8, 0.3, -1.0).unwrap();
        assert!((b.alpha.re - a.alpha).abs() < 1e-14 && b.alpha.im.abs() < 1e-14);
        assert!((b.beta.re - a.beta).abs() < 1e-13 && (b.gamma.re - a.gamma).abs() < 1e-13);
    }

    #[test]
    fn ep_prediction_examples() {
        assert_eq!(ep_predictions_pt5(0.0, 1.0, 4.0, Pt5Axis::Mu3), vec![-3.0, -1.0, 1.0, 3.0]);
        assert_eq!(ep_predictions_pt5(1.0, 3.0, 0.0, Pt5Axis::Mu7), vec![4.0, 16.0]);
        assert_eq!(ep_predictions_pt5(0.0, 2.0, 0.0, Pt5Axis::Mu3), vec![-2.0, -2.0, 2.0, 2.0]);
        assert!(ep_predictions_pt5(0.0, 2.0, -1.0, Pt5Axis::Mu3).is_empty());
    }

    #[test]
    fn optical_lattice_examples() {
        let a = 1.0;
        let v0 = 0.4;
        let m = optical_lattice_map(a / 2.0, -a / 2.0, -2.0 * a * v0).unwrap();
        assert!(m.h.is_hermitian(1e-12));
        // h = J² + c (v² − u²) + const, with |c| = ½√(A² − 4A²V0²)
        let c = (m.h.coeff(Monomial::VV) - m.h.coeff(Monomial::UU)) / 2.0;
        assert!((c.norm() - 0.3).abs() < 1e-12);
        assert!(m.h.coeff(Monomial::UV).norm() < 1e-12);

        let z = optical_lattice_map(1.5, -0.5, 0.0).unwrap();
        assert_eq!(z.lambda, 0.0);
        assert!(matches!(optical_lattice_map(0.0, -4.0, -4.0), Err(Error::MapUndefined { .. })));
    }
}
