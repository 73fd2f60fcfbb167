//! Closed-form adjoint action of η = exp(λ_z J_z + λ_+ J_+ + λ_− J_− + κ_z P_z + κ_+ P_+ + κ_− P_−).
//!
//! η P_ℓ η⁻¹ = Σ_m μ_{ℓm} P_m and η J_ℓ η⁻¹ = Σ_m ν_{ℓm} J_m + ρ_{ℓm} P_m, indices in (z, +, −).
//! Everything depends on ω² = λ_z² + λ_+λ_−, which may be negative; the coefficients are even
//! in ω and are evaluated as real functions of ω², with power series near ω² = 0.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{E3Element, Generator3};
use crate::error::Result;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DysonParamsE3 {
    pub lambda_z: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub kappa_z: f64,
    pub kappa_plus: f64,
    pub kappa_minus: f64,
}

impl DysonParamsE3 {
    pub fn from_array(p: [f64; 6]) -> Self {
        Self { lambda_z: p[0], lambda_plus: p[1], lambda_minus: p[2], kappa_z: p[3], kappa_plus: p[4], kappa_minus: p[5] }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.lambda_z, self.lambda_plus, self.lambda_minus, self.kappa_z, self.kappa_plus, self.kappa_minus]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_array(self.to_array().map(|x| x * s))
    }
}

/// Below this |ω²| the series are used.
pub const SERIES_THRESHOLD: f64 = 0.5;

/// cosh 2ω, sinh 2ω / 2ω, (cosh 2ω − 1)/2ω², (c − s)/ω², (cosh 2ω − s)/ω² as functions of x = ω².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaFunctions {
    pub cosh2: f64,
    pub s: f64,
    pub c: f64,
    pub c_minus_s_over: f64,
    pub cosh2_minus_s_over: f64,
}

impl OmegaFunctions {
    pub fn new(x: f64) -> Self {
        if x.abs() < SERIES_THRESHOLD {
            Self::series(x)
        } else {
            Self::closed(x)
        }
    }

    pub fn closed(x: f64) -> Self {
        let (cosh2, s) = if x > 0.0 {
            let w = x.sqrt();
            ((2.0 * w).cosh(), (2.0 * w).sinh() / (2.0 * w))
        } else {
            let w = (-x).sqrt();
            ((2.0 * w).cos(), (2.0 * w).sin() / (2.0 * w))
        };
        let c = (cosh2 - 1.0) / (2.0 * x);
        Self { cosh2, s, c, c_minus_s_over: (c - s) / x, cosh2_minus_s_over: (cosh2 - s) / x }
    }

    /// Taylor series in x, summed until the terms drop below 1e−18.
    pub fn series(x: f64) -> Self {
        let mut out = Self { cosh2: 0.0, s: 0.0, c: 0.0, c_minus_s_over: 0.0, cosh2_minus_s_over: 0.0 };
        // t = (4x)^m / (2m)!, t_over = 4^m x^{m−1} / (2m)!
        let mut t = 1.0;
        let mut t_over = 2.0;
        for m in 0..60 {
            let mf = m as f64;
            let r_odd = 1.0 / (2.0 * mf + 1.0); // (2m)!/(2m+1)!
            let r_next = r_odd / (2.0 * mf + 2.0); // (2m)!/(2m+2)!
            out.cosh2 += t;
            out.s += t * r_odd;
            out.c += 2.0 * t * r_next;
            if m >= 1 {
                out.c_minus_s_over += t_over * (2.0 * r_next - r_odd);
                out.cosh2_minus_s_over += t_over * (1.0 - r_odd);
                t_over *= 4.0 * x * r_next;
            }
            t *= 4.0 * x * r_next;
            if t.abs() < 1e-18 && t_over.abs() < 1e-18 {
                break;
            }
        }
        out
    }
}

/// Coefficient tables; index order (z, +, −).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct E3AdjointTable {
    pub params: DysonParamsE3,
    /// ω² = λ_z² + λ_+λ_−
    pub omega_sq: f64,
    /// ω̃² = 2λ_z² + λ_+λ_−
    pub omega_tilde_sq: f64,
    pub mu_scalar: f64,
    pub mu_tilde: f64,
    pub nu_scalar: f64,
    pub functions: OmegaFunctions,
    pub mu: [[f64; 3]; 3],
    pub nu: [[f64; 3]; 3],
    pub rho: [[f64; 3]; 3],
}

const Z: usize = 0;

impl E3AdjointTable {
    /// η P_ℓ η⁻¹ or η J_ℓ η⁻¹ over the generators (P_z, P_+, P_−, J_z, J_+, J_−).
    pub fn image(&self, g: Generator3) -> [C64; 6] {
        let r = |x: f64| C64::new(x, 0.0);
        let l = match g {
            Generator3::Pz | Generator3::Jz => 0,
            Generator3::Pp | Generator3::Jp => 1,
            Generator3::Pm | Generator3::Jm => 2,
        };
        match g {
            Generator3::Pz | Generator3::Pp | Generator3::Pm => {
                [r(self.mu[l][0]), r(self.mu[l][1]), r(self.mu[l][2]), r(0.0), r(0.0), r(0.0)]
            }
            _ => [
                r(self.rho[l][0]),
                r(self.rho[l][1]),
                r(self.rho[l][2]),
                r(self.nu[l][0]),
                r(self.nu[l][1]),
                r(self.nu[l][2]),
            ],
        }
    }
}

pub fn e3_adjoint(p: &DysonParamsE3) -> E3AdjointTable {
    let DysonParamsE3 { lambda_z: lz, lambda_plus: lp, lambda_minus: lm, kappa_z: kz, kappa_plus: kp, kappa_minus: km } = *p;
    let w2 = lz * lz + lp * lm;
    let wt2 = 2.0 * lz * lz + lp * lm;
    let mu_s = kz * lz + kp * lm - km * lp;
    let mu_t = 2.0 * kz * lz + kp * lm - km * lp;
    let nu_s = kp * lz * lm - kz * lp * lm - km * lz * lp;
    let f = OmegaFunctions::new(w2);
    let (c, s) = (f.c, f.s);
    // (s − c)/ω² and (s − cosh 2ω)/ω²
    let d_sc = -f.c_minus_s_over;
    let d_sch = -f.cosh2_minus_s_over;
    let lpm = |sg: f64| if sg > 0.0 { lp } else { lm };
    let kpm = |sg: f64| if sg > 0.0 { kp } else { km };
    let mut mu = [[0.0; 3]; 3];
    let mut nu = [[0.0; 3]; 3];
    let mut rho = [[0.0; 3]; 3];
    mu[Z][Z] = 1.0 + 2.0 * c * lp * lm;
    nu[Z][Z] = 1.0 + 2.0 * c * lp * lm;
    rho[Z][Z] = 4.0 * ((lm * kp - lp * km) * c + lp * lm * mu_s * d_sc);
    for (sg, l, o) in [(1.0, 1, 2), (-1.0, 2, 1)] {
        let (la, ka, lo, ko) = (lpm(sg), kpm(sg), lpm(-sg), kpm(-sg));
        mu[l][l] = 1.0 + wt2 * c + sg * 2.0 * s * lz;
        mu[l][o] = c * lo * lo;
        mu[l][Z] = -sg * 2.0 * c * lz * lo - 2.0 * s * lo;
        mu[Z][l] = -sg * c * lz * la - s * la;
        nu[l][l] = 1.0 + wt2 * c + sg * 2.0 * s * lz;
        nu[l][o] = -c * lo * lo;
        nu[l][Z] = -sg * s * lo - c * lz * lo;
        nu[Z][l] = -2.0 * c * lz * la - sg * 2.0 * s * la;
        // 2cν/ω² + s(μ ∓ 2ν)/ω² − cosh(2ω) μ/ω² regrouped into finite combinations
        rho[Z][l] = c * (sg * la * kz - 2.0 * lz * ka) - sg * 2.0 * s * (ka + la * kz)
            + la * (-sg * 2.0 * nu_s * d_sc + mu_s * d_sch);
        rho[l][Z] = c * (lo * kz + sg * 2.0 * lz * ko) + 2.0 * s * (ko - lo * kz)
            + lo * (-2.0 * nu_s * d_sc + sg * mu_s * d_sch);
        rho[l][l] = sg * c * mu_t + s * kz + sg * mu_s * wt2 * d_sc + f.cosh2_minus_s_over * lz * mu_s;
        rho[l][o] = -2.0 * c * lo * ko + sg * mu_s * lo * lo * d_sc;
    }
    E3AdjointTable {
        params: *p,
        omega_sq: w2,
        omega_tilde_sq: wt2,
        mu_scalar: mu_s,
        mu_tilde: mu_t,
        nu_scalar: nu_s,
        functions: f,
        mu,
        nu,
        rho,
    }
}

/// η H η⁻¹ by substituting the adjoint images into a degree ≤ 2 element.
pub fn transform_h_tilde(p: &DysonParamsE3, h: &E3Element) -> Result<E3Element> {
    let table = e3_adjoint(p);
    h.substitute(|g| E3Element::linear(table.image(g)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_at_zero() {
        let t = e3_adjoint(&DysonParamsE3::default());
        for l in 0..3 {
            for m in 0..3 {
                let e = if l == m { 1.0 } else { 0.0 };
                assert_eq!(t.mu[l][m], e);
                assert_eq!(t.nu[l][m], e);
                assert_eq!(t.rho[l][m], 0.0);
            }
        }
    }

    #[test]
    fn pure_lambda_z_scales_exponentially() {
        for lz in [0.3, -0.8, 1.7] {
            let t = e3_adjoint(&DysonParamsE3 { lambda_z: lz, ..Default::default() });
            assert!((t.mu[1][1] - (2.0 * lz).exp()).abs() < 1e-13);
            assert!((t.mu[2][2] - (-2.0 * lz).exp()).abs() < 1e-13);
        }
    }

    #[test]
    fn series_and_closed_forms_agree_at_the_threshold() {
        for x in [SERIES_THRESHOLD, -SERIES_THRESHOLD, 0.3, -0.45] {
            let a = OmegaFunctions::series(x);
            let b = OmegaFunctions::closed(x);
            for (u, v) in [
                (a.cosh2, b.cosh2),
                (a.s, b.s),
                (a.c, b.c),
                (a.c_minus_s_over, b.c_minus_s_over),
                (a.cosh2_minus_s_over, b.cosh2_minus_s_over),
            ] {
                assert!((u - v).abs() < 1e-13, "x={x}: {u} vs {v}");
            }
        }
    }

    #[test]
    fn continuity_at_zero() {
        // the functions are analytic in ω²; at ω = 1e−5 they differ from ω = 0 by the linear term
        let x = 1e-10;
        let (f0, f1) = (OmegaFunctions::new(0.0), OmegaFunctions::new(x));
        assert_eq!((f0.cosh2, f0.s, f0.c), (1.0, 1.0, 1.0));
        assert!((f0.c_minus_s_over + 1.0 / 3.0).abs() < 1e-15);
        assert!((f0.cosh2_minus_s_over - 4.0 / 3.0).abs() < 1e-15);
        for (a, b, slope) in [
            (f0.cosh2, f1.cosh2, 2.0),
            (f0.s, f1.s, 2.0 / 3.0),
            (f0.c, f1.c, 1.0 / 3.0),
            (f0.c_minus_s_over, f1.c_minus_s_over, -4.0 / 45.0),
            (f0.cosh2_minus_s_over, f1.cosh2_minus_s_over, 8.0 / 15.0),
        ] {
            assert!((b - a - slope * x).abs() < 1e-15, "{a} {b}");
        }
        let p = DysonParamsE3 { lambda_z: 1e-5, lambda_plus: 0.0, lambda_minus: 0.0, kappa_z: 0.4, kappa_plus: -0.3, kappa_minus: 0.9 };
        let q = DysonParamsE3 { lambda_z: 0.0, ..p };
        let (a, b) = (e3_adjoint(&p), e3_adjoint(&q));
        for l in 0..3 {
            for m in 0..3 {
                assert!((a.mu[l][m] - b.mu[l][m]).abs() < 3e-5);
                assert!((a.rho[l][m] - b.rho[l][m]).abs() < 3e-5);
            }
        }
    }
}
