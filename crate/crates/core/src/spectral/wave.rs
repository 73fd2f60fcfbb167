//! Wavefunctions on the circle, intensities and PT-eigenstate checks.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::{eigen_decomposition, SpectralProblem, Statistics};
use crate::algebra::PtSymmetryE2;
use crate::error::{Error, Result};

const QUADRATURE_POINTS: usize = 4096;

/// ψ(θ) = exp(g_c cos θ + g_s sin θ) · Σ_k c_k e^{ikθ}, normalized to unit L² norm on [0, 2π).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WavefunctionSpec {
    pub gauge_cos: C64,
    pub gauge_sin: C64,
    /// (wavenumber, amplitude)
    pub modes: Vec<(f64, C64)>,
    /// Normalization constants in the closed forms; (1, 0) for numerical eigenvectors.
    pub c1: C64,
    pub c2: C64,
    pub origin: String,
}

impl WavefunctionSpec {
    pub fn new(gauge_cos: C64, gauge_sin: C64, modes: Vec<(f64, C64)>, c1: C64, c2: C64, origin: &str) -> Self {
        let mut w = Self { gauge_cos, gauge_sin, modes, c1, c2, origin: origin.to_string() };
        w.normalize();
        w
    }

    pub fn eval(&self, theta: f64) -> C64 {
        let gauge = (self.gauge_cos * theta.cos() + self.gauge_sin * theta.sin()).exp();
        let sum: C64 = self.modes.iter().map(|(k, c)| c * C64::new(0.0, k * theta).exp()).sum();
        gauge * sum
    }

    pub fn norm(&self) -> f64 {
        let h = 2.0 * PI / QUADRATURE_POINTS as f64;
        ((0..QUADRATURE_POINTS).map(|i| self.eval(i as f64 * h).norm_sqr()).sum::<f64>() * h).sqrt()
    }

    fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.modes.iter_mut().for_each(|(_, c)| *c /= n);
        }
    }
}

/// Eigenvector of `level` (position in the ordered spectrum) synthesized as a Fourier sum.
pub fn wavefunction(p: &SpectralProblem, level: usize) -> Result<WavefunctionSpec> {
    let (spectrum, vectors) = eigen_decomposition(p)?;
    if level >= spectrum.trusted {
        return Err(Error::InvalidInput(format!("level {level} outside the trusted interior")));
    }
    let modes = vectors[level].iter().enumerate().map(|(i, c)| (p.wavenumber(i), *c)).collect();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    Ok(WavefunctionSpec::new(zero, zero, modes, one, zero, "fourier"))
}

/// Which combination of the two closed-form PT1 solutions to build.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Pt1Part {
    /// Explicit normalization constants multiplying e^{−iκθ} and (i/2κ)e^{iκθ}.
    Constants(C64, C64),
    /// Standing wave ∝ cos κθ; PT1 parity (−1)^n.
    C1,
    /// Standing wave ∝ i sin κθ; PT1 parity (−1)^{n+1}.
    C2,
}

/// Closed-form eigenfunction of the Hermitian PT1 partner at level n:
/// φ = e^{−i(μ4 cos θ + μ3 sin θ)/μ1} [c1 e^{−iκθ} + (i/2κ) c2 e^{iκθ}], κ = n (+½ for fermions).
pub fn pt1_closed_wavefunction(mu1: f64, mu3: f64, mu4: f64, n: u32, statistics: Statistics, part: Pt1Part) -> Result<WavefunctionSpec> {
    if mu1 == 0.0 {
        return Err(Error::DegenerateCouplings("mu1 = 0".into()));
    }
    let kappa = n as f64 + statistics.sector() / 2.0;
    let half = C64::new(0.5, 0.0);
    // amplitudes of e^{−iκθ} and e^{iκθ}
    let (c1, c2, minus, plus) = match part {
        Pt1Part::Constants(c1, c2) => {
            if kappa == 0.0 && c2 != C64::new(0.0, 0.0) {
                return Err(Error::InvalidInput("the c2 solution is not periodic at κ = 0".into()));
            }
            let plus = if kappa == 0.0 { C64::new(0.0, 0.0) } else { C64::new(0.0, 1.0 / (2.0 * kappa)) * c2 };
            (c1, c2, c1, plus)
        }
        Pt1Part::C1 | Pt1Part::C2 => {
            if statistics == Statistics::Fermionic {
                return Err(Error::InvalidInput("PT1 squares to −1 on antiperiodic states; no PT1 eigenstates".into()));
            }
            let sign = if part == Pt1Part::C1 { 1.0 } else { -1.0 };
            let c2 = if kappa == 0.0 { C64::new(0.0, 0.0) } else { C64::new(0.0, -kappa) };
            (half * sign, c2, half * sign, half)
        }
    };
    let modes = if kappa == 0.0 { vec![(0.0, minus + plus)] } else { vec![(-kappa, minus), (kappa, plus)] };
    let g = C64::new(0.0, -1.0 / mu1);
    Ok(WavefunctionSpec::new(g * mu4, g * mu3, modes, c1, c2, "pt1-closed"))
}

/// |ψ(θ)|² on the grid.
pub fn intensity(w: &WavefunctionSpec, grid: &[f64]) -> Vec<f64> {
    grid.iter().map(|&t| w.eval(t).norm_sqr()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PtParity {
    Plus,
    Minus,
    /// Eigenstate with eigenvalue e^{iφ} (removable by a global phase).
    Phase(f64),
    Broken,
}

/// Compares the PT image θ ↦ conj ψ(σ(θ)) against multiples of ψ on a grid.
pub fn pt_eigenstate_check(w: &WavefunctionSpec, s: PtSymmetryE2, tol: f64) -> PtParity {
    let (shift, orientation) = s.theta_map();
    let m = 720;
    let grid: Vec<f64> = (0..m).map(|i| 2.0 * PI * i as f64 / m as f64).collect();
    let psi: Vec<C64> = grid.iter().map(|&t| w.eval(t)).collect();
    let image: Vec<C64> = grid.iter().map(|&t| w.eval(shift + orientation * t).conj()).collect();
    let nn: f64 = psi.iter().map(|x| x.norm_sqr()).sum();
    if nn == 0.0 {
        return PtParity::Broken;
    }
    let chi: C64 = psi.iter().zip(&image).map(|(a, b)| a.conj() * b).sum::<C64>() / nn;
    let resid: f64 = psi.iter().zip(&image).map(|(a, b)| (b - chi * a).norm_sqr()).sum::<f64>();
    if (resid / nn).sqrt() > tol || (chi.norm() - 1.0).abs() > tol {
        PtParity::Broken
    } else if (chi - 1.0).norm() <= tol {
        PtParity::Plus
    } else if (chi + 1.0).norm() <= tol {
        PtParity::Minus
    } else {
        PtParity::Phase(chi.arg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_has_flat_intensity() {
        let w = pt1_closed_wavefunction(1.3, 0.4, -0.8, 3, Statistics::Bosonic, Pt1Part::Constants(C64::new(1.0, 0.0), C64::new(0.0, 0.0))).unwrap();
        let grid: Vec<f64> = (0..50).map(|i| i as f64 * 0.13).collect();
        let i = intensity(&w, &grid);
        for x in &i {
            assert!((x - 1.0 / (2.0 * PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn standing_wave_parities() {
        for n in 0..5u32 {
            for (part, base) in [(Pt1Part::C1, 1i32), (Pt1Part::C2, -1)] {
                if n == 0 && part == Pt1Part::C2 {
                    continue;
                }
                let w = pt1_closed_wavefunction(0.9, 0.3, 1.1, n, Statistics::Bosonic, part).unwrap();
                let sign = base * if n % 2 == 0 { 1 } else { -1 };
                let expect = if sign > 0 { PtParity::Plus } else { PtParity::Minus };
                assert_eq!(pt_eigenstate_check(&w, PtSymmetryE2::PT1, 1e-9), expect, "n={n} {part:?}");
            }
        }
    }

    #[test]
    fn plane_waves_are_not_pt1_eigenstates() {
        let w = pt1_closed_wavefunction(1.0, 0.3, 0.2, 2, Statistics::Bosonic, Pt1Part::Constants(C64::new(1.0, 0.0), C64::new(0.0, 0.0))).unwrap();
        assert_eq!(pt_eigenstate_check(&w, PtSymmetryE2::PT1, 1e-9), PtParity::Broken);
    }
}
